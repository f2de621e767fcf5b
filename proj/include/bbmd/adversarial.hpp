#pragma once
//------------------------------------------------------------------------------
//
//   Copyright 2026 The bbmd Authors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//
//------------------------------------------------------------------------------

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "bbmd/params.hpp"
#include "bbmd/prior.hpp"
#include "bbmd/types.hpp"

namespace bbmd {

/// A valid pair (S, T): |S| = |T| = N/2 with |S ∩ T| = eps_ST_N. Together
/// with its parameter bundle it pins down one allocation rule of the
/// adversarial family.
struct ValidPair
{
  IndexSet S;
  IndexSet T;
  Params params;

  ValidPair(IndexSet s, IndexSet t, Params p)
    : S{std::move(s)}
    , T{std::move(t)}
    , params{std::move(p)}
  {
    validate();
  }

  void validate() const
  {
    params.validate();
    const auto n = static_cast<std::uint32_t>(params.n);
    if (S.ground_size() != n || T.ground_size() != n)
    {
      throw StructuralError("pair sets must live on the instance ground set");
    }
    if (S.count() != params.N / 2 || T.count() != params.N / 2)
    {
      throw ParameterInfeasibleError("|S| and |T| must equal N/2");
    }
    if (S.intersection_count(T) != params.eps_ST_N)
    {
      throw ParameterInfeasibleError("|S ∩ T| must equal eps_ST_N");
    }
  }
};

/// Which conditioning of the uniform distribution over valid pairs to draw
/// from: unconditioned, S held fixed, or T held fixed.
enum class PairConditioning
{
  Unconditioned,
  FixedS,
  FixedT,
};

struct PairDistribution
{
  Params params;
  std::uint64_t seed = 0;
  PairConditioning conditioning = PairConditioning::Unconditioned;
  std::optional<IndexSet> fixed;

  void validate() const
  {
    params.validate();
    if (conditioning == PairConditioning::Unconditioned)
    {
      if (fixed.has_value())
      {
        throw StructuralError("unconditioned pair distribution must not carry a fixed set");
      }
      return;
    }
    if (!fixed.has_value())
    {
      throw StructuralError("conditioned pair distribution requires the fixed set");
    }
    if (fixed->ground_size() != params.n || fixed->count() != params.N / 2)
    {
      throw ParameterInfeasibleError("fixed set must have N/2 elements of the ground set");
    }
  }
};

namespace detail {

constexpr std::uint64_t kPairStreamS = 10;
constexpr std::uint64_t kPairStreamIntersection = 11;
constexpr std::uint64_t kPairStreamOutside = 12;

/// Uniform k-subset of {0,..,n-1} \ excluded, by distinct-rejection draws.
inline IndexSet pick_outside(std::uint32_t n, std::uint32_t k, const IndexSet &excluded,
                             rng::Stream &stream)
{
  const std::uint32_t available = n - excluded.count();
  if (k > available)
  {
    throw ParameterInfeasibleError("no valid pair exists: not enough coordinates outside the fixed set");
  }
  IndexSet chosen(n);
  std::uint32_t taken = 0;
  while (taken < k)
  {
    const auto i = static_cast<std::uint32_t>(stream.next_below(n));
    if (excluded.contains(i) || chosen.contains(i))
    {
      continue;
    }
    chosen.insert(i);
    ++taken;
  }
  return chosen;
}

/// Uniform k-subset of the members of `from`.
inline IndexSet pick_within(const IndexSet &from, std::uint32_t k, rng::Stream &stream)
{
  const std::vector<std::uint32_t> members = from.to_indices();
  if (k > members.size())
  {
    throw ParameterInfeasibleError("subset request larger than the source set");
  }
  // Floyd's sampling over the member ranks.
  IndexSet chosen(from.ground_size());
  std::vector<bool> used(members.size(), false);
  for (std::size_t j = members.size() - k; j < members.size(); ++j)
  {
    const auto t = static_cast<std::size_t>(stream.next_below(j + 1));
    if (used[t])
    {
      used[j] = true;
      chosen.insert(members[j]);
    }
    else
    {
      used[t] = true;
      chosen.insert(members[t]);
    }
  }
  return chosen;
}

}  // namespace detail

/// Draws the index-th valid pair of the distribution's deterministic stream,
/// uniformly over the conditioned support. The unconditioned draw follows the
/// three-stage process: choose S, choose S ∩ T within S, choose T \ S outside
/// S; conditioned draws keep the fixed set and sample the other two stages.
inline ValidPair sample_valid_pair(const PairDistribution &pd, std::uint64_t index)
{
  pd.validate();
  const auto n = static_cast<std::uint32_t>(pd.params.n);
  const auto half = static_cast<std::uint32_t>(pd.params.N / 2);
  const auto overlap = static_cast<std::uint32_t>(pd.params.eps_ST_N);

  rng::Stream s_stream(pd.seed, index, detail::kPairStreamS);
  rng::Stream mid_stream(pd.seed, index, detail::kPairStreamIntersection);
  rng::Stream out_stream(pd.seed, index, detail::kPairStreamOutside);

  if (pd.conditioning == PairConditioning::FixedT)
  {
    // Symmetric to the FixedS case: grow S out of T.
    const IndexSet &T = *pd.fixed;
    const IndexSet meet = detail::pick_within(T, overlap, mid_stream);
    const IndexSet rest = detail::pick_outside(n, half - overlap, T, out_stream);
    return ValidPair(meet.unite(rest), T, pd.params);
  }

  IndexSet S = pd.conditioning == PairConditioning::FixedS
                   ? *pd.fixed
                   : detail::pick_outside(n, half, IndexSet(n), s_stream);
  const IndexSet meet = detail::pick_within(S, overlap, mid_stream);
  const IndexSet rest = detail::pick_outside(n, half - overlap, S, out_stream);
  return ValidPair(std::move(S), meet.unite(rest), pd.params);
}

/// The adversarial allocation rule: serve the declared support, as long as it
/// is not too large and does not overlap T heavily without also overlapping S.
/// In the multi-dimensional setting "membership" means a nonzero coordinate.
inline Allocation alloc_ast(const TypeProfile &x, const ValidPair &inst)
{
  if (x.n() != inst.params.n)
  {
    throw StructuralError("profile dimension differs from the instance");
  }
  const IndexSet &support = x.support();
  const bool allowed = support.count() <= inst.params.N &&
                       (support.intersection_count(inst.T) <= inst.params.eps_T_N ||
                        support.intersection_count(inst.S) >= inst.params.eps_S_N);
  return allowed ? Allocation(support) : Allocation::empty(x.n());
}

/// Membership in the downward closure of range(A_{S,T}), by the closed-form
/// rule: R is returnable as-is, or can be padded with unused elements of S
/// until the S-branch holds.
inline bool is_feasible(const Allocation &R, const ValidPair &inst)
{
  if (R.ground_size() != inst.params.n)
  {
    throw StructuralError("allocation dimension differs from the instance");
  }
  const std::uint32_t size = R.count();
  if (size > inst.params.N)
  {
    return false;
  }
  if (R.served().intersection_count(inst.T) <= inst.params.eps_T_N)
  {
    return true;
  }
  const std::uint32_t in_s = R.served().intersection_count(inst.S);
  if (in_s >= inst.params.eps_S_N)
  {
    return true;
  }
  const std::uint32_t missing = static_cast<std::uint32_t>(inst.params.eps_S_N) - in_s;
  return size + missing <= inst.params.N;
}

}  // namespace bbmd
