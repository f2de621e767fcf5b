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
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "bbmd/matching.hpp"
#include "bbmd/oracle.hpp"
#include "bbmd/prior.hpp"
#include "bbmd/types.hpp"

namespace bbmd {

/// A possibly randomized allocation rule, realized as a deterministic
/// function of an explicit seed. Deterministic rules ignore the seed.
using SeededRule = std::function<Allocation(const TypeProfile &, std::uint64_t)>;

inline SeededRule ignore_seed(AllocationRule rule)
{
  return [rule = std::move(rule)](const TypeProfile &x, std::uint64_t) { return rule(x); };
}

/// The weighted bipartite graph of the incentive-compatibility matching
/// characterization over a type subset D': weights[v][w] is the value type v
/// has for the (seed-averaged) outcome generated for type w.
struct MatchingGraph
{
  std::vector<TypeProfile> types;
  std::vector<std::vector<Rational>> weights;

  Rational identity_weight() const
  {
    Rational t(0);
    for (std::size_t i = 0; i < weights.size(); ++i)
    {
      t += weights[i][i];
    }
    return t;
  }
};

inline MatchingGraph build_matching_graph(const SeededRule &rule,
                                          const std::vector<TypeProfile> &subset,
                                          const std::vector<std::uint64_t> &seeds)
{
  if (subset.empty())
  {
    throw StructuralError("matching graph over an empty type subset");
  }
  if (seeds.empty())
  {
    throw StructuralError("at least one seed is required");
  }
  const std::size_t m = subset.size();
  std::vector<std::vector<Allocation>> outcomes(m);
  for (std::size_t j = 0; j < m; ++j)
  {
    outcomes[j].reserve(seeds.size());
    for (const auto s : seeds)
    {
      outcomes[j].push_back(rule(subset[j], s));
    }
  }
  MatchingGraph g;
  g.types = subset;
  g.weights.assign(m, std::vector<Rational>(m, Rational(0)));
  const Rational denom(static_cast<std::int64_t>(seeds.size()));
  for (std::size_t i = 0; i < m; ++i)
  {
    for (std::size_t j = 0; j < m; ++j)
    {
      DotCounts sum{0, 0};
      for (const auto &y : outcomes[j])
      {
        sum = sum + subset[i].dot_counts(y);
      }
      g.weights[i][j] = sum.value(subset[i].alpha()) / denom;
    }
  }
  return g;
}

/// Witness of a failed max-in-distributional-range comparison: reporting v'
/// instead of v would raise v's expected welfare by `slack` > 0.
struct MidrViolation
{
  TypeProfile v;
  TypeProfile v_prime;
  Rational slack;
};

/// Witness of a failed matching check: on `subset`, `better` beats the
/// identity matching by `slack` > 0.
struct MatchingViolation
{
  std::vector<TypeProfile> subset;
  std::vector<std::uint32_t> better;
  Rational slack;
};

/// Checks the max-in-distributional-range property over a finite domain:
/// for all v, v', the seed-averaged welfare at v of the outcome chosen at v
/// is at least that of the outcome chosen at v'. Returns the witness pair
/// with the largest slack, or nothing on a pass. Exact arithmetic throughout.
inline std::optional<MidrViolation> check_midr(const SeededRule &rule,
                                               const std::vector<TypeProfile> &domain,
                                               const std::vector<std::uint64_t> &seeds)
{
  if (domain.empty())
  {
    throw StructuralError("check_midr over an empty domain");
  }
  if (seeds.empty())
  {
    throw StructuralError("at least one seed is required");
  }
  const std::size_t m = domain.size();
  std::vector<std::vector<Allocation>> outcomes(m);
  for (std::size_t j = 0; j < m; ++j)
  {
    outcomes[j].reserve(seeds.size());
    for (const auto s : seeds)
    {
      outcomes[j].push_back(rule(domain[j], s));
    }
  }

  std::optional<MidrViolation> worst;
  for (std::size_t i = 0; i < m; ++i)
  {
    const TypeProfile &v = domain[i];
    const AlphaView alpha = AlphaView::from(v.alpha());
    auto row_value = [&](std::size_t j) {
      DotCounts sum{0, 0};
      for (const auto &y : outcomes[j])
      {
        sum = sum + v.dot_counts(y);
      }
      return sum;
    };
    const DotCounts diag = row_value(i);
    DotCounts best = diag;
    std::size_t best_j = i;
    for (std::size_t j = 0; j < m; ++j)
    {
      if (j == i)
      {
        continue;
      }
      const DotCounts cand = row_value(j);
      if (compare_dot_counts(cand, best, alpha) > 0)
      {
        best = cand;
        best_j = j;
      }
    }
    if (best_j != i && compare_dot_counts(best, diag, alpha) > 0)
    {
      const Rational slack =
          (best - diag).value(v.alpha()) / Rational(static_cast<std::int64_t>(seeds.size()));
      if (!worst.has_value() || slack > worst->slack)
      {
        worst = MidrViolation{v, domain[best_j], slack};
      }
    }
  }
  return worst;
}

/// Per-seed breakdown: each seed's deterministic realization checked on its
/// own. Reported next to the seed-averaged verdict for randomized rules.
inline std::vector<std::optional<MidrViolation>> check_midr_per_seed(
    const SeededRule &rule, const std::vector<TypeProfile> &domain,
    const std::vector<std::uint64_t> &seeds)
{
  std::vector<std::optional<MidrViolation>> out;
  out.reserve(seeds.size());
  for (const auto s : seeds)
  {
    out.push_back(check_midr(rule, domain, {s}));
  }
  return out;
}

/// Checks the matching characterization on every provided type subset: the
/// identity matching must achieve the maximum weight (ties pass). Returns the
/// worst offending subset with the better matching and its slack.
inline std::optional<MatchingViolation> check_bic_matching(
    const SeededRule &rule, const std::vector<std::vector<TypeProfile>> &subsets,
    const std::vector<std::uint64_t> &seeds)
{
  std::optional<MatchingViolation> worst;
  for (const auto &subset : subsets)
  {
    if (subset.empty())
    {
      throw StructuralError("matching check over an empty subset");
    }
    const MatchingGraph g = build_matching_graph(rule, subset, seeds);
    const MatchingResult best = max_weight_matching(g.weights);
    const Rational slack = best.weight - g.identity_weight();
    if (slack > 0)
    {
      if (!worst.has_value() || slack > worst->slack)
      {
        worst = MatchingViolation{subset, best.match, slack};
      }
    }
  }
  return worst;
}

/// All subsets of the domain of size 1..k, in index order. The exhaustive
/// family is exponential in k; the default stops at 3 (the experiments only
/// ever need pairs).
inline std::vector<std::vector<TypeProfile>> subsets_up_to_size(
    const std::vector<TypeProfile> &domain, std::size_t k = 3)
{
  std::vector<std::vector<TypeProfile>> out;
  std::vector<std::size_t> pick;
  auto rec = [&](auto &&self, std::size_t start) -> void {
    if (!pick.empty())
    {
      std::vector<TypeProfile> subset;
      subset.reserve(pick.size());
      for (auto i : pick)
      {
        subset.push_back(domain[i]);
      }
      out.push_back(std::move(subset));
    }
    if (pick.size() == k)
    {
      return;
    }
    for (std::size_t i = start; i < domain.size(); ++i)
    {
      pick.push_back(i);
      self(self, i + 1);
      pick.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

/// r random subsets of size <= k, drawn from the prior's profile stream.
/// Duplicate profiles within one subset are dropped.
inline std::vector<std::vector<TypeProfile>> random_subsets(const PriorDistribution &prior,
                                                            std::size_t r, std::size_t k,
                                                            std::uint64_t seed)
{
  if (k < 1)
  {
    throw StructuralError("subset size bound must be at least 1");
  }
  std::vector<std::vector<TypeProfile>> out;
  out.reserve(r);
  PriorDistribution sampler = prior;
  sampler.seed = rng::mix(seed ^ 0x517CC1B727220A95ull);
  std::uint64_t next_index = 0;
  for (std::size_t s = 0; s < r; ++s)
  {
    std::vector<TypeProfile> subset;
    for (std::size_t j = 0; j < k; ++j)
    {
      TypeProfile p = sample_profile(sampler, next_index++);
      bool dup = false;
      for (const auto &q : subset)
      {
        if (q == p)
        {
          dup = true;
          break;
        }
      }
      if (!dup)
      {
        subset.push_back(std::move(p));
      }
    }
    out.push_back(std::move(subset));
  }
  return out;
}

/// The targeted two-type family used by the multi-dimensional lower bound:
/// for each x, the pair {x, alpha·T} where alpha·T carries value alpha on T.
inline std::vector<std::vector<TypeProfile>> targeted_pairs(const std::vector<TypeProfile> &xs,
                                                            const IndexSet &T,
                                                            const Rational &alpha)
{
  const TypeProfile alpha_T = TypeProfile::multi_dimensional(T, T, alpha);
  std::vector<std::vector<TypeProfile>> out;
  out.reserve(xs.size());
  for (const auto &x : xs)
  {
    if (x == alpha_T)
    {
      continue;
    }
    out.push_back({x, alpha_T});
  }
  return out;
}

}  // namespace bbmd
