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
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bbmd/domain.hpp"
#include "bbmd/oracle.hpp"
#include "bbmd/prior.hpp"
#include "bbmd/types.hpp"

namespace bbmd {

/// How an emitted allocation may be justified: only outcomes the oracle was
/// seen to return, or any subset of one (when the feasibility constraint is
/// known to be downward-closed).
enum class FeasibilityMode
{
  RangeOnly,
  DownwardClosedInference,
};

inline std::string to_string(FeasibilityMode m)
{
  return m == FeasibilityMode::RangeOnly ? "range-only" : "downward-closed";
}

inline FeasibilityMode feasibility_mode_from_string(const std::string &s)
{
  if (s == "range-only")
  {
    return FeasibilityMode::RangeOnly;
  }
  if (s == "downward-closed")
  {
    return FeasibilityMode::DownwardClosedInference;
  }
  throw ConfigError("unknown feasibility mode: " + s);
}

enum class TransformId
{
  EmptyAllocation,
  PassThrough,
  ExhaustiveMidr,
  PresampledRange,
};

/// A catalog entry plus its parameters (q is the presample count).
struct TransformSpec
{
  TransformId id = TransformId::EmptyAllocation;
  std::uint64_t q = 0;

  std::string name() const
  {
    switch (id)
    {
    case TransformId::EmptyAllocation: return "empty-allocation";
    case TransformId::PassThrough: return "pass-through";
    case TransformId::ExhaustiveMidr: return "exhaustive-midr";
    case TransformId::PresampledRange: return "presampled-range";
    }
    throw ConfigError("unknown transformation id");
  }

  static TransformSpec from_name(const std::string &name, std::uint64_t q = 0)
  {
    if (name == "empty-allocation")
    {
      return {TransformId::EmptyAllocation, 0};
    }
    if (name == "pass-through")
    {
      return {TransformId::PassThrough, 0};
    }
    if (name == "exhaustive-midr")
    {
      return {TransformId::ExhaustiveMidr, 0};
    }
    if (name == "presampled-range")
    {
      if (q == 0)
      {
        throw ConfigError("presampled-range requires q >= 1");
      }
      return {TransformId::PresampledRange, q};
    }
    throw ConfigError("unknown transformation: " + name);
  }
};

/// Mutable per-run state of one transformation instance: the oracle session
/// it bills against, the prior it may sample, the feasibility mode, and its
/// own randomness seed. Caches make the presample and the exhaustive scan
/// one-time costs shared across inputs.
struct TransformationContext
{
  TransformationContext(OracleSession &session_, PriorDistribution prior_, FeasibilityMode mode_,
                        std::uint64_t seed_)
    : session{session_}
    , prior{std::move(prior_)}
    , mode{mode_}
    , seed{seed_}
  {}

  OracleSession &session;
  PriorDistribution prior;
  FeasibilityMode mode;
  std::uint64_t seed;

  /// Exhaustive enumeration refuses above this domain size.
  std::uint64_t enumeration_limit = std::uint64_t{1} << 22;

  // caches
  std::optional<std::vector<Allocation>> fixed_range;
  bool domain_scanned = false;
  bool oracle_cut_off = false;
};

/// What one simulated mechanism evaluation produced: the allocation, the
/// queries billed during this run, and whether the oracle cut the run short
/// (in which case the allocation is the always-feasible empty set).
struct MechanismOutput
{
  Allocation allocation;
  std::vector<TypeProfile> audit;
  bool budget_exhausted = false;
};

namespace detail {

constexpr std::uint64_t kPresampleTag = 0x5D5331F0A55A9B1Dull;

struct Selected
{
  Allocation alloc;
  std::optional<Allocation> parent;  // the observed output justifying alloc
};

/// Welfare-argmax over the candidate outputs, honoring the feasibility mode.
/// Under downward-closed inference the best subset of a candidate R for
/// non-negative values is R ∩ support(x). Ties break to the
/// lexicographically smallest served set, so the argmax is deterministic.
inline Selected best_feasible(const TypeProfile &x, const std::vector<Allocation> &candidates,
                              FeasibilityMode mode)
{
  Selected best{Allocation::empty(x.n()), std::nullopt};
  bool have = false;
  DotCounts best_value{0, 0};
  const AlphaView alpha = AlphaView::from(x.alpha());
  auto consider = [&](const Allocation &candidate, const Allocation &parent) {
    const DotCounts value = x.dot_counts(candidate);
    if (!have)
    {
      best = {candidate, parent};
      best_value = value;
      have = true;
      return;
    }
    const int cmp = compare_dot_counts(value, best_value, alpha);
    if (cmp > 0 || (cmp == 0 && candidate.lex_less(best.alloc)))
    {
      best = {candidate, parent};
      best_value = value;
    }
  };
  for (const Allocation &r : candidates)
  {
    if (mode == FeasibilityMode::RangeOnly)
    {
      consider(r, r);
    }
    else
    {
      consider(Allocation(r.served().intersect(x.support())), r);
    }
  }
  if (mode == FeasibilityMode::DownwardClosedInference)
  {
    consider(Allocation::empty(x.n()), Allocation::empty(x.n()));
  }
  return best;
}

inline void assert_feasible(const Selected &sel, FeasibilityMode mode)
{
  if (sel.alloc.is_empty())
  {
    return;  // the empty allocation is always feasible in this family
  }
  if (!sel.parent.has_value())
  {
    throw std::logic_error("transformation emitted an unjustified allocation");
  }
  const bool ok = mode == FeasibilityMode::RangeOnly
                      ? sel.alloc == *sel.parent
                      : sel.alloc.served().is_subset_of(sel.parent->served());
  if (!ok)
  {
    throw std::logic_error("transformation violated its feasibility mode");
  }
}

inline std::vector<Allocation> presample(TransformationContext &ctx, std::uint64_t q)
{
  PriorDistribution sampler = ctx.prior;
  sampler.seed = rng::mix(ctx.seed ^ kPresampleTag);
  for (std::uint64_t j = 0; j < q; ++j)
  {
    ctx.session.query(sample_profile(sampler, j));
  }
  return ctx.session.observed_range();
}

inline void scan_domain(TransformationContext &ctx)
{
  const auto n = static_cast<std::uint32_t>(ctx.prior.params.n);
  for_each_profile(ctx.prior.setting, n, ctx.prior.params.alpha, ctx.enumeration_limit,
                   [&](const TypeProfile &p) { ctx.session.query(p); });
}

}  // namespace detail

/// Runs one catalog transformation at input x. Budget exhaustion inside the
/// run is caught and reported as an empty allocation with budget_exhausted
/// set, so experiment streams stay total.
inline MechanismOutput run_transformation(const TransformSpec &spec, TransformationContext &ctx,
                                          const TypeProfile &x)
{
  const std::uint64_t billed_before = ctx.session.queries_used();
  auto finish = [&](detail::Selected sel, bool cut_off) {
    detail::assert_feasible(sel, ctx.mode);
    MechanismOutput out;
    out.allocation = std::move(sel.alloc);
    out.budget_exhausted = cut_off;
    const std::uint64_t billed_after = ctx.session.queries_used();
    for (const auto &entry : ctx.session.log_slice(billed_before, billed_after))
    {
      out.audit.push_back(entry.input);
    }
    return out;
  };
  auto cut_off = [&]() {
    ctx.oracle_cut_off = true;
    return finish({Allocation::empty(x.n()), std::nullopt}, true);
  };

  switch (spec.id)
  {
  case TransformId::EmptyAllocation:
    return finish({Allocation::empty(x.n()), std::nullopt}, false);

  case TransformId::PassThrough:
  {
    try
    {
      Allocation y = ctx.session.query(x);
      return finish({y, y}, false);
    }
    catch (const BudgetExceededError &)
    {
      return cut_off();
    }
  }

  case TransformId::ExhaustiveMidr:
  {
    if (ctx.oracle_cut_off)
    {
      return cut_off();
    }
    try
    {
      if (!ctx.domain_scanned)
      {
        detail::scan_domain(ctx);
        ctx.domain_scanned = true;
        ctx.fixed_range = ctx.session.observed_range();
      }
    }
    catch (const BudgetExceededError &)
    {
      return cut_off();
    }
    return finish(detail::best_feasible(x, *ctx.fixed_range, ctx.mode), false);
  }

  case TransformId::PresampledRange:
  {
    if (ctx.oracle_cut_off)
    {
      return cut_off();
    }
    try
    {
      if (!ctx.fixed_range.has_value())
      {
        ctx.fixed_range = detail::presample(ctx, spec.q);
      }
    }
    catch (const BudgetExceededError &)
    {
      return cut_off();
    }
    return finish(detail::best_feasible(x, *ctx.fixed_range, ctx.mode), false);
  }
  }
  throw ConfigError("unknown transformation id");
}

}  // namespace bbmd
