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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "bbmd/config.hpp"
#include "bbmd/fixtures.hpp"
#include "bbmd/ic_verify.hpp"
#include "bbmd/oracle.hpp"
#include "bbmd/stats.hpp"
#include "bbmd/transform.hpp"

namespace bbmd {

// ---- configuration ----------------------------------------------------------

struct WelfareMethodConfig
{
  enum class Kind
  {
    Auto,
    Exact,
    MonteCarlo,
  };
  Kind kind = Kind::Auto;
  std::uint64_t samples = 2000;
};

struct IcCheckConfig
{
  enum class Kind
  {
    None,
    Midr,
    BicMatching,
  };
  Kind kind = Kind::Midr;
  std::uint64_t domain_samples = 48;  // sampled verification profiles (midr)
  std::uint64_t subset_count = 32;    // random subsets (bic-matching)
  std::uint64_t subset_size = 2;
  std::uint64_t exhaustive_k = 0;     // all subsets up to this size of a small domain (0 = off)
  bool targeted = false;  // add the {x, alpha*T} family (multi-dimensional)
  std::vector<std::uint64_t> seeds = {0};
};

/// One attack experiment: a transformation pitted against sampled instances
/// of the adversarial family under a fixed prior.
struct ExperimentConfig
{
  PriorDistribution prior;
  std::uint64_t pair_seed = 7;
  std::uint64_t pair_count = 4;
  TransformSpec transform{TransformId::PresampledRange, 64};
  FeasibilityMode mode = FeasibilityMode::RangeOnly;
  std::uint64_t transform_seed = 11;
  std::optional<std::uint64_t> budget;
  WelfareMethodConfig welfare;
  std::uint64_t light_overlap_samples = 400;
  std::uint64_t s_conditioned_samples = 0;
  IcCheckConfig ic;
};

/// Everything one row depends on, with the pair and all stream seeds pinned.
/// A row can be re-run bit-for-bit from this block alone.
struct ResolvedRowConfig
{
  std::uint64_t row = 0;
  PriorDistribution prior;
  std::optional<ValidPair> pair;  // empty only while reporting a failed resolve
  TransformSpec transform;
  FeasibilityMode mode = FeasibilityMode::RangeOnly;
  std::uint64_t transform_seed = 0;
  std::optional<std::uint64_t> budget;
  WelfareMethodConfig::Kind welfare_method = WelfareMethodConfig::Kind::Exact;
  std::uint64_t welfare_samples = 0;
  std::uint64_t welfare_seed = 0;
  std::uint64_t light_overlap_samples = 0;
  std::uint64_t light_overlap_seed = 0;
  std::uint64_t s_conditioned_samples = 0;
  std::uint64_t s_conditioned_seed = 0;
  IcCheckConfig ic;
  std::uint64_t ic_seed = 0;
};

// ---- report row ---------------------------------------------------------------

struct IcSummary
{
  std::string kind = "none";
  bool pass = true;
  std::optional<Json> violation;
  std::uint64_t seeds_total = 0;
  std::uint64_t seeds_passing = 0;
  std::vector<std::string> families;  // which subset/domain families were checked
};

struct ExperimentRow
{
  ResolvedRowConfig config;
  std::string status = "ok";

  WelfareEstimate welfare_alg;
  WelfareEstimate welfare_mech;
  std::optional<double> ratio;

  std::uint64_t queries_billed_total = 0;
  std::uint64_t queries_billed_max_per_input = 0;
  std::uint64_t queries_billed_on_input_T = 0;

  bool probe_overlap_event = false;
  Rational welfare_mech_at_T;
  bool welfare_at_T_exceeds_threshold = false;

  double light_overlap_rate = 0.0;
  double light_overlap_mean = 0.0;
  std::uint64_t light_overlap_accepted = 0;

  std::optional<double> s_conditioned_rate;
  std::optional<double> s_conditioned_mean;
  std::uint64_t s_conditioned_accepted = 0;

  IcSummary ic;

  double vanishing_rate = 0.0;
  double query_scale = 0.0;
};

// ---- json glue ----------------------------------------------------------------

inline Json welfare_method_to_json(WelfareMethodConfig::Kind k)
{
  switch (k)
  {
  case WelfareMethodConfig::Kind::Auto: return "auto";
  case WelfareMethodConfig::Kind::Exact: return "exact";
  case WelfareMethodConfig::Kind::MonteCarlo: return "monte-carlo";
  }
  throw ConfigError("bad welfare method");
}

inline WelfareMethodConfig::Kind welfare_method_from_string(const std::string &s)
{
  if (s == "auto")
  {
    return WelfareMethodConfig::Kind::Auto;
  }
  if (s == "exact")
  {
    return WelfareMethodConfig::Kind::Exact;
  }
  if (s == "monte-carlo")
  {
    return WelfareMethodConfig::Kind::MonteCarlo;
  }
  throw ConfigError("unknown welfare method: " + s);
}

inline Json ic_config_to_json(const IcCheckConfig &ic)
{
  Json j;
  j["kind"] = ic.kind == IcCheckConfig::Kind::None
                  ? "none"
                  : (ic.kind == IcCheckConfig::Kind::Midr ? "midr" : "bic-matching");
  j["domain_samples"] = ic.domain_samples;
  j["subset_count"] = ic.subset_count;
  j["subset_size"] = ic.subset_size;
  j["exhaustive_k"] = ic.exhaustive_k;
  j["targeted"] = ic.targeted;
  j["seeds"] = ic.seeds;
  return j;
}

inline IcCheckConfig ic_config_from_json(const Json &j)
{
  IcCheckConfig ic;
  if (j.contains("kind"))
  {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "none")
    {
      ic.kind = IcCheckConfig::Kind::None;
    }
    else if (kind == "midr")
    {
      ic.kind = IcCheckConfig::Kind::Midr;
    }
    else if (kind == "bic-matching")
    {
      ic.kind = IcCheckConfig::Kind::BicMatching;
    }
    else
    {
      throw ConfigError("unknown ic check kind: " + kind);
    }
  }
  ic.domain_samples = j.value("domain_samples", ic.domain_samples);
  ic.subset_count = j.value("subset_count", ic.subset_count);
  ic.subset_size = j.value("subset_size", ic.subset_size);
  ic.exhaustive_k = j.value("exhaustive_k", ic.exhaustive_k);
  ic.targeted = j.value("targeted", ic.targeted);
  if (j.contains("seeds"))
  {
    ic.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
  }
  return ic;
}

inline Json resolved_row_to_json(const ResolvedRowConfig &c)
{
  Json j;
  j["row"] = c.row;
  j["prior"] = prior_to_json(c.prior);
  if (c.pair.has_value())
  {
    j["pair"] = pair_to_json(*c.pair);
  }
  j["transformation"] = Json{{"id", c.transform.name()},
                             {"q", c.transform.q},
                             {"mode", to_string(c.mode)},
                             {"seed", c.transform_seed}};
  if (c.budget.has_value())
  {
    j["budget"] = *c.budget;
  }
  j["welfare"] = Json{{"method", welfare_method_to_json(c.welfare_method)},
                      {"samples", c.welfare_samples},
                      {"seed", c.welfare_seed}};
  j["light_overlap"] = Json{{"samples", c.light_overlap_samples}, {"seed", c.light_overlap_seed}};
  j["s_conditioned"] = Json{{"samples", c.s_conditioned_samples}, {"seed", c.s_conditioned_seed}};
  Json ic = ic_config_to_json(c.ic);
  ic["seed"] = c.ic_seed;
  j["ic"] = ic;
  return j;
}

inline ResolvedRowConfig resolved_row_from_json(const Json &j)
{
  ResolvedRowConfig c;
  c.row = j.at("row").get<std::uint64_t>();
  c.prior = prior_from_json(j.at("prior"));
  if (j.contains("pair"))
  {
    c.pair = pair_from_json(j.at("pair"), c.prior.params);
  }
  const Json &t = j.at("transformation");
  c.transform = TransformSpec::from_name(t.at("id").get<std::string>(),
                                         t.value("q", std::uint64_t{0}));
  c.mode = feasibility_mode_from_string(t.at("mode").get<std::string>());
  c.transform_seed = t.at("seed").get<std::uint64_t>();
  if (j.contains("budget"))
  {
    c.budget = j.at("budget").get<std::uint64_t>();
  }
  const Json &w = j.at("welfare");
  c.welfare_method = welfare_method_from_string(w.at("method").get<std::string>());
  c.welfare_samples = w.at("samples").get<std::uint64_t>();
  c.welfare_seed = w.at("seed").get<std::uint64_t>();
  c.light_overlap_samples = j.at("light_overlap").at("samples").get<std::uint64_t>();
  c.light_overlap_seed = j.at("light_overlap").at("seed").get<std::uint64_t>();
  c.s_conditioned_samples = j.at("s_conditioned").at("samples").get<std::uint64_t>();
  c.s_conditioned_seed = j.at("s_conditioned").at("seed").get<std::uint64_t>();
  c.ic = ic_config_from_json(j.at("ic"));
  c.ic_seed = j.at("ic").at("seed").get<std::uint64_t>();
  return c;
}

inline Json row_to_json(const ExperimentRow &r)
{
  Json j;
  j["config"] = resolved_row_to_json(r.config);
  j["status"] = r.status;
  if (r.status != "ok" && r.status != "budget-exceeded")
  {
    return j;  // failed resolve: nothing below is meaningful
  }
  j["welfare_alg"] = estimate_to_json(r.welfare_alg);
  j["welfare_mech"] = estimate_to_json(r.welfare_mech);
  if (r.ratio.has_value())
  {
    j["ratio"] = *r.ratio;
  }
  else
  {
    j["ratio"] = nullptr;
  }
  j["queries"] = Json{{"billed_total", r.queries_billed_total},
                      {"billed_max_per_input", r.queries_billed_max_per_input},
                      {"billed_on_input_T", r.queries_billed_on_input_T}};
  j["input_T_probe"] = Json{{"event", r.probe_overlap_event},
                     {"welfare_mech_at_T", rational_to_json(r.welfare_mech_at_T)},
                     {"exceeds_threshold", r.welfare_at_T_exceeds_threshold}};
  j["light_overlap"] = Json{{"rate", r.light_overlap_rate},
                     {"mean", r.light_overlap_mean},
                     {"accepted", r.light_overlap_accepted}};
  if (r.s_conditioned_rate.has_value())
  {
    j["s_conditioned"] = Json{{"rate", *r.s_conditioned_rate},
                       {"mean", r.s_conditioned_mean.has_value() ? Json(*r.s_conditioned_mean) : Json(nullptr)},
                       {"accepted", r.s_conditioned_accepted}};
  }
  Json ic;
  ic["kind"] = r.ic.kind;
  ic["pass"] = r.ic.pass;
  if (r.ic.violation.has_value())
  {
    ic["violation"] = *r.ic.violation;
  }
  ic["seeds_passing"] = r.ic.seeds_passing;
  ic["seeds_total"] = r.ic.seeds_total;
  if (!r.ic.families.empty())
  {
    ic["families"] = r.ic.families;
  }
  j["ic"] = ic;
  j["diagnostics"] =
      Json{{"vanishing_rate", r.vanishing_rate}, {"query_scale", r.query_scale}};
  return j;
}

// ---- execution ----------------------------------------------------------------

namespace detail {

constexpr std::uint64_t kWelfareSeedTag = 1;
constexpr std::uint64_t kLightOverlapSeedTag = 5;
constexpr std::uint64_t kSConditionedSeedTag = 4;
constexpr std::uint64_t kIcSeedTag = 9;

/// A transformation realized per seed, with one oracle session per seed.
/// Lets the verifiers sweep seeds while billing each realization separately.
class SeededTransformation
{
public:
  SeededTransformation(ValidPair pair, PriorDistribution prior, TransformSpec spec,
                       FeasibilityMode mode, std::optional<std::uint64_t> budget)
    : pair_{std::move(pair)}
    , prior_{std::move(prior)}
    , spec_{spec}
    , mode_{mode}
    , budget_{budget}
  {}

  Allocation operator()(const TypeProfile &x, std::uint64_t seed)
  {
    return run_transformation(spec_, context_for(seed), x).allocation;
  }

  SeededRule rule()
  {
    return [this](const TypeProfile &x, std::uint64_t seed) { return (*this)(x, seed); };
  }

  /// One JSON-lines record per billed query across all realizations, with
  /// the realization's seed attached.
  void export_audit(std::ostream &os) const
  {
    for (const auto &r : realizations_)
    {
      std::uint64_t billed = 0;
      for (const auto &entry : r.second.session->log_snapshot())
      {
        nlohmann::ordered_json record;
        record["seed"] = r.first;
        record["query"] = ++billed;
        record["support"] = entry.input.support().to_indices();
        if (!entry.input.alpha_coords().empty())
        {
          record["alpha_coords"] = entry.input.alpha_coords().to_indices();
        }
        record["output"] = entry.output.served().to_indices();
        os << record.dump() << '\n';
      }
    }
  }

private:
  struct Realization
  {
    std::unique_ptr<OracleSession> session;
    std::unique_ptr<TransformationContext> ctx;
  };

  TransformationContext &context_for(std::uint64_t seed)
  {
    for (auto &r : realizations_)
    {
      if (r.first == seed)
      {
        return *r.second.ctx;
      }
    }
    Realization real;
    const ValidPair &pair = pair_;
    real.session = std::make_unique<OracleSession>(
        [pair](const TypeProfile &x) { return alloc_ast(x, pair); }, budget_, seed);
    real.ctx = std::make_unique<TransformationContext>(*real.session, prior_, mode_, seed);
    realizations_.emplace_back(seed, std::move(real));
    return *realizations_.back().second.ctx;
  }

  ValidPair pair_;
  PriorDistribution prior_;
  TransformSpec spec_;
  FeasibilityMode mode_;
  std::optional<std::uint64_t> budget_;
  std::vector<std::pair<std::uint64_t, Realization>> realizations_;
};

inline TypeProfile input_profile_for_T(const ValidPair &pair, Setting setting)
{
  if (setting == Setting::SingleParameter)
  {
    return TypeProfile::single_parameter(pair.T);
  }
  return TypeProfile::multi_dimensional(pair.T, pair.T, pair.params.alpha);
}

/// Structured profiles every verification domain should contain.
inline std::vector<TypeProfile> structured_domain(const ValidPair &pair, Setting setting)
{
  std::vector<TypeProfile> out;
  out.push_back(input_profile_for_T(pair, setting));
  if (setting == Setting::SingleParameter)
  {
    out.push_back(TypeProfile::single_parameter(pair.S));
  }
  else
  {
    out.push_back(TypeProfile::multi_dimensional(pair.S, IndexSet(pair.S.ground_size()),
                                                 pair.params.alpha));
    out.push_back(TypeProfile::multi_dimensional(pair.T, IndexSet(pair.T.ground_size()),
                                                 pair.params.alpha));
  }
  return out;
}

inline std::vector<TypeProfile> verification_domain(const ValidPair &pair,
                                                    const PriorDistribution &prior,
                                                    std::uint64_t count, std::uint64_t seed)
{
  std::vector<TypeProfile> domain = structured_domain(pair, prior.setting);
  PriorDistribution sampler = prior;
  sampler.seed = rng::mix(seed ^ 0xD1B54A32D192ED03ull);
  for (std::uint64_t i = 0; i < count; ++i)
  {
    TypeProfile p = sample_profile(sampler, i);
    bool dup = false;
    for (const auto &q : domain)
    {
      if (q == p)
      {
        dup = true;
        break;
      }
    }
    if (!dup)
    {
      domain.push_back(std::move(p));
    }
  }
  return domain;
}

}  // namespace detail

/// Per-seed transformation realizations, public handle.
using SeededTransformation = detail::SeededTransformation;

inline std::vector<TypeProfile> make_verification_domain(const ValidPair &pair,
                                                         const PriorDistribution &prior,
                                                         std::uint64_t count, std::uint64_t seed)
{
  return detail::verification_domain(pair, prior, count, seed);
}

/// Assembles the matching-check subset families a config names: random
/// subsets from the prior, the exhaustive family over a small domain, and
/// the targeted two-type {x, alpha*T} family. Returns the subsets plus the
/// family labels recorded in reports (the exhaustive family is necessarily
/// a truncation; the labels document what was actually checked).
inline std::pair<std::vector<std::vector<TypeProfile>>, std::vector<std::string>>
build_matching_subsets(const IcCheckConfig &ic, const ValidPair &pair,
                       const PriorDistribution &prior, std::uint64_t seed)
{
  std::vector<std::vector<TypeProfile>> subsets =
      random_subsets(prior, ic.subset_count, ic.subset_size, seed);
  std::vector<std::string> families;
  families.push_back("random:" + std::to_string(ic.subset_count) + "x" +
                     std::to_string(ic.subset_size));
  if (ic.exhaustive_k > 0)
  {
    std::vector<TypeProfile> domain = detail::verification_domain(pair, prior, 9, seed);
    if (domain.size() > 12)
    {
      domain.resize(12);
    }
    for (auto &s : subsets_up_to_size(domain, ic.exhaustive_k))
    {
      subsets.push_back(std::move(s));
    }
    families.push_back("exhaustive:k" + std::to_string(ic.exhaustive_k) + ":domain" +
                       std::to_string(domain.size()));
  }
  if (ic.targeted && prior.setting == Setting::MultiDimensional)
  {
    PriorDistribution sampler = prior;
    sampler.seed = rng::mix(seed ^ 0xBEEFCAFEF00D1234ull);
    std::vector<TypeProfile> xs;
    for (std::uint64_t i = 0; i < ic.subset_count; ++i)
    {
      xs.push_back(sample_profile(sampler, i));
    }
    auto pairsets = targeted_pairs(xs, pair.T, prior.params.alpha);
    families.push_back("targeted:" + std::to_string(pairsets.size()));
    for (auto &s : pairsets)
    {
      subsets.push_back(std::move(s));
    }
  }
  return {std::move(subsets), std::move(families)};
}

/// Flat table view of experiment rows.
inline std::string row_csv_header()
{
  return "row,status,n,N,setting,transformation,q,mode,ratio,welfare_alg,welfare_mech,"
         "probe_overlap_event,welfare_mech_at_T,light_overlap_rate,light_overlap_mean,ic_pass,queries_billed_total,"
         "queries_billed_max_per_input";
}

inline std::string row_to_csv(const ExperimentRow &r)
{
  std::ostringstream os;
  os << r.config.row << ',' << '"' << r.status << '"' << ',' << r.config.prior.params.n << ','
     << r.config.prior.params.N << ',' << to_string(r.config.prior.setting) << ','
     << r.config.transform.name() << ',' << r.config.transform.q << ',' << to_string(r.config.mode)
     << ',';
  if (r.ratio.has_value())
  {
    os << *r.ratio;
  }
  os << ',' << r.welfare_alg.mean_double() << ',' << r.welfare_mech.mean_double() << ','
     << (r.probe_overlap_event ? 1 : 0) << ',' << to_double(r.welfare_mech_at_T) << ',' << r.light_overlap_rate
     << ',' << r.light_overlap_mean << ',' << (r.ic.pass ? 1 : 0) << ',' << r.queries_billed_total << ','
     << r.queries_billed_max_per_input;
  return os.str();
}

inline ResolvedRowConfig resolve_row(const ExperimentConfig &config, std::uint64_t row)
{
  ResolvedRowConfig c;
  c.row = row;
  c.prior = config.prior;
  PairDistribution pd;
  pd.params = config.prior.params;
  pd.seed = config.pair_seed;
  c.pair = sample_valid_pair(pd, row);
  c.transform = config.transform;
  c.mode = config.mode;
  c.transform_seed = rng::mix(config.transform_seed ^ rng::mix(row));
  c.budget = config.budget;
  c.welfare_method = config.welfare.kind;
  if (c.welfare_method == WelfareMethodConfig::Kind::Auto)
  {
    c.welfare_method = config.prior.params.n <= default_exact_limit(config.prior.setting)
                           ? WelfareMethodConfig::Kind::Exact
                           : WelfareMethodConfig::Kind::MonteCarlo;
  }
  c.welfare_samples = config.welfare.samples;
  c.welfare_seed = rng::mix(config.pair_seed ^ rng::mix(row * 8 + detail::kWelfareSeedTag));
  c.light_overlap_samples = config.light_overlap_samples;
  c.light_overlap_seed = rng::mix(config.pair_seed ^ rng::mix(row * 8 + detail::kLightOverlapSeedTag));
  c.s_conditioned_samples = config.s_conditioned_samples;
  c.s_conditioned_seed = rng::mix(config.pair_seed ^ rng::mix(row * 8 + detail::kSConditionedSeedTag));
  c.ic = config.ic;
  c.ic_seed = rng::mix(config.pair_seed ^ rng::mix(row * 8 + detail::kIcSeedTag));
  return c;
}

/// Runs one resolved row: oracle over the pair's allocation rule, the
/// transformation on input T (probing which queries it bills there), welfare
/// estimates for both sides, the light-overlap conditional welfare, the
/// optional S-conditioned rejection experiment, and the configured incentive
/// check.
inline ExperimentRow run_attack_row(const ResolvedRowConfig &c)
{
  ExperimentRow row;
  row.config = c;
  if (!c.pair.has_value())
  {
    throw StructuralError("row config carries no pair");
  }
  const ValidPair &pair = *c.pair;
  const Params &params = pair.params;
  const auto n = static_cast<std::uint32_t>(params.n);

  const AllocationRule base_rule = [&pair](const TypeProfile &x) { return alloc_ast(x, pair); };
  OracleSession session(base_rule, c.budget, c.transform_seed);
  TransformationContext ctx{session, c.prior, c.mode, c.transform_seed};

  bool cut_off = false;
  std::uint64_t max_billed = 0;
  auto mech = [&](const TypeProfile &x) {
    const std::uint64_t before = session.queries_used();
    MechanismOutput out = run_transformation(c.transform, ctx, x);
    cut_off = cut_off || out.budget_exhausted;
    const std::uint64_t billed = session.queries_used() - before;
    max_billed = std::max(max_billed, billed);
    return out.allocation;
  };

  // Probe: run on input T first and inspect the queries it billed there.
  const TypeProfile input_T = detail::input_profile_for_T(pair, c.prior.setting);
  const std::uint64_t before_T = session.queries_used();
  const Allocation at_T = mech(input_T);
  row.queries_billed_on_input_T = session.queries_used() - before_T;
  for (const auto &entry : session.log_slice(before_T, session.queries_used()))
  {
    if (entry.output.served().intersection_count(pair.T) > params.eps_T_N)
    {
      row.probe_overlap_event = true;
      break;
    }
  }
  row.welfare_mech_at_T = welfare(input_T, at_T);
  const Rational threshold = c.prior.setting == Setting::SingleParameter
                                 ? Rational(static_cast<std::int64_t>(params.eps_T_N))
                                 : Rational(static_cast<std::int64_t>(2 * params.eps_T_N));
  row.welfare_at_T_exceeds_threshold = row.welfare_mech_at_T > threshold;

  // Welfare of the raw algorithm and of the transformed mechanism.
  if (c.welfare_method == WelfareMethodConfig::Kind::Exact)
  {
    row.welfare_alg = expected_welfare_exact(base_rule, c.prior);
    row.welfare_mech = expected_welfare_exact(mech, c.prior);
  }
  else
  {
    row.welfare_alg = expected_welfare_mc(base_rule, c.prior, c.welfare_samples, c.welfare_seed);
    row.welfare_mech = expected_welfare_mc(mech, c.prior, c.welfare_samples, c.welfare_seed);
  }
  if (row.welfare_alg.mean > 0)
  {
    row.ratio = to_double(row.welfare_mech.mean / row.welfare_alg.mean);
  }

  // Light-overlap region: prior draws conditioned on |Z| in [N/2, N] and
  // |Z ∩ T| <= eps_T_N / 2.
  if (c.light_overlap_samples > 0)
  {
    PriorDistribution sampler = c.prior;
    sampler.seed = rng::mix(c.light_overlap_seed ^ 0xACE1ACE1ACE1ACE1ull);
    double sum = 0.0;
    std::uint64_t accepted = 0;
    for (std::uint64_t i = 0; i < c.light_overlap_samples; ++i)
    {
      const TypeProfile z = sample_profile(sampler, i);
      const std::uint32_t size = z.support().count();
      if (size < params.N / 2 || size > params.N)
      {
        continue;
      }
      if (2ull * z.support().intersection_count(pair.T) > params.eps_T_N)
      {
        continue;
      }
      ++accepted;
      sum += to_double(welfare(z, mech(z)));
    }
    row.light_overlap_accepted = accepted;
    row.light_overlap_rate = static_cast<double>(accepted) / static_cast<double>(c.light_overlap_samples);
    row.light_overlap_mean = accepted == 0 ? 0.0 : sum / static_cast<double>(accepted);
  }

  // S-conditioned region: fix S and x ⊇ S, sweep T' with S held fixed,
  // rejecting unless x ∩ T' = S ∩ T'; each accepted T' gets a fresh mechanism.
  if (c.s_conditioned_samples > 0)
  {
    IndexSet x_set = pair.S;
    std::uint32_t extra = static_cast<std::uint32_t>(params.N / 4);
    for (std::uint32_t i = 0; i < n && extra > 0; ++i)
    {
      if (!x_set.contains(i))
      {
        x_set.insert(i);
        --extra;
      }
    }
    const TypeProfile x_profile =
        c.prior.setting == Setting::SingleParameter
            ? TypeProfile::single_parameter(x_set)
            : TypeProfile::multi_dimensional(x_set, IndexSet(n), params.alpha);
    const IndexSet x_minus_S = x_set.difference(pair.S);

    PairDistribution gamma_s;
    gamma_s.params = params;
    gamma_s.seed = c.s_conditioned_seed;
    gamma_s.conditioning = PairConditioning::FixedS;
    gamma_s.fixed = pair.S;

    double sum = 0.0;
    std::uint64_t accepted = 0;
    for (std::uint64_t i = 0; i < c.s_conditioned_samples; ++i)
    {
      const ValidPair candidate = sample_valid_pair(gamma_s, i);
      if (candidate.T.intersection_count(x_minus_S) != 0)
      {
        continue;  // x ∩ T' != S ∩ T'
      }
      ++accepted;
      detail::SeededTransformation fresh(candidate, c.prior, c.transform, c.mode, c.budget);
      sum += to_double(welfare(x_profile, fresh(x_profile, c.transform_seed)));
    }
    row.s_conditioned_accepted = accepted;
    row.s_conditioned_rate = static_cast<double>(accepted) / static_cast<double>(c.s_conditioned_samples);
    if (accepted > 0)
    {
      row.s_conditioned_mean = sum / static_cast<double>(accepted);
    }
  }

  // Incentive check over fresh per-seed realizations.
  if (c.ic.kind != IcCheckConfig::Kind::None)
  {
    detail::SeededTransformation checked(pair, c.prior, c.transform, c.mode, c.budget);
    const SeededRule rule = checked.rule();
    const std::vector<std::uint64_t> &seeds = c.ic.seeds;
    row.ic.seeds_total = seeds.size();
    if (c.ic.kind == IcCheckConfig::Kind::Midr)
    {
      row.ic.kind = "midr";
      const auto domain =
          detail::verification_domain(pair, c.prior, c.ic.domain_samples, c.ic_seed);
      const auto averaged = check_midr(rule, domain, seeds);
      const auto per_seed = check_midr_per_seed(rule, domain, seeds);
      for (const auto &v : per_seed)
      {
        if (!v.has_value())
        {
          ++row.ic.seeds_passing;
        }
      }
      row.ic.pass = !averaged.has_value() && row.ic.seeds_passing == seeds.size();
      if (averaged.has_value())
      {
        row.ic.violation = violation_to_json(*averaged);
      }
    }
    else
    {
      row.ic.kind = "bic-matching";
      auto [subsets, families] = build_matching_subsets(c.ic, pair, c.prior, c.ic_seed);
      row.ic.families = std::move(families);
      const auto verdict = check_bic_matching(rule, subsets, seeds);
      std::uint64_t passing = 0;
      for (const auto s : seeds)
      {
        if (!check_bic_matching(rule, subsets, {s}).has_value())
        {
          ++passing;
        }
      }
      row.ic.seeds_passing = passing;
      row.ic.pass = !verdict.has_value() && passing == seeds.size();
      if (verdict.has_value())
      {
        row.ic.violation = violation_to_json(*verdict);
      }
    }
  }

  row.queries_billed_total = session.queries_used();
  row.queries_billed_max_per_input = max_billed;
  row.status = cut_off ? "budget-exceeded" : "ok";

  const double n_eps = std::exp(std::log(static_cast<double>(params.n)) * to_double(params.epsilon));
  row.vanishing_rate = 2.0 * std::exp(n_eps - static_cast<double>(params.eps_T_N) / 6.0);
  row.query_scale = std::exp(n_eps);
  return row;
}

/// Streams rows to the callback; per-row failures become status rows instead
/// of aborting the stream.
inline void attack_experiment(const ExperimentConfig &config,
                              const std::function<void(const ExperimentRow &)> &emit)
{
  for (std::uint64_t r = 0; r < config.pair_count; ++r)
  {
    ExperimentRow row;
    try
    {
      const ResolvedRowConfig resolved = resolve_row(config, r);
      row = run_attack_row(resolved);
    }
    catch (const ParameterInfeasibleError &e)
    {
      row.config.row = r;
      row.config.prior = config.prior;
      row.config.transform = config.transform;
      row.config.mode = config.mode;
      row.status = std::string("parameter-infeasible: ") + e.what();
    }
    catch (const Error &e)
    {
      row.config.row = r;
      row.config.prior = config.prior;
      row.config.transform = config.transform;
      row.config.mode = config.mode;
      row.status = std::string("error: ") + e.what();
    }
    emit(row);
  }
}

inline std::vector<ExperimentRow> attack_experiment(const ExperimentConfig &config)
{
  std::vector<ExperimentRow> rows;
  attack_experiment(config, [&](const ExperimentRow &row) { rows.push_back(row); });
  return rows;
}

// ---- experiment config json --------------------------------------------------

inline ExperimentConfig experiment_config_from_json(const Json &j)
{
  ExperimentConfig c;
  c.prior = prior_from_json(j.at("instance"));
  if (j.contains("pairs"))
  {
    c.pair_seed = j.at("pairs").value("seed", c.pair_seed);
    c.pair_count = j.at("pairs").value("count", c.pair_count);
  }
  if (j.contains("transformation"))
  {
    const Json &t = j.at("transformation");
    c.transform =
        TransformSpec::from_name(t.at("id").get<std::string>(), t.value("q", std::uint64_t{0}));
    if (t.contains("mode"))
    {
      c.mode = feasibility_mode_from_string(t.at("mode").get<std::string>());
    }
    c.transform_seed = t.value("seed", c.transform_seed);
  }
  if (j.contains("budget") && !j.at("budget").is_null())
  {
    c.budget = j.at("budget").get<std::uint64_t>();
  }
  if (j.contains("welfare"))
  {
    const Json &w = j.at("welfare");
    if (w.contains("method"))
    {
      c.welfare.kind = welfare_method_from_string(w.at("method").get<std::string>());
    }
    c.welfare.samples = w.value("samples", c.welfare.samples);
  }
  c.light_overlap_samples = j.value("light_overlap_samples", c.light_overlap_samples);
  c.s_conditioned_samples = j.value("s_conditioned_samples", c.s_conditioned_samples);
  if (j.contains("ic"))
  {
    c.ic = ic_config_from_json(j.at("ic"));
  }
  return c;
}

}  // namespace bbmd
