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

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "bbmd/check/criteria.hpp"
#include "bbmd/experiment.hpp"

namespace {

using namespace bbmd;

constexpr int kExitOk = 0;
constexpr int kExitViolations = 1;
constexpr int kExitConfigError = 2;

ValidPair pair_from_config(const Json &root, const Params &params)
{
  if (root.contains("pair"))
  {
    const Json &j = root.at("pair");
    if (j.contains("S") && j.contains("T"))
    {
      return pair_from_json(j, params);
    }
    if (j.contains("sample_seed"))
    {
      PairDistribution pd;
      pd.params = params;
      pd.seed = j.at("sample_seed").get<std::uint64_t>();
      return sample_valid_pair(pd, j.value("index", std::uint64_t{0}));
    }
    throw ConfigError("pair must give S and T, or sample_seed");
  }
  return canonical_pair(params);
}

struct ResolvedRule
{
  std::string name;
  SeededRule rule;
  std::vector<std::uint64_t> default_seeds{0};
  std::shared_ptr<SeededTransformation> keepalive;
};

ResolvedRule rule_from_config(const Json &root, const ValidPair &pair,
                              const PriorDistribution &prior,
                              std::optional<std::uint64_t> budget, FeasibilityMode mode)
{
  ResolvedRule out;
  if (root.contains("transformation"))
  {
    const Json &t = root.at("transformation");
    const TransformSpec spec =
        TransformSpec::from_name(t.at("id").get<std::string>(), t.value("q", std::uint64_t{0}));
    if (t.contains("mode"))
    {
      mode = feasibility_mode_from_string(t.at("mode").get<std::string>());
    }
    out.keepalive = std::make_shared<SeededTransformation>(pair, prior, spec, mode, budget);
    out.rule = [keep = out.keepalive](const TypeProfile &x, std::uint64_t seed) {
      return (*keep)(x, seed);
    };
    out.name = spec.name();
    out.default_seeds = {t.value("seed", std::uint64_t{0})};
    return out;
  }
  const std::string name = root.value("rule", std::string("alloc-ast"));
  out.name = name;
  if (name == "alloc-ast")
  {
    out.rule = ignore_seed([pair](const TypeProfile &x) { return alloc_ast(x, pair); });
  }
  else if (name == "identity")
  {
    out.rule = ignore_seed([](const TypeProfile &x) { return Allocation(x.support()); });
  }
  else if (name == "empty")
  {
    out.rule = ignore_seed([](const TypeProfile &x) { return Allocation::empty(x.n()); });
  }
  else
  {
    throw ConfigError("unknown rule: " + name);
  }
  return out;
}

int cmd_params(const std::string &config_path, std::uint64_t n, const std::string &epsilon)
{
  Json j;
  if (!config_path.empty())
  {
    j = load_json_file(config_path);
  }
  if (n != 0)
  {
    j["n"] = n;
  }
  if (!epsilon.empty())
  {
    j["epsilon"] = epsilon;
  }
  const Params p = params_from_json(j);
  Json out = params_to_json(p);
  out["separation_hypothesis"] = p.separation_hypothesis();
  std::cout << out.dump(2) << "\n";
  return kExitOk;
}

int cmd_welfare(const std::string &config_path, const std::string &method,
                std::uint64_t samples, std::uint64_t seed)
{
  const Json root = load_json_file(config_path);
  const PriorDistribution prior = prior_from_json(root.at("instance"));
  const ValidPair pair = pair_from_config(root, prior.params);
  ResolvedRule named = rule_from_config(root, pair, prior, std::nullopt,
                                        FeasibilityMode::RangeOnly);
  const std::uint64_t rule_seed = named.default_seeds.front();
  const AllocationRule rule = [&](const TypeProfile &x) { return named.rule(x, rule_seed); };

  WelfareEstimate est;
  if (method == "exact" ||
      (method == "auto" && prior.params.n <= default_exact_limit(prior.setting)))
  {
    est = expected_welfare_exact(rule, prior);
  }
  else
  {
    est = expected_welfare_mc(rule, prior, samples, seed);
  }
  Json out;
  out["rule"] = named.name;
  out["instance"] = prior_to_json(prior);
  out["pair"] = pair_to_json(pair);
  out["welfare"] = estimate_to_json(est);
  std::cout << out.dump(2) << "\n";
  return kExitOk;
}

int cmd_verify(const std::string &config_path, const std::string &mode_flag, std::uint64_t seed,
               std::optional<std::uint64_t> budget, const std::string &audit_path)
{
  const Json root = load_json_file(config_path);
  const PriorDistribution prior = prior_from_json(root.at("instance"));
  const ValidPair pair = pair_from_config(root, prior.params);
  FeasibilityMode mode = FeasibilityMode::RangeOnly;
  if (!mode_flag.empty())
  {
    mode = feasibility_mode_from_string(mode_flag);
  }
  ResolvedRule named = rule_from_config(root, pair, prior, budget, mode);

  IcCheckConfig ic;
  if (root.contains("check"))
  {
    ic = ic_config_from_json(root.at("check"));
  }
  if (ic.seeds.empty())
  {
    ic.seeds = named.default_seeds;
  }

  Json out;
  out["rule"] = named.name;
  out["pair"] = pair_to_json(pair);
  bool pass = true;
  if (ic.kind == IcCheckConfig::Kind::BicMatching)
  {
    auto [subsets, families] = build_matching_subsets(ic, pair, prior, seed);
    out["check"] = "bic-matching";
    out["subsets"] = subsets.size();
    out["families"] = families;
    const auto verdict = check_bic_matching(named.rule, subsets, ic.seeds);
    pass = !verdict.has_value();
    if (verdict.has_value())
    {
      out["violation"] = violation_to_json(*verdict);
    }
  }
  else
  {
    const auto domain = make_verification_domain(pair, prior, ic.domain_samples, seed);
    out["check"] = "midr";
    out["domain_size"] = domain.size();
    const auto verdict = check_midr(named.rule, domain, ic.seeds);
    const auto per_seed = check_midr_per_seed(named.rule, domain, ic.seeds);
    std::uint64_t passing = 0;
    for (const auto &v : per_seed)
    {
      if (!v.has_value())
      {
        ++passing;
      }
    }
    out["seeds_passing"] = passing;
    out["seeds_total"] = ic.seeds.size();
    pass = !verdict.has_value() && passing == ic.seeds.size();
    if (verdict.has_value())
    {
      out["violation"] = violation_to_json(*verdict);
    }
  }
  out["pass"] = pass;
  if (!audit_path.empty())
  {
    if (named.keepalive == nullptr)
    {
      throw ConfigError("--audit requires a transformation (plain rules bill no queries)");
    }
    std::ofstream audit(audit_path);
    if (!audit)
    {
      throw ConfigError("cannot open audit file: " + audit_path);
    }
    named.keepalive->export_audit(audit);
  }
  std::cout << out.dump(2) << "\n";
  return pass ? kExitOk : kExitViolations;
}

int cmd_attack(const std::string &config_path, const std::string &out_path,
               const std::string &csv_path, std::optional<std::uint64_t> budget,
               std::uint64_t samples, std::uint64_t seed, const std::string &mode_flag)
{
  const Json root = load_json_file(config_path);
  ExperimentConfig config = experiment_config_from_json(root);
  if (budget.has_value())
  {
    config.budget = budget;
  }
  if (samples != 0)
  {
    config.welfare.samples = samples;
  }
  if (seed != 0)
  {
    config.pair_seed = seed;
  }
  if (!mode_flag.empty())
  {
    config.mode = feasibility_mode_from_string(mode_flag);
  }

  std::ofstream out_file, csv_file;
  if (!out_path.empty())
  {
    out_file.open(out_path);
    if (!out_file)
    {
      throw ConfigError("cannot open output file: " + out_path);
    }
  }
  if (!csv_path.empty())
  {
    csv_file.open(csv_path);
    if (!csv_file)
    {
      throw ConfigError("cannot open csv file: " + csv_path);
    }
    csv_file << row_csv_header() << "\n";
  }

  bool violations = false;
  attack_experiment(config, [&](const ExperimentRow &row) {
    const Json j = row_to_json(row);
    if (out_file.is_open())
    {
      out_file << j.dump() << "\n";
    }
    else
    {
      std::cout << j.dump() << "\n";
    }
    if (csv_file.is_open())
    {
      csv_file << row_to_csv(row) << "\n";
    }
    if (row.status != "ok" || !row.ic.pass)
    {
      violations = true;
    }
  });
  return violations ? kExitViolations : kExitOk;
}

int cmd_reproduce(const std::string &out_path, const std::string &csv_path)
{
  std::string jsonl;
  const auto results = bbmd::check::run_all_criteria(std::cout, &jsonl);
  if (!out_path.empty())
  {
    std::ofstream out(out_path);
    if (!out)
    {
      throw ConfigError("cannot open output file: " + out_path);
    }
    out << jsonl;
  }
  if (!csv_path.empty())
  {
    std::ofstream csv(csv_path);
    if (!csv)
    {
      throw ConfigError("cannot open csv file: " + csv_path);
    }
    csv << row_csv_header() << "\n";
    std::istringstream rows(jsonl);
    std::string line;
    while (std::getline(rows, line))
    {
      if (line.empty())
      {
        continue;
      }
      // round-trip each row to flatten it
      const ResolvedRowConfig rc = resolved_row_from_json(Json::parse(line).at("config"));
      csv << row_to_csv(run_attack_row(rc)) << "\n";
    }
  }
  bool all_pass = true;
  for (const auto &r : results)
  {
    all_pass = all_pass && r.pass;
  }
  std::cout << (all_pass ? "all criteria passed" : "criteria FAILED") << "\n";
  return all_pass ? kExitOk : kExitViolations;
}

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"black-box mechanism transformation testbed"};
  app.require_subcommand(1);

  std::string config_path, out_path, csv_path, epsilon, method = "auto", mode_flag;
  std::uint64_t n = 0, samples = 2000, seed = 0;
  std::int64_t budget_flag = -1;

  auto *params_cmd = app.add_subcommand("params", "derive a parameter bundle");
  params_cmd->add_option("--config", config_path, "instance config JSON");
  params_cmd->add_option("--n", n, "ground set size");
  params_cmd->add_option("--epsilon", epsilon, "exponent constant, e.g. 1/20");

  auto *welfare_cmd = app.add_subcommand("welfare", "expected welfare of a rule");
  welfare_cmd->add_option("--config", config_path, "config JSON")->required();
  welfare_cmd->add_option("--method", method, "auto|exact|monte-carlo");
  welfare_cmd->add_option("--samples", samples, "Monte Carlo samples");
  welfare_cmd->add_option("--seed", seed, "Monte Carlo seed");

  std::string audit_path;
  auto *verify_cmd = app.add_subcommand("verify", "incentive checks for a rule/transformation");
  verify_cmd->add_option("--config", config_path, "config JSON")->required();
  verify_cmd->add_option("--mode", mode_flag, "range-only|downward-closed");
  verify_cmd->add_option("--seed", seed, "verification domain seed");
  verify_cmd->add_option("--budget", budget_flag, "oracle budget (default unlimited)");
  verify_cmd->add_option("--audit", audit_path, "write the billed-query audit as JSON-lines");

  auto *attack_cmd = app.add_subcommand("attack", "run the adversarial attack experiment");
  attack_cmd->add_option("--config", config_path, "experiment config JSON")->required();
  attack_cmd->add_option("--out", out_path, "JSON-lines output path");
  attack_cmd->add_option("--csv", csv_path, "CSV output path");
  attack_cmd->add_option("--budget", budget_flag, "oracle budget (default unlimited)");
  attack_cmd->add_option("--samples", samples, "Monte Carlo samples override");
  attack_cmd->add_option("--seed", seed, "pair-sampling seed override");
  attack_cmd->add_option("--mode", mode_flag, "range-only|downward-closed");

  auto *reproduce_cmd = app.add_subcommand("reproduce", "run the full verification suite");
  reproduce_cmd->add_option("--out", out_path, "ladder JSON-lines output path");
  reproduce_cmd->add_option("--csv", csv_path, "ladder CSV output path");

  CLI11_PARSE(app, argc, argv);

  std::optional<std::uint64_t> budget;
  if (budget_flag >= 0)
  {
    budget = static_cast<std::uint64_t>(budget_flag);
  }

  try
  {
    if (params_cmd->parsed())
    {
      return cmd_params(config_path, n, epsilon);
    }
    if (welfare_cmd->parsed())
    {
      return cmd_welfare(config_path, method, samples, seed);
    }
    if (verify_cmd->parsed())
    {
      return cmd_verify(config_path, mode_flag, seed, budget, audit_path);
    }
    if (attack_cmd->parsed())
    {
      return cmd_attack(config_path, out_path, csv_path, budget, samples, seed, mode_flag);
    }
    if (reproduce_cmd->parsed())
    {
      return cmd_reproduce(out_path, csv_path);
    }
  }
  catch (const ConfigError &e)
  {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  }
  catch (const bbmd::Error &e)
  {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
  return kExitConfigError;
}
