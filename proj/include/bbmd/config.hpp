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

#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#include "bbmd/adversarial.hpp"
#include "bbmd/ic_verify.hpp"
#include "bbmd/params.hpp"
#include "bbmd/prior.hpp"
#include "bbmd/stats.hpp"
#include "bbmd/transform.hpp"

namespace bbmd {

using Json = nlohmann::ordered_json;

// ---- rationals -------------------------------------------------------------

inline Json rational_to_json(const Rational &r) { return to_string(r); }

/// Accepts integers exactly and strings ("p/q" or decimal). Non-integral JSON
/// numbers are rejected: their binary value is rarely the rational the author
/// meant, and exact fields must not be guessed.
inline Rational rational_from_json(const Json &j, const std::string &key)
{
  if (j.is_number_integer())
  {
    return Rational(j.get<std::int64_t>());
  }
  if (j.is_string())
  {
    return rational_from_string(j.get<std::string>());
  }
  throw ConfigError("field '" + key + "' must be an integer or a rational string like \"1/20\"");
}

// ---- enums -----------------------------------------------------------------

inline std::string to_string(Setting s)
{
  return s == Setting::SingleParameter ? "single-parameter" : "multi-dimensional";
}

inline Setting setting_from_string(const std::string &s)
{
  if (s == "single-parameter")
  {
    return Setting::SingleParameter;
  }
  if (s == "multi-dimensional")
  {
    return Setting::MultiDimensional;
  }
  throw ConfigError("unknown setting: " + s);
}

// ---- params / prior --------------------------------------------------------

inline Json params_to_json(const Params &p)
{
  Json j;
  j["n"] = p.n;
  j["epsilon"] = rational_to_json(p.epsilon);
  j["N"] = p.N;
  j["eps_ST_N"] = p.eps_ST_N;
  j["eps_S_N"] = p.eps_S_N;
  j["eps_T_N"] = p.eps_T_N;
  j["alpha"] = rational_to_json(p.alpha);
  j["bernoulli_q"] = rational_to_json(p.bernoulli_q);
  return j;
}

/// Schema: n is required; epsilon defaults to 1/20. When N, eps_ST_N and
/// eps_T_N are all given the thresholds are taken as-is; otherwise the
/// schedule is derived from (n, epsilon) and any explicitly given key
/// overrides the derived value. alpha and bernoulli_q may be stated for
/// documentation but must match their invariants.
inline Params params_from_json(const Json &j)
{
  if (!j.contains("n"))
  {
    throw ConfigError("instance config requires 'n'");
  }
  const auto n = j.at("n").get<std::uint64_t>();
  const Rational epsilon =
      j.contains("epsilon") ? rational_from_json(j.at("epsilon"), "epsilon") : make_rational(1, 20);

  Params p;
  const bool fully_explicit = j.contains("N") && j.contains("eps_ST_N") && j.contains("eps_T_N");
  if (fully_explicit)
  {
    p.n = n;
    p.epsilon = epsilon;
    p.N = j.at("N").get<std::uint64_t>();
    p.eps_ST_N = j.at("eps_ST_N").get<std::uint64_t>();
    p.eps_T_N = j.at("eps_T_N").get<std::uint64_t>();
  }
  else
  {
    p = derive_params(n, epsilon);
    if (j.contains("N"))
    {
      p.N = j.at("N").get<std::uint64_t>();
    }
    if (j.contains("eps_ST_N"))
    {
      p.eps_ST_N = j.at("eps_ST_N").get<std::uint64_t>();
    }
    if (j.contains("eps_T_N"))
    {
      p.eps_T_N = j.at("eps_T_N").get<std::uint64_t>();
    }
  }
  p.eps_S_N = j.contains("eps_S_N") ? j.at("eps_S_N").get<std::uint64_t>() : 2 * p.eps_ST_N;
  p.alpha = j.contains("alpha") ? rational_from_json(j.at("alpha"), "alpha")
                                : Params::derived_alpha(p.N, p.eps_ST_N);
  p.bernoulli_q = j.contains("bernoulli_q") ? rational_from_json(j.at("bernoulli_q"), "bernoulli_q")
                                            : Params::derived_q(p.n, p.N);
  p.validate();
  return p;
}

inline Json prior_to_json(const PriorDistribution &d)
{
  Json j = params_to_json(d.params);
  j["setting"] = to_string(d.setting);
  j["seed"] = d.seed;
  return j;
}

inline PriorDistribution prior_from_json(const Json &j)
{
  PriorDistribution d;
  d.params = params_from_json(j);
  d.setting = j.contains("setting") ? setting_from_string(j.at("setting").get<std::string>())
                                    : Setting::SingleParameter;
  d.seed = j.value("seed", std::uint64_t{0});
  return d;
}

// ---- profiles / allocations / pairs ----------------------------------------

inline Json index_set_to_json(const IndexSet &s) { return s.to_indices(); }

inline IndexSet index_set_from_json(const Json &j, std::uint32_t n)
{
  std::vector<std::uint32_t> idx = j.get<std::vector<std::uint32_t>>();
  return IndexSet::from_indices(n, idx);
}

inline Json profile_to_json(const TypeProfile &p)
{
  Json j;
  j["support"] = index_set_to_json(p.support());
  if (!p.alpha_coords().empty())
  {
    j["alpha_coords"] = index_set_to_json(p.alpha_coords());
  }
  return j;
}

inline Json pair_to_json(const ValidPair &vp)
{
  Json j;
  j["S"] = index_set_to_json(vp.S);
  j["T"] = index_set_to_json(vp.T);
  return j;
}

inline ValidPair pair_from_json(const Json &j, const Params &params)
{
  const auto n = static_cast<std::uint32_t>(params.n);
  return ValidPair(index_set_from_json(j.at("S"), n), index_set_from_json(j.at("T"), n), params);
}

// ---- estimates / violations ------------------------------------------------

inline Json estimate_to_json(const WelfareEstimate &e)
{
  Json j;
  j["method"] = e.method == WelfareEstimate::Method::Exact ? "exact" : "monte-carlo";
  j["mean"] = rational_to_json(e.mean);
  j["mean_float"] = e.mean_double();
  j["ci_low"] = e.ci_low;
  j["ci_high"] = e.ci_high;
  j["samples"] = e.samples;
  return j;
}

inline Json violation_to_json(const MidrViolation &v)
{
  Json j;
  j["kind"] = "midr";
  j["witness"] = Json{{"v", profile_to_json(v.v)}, {"v_prime", profile_to_json(v.v_prime)}};
  j["slack"] = rational_to_json(v.slack);
  return j;
}

inline Json violation_to_json(const MatchingViolation &v)
{
  Json j;
  j["kind"] = "matching";
  Json subset = Json::array();
  for (const auto &p : v.subset)
  {
    subset.push_back(profile_to_json(p));
  }
  j["witness"] = Json{{"subset", subset}, {"matching", v.better}};
  j["slack"] = rational_to_json(v.slack);
  return j;
}

// ---- io --------------------------------------------------------------------

inline Json load_json_file(const std::string &path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw ConfigError("cannot open config file: " + path);
  }
  try
  {
    return Json::parse(in);
  }
  catch (const nlohmann::json::parse_error &e)
  {
    throw ConfigError("bad JSON in " + path + ": " + e.what());
  }
}

}  // namespace bbmd
