#include <catch2/catch_amalgamated.hpp>

#include "bbmd/config.hpp"
#include "bbmd/experiment.hpp"
#include "bbmd/fixtures.hpp"

using namespace bbmd;

TEST_CASE("params derive from n and epsilon")
{
  const Params p = params_from_json(Json{{"n", 65536}});
  CHECK(p.N == 776);
  CHECK(p.eps_ST_N == 49);
  CHECK(p.epsilon == make_rational(1, 20));
}

TEST_CASE("explicit threshold configs bypass derivation")
{
  const Json j = {{"n", 16}, {"N", 6}, {"eps_ST_N", 1}, {"eps_T_N", 2}};
  const Params p = params_from_json(j);
  CHECK(p == fixture("sp16").prior.params);
}

TEST_CASE("explicit keys override derived values")
{
  const Params base = params_from_json(Json{{"n", 65536}});
  const Params overridden = params_from_json(Json{{"n", 65536}, {"eps_T_N", 10}});
  CHECK(overridden.eps_T_N == 10);
  CHECK(overridden.N == base.N);
  CHECK(overridden.eps_ST_N == base.eps_ST_N);
}

TEST_CASE("config validation failures")
{
  CHECK_THROWS_AS(params_from_json(Json{{"epsilon", "1/20"}}), ConfigError);  // missing n
  CHECK_THROWS_AS(params_from_json(Json{{"n", 16}}), ParameterInfeasibleError);  // derive fails
  // stated alpha must match the invariant
  CHECK_THROWS_AS(
      params_from_json(Json{{"n", 16}, {"N", 6}, {"eps_ST_N", 1}, {"eps_T_N", 2}, {"alpha", "7"}}),
      ParameterInfeasibleError);
  // non-integral JSON numbers are refused for rational fields
  CHECK_THROWS_AS(params_from_json(Json{{"n", 65536}, {"epsilon", 0.05}}), ConfigError);
}

TEST_CASE("prior and pair round-trip through json")
{
  const Fixture f = fixture("md12");
  const PriorDistribution parsed = prior_from_json(prior_to_json(f.prior));
  CHECK(parsed == f.prior);

  const ValidPair pair = canonical_pair(f.prior.params);
  const ValidPair back = pair_from_json(pair_to_json(pair), f.prior.params);
  CHECK(back.S == pair.S);
  CHECK(back.T == pair.T);
}

TEST_CASE("fixture files match the built-in bundles")
{
  for (const auto &name : fixture_names())
  {
    const Json j = load_json_file(std::string(BBMD_CONFIG_DIR) + "/" + name + ".json");
    const PriorDistribution parsed = prior_from_json(j);
    const Fixture f = fixture(name);
    CHECK(parsed == f.prior);
    REQUIRE(j.contains("separation_hypothesis"));
    CHECK(j.at("separation_hypothesis").get<bool>() == parsed.params.separation_hypothesis());
  }
}

TEST_CASE("experiment config parses with defaults")
{
  Json j;
  j["instance"] = {{"n", 16}, {"N", 6}, {"eps_ST_N", 1}, {"eps_T_N", 2}};
  j["transformation"] = {{"id", "presampled-range"}, {"q", 16}, {"mode", "downward-closed"}};
  j["pairs"] = {{"seed", 3}, {"count", 5}};
  const ExperimentConfig c = experiment_config_from_json(j);
  CHECK(c.transform.id == TransformId::PresampledRange);
  CHECK(c.transform.q == 16);
  CHECK(c.mode == FeasibilityMode::DownwardClosedInference);
  CHECK(c.pair_count == 5);
  CHECK(c.prior.params.N == 6);
  CHECK(c.ic.kind == IcCheckConfig::Kind::Midr);
}

TEST_CASE("violation reports serialize with exact slack")
{
  MidrViolation v;
  v.v = TypeProfile::single_parameter(IndexSet(4, {1}));
  v.v_prime = TypeProfile::single_parameter(IndexSet(4, {2}));
  v.slack = make_rational(7, 3);
  const Json j = violation_to_json(v);
  CHECK(j["kind"] == "midr");
  CHECK(j["slack"] == "7/3");
  CHECK(j["witness"]["v"]["support"] == Json::array({1}));
}
