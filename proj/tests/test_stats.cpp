#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "bbmd/check/oracles.hpp"
#include "bbmd/fixtures.hpp"
#include "bbmd/stats.hpp"

using namespace bbmd;

namespace {

AllocationRule identity_rule()
{
  return [](const TypeProfile &x) { return Allocation(x.support()); };
}

AllocationRule empty_rule()
{
  return [](const TypeProfile &x) { return Allocation::empty(x.n()); };
}

}  // namespace

TEST_CASE("exact expected welfare of the unconstrained identity rule is n*q")
{
  // q = 3N/(4n) = 1/2 with n = 6, N = 4
  PriorDistribution prior;
  prior.params = Params::explicit_thresholds(6, 4, 1, 1);
  prior.setting = Setting::SingleParameter;
  REQUIRE(prior.params.bernoulli_q == make_rational(1, 2));

  const auto est = expected_welfare_exact(identity_rule(), prior);
  CHECK(est.mean == Rational(3));  // n*q by linearity
  CHECK(est.method == WelfareEstimate::Method::Exact);
  CHECK(est.ci_low == est.ci_high);
  CHECK(est.samples == 64);

  CHECK(expected_welfare_exact(empty_rule(), prior).mean == Rational(0));
}

TEST_CASE("exact enumeration refuses oversized domains")
{
  const Fixture f = fixture("sp64");
  CHECK_THROWS_AS(expected_welfare_exact(identity_rule(), f.prior), ConfigError);
}

TEST_CASE("three-level exact enumeration matches the independent oracle")
{
  PriorDistribution prior;
  prior.params = Params::explicit_thresholds(6, 4, 1, 1);
  prior.setting = Setting::MultiDimensional;
  const ValidPair pair = canonical_pair(prior.params);

  const auto est =
      expected_welfare_exact([&](const TypeProfile &x) { return alloc_ast(x, pair); }, prior);
  const Rational oracle = check::naive_expected_welfare_md(
      6, prior.params.bernoulli_q, prior.params.alpha,
      [&](std::uint64_t support, std::uint64_t) {
        return check::naive_ast_mask(support, pair.S.low_word(), pair.T.low_word(),
                                     prior.params.N, prior.params.eps_T_N, prior.params.eps_S_N);
      });
  CHECK(est.mean == oracle);
  CHECK(est.samples == 729);  // 3^6 profiles
}

TEST_CASE("monte carlo estimates are deterministic in the seed")
{
  const Fixture f = fixture("sp16");
  const ValidPair pair = canonical_pair(f.prior.params);
  const AllocationRule rule = [&](const TypeProfile &x) { return alloc_ast(x, pair); };
  const auto a = expected_welfare_mc(rule, f.prior, 500, 7);
  const auto b = expected_welfare_mc(rule, f.prior, 500, 7);
  CHECK(a.mean == b.mean);
  CHECK(a.ci_low == b.ci_low);
  const auto c = expected_welfare_mc(rule, f.prior, 500, 8);
  CHECK(a.mean != c.mean);
  CHECK(a.method == WelfareEstimate::Method::MonteCarlo);
  CHECK(a.ci_low <= a.mean_double());
  CHECK(a.mean_double() <= a.ci_high);
}

TEST_CASE("zero-welfare rules give a degenerate interval")
{
  const Fixture f = fixture("sp16");
  const auto est = expected_welfare_mc(empty_rule(), f.prior, 100, 3);
  CHECK(est.mean == Rational(0));
  CHECK(est.ci_low == 0.0);
  CHECK(est.ci_high == 0.0);
  CHECK_THROWS_AS(expected_welfare_mc(empty_rule(), f.prior, 1, 3), StructuralError);
}

TEST_CASE("confidence intervals cover the exact value at their nominal rate")
{
  // 95% CIs over seeds 1..200; at 1600 samples this frozen seed set covers
  // 192 times, comfortably at the nominal rate.
  const Fixture f = fixture("sp16");
  const ValidPair pair = canonical_pair(f.prior.params);
  const AllocationRule rule = [&](const TypeProfile &x) { return alloc_ast(x, pair); };
  const double exact = to_double(expected_welfare_exact(rule, f.prior).mean);
  int covered = 0;
  for (std::uint64_t t = 1; t <= 200; ++t)
  {
    const auto est = expected_welfare_mc(rule, f.prior, 1600, t);
    if (est.ci_low <= exact && exact <= est.ci_high)
    {
      ++covered;
    }
  }
  CHECK(covered >= 190);
}

TEST_CASE("doubling samples shrinks the interval by about 1/sqrt(2)")
{
  const Fixture f = fixture("sp16");
  const ValidPair pair = canonical_pair(f.prior.params);
  const AllocationRule rule = [&](const TypeProfile &x) { return alloc_ast(x, pair); };
  double ratio_sum = 0;
  const int trials = 40;
  for (int t = 0; t < trials; ++t)
  {
    const auto narrow = expected_welfare_mc(rule, f.prior, 800, 100 + t);
    const auto wide = expected_welfare_mc(rule, f.prior, 400, 500 + t);
    ratio_sum += (narrow.ci_high - narrow.ci_low) / (wide.ci_high - wide.ci_low);
  }
  const double mean_ratio = ratio_sum / trials;
  CHECK(std::abs(mean_ratio - 1.0 / std::sqrt(2.0)) < 0.2 / std::sqrt(2.0));
}

TEST_CASE("chernoff bound value and hypothesis")
{
  CHECK(chernoff_bound(Rational(1), Rational(3)) ==
        Catch::Approx(0.4723665527410147).epsilon(1e-12));
  CHECK_THROWS_AS(chernoff_bound(Rational(1), Rational(2)), HypothesisViolatedError);
  CHECK(chernoff_bound(Rational(0), Rational(0)) == 1.0);
  CHECK(chernoff_bound(make_rational(1, 2), make_rational(3, 2)) ==
        Catch::Approx(std::exp(-0.375)).epsilon(1e-12));
}

TEST_CASE("empirical binomial tail stays under the bound")
{
  // 64 Bernoulli(1/64) variables, Y = 3
  const unsigned k = 64;
  const auto p = make_rational(1, 64);
  const double bound = chernoff_bound(Rational(1), Rational(3));
  const Rational exact = check::binomial_tail_gt(k, p, Rational(3));
  CHECK(to_double(exact) <= bound);

  const auto prob = rng::SmallProb::from(p);
  const std::uint64_t trials = 200000;
  std::uint64_t hits = 0;
  for (std::uint64_t t = 0; t < trials; ++t)
  {
    unsigned sum = 0;
    for (unsigned v = 0; v < k; ++v)
    {
      sum += rng::bernoulli_word(rng::word_at(0xFEED, t, v), prob.num, prob.den) ? 1u : 0u;
    }
    hits += sum > 3 ? 1 : 0;
  }
  const double p_hat = static_cast<double>(hits) / static_cast<double>(trials);
  const double se = std::sqrt(p_hat * (1 - p_hat) / static_cast<double>(trials));
  CHECK(p_hat <= bound + 3 * se);
  // and the simulation tracks the exact tail
  CHECK(std::abs(p_hat - to_double(exact)) <= 4 * se + 1e-9);
}
