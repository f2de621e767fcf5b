#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>

#include "bbmd/adversarial.hpp"
#include "bbmd/check/oracles.hpp"
#include "bbmd/fixtures.hpp"

using namespace bbmd;

namespace {

ValidPair spec_pair()
{
  // n=16, N=6, eps_ST_N=1, eps_S_N=2, eps_T_N=2, S={1,2,3}, T={3,4,5}
  return canonical_pair(fixture("sp16").prior.params);
}

TypeProfile sp(std::uint32_t n, std::initializer_list<std::uint32_t> idx)
{
  return TypeProfile::single_parameter(IndexSet(n, idx));
}

}  // namespace

TEST_CASE("alloc_ast case examples")
{
  const ValidPair pair = spec_pair();
  CHECK(alloc_ast(sp(16, {4, 5, 6}), pair).served() == IndexSet(16, {4, 5, 6}));
  CHECK(alloc_ast(sp(16, {3, 4, 5, 6, 7, 8, 9}), pair).is_empty());   // |x| > N
  CHECK(alloc_ast(sp(16, {3, 4, 5, 6}), pair).is_empty());            // T-heavy, S-light
  CHECK(alloc_ast(sp(16, {1, 3, 4, 5}), pair).served() == IndexSet(16, {1, 3, 4, 5}));

  // multi-dimensional membership means nonzero
  const auto md = TypeProfile::multi_dimensional(IndexSet(16, {4, 5, 6}), IndexSet(16, {5}),
                                                 pair.params.alpha);
  CHECK(alloc_ast(md, pair).served() == IndexSet(16, {4, 5, 6}));
}

TEST_CASE("alloc_ast returns the support or nothing")
{
  const ValidPair pair = spec_pair();
  rng::Stream stream(3, 0, 0);
  for (int i = 0; i < 2000; ++i)
  {
    const std::uint64_t mask = stream.next_below(1 << 16);
    const Allocation out = alloc_ast(TypeProfile::single_parameter(IndexSet::from_mask(16, mask)), pair);
    CHECK((out.is_empty() || out.served() == IndexSet::from_mask(16, mask)));
  }
}

TEST_CASE("is_feasible examples")
{
  const ValidPair pair = spec_pair();
  CHECK(is_feasible(Allocation::empty(16), pair));
  CHECK_FALSE(is_feasible(Allocation(IndexSet(16, {0, 1, 2, 3, 4, 5, 6})), pair));  // |R| > N
  // T-heavy, S-light, but padding with one unused element of S fits under N
  CHECK(is_feasible(Allocation(IndexSet(16, {3, 4, 5, 6})), pair));
}

TEST_CASE("range lies inside the closure and the closure is downward closed")
{
  const ValidPair pair = spec_pair();
  rng::Stream stream(4, 0, 0);
  for (int i = 0; i < 2000; ++i)
  {
    const std::uint64_t mask = stream.next_below(1 << 16);
    const Allocation out =
        alloc_ast(TypeProfile::single_parameter(IndexSet::from_mask(16, mask)), pair);
    CHECK(is_feasible(out, pair));

    const std::uint64_t r = stream.next_below(1 << 16);
    if (is_feasible(Allocation(IndexSet::from_mask(16, r)), pair))
    {
      const std::uint64_t sub = stream.next_below(1 << 16) & r;
      CHECK(is_feasible(Allocation(IndexSet::from_mask(16, sub)), pair));
    }
  }
}

TEST_CASE("closed-form feasibility equals the brute-force closure on small instances")
{
  for (const std::string name : {"sp10", "sp12"})
  {
    const Fixture f = fixture(name);
    const ValidPair pair = canonical_pair(f.prior.params);
    const auto n = static_cast<unsigned>(f.prior.params.n);
    const auto feasible = check::closure_oracle(n, pair.S.low_word(), pair.T.low_word(),
                                                f.prior.params.N, f.prior.params.eps_T_N,
                                                f.prior.params.eps_S_N);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask)
    {
      const bool got = is_feasible(Allocation(IndexSet::from_mask(n, mask)), pair);
      REQUIRE(got == static_cast<bool>(feasible[mask]));
    }
  }
}

TEST_CASE("valid pair samples have the exact overlap structure")
{
  const Fixture f = fixture("sp64");
  PairDistribution pd;
  pd.params = f.prior.params;
  pd.seed = 5;
  for (std::uint64_t i = 0; i < 300; ++i)
  {
    const ValidPair vp = sample_valid_pair(pd, i);
    CHECK(vp.S.count() == f.prior.params.N / 2);
    CHECK(vp.T.count() == f.prior.params.N / 2);
    CHECK(vp.S.intersection_count(vp.T) == f.prior.params.eps_ST_N);
  }
  CHECK(sample_valid_pair(pd, 17).S == sample_valid_pair(pd, 17).S);
}

TEST_CASE("conditioned pair draws keep the fixed set")
{
  const Fixture f = fixture("sp16");
  const ValidPair base = canonical_pair(f.prior.params);

  PairDistribution fixed_t;
  fixed_t.params = f.prior.params;
  fixed_t.seed = 6;
  fixed_t.conditioning = PairConditioning::FixedT;
  fixed_t.fixed = base.T;
  for (std::uint64_t i = 0; i < 200; ++i)
  {
    const ValidPair vp = sample_valid_pair(fixed_t, i);
    CHECK(vp.T == base.T);
    CHECK(vp.S.intersection_count(vp.T) == f.prior.params.eps_ST_N);
  }

  PairDistribution fixed_s = fixed_t;
  fixed_s.conditioning = PairConditioning::FixedS;
  fixed_s.fixed = base.S;
  for (std::uint64_t i = 0; i < 200; ++i)
  {
    CHECK(sample_valid_pair(fixed_s, i).S == base.S);
  }

  PairDistribution bad = fixed_t;
  bad.fixed = IndexSet(16, {1});
  CHECK_THROWS_AS(sample_valid_pair(bad, 0), ParameterInfeasibleError);
  PairDistribution missing;
  missing.params = f.prior.params;
  missing.conditioning = PairConditioning::FixedS;
  CHECK_THROWS_AS(sample_valid_pair(missing, 0), StructuralError);
}

TEST_CASE("pair sampling is uniform over the full support at tiny sizes")
{
  // n=8, N=4, eps_ST_N=1: 336 valid pairs; every one should land within
  // 5 standard deviations of the uniform count.
  const Params p = Params::explicit_thresholds(8, 4, 1, 1);
  std::map<std::pair<std::uint64_t, std::uint64_t>, std::uint64_t> counts;
  check::for_each_valid_pair(8, 2, 1, [&](std::uint64_t S, std::uint64_t T) {
    counts[{S, T}] = 0;
  });
  REQUIRE(counts.size() == 336);

  PairDistribution pd;
  pd.params = p;
  pd.seed = 404;
  const std::uint64_t draws = 200000;
  for (std::uint64_t i = 0; i < draws; ++i)
  {
    const ValidPair vp = sample_valid_pair(pd, i);
    const auto key = std::make_pair(vp.S.low_word(), vp.T.low_word());
    auto it = counts.find(key);
    REQUIRE(it != counts.end());
    ++it->second;
  }
  const double expected = static_cast<double>(draws) / 336.0;
  const double sd = std::sqrt(expected * (1.0 - 1.0 / 336.0));
  for (const auto &kv : counts)
  {
    CHECK(std::abs(static_cast<double>(kv.second) - expected) <= 5.0 * sd);
  }
}

TEST_CASE("pair sampling marginals match exhaustive enumeration")
{
  // n=16, N=6, eps_ST_N=1: every coordinate lies in S with probability
  // (N/2)/n = 3/16, verified against the full enumeration of valid pairs.
  const Params p = fixture("sp16").prior.params;
  const unsigned n = 16;
  std::uint64_t total = 0;
  std::vector<std::uint64_t> s_count(n, 0), t_count(n, 0);
  check::for_each_valid_pair(n, static_cast<unsigned>(p.N / 2),
                             static_cast<unsigned>(p.eps_ST_N),
                             [&](std::uint64_t S, std::uint64_t T) {
                               ++total;
                               for (unsigned i = 0; i < n; ++i)
                               {
                                 s_count[i] += (S >> i) & 1;
                                 t_count[i] += (T >> i) & 1;
                               }
                             });
  REQUIRE(total > 0);
  const Rational expected = make_rational(3, 16);
  for (unsigned i = 0; i < n; ++i)
  {
    CHECK(Rational(BigInt(s_count[i]), BigInt(total)) == expected);
    CHECK(Rational(BigInt(t_count[i]), BigInt(total)) == expected);
  }

  PairDistribution pd;
  pd.params = p;
  pd.seed = 8;
  const std::uint64_t draws = 100000;
  std::vector<std::uint64_t> hits(n, 0);
  for (std::uint64_t i = 0; i < draws; ++i)
  {
    sample_valid_pair(pd, i).S.for_each([&](std::uint32_t b) { ++hits[b]; });
  }
  const double q = 3.0 / 16.0;
  const double se = std::sqrt(q * (1 - q) / static_cast<double>(draws));
  for (unsigned i = 0; i < n; ++i)
  {
    const double freq = static_cast<double>(hits[i]) / static_cast<double>(draws);
    CHECK(std::abs(freq - q) <= 3 * se);
  }
}
