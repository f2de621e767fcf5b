#include <catch2/catch_amalgamated.hpp>

#include "bbmd/params.hpp"
#include "bbmd/prior.hpp"
#include "bbmd/rational.hpp"
#include "bbmd/types.hpp"

using namespace bbmd;

TEST_CASE("rational parsing")
{
  CHECK(rational_from_string("9/32") == make_rational(9, 32));
  CHECK(rational_from_string("0.05") == make_rational(1, 20));
  CHECK(rational_from_string("12") == Rational(12));
  CHECK(rational_from_string("-0.25") == make_rational(-1, 4));
  CHECK(to_string(make_rational(2, 6)) == "1/3");
  CHECK_THROWS_AS(rational_from_string("abc"), ConfigError);
  CHECK_THROWS_AS(make_rational(1, 0), StructuralError);
}

TEST_CASE("index set algebra")
{
  IndexSet a(100, {0, 5, 64, 99});
  IndexSet b(100, {5, 64});
  CHECK(a.count() == 4);
  CHECK(b.is_subset_of(a));
  CHECK_FALSE(a.is_subset_of(b));
  CHECK(a.intersection_count(b) == 2);
  CHECK(a.difference(b).count() == 2);
  CHECK(a.unite(b) == a);
  CHECK(IndexSet(100).lex_less(b));
  CHECK(b.lex_less(a));  // first difference at index 0, where a has the bit
  CHECK_THROWS_AS(a.intersection_count(IndexSet(16)), StructuralError);
  CHECK_THROWS_AS(a.contains(100), StructuralError);

  const auto idx = a.to_indices();
  CHECK(idx == std::vector<std::uint32_t>{0, 5, 64, 99});
}

TEST_CASE("welfare of explicit profiles")
{
  // x=(1,1,0,1), y={0,1} -> 2
  const auto x1 = TypeProfile::from_values(
      {Rational(1), Rational(1), Rational(0), Rational(1)}, Setting::SingleParameter);
  CHECK(welfare(x1, Allocation(IndexSet(4, {0, 1}))) == Rational(2));

  // empty allocation -> 0
  CHECK(welfare(x1, Allocation::empty(4)) == Rational(0));

  // x=(alpha,1,0) with alpha=4, y={0,2} -> 4
  const auto x2 = TypeProfile::from_values({Rational(4), Rational(1), Rational(0)},
                                           Setting::MultiDimensional, Rational(4));
  CHECK(welfare(x2, Allocation(IndexSet(3, {0, 2}))) == Rational(4));

  CHECK_THROWS_AS(welfare(x1, Allocation::empty(5)), StructuralError);
}

TEST_CASE("welfare is linear and monotone")
{
  rng::Stream stream(42, 0, 0);
  for (int trial = 0; trial < 200; ++trial)
  {
    const std::uint32_t n = 20;
    const std::uint64_t sup = stream.next_below(1 << n);
    const std::uint64_t am = stream.next_below(1 << n) & sup;
    const auto x = TypeProfile::multi_dimensional(IndexSet::from_mask(n, sup),
                                                  IndexSet::from_mask(n, am), make_rational(7, 2));
    const std::uint64_t y1m = stream.next_below(1 << n);
    const std::uint64_t y2m = stream.next_below(1 << n) & ~y1m;
    const Allocation y1(IndexSet::from_mask(n, y1m));
    const Allocation y2(IndexSet::from_mask(n, y2m));
    const Allocation both(IndexSet::from_mask(n, y1m | y2m));
    CHECK(welfare(x, both) == welfare(x, y1) + welfare(x, y2));
    CHECK(welfare(x, y1) <= welfare(x, both));
  }
}

TEST_CASE("profile invariants")
{
  CHECK_THROWS_AS(TypeProfile::from_values({make_rational(1, 2)}, Setting::SingleParameter),
                  StructuralError);
  CHECK_THROWS_AS(
      TypeProfile::from_values({Rational(3)}, Setting::MultiDimensional, Rational(4)),
      StructuralError);
  CHECK_THROWS_AS(
      TypeProfile::multi_dimensional(IndexSet(4, {0}), IndexSet(4, {1}), Rational(4)),
      StructuralError);
  CHECK_THROWS_AS(
      TypeProfile::multi_dimensional(IndexSet(4, {0}), IndexSet(4, {0}), Rational(1)),
      StructuralError);

  const auto p = TypeProfile::multi_dimensional(IndexSet(4, {0, 2}), IndexSet(4, {2}), Rational(4));
  CHECK(p.value(0) == Rational(1));
  CHECK(p.value(1) == Rational(0));
  CHECK(p.value(2) == Rational(4));
  CHECK(p.values() == std::vector<Rational>{Rational(1), Rational(0), Rational(4), Rational(0)});
}

TEST_CASE("derive_params regression fixtures")
{
  // frozen from an independent exact calculator
  const Params a = derive_params(65536, make_rational(1, 20));
  CHECK(a.N == 776);
  CHECK(a.eps_ST_N == 49);
  CHECK(a.eps_S_N == 98);
  CHECK(a.eps_T_N == 49);
  CHECK(a.alpha == make_rational(1552, 49));
  CHECK(a.bernoulli_q == make_rational(291, 32768));

  const Params b = derive_params(4096, make_rational(1, 20));
  CHECK(b.N == 148);
  CHECK(b.eps_ST_N == 19);
  CHECK(b.eps_T_N == 37);
  CHECK(b.alpha == make_rational(296, 19));
  CHECK(b.bernoulli_q == make_rational(111, 4096));

  const Params c = derive_params(1000000, make_rational(1, 20));
  CHECK(c.N == 3982);
  CHECK(c.eps_ST_N == 126);
  CHECK(c.eps_T_N == 64);
}

TEST_CASE("derive_params rejects infeasible sizes")
{
  CHECK_THROWS_AS(derive_params(4, make_rational(1, 20)), ParameterInfeasibleError);
  CHECK_THROWS_AS(derive_params(16, make_rational(1, 20)), ParameterInfeasibleError);
  CHECK_THROWS_AS(derive_params(3, make_rational(1, 20)), ParameterInfeasibleError);
  CHECK_THROWS_AS(derive_params(100, make_rational(1, 2)), ParameterInfeasibleError);
}

TEST_CASE("derive_params output always satisfies the invariants")
{
  const std::vector<std::uint64_t> ns = {16,   32,   64,    100,   256,    500,    1024,  2048,
                                         4096, 9000, 16384, 65536, 100000, 500000, 1000000};
  const std::vector<Rational> epss = {make_rational(1, 100), make_rational(1, 20),
                                      make_rational(1, 10), make_rational(3, 20),
                                      make_rational(1, 5)};
  int produced = 0;
  for (const auto n : ns)
  {
    for (const auto &eps : epss)
    {
      try
      {
        const Params p = derive_params(n, eps);
        p.validate();  // must not throw
        CHECK(p.eps_S_N == 2 * p.eps_ST_N);
        CHECK(p.eps_S_N <= p.N / 2);
        CHECK(p.N % 2 == 0);
        CHECK(p.N <= n);
        CHECK(p.alpha == Params::derived_alpha(p.N, p.eps_ST_N));
        CHECK(p.bernoulli_q == Params::derived_q(n, p.N));
        ++produced;
      }
      catch (const ParameterInfeasibleError &)
      {
        // allowed at small n
      }
    }
  }
  CHECK(produced > 30);
}

TEST_CASE("explicit thresholds validate")
{
  CHECK_NOTHROW(Params::explicit_thresholds(16, 6, 1, 2));
  CHECK_THROWS_AS(Params::explicit_thresholds(16, 5, 1, 2), ParameterInfeasibleError);  // odd N
  CHECK_THROWS_AS(Params::explicit_thresholds(16, 6, 4, 2), ParameterInfeasibleError);  // eps_ST > N/2
  CHECK_THROWS_AS(Params::explicit_thresholds(4, 6, 1, 2), ParameterInfeasibleError);   // N > n
  CHECK_THROWS_AS(Params::explicit_thresholds(16, 6, 1, 0), ParameterInfeasibleError);  // zero threshold
}
