#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "bbmd/check/oracles.hpp"
#include "bbmd/fixtures.hpp"
#include "bbmd/oracle.hpp"

using namespace bbmd;

namespace {

TypeProfile sp(std::uint32_t n, std::initializer_list<std::uint32_t> idx)
{
  return TypeProfile::single_parameter(IndexSet(n, idx));
}

AllocationRule identity_rule()
{
  return [](const TypeProfile &x) { return Allocation(x.support()); };
}

}  // namespace

TEST_CASE("budget bills distinct queries only")
{
  OracleSession session(identity_rule(), 3, 0);
  CHECK(session.query(sp(8, {0})).count() == 1);
  CHECK(session.query(sp(8, {1})).count() == 1);
  CHECK(session.query(sp(8, {0})).count() == 1);  // memo hit, free
  CHECK(session.queries_used() == 2);
  CHECK(session.query(sp(8, {2})).count() == 1);
  CHECK(session.queries_used() == 3);
  CHECK_THROWS_AS(session.query(sp(8, {3})), BudgetExceededError);
  // memoized repeats still work after exhaustion
  CHECK(session.query(sp(8, {2})).count() == 1);
  CHECK(session.queries_used() == 3);
}

TEST_CASE("memoization returns identical allocations")
{
  int calls = 0;
  OracleSession session(
      [&calls](const TypeProfile &x) {
        ++calls;
        return Allocation(x.support());
      },
      std::nullopt, 0);
  const auto a = session.query(sp(8, {1, 2}));
  const auto b = session.query(sp(8, {1, 2}));
  CHECK(a == b);
  CHECK(calls == 1);
}

TEST_CASE("sessions with equal rule and query sequence have equal logs")
{
  const ValidPair pair = canonical_pair(fixture("sp16").prior.params);
  const AllocationRule rule = [&](const TypeProfile &x) { return alloc_ast(x, pair); };
  OracleSession s1(rule, std::nullopt, 5);
  OracleSession s2(rule, std::nullopt, 5);
  rng::Stream stream(11, 0, 0);
  std::vector<std::uint64_t> masks;
  for (int i = 0; i < 200; ++i)
  {
    masks.push_back(stream.next_below(1 << 16));
  }
  for (const auto m : masks)
  {
    s1.query(TypeProfile::single_parameter(IndexSet::from_mask(16, m)));
  }
  for (const auto m : masks)
  {
    s2.query(TypeProfile::single_parameter(IndexSet::from_mask(16, m)));
  }
  const auto l1 = s1.log_snapshot();
  const auto l2 = s2.log_snapshot();
  REQUIRE(l1.size() == l2.size());
  for (std::size_t i = 0; i < l1.size(); ++i)
  {
    CHECK(l1[i].input == l2[i].input);
    CHECK(l1[i].output == l2[i].output);
  }
}

TEST_CASE("observed range deduplicates and tracks only what was seen")
{
  OracleSession session(identity_rule(), std::nullopt, 0);
  CHECK(session.observed_range().empty());
  session.query(sp(8, {1}));
  session.query(sp(8, {1}));
  session.query(sp(8, {2}));
  const auto range = session.observed_range();
  CHECK(range.size() == 2);
  // no empty allocation: it was never observed
  for (const auto &r : range)
  {
    CHECK_FALSE(r.is_empty());
  }
}

TEST_CASE("exhaustive querying reproduces the analytic range")
{
  const Fixture f = fixture("sp10");
  const ValidPair pair = canonical_pair(f.prior.params);
  OracleSession session([&](const TypeProfile &x) { return alloc_ast(x, pair); }, std::nullopt, 0);
  const auto n = static_cast<unsigned>(f.prior.params.n);
  std::set<std::uint64_t> expected;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask)
  {
    session.query(TypeProfile::single_parameter(IndexSet::from_mask(n, mask)));
    expected.insert(check::naive_ast_mask(mask, pair.S.low_word(), pair.T.low_word(),
                                          f.prior.params.N, f.prior.params.eps_T_N,
                                          f.prior.params.eps_S_N));
  }
  const auto range = session.observed_range();
  CHECK(range.size() == expected.size());
  for (const auto &r : range)
  {
    CHECK(expected.count(r.served().low_word()) == 1);
  }
}

TEST_CASE("query log exports one JSON record per billed query")
{
  OracleSession session(identity_rule(), std::nullopt, 0);
  session.query(sp(8, {0, 3}));
  session.query(sp(8, {0, 3}));
  session.query(TypeProfile::multi_dimensional(IndexSet(8, {1, 2}), IndexSet(8, {2}), Rational(4)));
  std::ostringstream os;
  session.export_jsonl(os);
  std::istringstream is(os.str());
  std::string line;
  std::vector<nlohmann::json> records;
  while (std::getline(is, line))
  {
    records.push_back(nlohmann::json::parse(line));
  }
  REQUIRE(records.size() == 2);
  CHECK(records[0]["query"] == 1);
  CHECK(records[0]["support"] == nlohmann::json::array({0, 3}));
  CHECK(records[0]["output"] == nlohmann::json::array({0, 3}));
  CHECK(records[1]["query"] == 2);
  CHECK(records[1]["alpha_coords"] == nlohmann::json::array({2}));
}
