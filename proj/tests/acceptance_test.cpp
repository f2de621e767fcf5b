// Acceptance suite: runs every verification criterion at its stated
// tolerance and prints one PASS/FAIL line per criterion.

#include <catch2/catch_amalgamated.hpp>

#include <chrono>
#include <iostream>

#include "bbmd/check/criteria.hpp"

using namespace bbmd::check;

namespace {

const auto g_suite_start = std::chrono::steady_clock::now();

void report(const CriterionResult &r)
{
  std::cout << "[" << (r.pass ? "PASS" : "FAIL") << "] criterion " << r.id << ": " << r.name
            << " -- " << r.detail << " (" << r.seconds << " s)" << std::endl;
  INFO(r.name << ": " << r.detail);
  REQUIRE(r.pass);
}

}  // namespace

TEST_CASE("criterion 1: truth-table equivalence")
{
  report(criterion1());
}

TEST_CASE("criterion 2: feasibility closed form")
{
  report(criterion2());
}

TEST_CASE("criterion 3: matching engine vs brute force")
{
  report(criterion3());
}

TEST_CASE("criterion 4: verifier soundness and completeness")
{
  report(criterion4());
}

TEST_CASE("criterion 5: two-subset consistency")
{
  report(criterion5());
}

TEST_CASE("criterion 6: welfare floor")
{
  report(criterion6());
}

TEST_CASE("criterion 7: tail bound helper")
{
  report(criterion7());
}

TEST_CASE("criterion 8: Monte Carlo calibration")
{
  report(criterion8());
}

TEST_CASE("criteria 9 and 10: degradation trend and determinism")
{
  const LadderRun ladder = run_ladder();
  report(criterion9(ladder));
  report(criterion10(ladder));
}

TEST_CASE("suite runtime stays under ten minutes")
{
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - g_suite_start).count();
  std::cout << "[INFO] acceptance suite wall time: " << elapsed << " s" << std::endl;
  REQUIRE(elapsed < 600.0);
}
