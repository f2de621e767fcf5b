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

#include <string>
#include <vector>

#include "bbmd/adversarial.hpp"
#include "bbmd/params.hpp"
#include "bbmd/prior.hpp"

namespace bbmd {

/// The desk-scale test matrix. Thresholds are hand-picked integers (the
/// derived schedule is infeasible or degenerate at these sizes); the same
/// bundles are recorded in configs/*.json.
struct Fixture
{
  std::string name;
  PriorDistribution prior;
};

inline Fixture fixture(const std::string &name)
{
  auto make = [](std::string id, std::uint64_t n, std::uint64_t N, std::uint64_t eps_ST_N,
                 std::uint64_t eps_T_N, Setting setting) {
    Fixture f;
    f.name = std::move(id);
    f.prior.params = Params::explicit_thresholds(n, N, eps_ST_N, eps_T_N);
    f.prior.setting = setting;
    f.prior.seed = 1;
    return f;
  };
  if (name == "sp10")
  {
    return make(name, 10, 4, 1, 1, Setting::SingleParameter);
  }
  if (name == "sp12")
  {
    return make(name, 12, 6, 1, 2, Setting::SingleParameter);
  }
  if (name == "md12")
  {
    return make(name, 12, 6, 1, 2, Setting::MultiDimensional);
  }
  if (name == "sp16")
  {
    return make(name, 16, 6, 1, 2, Setting::SingleParameter);
  }
  if (name == "sp64")
  {
    return make(name, 64, 12, 2, 3, Setting::SingleParameter);
  }
  if (name == "sp256")
  {
    return make(name, 256, 28, 3, 4, Setting::SingleParameter);
  }
  if (name == "sp1024")
  {
    return make(name, 1024, 64, 4, 6, Setting::SingleParameter);
  }
  if (name == "sp1024h")
  {
    // The one rung where the separation hypothesis eps_ST > 2N/n holds.
    return make(name, 1024, 16, 1, 2, Setting::SingleParameter);
  }
  throw ConfigError("unknown fixture: " + name);
}

inline std::vector<std::string> fixture_names()
{
  return {"sp10", "sp12", "md12", "sp16", "sp64", "sp256", "sp1024", "sp1024h"};
}

/// n = 16, 64, 256, 1024 with scaled thresholds; the degradation-trend rung
/// sequence.
inline std::vector<std::string> ladder_names()
{
  return {"sp16", "sp64", "sp256", "sp1024"};
}

/// The canonical pair of a bundle: S = {1..N/2}, T shifted to overlap S in
/// exactly eps_ST_N coordinates. For the n=16 bundle this is S = {1,2,3},
/// T = {3,4,5}.
inline ValidPair canonical_pair(const Params &params)
{
  const auto n = static_cast<std::uint32_t>(params.n);
  const auto half = static_cast<std::uint32_t>(params.N / 2);
  const auto overlap = static_cast<std::uint32_t>(params.eps_ST_N);
  IndexSet S(n);
  IndexSet T(n);
  for (std::uint32_t i = 1; i <= half; ++i)
  {
    S.insert(i);
  }
  for (std::uint32_t i = half - overlap + 1; i <= 2 * half - overlap; ++i)
  {
    T.insert(i);
  }
  return ValidPair(std::move(S), std::move(T), params);
}

}  // namespace bbmd
