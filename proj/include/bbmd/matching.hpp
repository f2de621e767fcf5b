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

#include <cstdint>
#include <vector>

#include "bbmd/errors.hpp"
#include "bbmd/rational.hpp"

namespace bbmd {

/// A perfect matching of a square weight matrix: match[u] is the column
/// assigned to row u.
struct MatchingResult
{
  std::vector<std::uint32_t> match;
  Rational weight;

  bool is_identity() const
  {
    for (std::uint32_t i = 0; i < match.size(); ++i)
    {
      if (match[i] != i)
      {
        return false;
      }
    }
    return true;
  }
};

/// Maximum-weight perfect matching of a square non-negative rational matrix,
/// Hungarian algorithm with exact potentials. Under non-negative weights a
/// perfect matching is WLOG: zero-weight edges pad any partial matching.
inline MatchingResult max_weight_matching(const std::vector<std::vector<Rational>> &w)
{
  const std::size_t n = w.size();
  if (n == 0)
  {
    throw StructuralError("matching requires a non-empty matrix");
  }
  Rational top(0);
  for (const auto &row : w)
  {
    if (row.size() != n)
    {
      throw StructuralError("matching requires a square matrix");
    }
    for (const auto &entry : row)
    {
      if (entry < 0)
      {
        throw StructuralError("matching weights must be non-negative");
      }
      if (entry > top)
      {
        top = entry;
      }
    }
  }

  // Minimize cost[i][j] = top - w[i][j] (all entries >= 0).
  const Rational inf = Rational(static_cast<std::int64_t>(n)) * top + 1;
  std::vector<Rational> u(n + 1, Rational(0)), v(n + 1, Rational(0)), minv(n + 1);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  auto cost = [&](std::size_t i, std::size_t j) -> Rational { return top - w[i - 1][j - 1]; };

  for (std::size_t i = 1; i <= n; ++i)
  {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<char> used(n + 1, 0);
    for (std::size_t j = 0; j <= n; ++j)
    {
      minv[j] = inf;
    }
    do
    {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      Rational delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j)
      {
        if (used[j])
        {
          continue;
        }
        const Rational cur = cost(i0, j) - u[i0] - v[j];
        if (cur < minv[j])
        {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta)
        {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j)
      {
        if (used[j])
        {
          u[p[j]] += delta;
          v[j] -= delta;
        }
        else
        {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do
    {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  MatchingResult result;
  result.match.assign(n, 0);
  result.weight = Rational(0);
  for (std::size_t j = 1; j <= n; ++j)
  {
    result.match[p[j] - 1] = static_cast<std::uint32_t>(j - 1);
  }
  for (std::size_t i = 0; i < n; ++i)
  {
    result.weight += w[i][result.match[i]];
  }
  return result;
}

}  // namespace bbmd
