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
//
// Independent reference implementations used by the verification suite. They
// deliberately avoid the library's set types and enumeration helpers: plain
// bit masks, per-bit loops, and direct case evaluation, so that agreement
// with the main code path is meaningful.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "bbmd/rational.hpp"

namespace bbmd::check {

inline unsigned bit_count(std::uint64_t m)
{
  unsigned c = 0;
  while (m != 0)
  {
    c += static_cast<unsigned>(m & 1);
    m >>= 1;
  }
  return c;
}

/// Case evaluation of the adversarial rule over raw masks.
inline std::uint64_t naive_ast_mask(std::uint64_t x, std::uint64_t S, std::uint64_t T,
                                    std::uint64_t N, std::uint64_t eps_T_N, std::uint64_t eps_S_N)
{
  if (bit_count(x) > N)
  {
    return 0;
  }
  if (bit_count(x & T) <= eps_T_N)
  {
    return x;
  }
  if (bit_count(x & S) >= eps_S_N)
  {
    return x;
  }
  return 0;
}

/// Downward closure of the enumerated range over all 2^n candidate sets:
/// feasible[R] = 1 iff some range element contains R. Built by enumerating
/// the range and marking every submask.
inline std::vector<char> closure_oracle(unsigned n, std::uint64_t S, std::uint64_t T,
                                        std::uint64_t N, std::uint64_t eps_T_N,
                                        std::uint64_t eps_S_N)
{
  const std::uint64_t top = std::uint64_t{1} << n;
  std::vector<char> feasible(top, 0);
  feasible[0] = 1;  // the empty allocation is in the range (any |x| > N input)
  for (std::uint64_t x = 0; x < top; ++x)
  {
    const std::uint64_t y = naive_ast_mask(x, S, T, N, eps_T_N, eps_S_N);
    if (y == 0)
    {
      continue;
    }
    if (feasible[y])
    {
      continue;
    }
    std::uint64_t sub = y;
    for (;;)
    {
      feasible[sub] = 1;
      if (sub == 0)
      {
        break;
      }
      sub = (sub - 1) & y;
    }
  }
  return feasible;
}

/// Max-weight perfect matching by trying all permutations.
inline Rational brute_force_matching_weight(const std::vector<std::vector<Rational>> &w)
{
  const std::size_t n = w.size();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Rational best(-1);
  do
  {
    Rational total(0);
    for (std::size_t i = 0; i < n; ++i)
    {
      total += w[i][perm[i]];
    }
    if (total > best)
    {
      best = total;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

/// Exact expected welfare of a mask rule under iid Bernoulli(q) coordinates:
/// sum over all inputs of q^|x| (1-q)^{n-|x|} * |rule(x) restricted to x=1|,
/// with per-coordinate values of 1.
template <typename MaskRule>
Rational naive_expected_welfare_sp(unsigned n, const Rational &q, MaskRule &&rule)
{
  const std::uint64_t top = std::uint64_t{1} << n;
  Rational total(0);
  for (std::uint64_t x = 0; x < top; ++x)
  {
    const unsigned k = bit_count(x);
    Rational pr(1);
    for (unsigned i = 0; i < k; ++i)
    {
      pr *= q;
    }
    for (unsigned i = 0; i < n - k; ++i)
    {
      pr *= Rational(1) - q;
    }
    const std::uint64_t served = rule(x);
    total += pr * Rational(static_cast<std::int64_t>(bit_count(served & x)));
  }
  return total;
}

/// Exact expected welfare in the three-level setting. The rule sees
/// (support, alpha_set) masks and returns the served mask; a served
/// coordinate contributes alpha when in alpha_set, 1 when merely in support.
template <typename MaskRule>
Rational naive_expected_welfare_md(unsigned n, const Rational &q, const Rational &alpha,
                                   MaskRule &&rule)
{
  const std::uint64_t top = std::uint64_t{1} << n;
  const Rational p = Rational(1) / alpha;
  Rational total(0);
  for (std::uint64_t support = 0; support < top; ++support)
  {
    const unsigned k = bit_count(support);
    Rational pr_support(1);
    for (unsigned i = 0; i < k; ++i)
    {
      pr_support *= q;
    }
    for (unsigned i = 0; i < n - k; ++i)
    {
      pr_support *= Rational(1) - q;
    }
    std::uint64_t alphas = support;
    for (;;)
    {
      const unsigned a = bit_count(alphas);
      Rational pr = pr_support;
      for (unsigned i = 0; i < a; ++i)
      {
        pr *= p;
      }
      for (unsigned i = 0; i < k - a; ++i)
      {
        pr *= Rational(1) - p;
      }
      const std::uint64_t served = rule(support, alphas);
      const unsigned served_alpha = bit_count(served & alphas);
      const unsigned served_one = bit_count(served & support) - served_alpha;
      total += pr * (Rational(static_cast<std::int64_t>(served_one)) +
                     alpha * Rational(static_cast<std::int64_t>(served_alpha)));
      if (alphas == 0)
      {
        break;
      }
      alphas = (alphas - 1) & support;
    }
  }
  return total;
}

/// Pr[|x| in [lo, hi] and |x & T| <= cap] for iid Bernoulli(q) coordinates,
/// by full enumeration.
inline Rational naive_event_probability(unsigned n, const Rational &q, std::uint64_t T,
                                        unsigned lo, unsigned hi, std::uint64_t cap)
{
  const std::uint64_t top = std::uint64_t{1} << n;
  Rational total(0);
  for (std::uint64_t x = 0; x < top; ++x)
  {
    const unsigned k = bit_count(x);
    if (k < lo || k > hi || bit_count(x & T) > cap)
    {
      continue;
    }
    Rational pr(1);
    for (unsigned i = 0; i < k; ++i)
    {
      pr *= q;
    }
    for (unsigned i = 0; i < n - k; ++i)
    {
      pr *= Rational(1) - q;
    }
    total += pr;
  }
  return total;
}

inline BigInt binomial_coefficient(unsigned k, unsigned j)
{
  BigInt num(1), den(1);
  for (unsigned i = 0; i < j; ++i)
  {
    num *= BigInt(k - i);
    den *= BigInt(i + 1);
  }
  return num / den;
}

/// Exact upper tail Pr[X > Y] for X ~ Binomial(k, p).
inline Rational binomial_tail_gt(unsigned k, const Rational &p, const Rational &Y)
{
  Rational total(0);
  for (unsigned j = 0; j <= k; ++j)
  {
    if (Rational(static_cast<std::int64_t>(j)) <= Y)
    {
      continue;
    }
    Rational term(binomial_coefficient(k, j));
    for (unsigned i = 0; i < j; ++i)
    {
      term *= p;
    }
    for (unsigned i = 0; i < k - j; ++i)
    {
      term *= Rational(1) - p;
    }
    total += term;
  }
  return total;
}

/// Gosper's hack: iterate all k-element masks of an n-bit ground set.
template <typename Fn>
void for_each_mask_of_size(unsigned n, unsigned k, Fn &&fn)
{
  if (k == 0)
  {
    fn(std::uint64_t{0});
    return;
  }
  if (k > n)
  {
    return;
  }
  const std::uint64_t top = std::uint64_t{1} << n;
  std::uint64_t m = (std::uint64_t{1} << k) - 1;
  while (m < top)
  {
    fn(m);
    const std::uint64_t u = m & (~m + 1);
    const std::uint64_t v = m + u;
    m = v | (((m ^ v) / u) >> 2);
  }
}

/// Enumerates every valid pair (S, T) as masks: |S| = |T| = half with
/// |S & T| = overlap.
template <typename Fn>
void for_each_valid_pair(unsigned n, unsigned half, unsigned overlap, Fn &&fn)
{
  for_each_mask_of_size(n, half, [&](std::uint64_t S) {
    // pick the overlap inside S, then the rest outside S
    std::vector<unsigned> s_bits;
    for (unsigned i = 0; i < n; ++i)
    {
      if ((S >> i) & 1)
      {
        s_bits.push_back(i);
      }
    }
    for_each_mask_of_size(half, overlap, [&](std::uint64_t inner) {
      std::uint64_t meet = 0;
      for (unsigned b = 0; b < half; ++b)
      {
        if ((inner >> b) & 1)
        {
          meet |= std::uint64_t{1} << s_bits[b];
        }
      }
      std::vector<unsigned> out_bits;
      for (unsigned i = 0; i < n; ++i)
      {
        if (!((S >> i) & 1))
        {
          out_bits.push_back(i);
        }
      }
      for_each_mask_of_size(static_cast<unsigned>(out_bits.size()), half - overlap,
                            [&](std::uint64_t outer) {
                              std::uint64_t rest = 0;
                              for (unsigned b = 0; b < out_bits.size(); ++b)
                              {
                                if ((outer >> b) & 1)
                                {
                                  rest |= std::uint64_t{1} << out_bits[b];
                                }
                              }
                              fn(S, meet | rest);
                            });
    });
  });
}

}  // namespace bbmd::check
