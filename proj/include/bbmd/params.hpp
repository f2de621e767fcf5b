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

#include <cmath>
#include <cstdint>
#include <string>

#include "bbmd/errors.hpp"
#include "bbmd/rational.hpp"

namespace bbmd {

namespace detail {

/// Natural log of a positive big integer, good to ~1e-18 relative error.
/// Avoids convert_to<long double> overflow for very wide integers.
inline long double approx_log(const BigInt &v)
{
  const auto bits = static_cast<long>(boost::multiprecision::msb(v));
  if (bits <= 62)
  {
    return std::log(v.convert_to<long double>());
  }
  const BigInt top = v >> (bits - 62);
  return std::log(top.convert_to<long double>()) +
         static_cast<long double>(bits - 62) * 0.6931471805599453094L;
}

/// round((P/Q)^(1/k)) for positive integers, half away from zero. The .5
/// boundary is decided by the exact comparison 2^k * P vs (2m±1)^k * Q, never
/// by floating point (the headline parameter sets land exactly on such
/// boundaries).
inline std::uint64_t round_kth_root(const BigInt &P, const BigInt &Q, unsigned k)
{
  const long double x = std::exp((approx_log(P) - approx_log(Q)) / k);
  if (!(x < 1.0e15L))
  {
    throw ParameterInfeasibleError("parameter magnitude out of range");
  }
  auto m = static_cast<std::int64_t>(std::llroundl(x));
  if (m < 0)
  {
    m = 0;
  }
  const BigInt two_k = boost::multiprecision::pow(BigInt(2), k);
  const BigInt lhs = two_k * P;
  auto boundary = [&](std::int64_t t) -> BigInt {
    const BigInt base(2 * t + 1);
    return boost::multiprecision::pow(base, k) * Q;
  };
  while (m > 0 && lhs < boundary(m - 1))
  {
    --m;
  }
  while (lhs >= boundary(m))
  {
    ++m;
  }
  return static_cast<std::uint64_t>(m);
}

/// round(n^(a/b)) exactly, via round_kth_root(n^a, 1, b).
inline std::uint64_t round_pow(std::uint64_t n, const Rational &exponent)
{
  const BigInt a = numerator(exponent);
  const BigInt b = denominator(exponent);
  if (a <= 0 || b <= 0 || a > 4096 || b > 4096)
  {
    throw ParameterInfeasibleError("exponent " + to_string(exponent) +
                                   " out of the supported range");
  }
  const BigInt P = boost::multiprecision::pow(BigInt(n), a.convert_to<unsigned>());
  return round_kth_root(P, BigInt(1), b.convert_to<unsigned>());
}

}  // namespace detail

/// The parameter bundle behind one adversarial instance family: ground size n,
/// the cap N, the integer thresholds |S∩T| = eps_ST_N, eps_S_N, eps_T_N, and
/// the derived alpha and coordinate probability 3N/(4n).
struct Params
{
  std::uint64_t n = 0;
  Rational epsilon;
  std::uint64_t N = 0;
  std::uint64_t eps_ST_N = 0;
  std::uint64_t eps_S_N = 0;
  std::uint64_t eps_T_N = 0;
  Rational alpha;
  Rational bernoulli_q;

  static Rational derived_alpha(std::uint64_t N, std::uint64_t eps_ST_N)
  {
    return make_rational(static_cast<std::int64_t>(2 * N), static_cast<std::int64_t>(eps_ST_N));
  }

  static Rational derived_q(std::uint64_t n, std::uint64_t N)
  {
    return make_rational(static_cast<std::int64_t>(3 * N), static_cast<std::int64_t>(4 * n));
  }

  /// Builds a bundle from explicit integer thresholds; alpha and bernoulli_q
  /// follow from them. Throws unless every invariant holds.
  static Params explicit_thresholds(std::uint64_t n, std::uint64_t N, std::uint64_t eps_ST_N,
                                    std::uint64_t eps_T_N, Rational epsilon = make_rational(1, 20))
  {
    Params p;
    p.n = n;
    p.epsilon = std::move(epsilon);
    p.N = N;
    p.eps_ST_N = eps_ST_N;
    p.eps_S_N = 2 * eps_ST_N;
    p.eps_T_N = eps_T_N;
    p.alpha = derived_alpha(N, eps_ST_N);
    p.bernoulli_q = derived_q(n, N);
    p.validate();
    return p;
  }

  void validate() const
  {
    auto fail = [](const std::string &msg) { throw ParameterInfeasibleError(msg); };
    if (n == 0 || N == 0 || eps_ST_N == 0 || eps_S_N == 0 || eps_T_N == 0)
    {
      fail("all integer parameters must be positive");
    }
    if (N % 2 != 0)
    {
      fail("N must be even");
    }
    if (N > n)
    {
      fail("N must not exceed n");
    }
    if (eps_S_N != 2 * eps_ST_N)
    {
      fail("eps_S_N must equal 2*eps_ST_N");
    }
    if (eps_ST_N > N / 2)
    {
      fail("eps_ST_N must not exceed N/2");
    }
    if (alpha != derived_alpha(N, eps_ST_N) || alpha <= 1)
    {
      fail("alpha must equal 2*N/eps_ST_N");
    }
    if (bernoulli_q != derived_q(n, N))
    {
      fail("bernoulli_q must equal 3N/(4n)");
    }
    if (bernoulli_q <= 0 || bernoulli_q >= 1)
    {
      fail("bernoulli_q = 3N/(4n) must lie in (0,1)");
    }
    if (epsilon <= 0)
    {
      fail("epsilon must be positive");
    }
  }

  /// True when the instance-distinguishability hypothesis eps_ST > 2N/n
  /// holds; recorded per fixture, not required.
  bool separation_hypothesis() const
  {
    return Rational(BigInt(eps_ST_N), BigInt(N)) > make_rational(static_cast<std::int64_t>(2 * N),
                                                                 static_cast<std::int64_t>(n));
  }

  bool operator==(const Params &other) const
  {
    return n == other.n && epsilon == other.epsilon && N == other.N &&
           eps_ST_N == other.eps_ST_N && eps_S_N == other.eps_S_N && eps_T_N == other.eps_T_N &&
           alpha == other.alpha && bernoulli_q == other.bernoulli_q;
  }
};

/// Evaluates the closed-form parameter schedule at (n, epsilon):
///   N        = round(n^(1/2 + 2*epsilon)), rounded up to even,
///   eps_ST_N = max(1, round(N * n^(-1/4))),
///   eps_S_N  = 2 * eps_ST_N,
///   eps_T_N  = max(1, round(16 * N * n^(-1/2))).
/// Rounding is exact (see detail::round_kth_root). Throws
/// ParameterInfeasibleError when the result cannot satisfy the invariants,
/// which happens for small n; desk-scale instances use explicit thresholds
/// instead.
inline Params derive_params(std::uint64_t n, const Rational &epsilon)
{
  if (n < 4)
  {
    throw ParameterInfeasibleError("derive_params requires n >= 4");
  }
  if (epsilon <= 0)
  {
    throw ParameterInfeasibleError("epsilon must be positive");
  }
  if (epsilon > make_rational(1, 4))
  {
    throw ParameterInfeasibleError("epsilon > 1/4 would push N past n");
  }
  Params p;
  p.n = n;
  p.epsilon = epsilon;

  const Rational exponent = make_rational(1, 2) + Rational(2) * epsilon;
  std::uint64_t N = detail::round_pow(n, exponent);
  if (N % 2 != 0)
  {
    ++N;
  }
  p.N = N;
  // round(N * n^(-1/4)) = round((N^4 / n)^(1/4))
  const BigInt N4 = boost::multiprecision::pow(BigInt(N), 4);
  p.eps_ST_N = std::max<std::uint64_t>(1, detail::round_kth_root(N4, BigInt(n), 4));
  p.eps_S_N = 2 * p.eps_ST_N;
  // round(16 * N * n^(-1/2)) = round((256 N^2 / n)^(1/2))
  const BigInt N2 = BigInt(256) * BigInt(N) * BigInt(N);
  p.eps_T_N = std::max<std::uint64_t>(1, detail::round_kth_root(N2, BigInt(n), 2));
  p.alpha = Params::derived_alpha(p.N, p.eps_ST_N);
  p.bernoulli_q = Params::derived_q(p.n, p.N);

  p.validate();
  if (p.eps_S_N > p.N / 2)
  {
    throw ParameterInfeasibleError("n too small: eps_S_N exceeds N/2, the S-branch is unsatisfiable");
  }
  return p;
}

}  // namespace bbmd
