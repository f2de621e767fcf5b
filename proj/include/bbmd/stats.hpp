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
#include <vector>

#include "bbmd/domain.hpp"
#include "bbmd/oracle.hpp"
#include "bbmd/prior.hpp"
#include "bbmd/types.hpp"

namespace bbmd {

/// An expected-welfare figure: exact (enumeration) or Monte Carlo with a 95%
/// normal-approximation confidence interval.
struct WelfareEstimate
{
  enum class Method
  {
    Exact,
    MonteCarlo,
  };

  Rational mean;
  double ci_low = 0.0;
  double ci_high = 0.0;
  Method method = Method::Exact;
  std::uint64_t samples = 0;

  double mean_double() const { return to_double(mean); }
};

inline std::uint64_t default_exact_limit(Setting setting)
{
  return setting == Setting::SingleParameter ? 20 : 13;
}

/// Sum over the full domain of Pr[x] * Wel(x, rule(x)), as an exact rational.
/// Refuses when n exceeds the per-setting enumeration limit.
inline WelfareEstimate expected_welfare_exact(const AllocationRule &rule,
                                              const PriorDistribution &prior,
                                              std::uint64_t max_n = 0)
{
  prior.params.validate();
  const auto n = static_cast<std::uint32_t>(prior.params.n);
  const std::uint64_t limit = max_n == 0 ? default_exact_limit(prior.setting) : max_n;
  if (n > limit)
  {
    throw ConfigError("exact enumeration refused for n = " + std::to_string(n) +
                      " (limit " + std::to_string(limit) + "); use expected_welfare_mc");
  }

  const Rational q = prior.params.bernoulli_q;
  std::vector<Rational> q_pow(n + 1), one_minus_q_pow(n + 1);
  q_pow[0] = one_minus_q_pow[0] = Rational(1);
  for (std::uint32_t k = 1; k <= n; ++k)
  {
    q_pow[k] = q_pow[k - 1] * q;
    one_minus_q_pow[k] = one_minus_q_pow[k - 1] * (Rational(1) - q);
  }
  std::vector<Rational> p_pow, one_minus_p_pow;
  if (prior.setting == Setting::MultiDimensional)
  {
    const Rational p = Rational(1) / prior.params.alpha;
    p_pow.assign(n + 1, Rational(1));
    one_minus_p_pow.assign(n + 1, Rational(1));
    for (std::uint32_t k = 1; k <= n; ++k)
    {
      p_pow[k] = p_pow[k - 1] * p;
      one_minus_p_pow[k] = one_minus_p_pow[k - 1] * (Rational(1) - p);
    }
  }

  Rational total(0);
  std::uint64_t count = 0;
  for_each_profile(prior.setting, n, prior.params.alpha, std::uint64_t{1} << 26,
                   [&](const TypeProfile &x) {
                     ++count;
                     const std::uint32_t s = x.support().count();
                     Rational pr = q_pow[s] * one_minus_q_pow[n - s];
                     if (prior.setting == Setting::MultiDimensional)
                     {
                       const std::uint32_t a = x.alpha_coords().count();
                       pr *= p_pow[a] * one_minus_p_pow[s - a];
                     }
                     const Rational wel = welfare(x, rule(x));
                     if (wel != 0)
                     {
                       total += pr * wel;
                     }
                   });

  WelfareEstimate est;
  est.mean = total;
  est.ci_low = est.ci_high = to_double(total);
  est.method = WelfareEstimate::Method::Exact;
  est.samples = count;
  return est;
}

namespace detail {

constexpr std::uint64_t kMonteCarloTag = 0x9B97C6E51D3F2ABBull;

}  // namespace detail

/// Sample mean of Wel(x, rule(x)) over draws from the prior, with a 95%
/// normal CI. The sample stream is keyed by `seed` (mixed with the prior's
/// own seed), so distinct seeds give independent trials.
inline WelfareEstimate expected_welfare_mc(const AllocationRule &rule,
                                           const PriorDistribution &prior, std::uint64_t samples,
                                           std::uint64_t seed)
{
  if (samples < 2)
  {
    throw StructuralError("Monte Carlo estimation needs at least 2 samples");
  }
  PriorDistribution sampler = prior;
  sampler.seed = rng::mix(prior.seed ^ rng::mix(seed ^ detail::kMonteCarloTag));

  Rational sum(0);
  double mean_d = 0.0;
  double m2 = 0.0;
  for (std::uint64_t i = 0; i < samples; ++i)
  {
    const TypeProfile x = sample_profile(sampler, i);
    const Rational wel = welfare(x, rule(x));
    sum += wel;
    const double w = to_double(wel);
    const double delta = w - mean_d;
    mean_d += delta / static_cast<double>(i + 1);
    m2 += delta * (w - mean_d);
  }

  WelfareEstimate est;
  est.mean = sum / Rational(static_cast<std::int64_t>(samples));
  est.method = WelfareEstimate::Method::MonteCarlo;
  est.samples = samples;
  const double variance = m2 / static_cast<double>(samples - 1);
  const double half_width = 1.959963984540054 * std::sqrt(variance / static_cast<double>(samples));
  const double center = est.mean_double();
  est.ci_low = center - half_width;
  est.ci_high = center + half_width;
  return est;
}

/// The tail bound e^{-Y/4}, valid under the hypothesis Y >= 3 * mean for a
/// sum of i.i.d. binary variables with the given mean.
inline double chernoff_bound(const Rational &mean, const Rational &Y)
{
  if (Y < Rational(3) * mean)
  {
    throw HypothesisViolatedError("chernoff_bound requires Y >= 3 * mean");
  }
  return std::exp(-to_double(Y) / 4.0);
}

}  // namespace bbmd
