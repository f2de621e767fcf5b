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

#include "bbmd/params.hpp"
#include "bbmd/types.hpp"

namespace bbmd {

namespace rng {

/// splitmix64 finalizer.
inline std::uint64_t mix(std::uint64_t z)
{
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Counter-based word: a pure function of (seed, index, coordinate, stream).
/// Random access into the sample stream is what makes profile sampling
/// reproducible and order-independent.
inline std::uint64_t word_at(std::uint64_t seed, std::uint64_t index, std::uint64_t coordinate,
                             std::uint64_t stream = 0)
{
  std::uint64_t h = mix(seed ^ 0xA24BAED4963EE407ull);
  h = mix(h ^ mix(index));
  h = mix(h ^ mix(coordinate));
  h = mix(h ^ stream);
  return h;
}

/// Exact Bernoulli(num/den) from one uniform 64-bit word:
/// true iff u * den < num * 2^64. Requires den < 2^63.
inline bool bernoulli_word(std::uint64_t u, std::uint64_t num, std::uint64_t den)
{
  const auto lhs = static_cast<unsigned __int128>(u) * den;
  const auto rhs = static_cast<unsigned __int128>(num) << 64;
  return lhs < rhs;
}

/// Small numerator/denominator view of a probability for the sampler hot
/// path. Probabilities derived from parameter bundles always fit.
struct SmallProb
{
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  static SmallProb from(const Rational &p)
  {
    const BigInt num = numerator(p);
    const BigInt den = denominator(p);
    if (num < 0 || den <= 0 || den >= (BigInt(1) << 62) || num > den)
    {
      throw StructuralError("probability not representable for sampling: " + to_string(p));
    }
    return {num.convert_to<std::uint64_t>(), den.convert_to<std::uint64_t>()};
  }
};

/// Sequential generator over the counter stream keyed by (seed, index, tag).
/// Used where a variable number of words is consumed (rejection sampling,
/// subset draws); determinism comes from the fixed starting key.
class Stream
{
public:
  Stream(std::uint64_t seed, std::uint64_t index, std::uint64_t tag)
    : seed_{seed}
    , index_{index}
    , tag_{tag}
  {}

  std::uint64_t next_word() { return word_at(seed_, index_, counter_++, tag_); }

  /// Uniform integer in [0, m), exactly (rejection below the largest multiple
  /// of m).
  std::uint64_t next_below(std::uint64_t m)
  {
    if (m == 0)
    {
      throw StructuralError("uniform draw from an empty range");
    }
    const std::uint64_t limit = m * ((~std::uint64_t{0}) / m);
    for (;;)
    {
      const std::uint64_t u = next_word();
      if (u < limit)
      {
        return u % m;
      }
    }
  }

  bool next_bernoulli(const SmallProb &p) { return bernoulli_word(next_word(), p.num, p.den); }

private:
  std::uint64_t seed_;
  std::uint64_t index_;
  std::uint64_t tag_;
  std::uint64_t counter_ = 0;
};

}  // namespace rng

/// The prior over type profiles: each coordinate is nonzero independently
/// with probability 3N/(4n); in the multi-dimensional setting a nonzero
/// coordinate carries value alpha with probability 1/alpha, else 1. Fully
/// determined by (params, setting, seed).
struct PriorDistribution
{
  Params params;
  Setting setting = Setting::SingleParameter;
  std::uint64_t seed = 0;

  bool operator==(const PriorDistribution &other) const
  {
    return params == other.params && setting == other.setting && seed == other.seed;
  }
};

namespace detail {

// Distinguish the support draw from the value-level draw of one coordinate.
constexpr std::uint64_t kSupportStream = 0;
constexpr std::uint64_t kAlphaStream = 1;

}  // namespace detail

/// The index-th profile of the prior's deterministic stream.
inline TypeProfile sample_profile(const PriorDistribution &dist, std::uint64_t index)
{
  dist.params.validate();
  const auto n = static_cast<std::uint32_t>(dist.params.n);
  const auto q = rng::SmallProb::from(dist.params.bernoulli_q);
  IndexSet support(n);
  for (std::uint32_t i = 0; i < n; ++i)
  {
    if (rng::bernoulli_word(rng::word_at(dist.seed, index, i, detail::kSupportStream), q.num, q.den))
    {
      support.insert(i);
    }
  }
  if (dist.setting == Setting::SingleParameter)
  {
    return TypeProfile::single_parameter(std::move(support));
  }
  const auto p_alpha = rng::SmallProb::from(Rational(1) / dist.params.alpha);
  IndexSet alphas(n);
  support.for_each([&](std::uint32_t i) {
    if (rng::bernoulli_word(rng::word_at(dist.seed, index, i, detail::kAlphaStream), p_alpha.num,
                            p_alpha.den))
    {
      alphas.insert(i);
    }
  });
  return TypeProfile::multi_dimensional(std::move(support), std::move(alphas), dist.params.alpha);
}

}  // namespace bbmd
