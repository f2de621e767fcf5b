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
#include <utility>
#include <vector>

#include "bbmd/errors.hpp"
#include "bbmd/index_set.hpp"
#include "bbmd/rational.hpp"

namespace bbmd {

/// Which of the two type spaces an object lives in: binary per-coordinate
/// values, or the three-level {0, 1, alpha} space.
enum class Setting
{
  SingleParameter,
  MultiDimensional,
};

/// A binary outcome: the set of served indices.
class Allocation
{
public:
  Allocation() = default;

  explicit Allocation(IndexSet served)
    : served_{std::move(served)}
  {}

  static Allocation empty(std::uint32_t n) { return Allocation(IndexSet(n)); }

  const IndexSet &served() const { return served_; }
  std::uint32_t ground_size() const { return served_.ground_size(); }
  std::uint32_t count() const { return served_.count(); }
  bool is_empty() const { return served_.empty(); }

  bool operator==(const Allocation &other) const { return served_ == other.served_; }
  bool operator!=(const Allocation &other) const { return served_ != other.served_; }
  bool lex_less(const Allocation &other) const { return served_.lex_less(other.served_); }

private:
  IndexSet served_;
};

/// The value a profile assigns to an allocation, kept as exact coordinate
/// counts: `ones` coordinates worth 1 and `alphas` coordinates worth alpha.
/// Comparisons stay in integer arithmetic; the Rational appears only when a
/// value is reported.
struct DotCounts
{
  std::int64_t ones = 0;
  std::int64_t alphas = 0;

  DotCounts operator+(const DotCounts &o) const { return {ones + o.ones, alphas + o.alphas}; }
  DotCounts operator-(const DotCounts &o) const { return {ones - o.ones, alphas - o.alphas}; }

  Rational value(const Rational &alpha) const
  {
    return Rational(ones) + alpha * Rational(alphas);
  }

  /// Sign of ones + alpha * alphas; exact.
  int sign(const Rational &alpha) const
  {
    const BigInt num = numerator(alpha);
    const BigInt den = denominator(alpha);
    const BigInt v = BigInt(ones) * den + num * BigInt(alphas);
    return v.sign();
  }
};

/// alpha broken out as machine integers for the exact-compare hot paths
/// (argmax scans, pairwise incentive checks). Falls back to Rational
/// arithmetic when the magnitudes are not safely representable.
struct AlphaView
{
  std::int64_t num = 1;
  std::int64_t den = 1;
  bool small = false;
  Rational exact;

  static AlphaView from(const Rational &alpha)
  {
    AlphaView v;
    v.exact = alpha;
    const BigInt num = numerator(alpha);
    const BigInt den = denominator(alpha);
    const BigInt bound = BigInt(1) << 40;
    if (num >= 0 && num < bound && den > 0 && den < bound)
    {
      v.num = num.convert_to<std::int64_t>();
      v.den = den.convert_to<std::int64_t>();
      v.small = true;
    }
    return v;
  }
};

/// Exact sign of (a - b) evaluated at alpha, with a 128-bit fast path.
inline int compare_dot_counts(const DotCounts &a, const DotCounts &b, const AlphaView &alpha)
{
  const std::int64_t d_ones = a.ones - b.ones;
  const std::int64_t d_alphas = a.alphas - b.alphas;
  constexpr std::int64_t kSafe = std::int64_t{1} << 40;
  if (alpha.small && d_ones > -kSafe && d_ones < kSafe && d_alphas > -kSafe && d_alphas < kSafe)
  {
    const __int128 v = static_cast<__int128>(d_ones) * alpha.den +
                       static_cast<__int128>(alpha.num) * d_alphas;
    return v > 0 ? 1 : (v < 0 ? -1 : 0);
  }
  return (a - b).sign(alpha.exact);
}

/// One input vector x in Domain^n. Values are restricted by the setting:
/// {0,1} in the single-parameter space, {0,1,alpha} in the multi-dimensional
/// one. The profile is stored as its support plus the subset of coordinates
/// that carry value alpha.
class TypeProfile
{
public:
  TypeProfile() = default;

  /// Binary profile: x_i = 1 exactly on `support`.
  static TypeProfile single_parameter(IndexSet support)
  {
    TypeProfile p;
    p.setting_ = Setting::SingleParameter;
    p.alpha_coords_ = IndexSet(support.ground_size());
    p.support_ = std::move(support);
    p.alpha_ = Rational(1);
    return p;
  }

  /// Three-level profile: x_i = alpha on `alpha_coords`, 1 on the rest of
  /// `support`, 0 elsewhere.
  static TypeProfile multi_dimensional(IndexSet support, IndexSet alpha_coords, Rational alpha)
  {
    if (!alpha_coords.is_subset_of(support))
    {
      throw StructuralError("alpha coordinates must lie inside the support");
    }
    if (alpha <= 1)
    {
      throw StructuralError("alpha must exceed 1");
    }
    TypeProfile p;
    p.setting_ = Setting::MultiDimensional;
    p.support_ = std::move(support);
    p.alpha_coords_ = std::move(alpha_coords);
    p.alpha_ = std::move(alpha);
    return p;
  }

  /// Validates an explicit value vector against the setting's invariants.
  static TypeProfile from_values(const std::vector<Rational> &values, Setting setting,
                                 const Rational &alpha = Rational(0))
  {
    const auto n = static_cast<std::uint32_t>(values.size());
    IndexSet support(n);
    IndexSet alphas(n);
    for (std::uint32_t i = 0; i < n; ++i)
    {
      const Rational &v = values[i];
      if (v == 0)
      {
        continue;
      }
      if (v == 1)
      {
        support.insert(i);
      }
      else if (setting == Setting::MultiDimensional && v == alpha)
      {
        support.insert(i);
        alphas.insert(i);
      }
      else
      {
        throw StructuralError("profile value outside the setting's domain");
      }
    }
    if (setting == Setting::SingleParameter)
    {
      return single_parameter(std::move(support));
    }
    return multi_dimensional(std::move(support), std::move(alphas), alpha);
  }

  Setting setting() const { return setting_; }
  std::uint32_t n() const { return support_.ground_size(); }

  /// Nonzero coordinates; "x viewed as a set".
  const IndexSet &support() const { return support_; }
  const IndexSet &alpha_coords() const { return alpha_coords_; }
  const Rational &alpha() const { return alpha_; }

  Rational value(std::uint32_t i) const
  {
    if (!support_.contains(i))
    {
      return Rational(0);
    }
    return alpha_coords_.contains(i) ? alpha_ : Rational(1);
  }

  std::vector<Rational> values() const
  {
    std::vector<Rational> out(n());
    support_.for_each([&](std::uint32_t i) { out[i] = value(i); });
    return out;
  }

  /// x · y as exact coordinate counts.
  DotCounts dot_counts(const Allocation &y) const
  {
    if (y.ground_size() != n())
    {
      throw StructuralError("profile and allocation dimensions differ");
    }
    const auto a = static_cast<std::int64_t>(alpha_coords_.intersection_count(y.served()));
    const auto s = static_cast<std::int64_t>(support_.intersection_count(y.served()));
    return {s - a, a};
  }

  Rational dot(const Allocation &y) const { return dot_counts(y).value(alpha_); }

  bool operator==(const TypeProfile &other) const
  {
    return setting_ == other.setting_ && support_ == other.support_ &&
           alpha_coords_ == other.alpha_coords_ &&
           (alpha_coords_.empty() || alpha_ == other.alpha_);
  }

  bool operator!=(const TypeProfile &other) const { return !(*this == other); }

  /// Deterministic total order for canonical report output.
  bool lex_less(const TypeProfile &other) const
  {
    if (support_ != other.support_)
    {
      return support_.lex_less(other.support_);
    }
    if (alpha_coords_ != other.alpha_coords_)
    {
      return alpha_coords_.lex_less(other.alpha_coords_);
    }
    return false;
  }

  std::size_t hash() const
  {
    // alpha is deliberately left out: profiles in one session share it, and
    // equality still checks it.
    std::size_t h = support_.hash();
    h ^= alpha_coords_.hash() + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
    h ^= static_cast<std::size_t>(setting_);
    return h;
  }

private:
  Setting setting_ = Setting::SingleParameter;
  IndexSet support_;
  IndexSet alpha_coords_;
  Rational alpha_ = Rational(1);
};

struct TypeProfileHash
{
  std::size_t operator()(const TypeProfile &p) const { return p.hash(); }
};

/// Wel(x, y) = sum of x_i over served i.
inline Rational welfare(const TypeProfile &x, const Allocation &y)
{
  if (x.n() != y.ground_size())
  {
    throw StructuralError("welfare: profile and allocation dimensions differ");
  }
  return x.dot(y);
}

}  // namespace bbmd
