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

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <string_view>

#include "bbmd/errors.hpp"

namespace bbmd {

/// Exact rational arithmetic. Welfare sums and incentive comparisons are done
/// in this type; floating point appears only in Monte Carlo statistics.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline Rational make_rational(std::int64_t num, std::int64_t den = 1)
{
  if (den == 0)
  {
    throw StructuralError("rational with zero denominator");
  }
  return Rational(BigInt(num), BigInt(den));
}

inline double to_double(const Rational &r)
{
  return r.convert_to<double>();
}

/// Canonical text form: "p" or "p/q" in lowest terms.
inline std::string to_string(const Rational &r)
{
  return r.str();
}

/// Parses "p", "p/q", or a plain decimal such as "0.05" (exactly, as 1/20).
inline Rational rational_from_string(std::string_view text)
{
  if (text.empty())
  {
    throw ConfigError("empty rational literal");
  }
  const auto slash = text.find('/');
  const auto dot = text.find('.');
  try
  {
    if (slash != std::string_view::npos)
    {
      return Rational(std::string(text));
    }
    if (dot != std::string_view::npos)
    {
      const std::string_view whole = text.substr(0, dot);
      const std::string_view frac = text.substr(dot + 1);
      if (frac.empty())
      {
        return Rational(std::string(whole));
      }
      const bool negative = !whole.empty() && whole.front() == '-';
      BigInt scale = 1;
      for (std::size_t i = 0; i < frac.size(); ++i)
      {
        scale *= 10;
      }
      BigInt digits{std::string(frac)};
      BigInt head = whole.empty() || whole == "-" ? BigInt(0) : BigInt(std::string(whole));
      if (negative)
      {
        digits = -digits;
      }
      const BigInt num = head * scale + digits;
      return Rational(num, scale);
    }
    return Rational(std::string(text));
  }
  catch (const std::exception &)
  {
    throw ConfigError("unparseable rational literal: " + std::string(text));
  }
}

}  // namespace bbmd
