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

#include "bbmd/errors.hpp"
#include "bbmd/types.hpp"

namespace bbmd {

/// |Domain^n|: 2^n binary profiles or 3^n three-level ones. Only callable for
/// sizes that fit; enumeration callers guard with max_domain first.
inline std::uint64_t domain_size(Setting setting, std::uint32_t n)
{
  const std::uint64_t base = setting == Setting::SingleParameter ? 2 : 3;
  std::uint64_t size = 1;
  for (std::uint32_t i = 0; i < n; ++i)
  {
    if (size > (~std::uint64_t{0}) / base)
    {
      throw ConfigError("domain too large to enumerate");
    }
    size *= base;
  }
  return size;
}

/// Visits every profile of the finite domain in a fixed deterministic order.
/// Throws ConfigError when the domain exceeds max_size; callers that hit this
/// should fall back to sampling.
template <typename Fn>
void for_each_profile(Setting setting, std::uint32_t n, const Rational &alpha,
                      std::uint64_t max_size, Fn &&fn)
{
  if (n > 40 || domain_size(setting, n) > max_size)
  {
    throw ConfigError("domain too large to enumerate; use Monte Carlo sampling instead");
  }
  const std::uint64_t top = std::uint64_t{1} << n;
  if (setting == Setting::SingleParameter)
  {
    for (std::uint64_t mask = 0; mask < top; ++mask)
    {
      fn(TypeProfile::single_parameter(IndexSet::from_mask(n, mask)));
    }
    return;
  }
  for (std::uint64_t support = 0; support < top; ++support)
  {
    std::uint64_t sub = support;
    for (;;)
    {
      fn(TypeProfile::multi_dimensional(IndexSet::from_mask(n, support),
                                        IndexSet::from_mask(n, sub), alpha));
      if (sub == 0)
      {
        break;
      }
      sub = (sub - 1) & support;
    }
  }
}

}  // namespace bbmd
