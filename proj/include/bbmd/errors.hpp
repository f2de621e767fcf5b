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

#include <stdexcept>
#include <string>

namespace bbmd {

/// Base class for every error raised by the library.
class Error : public std::runtime_error
{
public:
  explicit Error(const std::string &what)
    : std::runtime_error(what)
  {}
};

/// Malformed value: dimension mismatch, empty domain, index out of range.
class StructuralError : public Error
{
public:
  using Error::Error;
};

/// Parameter bundle violates an invariant or admits no instance.
class ParameterInfeasibleError : public Error
{
public:
  using Error::Error;
};

/// An oracle session ran out of billed queries.
class BudgetExceededError : public Error
{
public:
  using Error::Error;
};

/// A bound was invoked outside its hypothesis.
class HypothesisViolatedError : public Error
{
public:
  using Error::Error;
};

/// Bad configuration file, unknown identifier, or a refused request
/// (e.g. exact enumeration over a domain that is too large).
class ConfigError : public Error
{
public:
  using Error::Error;
};

}  // namespace bbmd
