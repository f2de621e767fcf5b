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

#include <algorithm>
#include <cstdint>
#include <functional>
#include <mutex>
#include <optional>
#include <ostream>
#include <unordered_map>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "bbmd/types.hpp"

namespace bbmd {

using AllocationRule = std::function<Allocation(const TypeProfile &)>;

/// Query-counted, budget-enforced, memoized access to an allocation rule.
/// The first query at a profile bills one unit and is logged; repeats are
/// free and served from the memo, so budgets count distinct profiles.
/// Accounting is linearizable: concurrent queries serialize on a mutex.
class OracleSession
{
public:
  struct LogEntry
  {
    TypeProfile input;
    Allocation output;
  };

  OracleSession(AllocationRule rule, std::optional<std::uint64_t> budget, std::uint64_t seed)
    : rule_{std::move(rule)}
    , budget_{budget}
    , seed_{seed}
  {}

  OracleSession(const OracleSession &) = delete;
  OracleSession &operator=(const OracleSession &) = delete;

  Allocation query(const TypeProfile &x)
  {
    std::scoped_lock lock(mutex_);
    if (auto it = memo_.find(x); it != memo_.end())
    {
      return it->second;
    }
    if (budget_.has_value() && log_.size() >= *budget_)
    {
      throw BudgetExceededError("oracle budget exhausted after " + std::to_string(log_.size()) +
                                " distinct queries");
    }
    Allocation y = rule_(x);
    log_.push_back({x, y});
    memo_.emplace(x, y);
    return y;
  }

  std::uint64_t queries_used() const
  {
    std::scoped_lock lock(mutex_);
    return log_.size();
  }

  std::optional<std::uint64_t> budget() const { return budget_; }
  std::uint64_t seed() const { return seed_; }

  /// Distinct allocations that actually appeared in the log, in canonical
  /// order. The empty allocation is present only if it was observed.
  std::vector<Allocation> observed_range() const
  {
    std::scoped_lock lock(mutex_);
    std::vector<Allocation> out;
    out.reserve(log_.size());
    for (const auto &entry : log_)
    {
      out.push_back(entry.output);
    }
    std::sort(out.begin(), out.end(), [](const Allocation &a, const Allocation &b) { return a.lex_less(b); });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  std::vector<LogEntry> log_snapshot() const
  {
    std::scoped_lock lock(mutex_);
    return log_;
  }

  /// Copies log entries [from, to), e.g. the queries billed by a single run.
  std::vector<LogEntry> log_slice(std::uint64_t from, std::uint64_t to) const
  {
    std::scoped_lock lock(mutex_);
    std::vector<LogEntry> out;
    for (std::uint64_t i = from; i < to && i < log_.size(); ++i)
    {
      out.push_back(log_[i]);
    }
    return out;
  }

  /// One JSON record per billed query: input support (and alpha coordinates
  /// when present), output support, cumulative billed count.
  void export_jsonl(std::ostream &os) const
  {
    const auto entries = log_snapshot();
    std::uint64_t billed = 0;
    for (const auto &entry : entries)
    {
      nlohmann::ordered_json record;
      record["query"] = ++billed;
      record["support"] = entry.input.support().to_indices();
      if (!entry.input.alpha_coords().empty())
      {
        record["alpha_coords"] = entry.input.alpha_coords().to_indices();
      }
      record["output"] = entry.output.served().to_indices();
      os << record.dump() << '\n';
    }
  }

private:
  AllocationRule rule_;
  std::optional<std::uint64_t> budget_;
  std::uint64_t seed_;
  mutable std::mutex mutex_;
  std::vector<LogEntry> log_;
  std::unordered_map<TypeProfile, Allocation, TypeProfileHash> memo_;
};

}  // namespace bbmd
