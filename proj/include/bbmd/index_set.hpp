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

#include <bit>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <vector>

#include "bbmd/errors.hpp"

namespace bbmd {

/// A set of indices over a fixed ground set {0, ..., n-1}, stored as a packed
/// bit vector. Inputs and outcomes are both index sets, so set algebra
/// (intersection counts, subset tests) is the hot path everywhere.
class IndexSet
{
public:
  using Word = std::uint64_t;
  static constexpr unsigned kBitsPerWord = 64;

  IndexSet() = default;

  /// The empty set over a ground set of size n.
  explicit IndexSet(std::uint32_t n)
    : n_{n}
    , words_((n + kBitsPerWord - 1) / kBitsPerWord, 0)
  {}

  IndexSet(std::uint32_t n, std::initializer_list<std::uint32_t> indices)
    : IndexSet(n)
  {
    for (auto i : indices)
    {
      insert(i);
    }
  }

  static IndexSet from_indices(std::uint32_t n, const std::vector<std::uint32_t> &indices)
  {
    IndexSet s(n);
    for (auto i : indices)
    {
      s.insert(i);
    }
    return s;
  }

  /// The full ground set {0, ..., n-1}.
  static IndexSet full(std::uint32_t n)
  {
    IndexSet s(n);
    for (std::size_t w = 0; w < s.words_.size(); ++w)
    {
      s.words_[w] = ~Word{0};
    }
    s.trim();
    return s;
  }

  /// Builds a set over n <= 64 ground elements from a packed word. Used by
  /// exhaustive enumeration loops.
  static IndexSet from_mask(std::uint32_t n, Word mask)
  {
    IndexSet s(n);
    if (n > 0)
    {
      s.words_[0] = mask;
      s.trim();
    }
    return s;
  }

  std::uint32_t ground_size() const { return n_; }

  bool contains(std::uint32_t i) const
  {
    check_index(i);
    return (words_[i / kBitsPerWord] >> (i % kBitsPerWord)) & 1u;
  }

  void insert(std::uint32_t i)
  {
    check_index(i);
    words_[i / kBitsPerWord] |= Word{1} << (i % kBitsPerWord);
  }

  void erase(std::uint32_t i)
  {
    check_index(i);
    words_[i / kBitsPerWord] &= ~(Word{1} << (i % kBitsPerWord));
  }

  /// Cardinality.
  std::uint32_t count() const
  {
    std::uint32_t c = 0;
    for (auto w : words_)
    {
      c += static_cast<std::uint32_t>(std::popcount(w));
    }
    return c;
  }

  bool empty() const
  {
    for (auto w : words_)
    {
      if (w != 0)
      {
        return false;
      }
    }
    return true;
  }

  /// |this ∩ other| without materializing the intersection.
  std::uint32_t intersection_count(const IndexSet &other) const
  {
    check_same_ground(other);
    std::uint32_t c = 0;
    for (std::size_t w = 0; w < words_.size(); ++w)
    {
      c += static_cast<std::uint32_t>(std::popcount(words_[w] & other.words_[w]));
    }
    return c;
  }

  bool is_subset_of(const IndexSet &other) const
  {
    check_same_ground(other);
    for (std::size_t w = 0; w < words_.size(); ++w)
    {
      if ((words_[w] & ~other.words_[w]) != 0)
      {
        return false;
      }
    }
    return true;
  }

  IndexSet intersect(const IndexSet &other) const
  {
    check_same_ground(other);
    IndexSet r(n_);
    for (std::size_t w = 0; w < words_.size(); ++w)
    {
      r.words_[w] = words_[w] & other.words_[w];
    }
    return r;
  }

  IndexSet unite(const IndexSet &other) const
  {
    check_same_ground(other);
    IndexSet r(n_);
    for (std::size_t w = 0; w < words_.size(); ++w)
    {
      r.words_[w] = words_[w] | other.words_[w];
    }
    return r;
  }

  IndexSet difference(const IndexSet &other) const
  {
    check_same_ground(other);
    IndexSet r(n_);
    for (std::size_t w = 0; w < words_.size(); ++w)
    {
      r.words_[w] = words_[w] & ~other.words_[w];
    }
    return r;
  }

  bool operator==(const IndexSet &other) const
  {
    return n_ == other.n_ && words_ == other.words_;
  }

  bool operator!=(const IndexSet &other) const { return !(*this == other); }

  /// Lexicographic order on the bit string y_0 y_1 ... y_{n-1}: at the lowest
  /// differing index, the set without that index is smaller. The empty set is
  /// the minimum. Used as the deterministic argmax tie-break.
  bool lex_less(const IndexSet &other) const
  {
    check_same_ground(other);
    for (std::size_t w = 0; w < words_.size(); ++w)
    {
      const Word diff = words_[w] ^ other.words_[w];
      if (diff != 0)
      {
        const Word lowest = diff & (~diff + 1);
        return (words_[w] & lowest) == 0;
      }
    }
    return false;
  }

  /// Sorted member list.
  std::vector<std::uint32_t> to_indices() const
  {
    std::vector<std::uint32_t> out;
    out.reserve(count());
    for (std::size_t w = 0; w < words_.size(); ++w)
    {
      Word bits = words_[w];
      while (bits != 0)
      {
        const unsigned b = static_cast<unsigned>(std::countr_zero(bits));
        out.push_back(static_cast<std::uint32_t>(w * kBitsPerWord + b));
        bits &= bits - 1;
      }
    }
    return out;
  }

  template <typename Fn>
  void for_each(Fn &&fn) const
  {
    for (std::size_t w = 0; w < words_.size(); ++w)
    {
      Word bits = words_[w];
      while (bits != 0)
      {
        const unsigned b = static_cast<unsigned>(std::countr_zero(bits));
        fn(static_cast<std::uint32_t>(w * kBitsPerWord + b));
        bits &= bits - 1;
      }
    }
  }

  /// First word, for n <= 64 fast paths.
  Word low_word() const { return words_.empty() ? 0 : words_[0]; }

  std::size_t hash() const
  {
    std::uint64_t h = 0x9E3779B97F4A7C15ull ^ n_;
    for (auto w : words_)
    {
      h ^= w + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }

private:
  void check_index(std::uint32_t i) const
  {
    if (i >= n_)
    {
      throw StructuralError("index out of range for ground set");
    }
  }

  void check_same_ground(const IndexSet &other) const
  {
    if (n_ != other.n_)
    {
      throw StructuralError("index sets over different ground sets");
    }
  }

  void trim()
  {
    const unsigned used = n_ % kBitsPerWord;
    if (used != 0 && !words_.empty())
    {
      words_.back() &= (Word{1} << used) - 1;
    }
  }

  std::uint32_t n_ = 0;
  std::vector<Word> words_;
};

}  // namespace bbmd
