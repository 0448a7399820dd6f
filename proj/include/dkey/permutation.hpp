// Copyright 2026 The dkey Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Lexicographic ranking of permutations via the Lehmer code.

#ifndef DKEY_PERMUTATION_HPP
#define DKEY_PERMUTATION_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dkey/errors.hpp"

namespace dkey {

inline constexpr std::size_t kMaxRankedItems = 20;  // 20! < 2^64 < 21!

inline std::uint64_t factorial(std::size_t m) {
  if (m > kMaxRankedItems) {
    throw UsageError(std::to_string(m) + "! does not fit in 64 bits");
  }
  std::uint64_t f = 1;
  for (std::size_t i = 2; i <= m; ++i) f *= i;
  return f;
}

/// Rank of a permutation of `size` items in lexicographic order.
class PermutationIndex {
 public:
  PermutationIndex(std::uint64_t index, std::size_t size) : index_(index), size_(size) {
    if (index_ >= factorial(size_)) {
      throw UsageError("permutation index " + std::to_string(index_) +
                       " out of range for " + std::to_string(size_) + " items");
    }
  }

  std::uint64_t index() const noexcept { return index_; }
  std::size_t size() const noexcept { return size_; }

  friend bool operator==(const PermutationIndex&, const PermutationIndex&) = default;

 private:
  std::uint64_t index_;
  std::size_t size_;
};

inline PermutationIndex perm_rank(std::span<const std::size_t> perm) {
  const std::size_t m = perm.size();
  std::vector<bool> seen(m, false);
  for (std::size_t v : perm) {
    if (v >= m || seen[v]) throw UsageError("not a permutation of 0..m-1");
    seen[v] = true;
  }
  std::uint64_t rank = 0;
  for (std::size_t i = 0; i < m; ++i) {
    std::uint64_t smaller_after = 0;
    for (std::size_t j = i + 1; j < m; ++j) smaller_after += perm[j] < perm[i];
    rank += smaller_after * factorial(m - 1 - i);
  }
  return PermutationIndex(rank, m);
}

inline std::vector<std::size_t> perm_unrank(std::uint64_t index, std::size_t size) {
  PermutationIndex checked(index, size);
  std::vector<std::size_t> pool(size);
  for (std::size_t i = 0; i < size; ++i) pool[i] = i;
  std::vector<std::size_t> out;
  out.reserve(size);
  std::uint64_t rest = checked.index();
  for (std::size_t i = 0; i < size; ++i) {
    const std::uint64_t block = factorial(size - 1 - i);
    const auto digit = static_cast<std::size_t>(rest / block);
    rest %= block;
    out.push_back(pool[digit]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(digit));
  }
  return out;
}

inline std::vector<std::size_t> perm_unrank(const PermutationIndex& index) {
  return perm_unrank(index.index(), index.size());
}

}  // namespace dkey

#endif  // DKEY_PERMUTATION_HPP
