// Copyright 2026 The kieval Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef KIEVAL_RANDOM_HPP_
#define KIEVAL_RANDOM_HPP_

#include <cstdint>
#include <span>
#include <utility>

namespace kieval {

// SplitMix64. Chosen over the standard engines because its output sequence
// is trivially reproducible in any language, which the seeded sampling
// contract depends on.
class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  constexpr std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform-ish draw in [0, bound]; plain modulo reduction.
  constexpr std::uint64_t below_or_equal(std::uint64_t bound) noexcept {
    return next() % (bound + 1);
  }

 private:
  std::uint64_t state_;
};

// In-place Fisher-Yates, walking from the back: for i = n-1 .. 1 swap
// items[i] with items[j], j drawn from [0, i].
template <typename T>
void seeded_shuffle(std::span<T> items, std::uint64_t seed) {
  SplitMix64 rng(seed);
  for (std::size_t i = items.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.below_or_equal(i - 1));
    using std::swap;
    swap(items[i - 1], items[j]);
  }
}

}  // namespace kieval

#endif  // KIEVAL_RANDOM_HPP_
