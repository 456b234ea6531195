//
// metamol - molecular meta-language toolkit
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <type_traits>

namespace metamol {

inline constexpr std::uint64_t kFnvOffset = 14695981039346656037ULL;
inline constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

/// Incremental 64-bit FNV-1a. Integers are fed little-endian so results are
/// identical across platforms.
class Fnv1a {
public:
  explicit Fnv1a(std::uint64_t seed = kFnvOffset): state_(seed) { }

  Fnv1a &byte(std::uint8_t b) {
    state_ ^= b;
    state_ *= kFnvPrime;
    return *this;
  }

  template <class T>
  requires std::is_integral_v<T> || std::is_enum_v<T>
  Fnv1a &add(T value) {
    auto v = static_cast<std::uint64_t>(value);
    for (std::size_t i = 0; i < sizeof(T); ++i)
      byte(static_cast<std::uint8_t>(v >> (8 * i)));
    return *this;
  }

  Fnv1a &add(std::string_view s) {
    for (char c: s)
      byte(static_cast<std::uint8_t>(c));
    return *this;
  }

  std::uint64_t value() const { return state_; }

private:
  std::uint64_t state_;
};

}  // namespace metamol
