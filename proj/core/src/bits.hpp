#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace tw::bits {

inline constexpr std::size_t kMaxBag = 63;

inline std::uint64_t insert_bit(std::uint64_t mask, std::size_t pos, bool value) {
  const std::uint64_t low = mask & ((std::uint64_t{1} << pos) - 1);
  const std::uint64_t high = (mask >> pos) << (pos + 1);
  return low | high | (std::uint64_t{value} << pos);
}

inline std::uint64_t remove_bit(std::uint64_t mask, std::size_t pos) {
  const std::uint64_t low = mask & ((std::uint64_t{1} << pos) - 1);
  const std::uint64_t high = (mask >> (pos + 1)) << pos;
  return low | high;
}

inline bool test(std::uint64_t mask, std::size_t pos) { return (mask >> pos) & 1U; }

inline std::size_t position(const std::vector<std::size_t>& bag, std::size_t v) {
  return static_cast<std::size_t>(std::lower_bound(bag.begin(), bag.end(), v) - bag.begin());
}

}  // namespace tw::bits
