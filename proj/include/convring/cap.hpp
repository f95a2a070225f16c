#pragma once

#include <cstdint>

namespace convring {

inline constexpr std::uint64_t kDefaultCap = std::uint64_t{1} << 22;

/// Enumeration cap: CONVRING_CAP when set to a positive integer, else 2^22.
std::uint64_t enumeration_cap();

}  // namespace convring
