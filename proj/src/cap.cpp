#include "convring/cap.hpp"

#include <cstdlib>
#include <string>

namespace convring {

std::uint64_t enumeration_cap() {
  const char* env = std::getenv("CONVRING_CAP");
  if (!env || !*env) return kDefaultCap;
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(env, &used);
    if (used == std::string(env).size() && v > 0) return v;
  } catch (const std::exception&) {
  }
  return kDefaultCap;
}

}  // namespace convring
