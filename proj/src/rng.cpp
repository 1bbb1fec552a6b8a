#include "orient/rng.hpp"

#include <cstdlib>

namespace orient {

auto default_seed() -> std::uint64_t {
  if (const char* env = std::getenv("ORIENT_SEED"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end != nullptr && *end == '\0') return v;
  }
  return 1;
}

}  // namespace orient
