// Counter-based splittable RNG.
//
// Every randomized operation takes an RngStream derived from (experiment seed,
// stream index), so trials are reproducible independently of evaluation order
// and trial-level parallelism cannot change results. The generator hashes
// (key, counter) with the splitmix64 finalizer; distinct streams never share
// (key, counter) pairs because the stream index is folded into the key.
#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace orient {

namespace detail {
inline auto mix64(std::uint64_t z) -> std::uint64_t {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}
}  // namespace detail

class RngStream {
 public:
  RngStream() : key_(0) {}
  RngStream(std::uint64_t seed, std::uint64_t stream)
      : key_(detail::mix64(detail::mix64(seed) ^ (stream * 0xd1342543de82ef95ULL + 1))) {}

  // Derive an independent child stream; children with distinct indices are
  // independent of each other and of this stream's future output.
  auto child(std::uint64_t index) const -> RngStream {
    RngStream c;
    c.key_ = detail::mix64(key_ ^ ((index + 1) * 0x9e3779b97f4a7c15ULL));
    return c;
  }

  auto next_u64() -> std::uint64_t { return detail::mix64(key_ ^ (counter_++ * 0x2545f4914f6cdd1dULL)); }

  // Uniform in [0, 1).
  auto next_double() -> double { return double(next_u64() >> 11) * 0x1.0p-53; }

  auto bernoulli(double p) -> bool { return next_double() < p; }

  // Uniform in [0, bound).
  auto next_below(std::uint64_t bound) -> std::uint64_t {
    // Rejection sampling to avoid modulo bias.
    std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      std::uint64_t r = next_u64();
      if (r >= threshold) return r % bound;
    }
  }

  auto next_int(int lo, int hi_inclusive) -> int {
    return lo + int(next_below(std::uint64_t(hi_inclusive - lo + 1)));
  }

  template <class T>
  auto shuffle(std::vector<T>& v) -> void {
    for (std::size_t i = v.size(); i > 1; --i)
      std::swap(v[i - 1], v[next_below(i)]);
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// Global seed default: ORIENT_SEED env var when set, else 1. CLI --seed overrides.
auto default_seed() -> std::uint64_t;

}  // namespace orient
