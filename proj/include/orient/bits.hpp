// Fixed-capacity dynamic bitset used for adjacency rows and vertex sets.
// Word-parallel intersection tests are the inner loop of the embedding DP
// and of the expander checks, so the hot operations are kept inline.
#pragma once

#include <cstdint>
#include <bit>
#include <vector>

namespace orient {

class Bitset {
 public:
  Bitset() = default;
  explicit Bitset(int n) : n_(n), w_((n + 63) / 64, 0) {}

  auto size() const -> int { return n_; }

  auto test(int i) const -> bool { return (w_[i >> 6] >> (i & 63)) & 1u; }
  auto set(int i) -> void { w_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  auto reset(int i) -> void { w_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
  auto assign(int i, bool v) -> void { v ? set(i) : reset(i); }

  auto clear() -> void { for (auto& w : w_) w = 0; }
  auto set_all() -> void {
    for (auto& w : w_) w = ~std::uint64_t{0};
    trim();
  }

  auto any() const -> bool {
    for (auto w : w_) if (w) return true;
    return false;
  }
  auto none() const -> bool { return !any(); }

  auto count() const -> int {
    int c = 0;
    for (auto w : w_) c += std::popcount(w);
    return c;
  }

  auto intersects(const Bitset& o) const -> bool {
    for (std::size_t k = 0; k < w_.size(); ++k)
      if (w_[k] & o.w_[k]) return true;
    return false;
  }

  auto and_count(const Bitset& o) const -> int {
    int c = 0;
    for (std::size_t k = 0; k < w_.size(); ++k) c += std::popcount(w_[k] & o.w_[k]);
    return c;
  }

  // Index of the lowest set bit, -1 when empty.
  auto first() const -> int {
    for (std::size_t k = 0; k < w_.size(); ++k)
      if (w_[k]) return int(k << 6) + std::countr_zero(w_[k]);
    return -1;
  }

  auto operator|=(const Bitset& o) -> Bitset& {
    for (std::size_t k = 0; k < w_.size(); ++k) w_[k] |= o.w_[k];
    return *this;
  }
  auto operator&=(const Bitset& o) -> Bitset& {
    for (std::size_t k = 0; k < w_.size(); ++k) w_[k] &= o.w_[k];
    return *this;
  }
  // this \ o
  auto subtract(const Bitset& o) -> Bitset& {
    for (std::size_t k = 0; k < w_.size(); ++k) w_[k] &= ~o.w_[k];
    return *this;
  }
  auto flip_all() -> Bitset& {
    for (auto& w : w_) w = ~w;
    trim();
    return *this;
  }

  friend auto operator&(Bitset a, const Bitset& b) -> Bitset { return a &= b; }
  friend auto operator|(Bitset a, const Bitset& b) -> Bitset { return a |= b; }
  friend auto operator==(const Bitset& a, const Bitset& b) -> bool { return a.w_ == b.w_; }

  template <class F>
  auto for_each(F f) const -> void {
    for (std::size_t k = 0; k < w_.size(); ++k)
      for (std::uint64_t w = w_[k]; w; w &= w - 1)
        f(int(k << 6) + std::countr_zero(w));
  }

  auto to_vector() const -> std::vector<int> {
    std::vector<int> v;
    v.reserve(count());
    for_each([&](int i) { v.push_back(i); });
    return v;
  }

  static auto of(int n, const std::vector<int>& members) -> Bitset {
    Bitset b(n);
    for (int v : members) b.set(v);
    return b;
  }

 private:
  auto trim() -> void {
    if (int tail = n_ & 63; tail != 0 && !w_.empty())
      w_.back() &= (std::uint64_t{1} << tail) - 1;
  }

  int n_ = 0;
  std::vector<std::uint64_t> w_;
};

}  // namespace orient
