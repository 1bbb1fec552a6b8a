#include "orient/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "orient/errors.hpp"

namespace orient {

namespace {

constexpr int kDpCap = 22;

struct SmallDigraph {
  int n;
  std::uint32_t out[kDpCap], in[kDpCap];
};

auto shrink(const Digraph& d) -> SmallDigraph {
  SmallDigraph s{};
  s.n = d.n();
  for (int v = 0; v < d.n(); ++v) {
    std::uint32_t o = 0, i = 0;
    d.out(v).for_each([&](int w) { o |= 1u << w; });
    d.in(v).for_each([&](int w) { i |= 1u << w; });
    s.out[v] = o;
    s.in[v] = i;
  }
  return s;
}

// One DP sweep: place position 0 on `anchor`, honour pins, return the map or
// nullopt. `bits` is the variant's orientation sequence.
auto dp_sweep(const SmallDigraph& g, const std::vector<std::uint8_t>& bits, int anchor,
              const std::vector<int>& pinned, std::vector<std::uint32_t>& last) -> std::optional<Embedding> {
  int n = g.n;
  std::uint32_t full = (n == 32) ? ~0u : ((1u << n) - 1);
  std::fill(last.begin(), last.end(), 0u);
  if (pinned[0] >= 0 && pinned[0] != anchor) return std::nullopt;
  last[std::size_t(1u << anchor)] = 1u << anchor;
  std::optional<int> closing_last;
  for (std::uint32_t mask = 1; mask <= full && !closing_last; ++mask) {
    std::uint32_t feas = last[mask];
    if (!feas) continue;
    int s = std::popcount(mask);
    if (s == n) {
      // Close the cycle back to the anchor through the final pattern edge.
      std::uint32_t ok = bits[std::size_t(n - 1)] ? (feas & g.in[anchor]) : (feas & g.out[anchor]);
      if (ok) closing_last = std::countr_zero(ok);
      break;
    }
    int pin = pinned[std::size_t(s)];
    std::uint32_t cands = pin >= 0 ? (1u << pin) : full;
    cands &= ~mask;
    bool fwd = bits[std::size_t(s - 1)] != 0;
    while (cands) {
      int v = std::countr_zero(cands);
      cands &= cands - 1;
      // Forward pattern edge needs some placed endpoint with an edge into v.
      std::uint32_t pred = fwd ? g.in[v] : g.out[v];
      if (feas & pred) last[mask | (1u << v)] |= 1u << v;
    }
  }
  if (!closing_last) return std::nullopt;
  // Backtrack: peel the last vertex off the mask while re-checking the edge
  // orientation used on the way in.
  Embedding emb(std::size_t(n), -1);
  std::uint32_t mask = full;
  int v = *closing_last;
  for (int s = n - 1; s >= 1; --s) {
    emb[std::size_t(s)] = v;
    std::uint32_t prev_mask = mask & ~(1u << v);
    std::uint32_t pred = bits[std::size_t(s - 1)] ? g.in[v] : g.out[v];
    std::uint32_t from = last[prev_mask] & pred;
    v = std::countr_zero(from);
    mask = prev_mask;
  }
  emb[0] = anchor;
  return emb;
}

// Map an embedding of the (refl, rot) variant back to the original pattern.
auto to_original(const Embedding& psi, int n, int rot, bool refl) -> Embedding {
  Embedding zeta(std::size_t(n), -1);
  for (int p = 0; p < n; ++p) zeta[std::size_t(p)] = psi[std::size_t(((p - rot) % n + n) % n)];
  if (!refl) return zeta;
  Embedding phi(std::size_t(n), -1);
  for (int p = 0; p < n; ++p) phi[std::size_t(p)] = zeta[std::size_t((n - p) % n)];
  return phi;
}

}  // namespace

auto find_embedding(const Digraph& d, const OrientationPattern& c, const std::vector<Pin>& pins)
    -> std::optional<Embedding> {
  int n = d.n();
  require_input(n == c.n(), "find_embedding: pattern and digraph sizes differ");
  require_input(n >= 3 && n <= kDpCap, "find_embedding: 3 <= n <= 22");
  std::vector<int> pinned(std::size_t(n), -1);
  std::vector<char> pinned_vertex(std::size_t(n), 0);
  for (auto [pos, vert] : pins) {
    require_input(pos >= 0 && pos < n && vert >= 0 && vert < n, "find_embedding: pin out of range");
    require_input(pinned[std::size_t(pos)] < 0, "find_embedding: duplicate pin position");
    require_input(!pinned_vertex[std::size_t(vert)], "find_embedding: duplicate pin vertex");
    pinned[std::size_t(pos)] = vert;
    pinned_vertex[std::size_t(vert)] = 1;
  }
  auto g = shrink(d);
  std::vector<std::uint32_t> last(std::size_t(1) << n, 0u);

  if (!pins.empty()) {
    // Pins fix the anchoring; sweep start vertices for position 0 only.
    std::vector<int> anchors;
    if (pinned[0] >= 0) anchors.push_back(pinned[0]);
    else
      for (int v = 0; v < n; ++v) anchors.push_back(v);
    for (int a : anchors)
      if (auto emb = dp_sweep(g, c.bits(), a, pinned, last)) return emb;
    return std::nullopt;
  }

  // No pins: anchor vertex 0 at position 0 and move the pattern instead.
  // Trying every rotation of the sequence and of its reflection covers every
  // copy, since vertex 0 lies at some position of any copy.
  std::vector<std::vector<std::uint8_t>> seen;
  for (int refl = 0; refl < 2; ++refl) {
    auto base = refl ? reflected(c) : c;
    for (int rot = 0; rot < n; ++rot) {
      auto variant = rotated(base, rot);
      if (std::find(seen.begin(), seen.end(), variant.bits()) != seen.end()) continue;
      seen.push_back(variant.bits());
      if (auto psi = dp_sweep(g, variant.bits(), 0, pinned, last))
        return to_original(*psi, n, rot, refl != 0);
    }
  }
  return std::nullopt;
}

auto contains_pattern(const Digraph& d, const OrientationPattern& c) -> bool {
  return find_embedding(d, c).has_value();
}

auto contains_all_patterns(const Digraph& d, const std::vector<OrientationPattern>& patterns)
    -> PatternSweep {
  PatternSweep sweep;
  for (const auto& c : patterns) {
    ++sweep.checked;
    if (!contains_pattern(d, c)) sweep.missing.push_back(c);
  }
  return sweep;
}

auto contains_all_patterns(const Digraph& d) -> PatternSweep {
  return contains_all_patterns(d, canonical_patterns(d.n()));
}

auto exact_containment_probability(int n, double p, const OrientationPattern& c) -> double {
  require_input(n >= 3 && n <= 4, "exact_containment_probability: 3 <= n <= 4");
  require_input(n == c.n(), "exact_containment_probability: pattern size mismatch");
  require_input(p >= 0.0 && p <= 1.0, "exact_containment_probability: p in [0,1]");
  std::vector<Edge> slots;
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      if (u != v) slots.emplace_back(u, v);
  int m_all = int(slots.size());
  double total = 0.0;
  for (std::uint32_t mask = 0; mask < (1u << m_all); ++mask) {
    Digraph d(n);
    int m = std::popcount(mask);
    for (int i = 0; i < m_all; ++i)
      if ((mask >> i) & 1u) d.add_edge(slots[std::size_t(i)].first, slots[std::size_t(i)].second);
    if (contains_pattern(d, c))
      total += std::pow(p, m) * std::pow(1.0 - p, m_all - m);
  }
  return total;
}

}  // namespace orient
