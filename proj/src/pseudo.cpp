#include "orient/pseudo.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <sstream>

#include "orient/errors.hpp"

namespace orient {

namespace {

constexpr double kEps = 1e-9;
constexpr int kExactCap = 20;

auto make_member_set(int n, const std::vector<int>& verts, const char* what) -> Bitset {
  Bitset s(n);
  for (auto v : verts) {
    require_input(v >= 0 && v < n, std::string(what) + " vertex out of range");
    require_input(!s.test(v), std::string(what) + " contains a duplicate vertex");
    s.set(v);
  }
  return s;
}

// Smallest integer degree meeting a real threshold.
auto int_need(double threshold) -> int {
  auto need = static_cast<int>(std::ceil(threshold - kEps));
  return need < 0 ? 0 : need;
}

struct A3Limits {
  int size_cap = 0;    // largest |A| the condition quantifies over
  int deg_need = 0;    // integer degree demanded of A-vertices into B
  double expansion = 0.0;
};

auto a3_limits(const PipelineParams& params, int n) -> A3Limits {
  A3Limits lim;
  auto cap = a3_size_cap(params, n);
  lim.size_cap = cap < 1.0 ? 0 : static_cast<int>(cap + kEps);
  lim.deg_need = std::max(1, int_need(a3_degree_need(params, n)));
  lim.expansion = a3_expansion(params, n);
  return lim;
}

// A violating pair exists for candidate B iff enough vertices send deg_need
// edges (in direction `dir`) into B. Returns the witness A, largest first.
auto a3_a_for_b(const Digraph& d, const Bitset& b, Dir dir, const A3Limits& lim)
    -> std::vector<int> {
  std::vector<int> a;
  for (int v = 0; v < d.n(); ++v) {
    if (d.nbrs(v, dir).and_count(b) >= lim.deg_need) {
      a.push_back(v);
      if (static_cast<int>(a.size()) == lim.size_cap) break;
    }
  }
  return a;
}

auto a3_violates(std::size_t a_size, int b_size, const A3Limits& lim) -> bool {
  return a_size >= 1 &&
         static_cast<double>(b_size) < static_cast<double>(a_size) * lim.expansion - kEps;
}

auto check_a3_exact(const Digraph& d, const A3Limits& lim, PseudoReport& report) -> void {
  auto n = d.n();
  std::vector<std::uint32_t> rows[2];
  for (auto dir : {Dir::Out, Dir::In}) {
    auto& r = rows[dir == Dir::Out ? 0 : 1];
    r.assign(std::size_t(n), 0);
    for (int v = 0; v < n; ++v) {
      d.nbrs(v, dir).for_each([&](int u) { r[std::size_t(v)] |= 1u << u; });
    }
  }
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    auto b_size = std::popcount(mask);
    // |B| >= size_cap * expansion can never lose to a capped A.
    if (static_cast<double>(b_size) >= lim.size_cap * lim.expansion - kEps) continue;
    for (auto dir : {Dir::Out, Dir::In}) {
      const auto& r = rows[dir == Dir::Out ? 0 : 1];
      int a_size = 0;
      for (int v = 0; v < n && a_size < lim.size_cap; ++v) {
        if (std::popcount(r[std::size_t(v)] & mask) >= lim.deg_need) ++a_size;
      }
      if (a3_violates(std::size_t(a_size), b_size, lim)) {
        report.a3_ok = false;
        report.a3_witness_dir = dir;
        Bitset b(n);
        for (int v = 0; v < n; ++v) {
          if ((mask >> v) & 1u) b.set(v);
        }
        report.a3_witness_b = b.to_vector();
        report.a3_witness_a = a3_a_for_b(d, b, dir, lim);
        report.a3_witness_a.resize(std::size_t(a_size));
        return;
      }
    }
  }
}

auto record_a3_witness(const Digraph& d, const Bitset& b, Dir dir, const A3Limits& lim,
                       PseudoReport& report) -> void {
  report.a3_ok = false;
  report.a3_witness_dir = dir;
  report.a3_witness_b = b.to_vector();
  report.a3_witness_a = a3_a_for_b(d, b, dir, lim);
}

// Greedy refutation candidate: grow B one vertex at a time, preferring the
// vertex that pushes the most A-candidates across the degree threshold.
auto a3_greedy_refute(const Digraph& d, Dir dir, const A3Limits& lim,
                      PseudoReport& report) -> bool {
  auto n = d.n();
  auto rev = flip(dir);
  // Pool of vertices worth adding to B: those serving many A-candidates.
  std::vector<int> pool(std::size_t(n), 0);
  std::iota(pool.begin(), pool.end(), 0);
  std::sort(pool.begin(), pool.end(), [&](int u, int v) {
    auto du = degree(d, u, rev);
    auto dv = degree(d, v, rev);
    return du != dv ? du > dv : u < v;
  });
  if (pool.size() > 512) pool.resize(512);

  Bitset b(n);
  std::vector<int> cnt(std::size_t(n), 0);
  int reached = 0;  // vertices with cnt >= deg_need
  auto max_b = static_cast<int>(lim.size_cap * lim.expansion + 1.0);
  auto steps = std::min({n, std::max(max_b, 4), 600});
  for (int step = 0; step < steps; ++step) {
    int best = -1;
    long best_cross = -1;
    long best_under = -1;
    for (auto u : pool) {
      if (b.test(u)) continue;
      long cross = 0;
      long under = 0;
      d.nbrs(u, rev).for_each([&](int v) {
        if (cnt[std::size_t(v)] == lim.deg_need - 1) ++cross;
        if (cnt[std::size_t(v)] < lim.deg_need) ++under;
      });
      if (cross > best_cross || (cross == best_cross && under > best_under)) {
        best = u;
        best_cross = cross;
        best_under = under;
      }
    }
    if (best < 0) break;
    b.set(best);
    d.nbrs(best, rev).for_each([&](int v) {
      if (++cnt[std::size_t(v)] == lim.deg_need) ++reached;
    });
    auto a_size = std::min(reached, lim.size_cap);
    if (a3_violates(std::size_t(a_size), b.count(), lim)) {
      record_a3_witness(d, b, dir, lim, report);
      return true;
    }
  }
  return false;
}

auto check_a3_sampled(const Digraph& d, const A3Limits& lim, int trials,
                      std::uint64_t seed, PseudoReport& report) -> void {
  for (auto dir : {Dir::Out, Dir::In}) {
    if (a3_greedy_refute(d, dir, lim, report)) return;
  }
  // Random small candidates; realistic violations are local, so B stays small.
  auto n = d.n();
  auto max_b = std::min({n, std::max(2, static_cast<int>(lim.size_cap * lim.expansion)), 128});
  RngStream rng(seed, 0x9d5e);
  std::vector<int> cnt(std::size_t(n), 0);
  for (int t = 0; t < trials; ++t) {
    auto size = 1 + static_cast<int>(rng.next_below(std::uint64_t(max_b)));
    Bitset b(n);
    for (int k = 0; k < size; ++k) b.set(static_cast<int>(rng.next_below(std::uint64_t(n))));
    for (auto dir : {Dir::Out, Dir::In}) {
      std::fill(cnt.begin(), cnt.end(), 0);
      int reached = 0;
      b.for_each([&](int u) {
        d.nbrs(u, flip(dir)).for_each([&](int v) {
          if (++cnt[std::size_t(v)] == lim.deg_need) ++reached;
        });
      });
      auto a_size = std::min(reached, lim.size_cap);
      if (a3_violates(std::size_t(a_size), b.count(), lim)) {
        record_a3_witness(d, b, dir, lim, report);
        report.a3_witness_a.resize(std::size_t(a_size));
        return;
      }
    }
  }
}

}  // namespace

auto check_pseudorandom(const Digraph& d, const std::vector<int>& x,
                        const PipelineParams& params, int sample_trials,
                        std::uint64_t sample_seed) -> PseudoReport {
  auto n = d.n();
  require_input(n >= 2, "pseudorandomness checks need n >= 2");
  auto xs = make_member_set(n, x, "exceptional set");
  PseudoReport report;

  auto max_deg = a1_max_degree(params, n);
  for (int v = 0; v < n && report.a1_ok; ++v) {
    for (auto dir : {Dir::Out, Dir::In}) {
      if (static_cast<double>(degree(d, v, dir)) > max_deg + kEps) {
        report.a1_ok = false;
        report.a1_witness = v;
        break;
      }
    }
  }

  auto min_deg = a2_min_degree(params, n);
  Bitset outside = xs;
  outside.flip_all();
  for (int v = 0; v < n && report.a2_ok; ++v) {
    for (auto dir : {Dir::Out, Dir::In}) {
      if (static_cast<double>(d.nbrs(v, dir).and_count(outside)) < min_deg - kEps) {
        report.a2_ok = false;
        report.a2_witness = v;
        break;
      }
    }
  }

  auto lim = a3_limits(params, n);
  if (lim.size_cap < 1) {
    report.a3_mode = CheckMode::Exact;  // vacuous: no admissible A
    return report;
  }
  if (n <= kExactCap) {
    report.a3_mode = CheckMode::Exact;
    check_a3_exact(d, lim, report);
  } else {
    report.a3_mode = CheckMode::Sampled;
    check_a3_sampled(d, lim, sample_trials, sample_seed, report);
  }
  return report;
}

namespace {

struct PartitionState {
  std::vector<std::uint8_t> label;  // 0,1,2; entries for X vertices stay 0
  Bitset u1, u2;
  // deg[v][dir 0=out 1=in][part-1]
  std::vector<std::array<std::array<int, 2>, 2>> deg;
};

auto draw_label(RngStream& rng) -> std::uint8_t {
  auto r = rng.next_double();
  if (r < 0.6) return 0;
  return r < 0.8 ? 1 : 2;
}

auto assign_all(const Digraph& d, const Bitset& free, RngStream& rng,
                PartitionState& st) -> void {
  auto n = d.n();
  st.label.assign(std::size_t(n), 0);
  st.u1 = Bitset(n);
  st.u2 = Bitset(n);
  free.for_each([&](int v) {
    auto l = draw_label(rng);
    st.label[std::size_t(v)] = l;
    if (l == 1) st.u1.set(v);
    if (l == 2) st.u2.set(v);
  });
  st.deg.assign(std::size_t(n), {{{0, 0}, {0, 0}}});
  for (int v = 0; v < n; ++v) {
    st.deg[std::size_t(v)][0][0] = d.out(v).and_count(st.u1);
    st.deg[std::size_t(v)][0][1] = d.out(v).and_count(st.u2);
    st.deg[std::size_t(v)][1][0] = d.in(v).and_count(st.u1);
    st.deg[std::size_t(v)][1][1] = d.in(v).and_count(st.u2);
  }
}

auto violated(const PartitionState& st, int v, int need) -> bool {
  const auto& dv = st.deg[std::size_t(v)];
  return dv[0][0] < need || dv[0][1] < need || dv[1][0] < need || dv[1][1] < need;
}

// Moves u between classes, updating the degree counters of its neighbours.
auto relabel(const Digraph& d, PartitionState& st, int u, std::uint8_t to) -> void {
  auto from = st.label[std::size_t(u)];
  if (from == to) return;
  st.label[std::size_t(u)] = to;
  if (from == 1) st.u1.reset(u);
  if (from == 2) st.u2.reset(u);
  if (to == 1) st.u1.set(u);
  if (to == 2) st.u2.set(u);
  d.in(u).for_each([&](int w) {  // u is an out-neighbour of w
    if (from != 0) --st.deg[std::size_t(w)][0][from - 1];
    if (to != 0) ++st.deg[std::size_t(w)][0][to - 1];
  });
  d.out(u).for_each([&](int w) {
    if (from != 0) --st.deg[std::size_t(w)][1][from - 1];
    if (to != 0) ++st.deg[std::size_t(w)][1][to - 1];
  });
}

auto worst_vertex_of(const PartitionState& st, int n, int need) -> int {
  int worst = 0;
  int worst_deficit = -1;
  for (int v = 0; v < n; ++v) {
    const auto& dv = st.deg[std::size_t(v)];
    auto low = std::min(std::min(dv[0][0], dv[0][1]), std::min(dv[1][0], dv[1][1]));
    auto deficit = need - low;
    if (deficit > worst_deficit) {
      worst_deficit = deficit;
      worst = v;
    }
  }
  return worst;
}

}  // namespace

auto partition_exceptional(const Digraph& d, const std::vector<int>& x,
                           const PipelineParams& params, RngStream& rng,
                           int budget_factor) -> PartitionResult {
  auto n = d.n();
  require_input(n >= 4, "partition needs n >= 4");
  auto xs = make_member_set(n, x, "exceptional set");
  require_input(static_cast<double>(x.size()) <= std::pow(n, 0.75) + kEps,
                "exceptional set larger than n^(3/4)");
  Bitset free = xs;
  free.flip_all();
  auto quarter = n / 4;
  require_input(free.count() >= 2 * quarter,
                "too few vertices outside the exceptional set to fill two parts");

  auto need = std::max(1, int_need(partition_min_degree(params, n)));
  PartitionResult result;

  // Feasibility: a vertex must be able to see `need` vertices in each of two
  // disjoint parts in both directions, whatever the assignment.
  for (int v = 0; v < n; ++v) {
    for (auto dir : {Dir::Out, Dir::In}) {
      if (d.nbrs(v, dir).and_count(free) < 2 * need) {
        result.worst_vertex = v;
        std::ostringstream msg;
        msg << "vertex " << v << " has " << d.nbrs(v, dir).and_count(free)
            << (dir == Dir::Out ? " out" : " in")
            << "-neighbours outside the exceptional set; needs " << need
            << " in each of two parts";
        result.message = msg.str();
        return result;
      }
    }
  }

  PartitionState st;
  assign_all(d, free, rng, st);

  std::vector<int> stack(static_cast<std::size_t>(n));
  std::iota(stack.begin(), stack.end(), 0);
  std::vector<std::uint8_t> queued(std::size_t(n), 1);
  auto push = [&](int v) {
    if (queued[std::size_t(v)] == 0) {
      queued[std::size_t(v)] = 1;
      stack.push_back(v);
    }
  };

  long long budget = static_cast<long long>(budget_factor) * n;
  long long used = 0;
  while (true) {
    while (!stack.empty()) {
      auto v = stack.back();
      stack.pop_back();
      queued[std::size_t(v)] = 0;
      if (!violated(st, v, need)) continue;
      if (used >= budget) {
        result.worst_vertex = worst_vertex_of(st, n, need);
        result.message = "resampling budget exhausted";
        return result;
      }
      ++used;
      // Resample the assignments this event depends on: v's neighbourhood.
      Bitset nb = d.out(v);
      nb |= d.in(v);
      nb &= free;
      nb.for_each([&](int u) {
        relabel(d, st, u, draw_label(rng));
        push(u);
        d.in(u).for_each([&](int w) { push(w); });
        d.out(u).for_each([&](int w) { push(w); });
      });
      push(v);
    }
    // All per-vertex events hold; restart if a class overshot its quarter.
    if (st.u1.count() <= quarter && st.u2.count() <= quarter) break;
    if (used >= budget) {
      result.worst_vertex = worst_vertex_of(st, n, need);
      result.message = "resampling budget exhausted while rebalancing";
      return result;
    }
    ++used;
    assign_all(d, free, rng, st);
    stack.resize(std::size_t(n));
    std::iota(stack.begin(), stack.end(), 0);
    std::fill(queued.begin(), queued.end(), std::uint8_t{1});
  }

  // Top V1 and V2 up to exactly floor(n/4) with class-0 vertices; degrees into
  // the parts only grow.
  Bitset v1 = st.u1;
  Bitset v2 = st.u2;
  auto fill = [&](Bitset& part) {
    for (int v = 0; v < n && part.count() < quarter; ++v) {
      if (free.test(v) && st.label[std::size_t(v)] == 0 && !v1.test(v) && !v2.test(v)) {
        part.set(v);
        st.label[std::size_t(v)] = 3;  // consumed by a part
      }
    }
  };
  fill(v1);
  fill(v2);

  for (int v = 0; v < n; ++v) {
    for (auto dir : {Dir::Out, Dir::In}) {
      if (d.nbrs(v, dir).and_count(v1) < need || d.nbrs(v, dir).and_count(v2) < need) {
        result.worst_vertex = v;
        result.message = "degree condition lost during rebalancing";
        return result;
      }
    }
  }

  Bitset v0 = free;
  v0.subtract(v1);
  v0.subtract(v2);
  result.ok = true;
  result.parts[0] = v0.to_vector();
  result.parts[1] = v1.to_vector();
  result.parts[2] = v2.to_vector();
  return result;
}

namespace {

// |N(U, W)| with N(U, W) = (union of N(u)) in W minus U itself.
auto restricted_nbr_count(const UGraph& g, const std::vector<int>& u, const Bitset& w)
    -> int {
  Bitset acc(g.n());
  for (auto v : u) acc |= g.nbrs(v);
  acc &= w;
  for (auto v : u) acc.reset(v);
  return acc.count();
}

struct ExpansionRefutation {
  std::vector<int> witness;
};

// Exhaustive search for U (avoiding `banned`) with |U| <= max_size and
// |N(U, target)| < d |U|. Smallest violating U first.
auto refute_restricted_exact(const UGraph& g, const Bitset& banned, const Bitset& target,
                             int d, int max_size) -> std::optional<ExpansionRefutation> {
  auto n = g.n();
  std::vector<int> candidates;
  for (int v = 0; v < n; ++v) {
    if (!banned.test(v)) candidates.push_back(v);
  }
  std::vector<int> chosen;
  for (int size = 1; size <= max_size; ++size) {
    std::optional<ExpansionRefutation> found;
    auto dfs = [&](auto&& self, std::size_t start, const Bitset& acc) -> void {
      if (found) return;
      if (static_cast<int>(chosen.size()) == size) {
        Bitset masked = acc;
        masked &= target;
        for (auto v : chosen) masked.reset(v);
        if (masked.count() < d * size) found = ExpansionRefutation{chosen};
        return;
      }
      auto rem = size - static_cast<int>(chosen.size());
      for (auto i = start; i + std::size_t(rem) <= candidates.size(); ++i) {
        auto v = candidates[i];
        Bitset next = acc;
        next |= g.nbrs(v);
        chosen.push_back(v);
        self(self, i + 1, next);
        chosen.pop_back();
        if (found) return;
      }
    };
    dfs(dfs, 0, Bitset(n));
    if (found) return found;
  }
  return std::nullopt;
}

auto refute_restricted_sampled(const UGraph& g, const Bitset& banned, const Bitset& target,
                               int d, int max_size, int trials, std::uint64_t seed)
    -> std::optional<ExpansionRefutation> {
  auto n = g.n();
  std::vector<int> candidates;
  for (int v = 0; v < n; ++v) {
    if (!banned.test(v)) candidates.push_back(v);
  }
  if (candidates.empty()) return std::nullopt;
  auto check = [&](const std::vector<int>& u) -> bool {
    return restricted_nbr_count(g, u, target) < d * static_cast<int>(u.size());
  };

  // Adversarial growth from the weakest seeds: always add the vertex whose
  // neighbourhood adds least to the running union.
  std::vector<int> seeds = candidates;
  std::sort(seeds.begin(), seeds.end(), [&](int a, int b) {
    auto da = g.nbrs(a).and_count(target);
    auto db = g.nbrs(b).and_count(target);
    return da != db ? da < db : a < b;
  });
  if (seeds.size() > 32) seeds.resize(32);
  for (auto seed_v : seeds) {
    std::vector<int> u{seed_v};
    Bitset acc = g.nbrs(seed_v);
    Bitset in_u(n);
    in_u.set(seed_v);
    if (check(u)) return ExpansionRefutation{u};
    for (int size = 2; size <= max_size; ++size) {
      int best = -1;
      int best_gain = n + 1;
      for (auto v : candidates) {
        if (in_u.test(v)) continue;
        Bitset fresh = g.nbrs(v);
        fresh &= target;
        fresh.subtract(acc);
        auto gain = fresh.count();
        if (gain < best_gain || (gain == best_gain && v < best)) {
          best = v;
          best_gain = gain;
        }
      }
      if (best < 0) break;
      u.push_back(best);
      in_u.set(best);
      acc |= g.nbrs(best);
      if (check(u)) return ExpansionRefutation{u};
    }
  }

  RngStream rng(seed, 0xbad5e7);
  for (int t = 0; t < trials; ++t) {
    auto size = 1 + static_cast<int>(rng.next_below(std::uint64_t(max_size)));
    std::vector<int> u;
    Bitset in_u(n);
    for (int k = 0; k < size; ++k) {
      auto v = candidates[rng.next_below(candidates.size())];
      if (!in_u.test(v)) {
        in_u.set(v);
        u.push_back(v);
      }
    }
    if (!u.empty() && check(u)) return ExpansionRefutation{u};
  }
  return std::nullopt;
}

// Work estimate for enumerating all subsets of [n] with size <= k.
auto subset_work(int n, int k) -> double {
  double total = 0;
  double binom = 1;
  for (int s = 1; s <= k; ++s) {
    binom = binom * (n - s + 1) / s;
    total += binom;
    if (total > 1e18) return total;
  }
  return total;
}

}  // namespace

auto find_bad_set(const UGraph& g, const std::vector<int>& v0,
                  const PipelineParams& params, int sample_trials,
                  std::uint64_t sample_seed) -> BadSetResult {
  auto n = g.n();
  require_input(n >= 2, "bad-set extraction needs n >= 2");
  auto v0s = make_member_set(n, v0, "target set");
  require_input(4 * static_cast<int>(v0.size()) >= n,
                "target set must contain at least a quarter of the vertices");

  auto d = extend_d(params);
  auto m = extend_m(params);
  auto peel_below = 2 * d;
  auto cap = bad_set_cap(params, n);

  BadSetResult result;
  Bitset b(n);
  std::vector<int> cnt(std::size_t(n), 0);

  auto recount = [&]() {
    Bitset avail = v0s;
    avail.subtract(b);
    for (int v = 0; v < n; ++v) cnt[std::size_t(v)] = g.nbrs(v).and_count(avail);
  };
  auto peel = [&]() {
    std::vector<int> stack;
    for (int v = 0; v < n; ++v) {
      if (!b.test(v) && cnt[std::size_t(v)] < peel_below) stack.push_back(v);
    }
    while (!stack.empty()) {
      auto v = stack.back();
      stack.pop_back();
      if (b.test(v) || cnt[std::size_t(v)] >= peel_below) continue;
      b.set(v);
      if (v0s.test(v)) {
        g.nbrs(v).for_each([&](int u) {
          if (--cnt[std::size_t(u)] < peel_below && !b.test(u)) stack.push_back(u);
        });
      }
    }
  };

  recount();
  peel();
  if (b.none()) {
    // Nothing expands badly; the complement argument still wants a nonempty
    // set, and removing the weakest single vertex is safe.
    int pick = 0;
    for (int v = 1; v < n; ++v) {
      if (cnt[std::size_t(v)] < cnt[std::size_t(pick)]) pick = v;
    }
    b.set(pick);
    recount();
  }

  auto exact = subset_work(n, 2 * m) <= 2e6;
  result.verify_mode = exact ? CheckMode::Exact : CheckMode::Sampled;

  for (int round = 0; round < 5; ++round) {
    if (b.count() > cap) {
      std::ostringstream msg;
      msg << "bad set grew to " << b.count() << " vertices, above the cap " << cap;
      result.message = msg.str();
      result.b = b.to_vector();
      return result;
    }
    Bitset avail = v0s;
    avail.subtract(b);
    auto refutation =
        exact ? refute_restricted_exact(g, b, avail, d, 2 * m)
              : refute_restricted_sampled(g, b, avail, d, 2 * m, sample_trials,
                                          sample_seed + std::uint64_t(round));
    if (!refutation) {
      result.ok = true;
      result.b = b.to_vector();
      return result;
    }
    for (auto v : refutation->witness) b.set(v);
    recount();
    peel();
  }
  result.message = "expansion refuted after the augmentation budget";
  result.b = b.to_vector();
  return result;
}

}  // namespace orient
