#include "orient/extend.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

#include "orient/errors.hpp"

namespace orient {

namespace {

constexpr double kExactWorkBudget = 2e6;

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

auto member_set(int n, const std::vector<int>& verts, const char* what) -> Bitset {
  Bitset s(n);
  for (auto v : verts) {
    require_input(v >= 0 && v < n, std::string(what) + " vertex out of range");
    require_input(!s.test(v), std::string(what) + " contains a duplicate vertex");
    s.set(v);
  }
  return s;
}

}  // namespace

auto Subgraph::add_edge(int u, int v) -> void {
  require_input(verts.test(u) && verts.test(v),
                "subgraph edge endpoint is not a subgraph vertex");
  edges.add_edge(u, v);
}

auto Subgraph::max_degree() const -> int {
  int best = 0;
  verts.for_each([&](int v) { best = std::max(best, edges.degree(v)); });
  return best;
}

auto add_path(Subgraph& s, const std::vector<int>& path) -> void {
  for (auto v : path) s.add_vertex(v);
  for (std::size_t i = 0; i + 1 < path.size(); ++i) s.add_edge(path[i], path[i + 1]);
}

namespace {

struct ExtendableInstance {
  const UGraph& g;
  const Subgraph& s;
  int d;
  Bitset excluded;  // always sized; empty when no exclusion requested

  // |N'(U) \ V(S)| restricted to non-excluded vertices.
  auto lhs(const std::vector<int>& u) const -> int {
    Bitset acc(g.n());
    for (auto v : u) acc |= g.nbrs(v);
    acc.subtract(excluded);
    acc.subtract(s.verts);
    return acc.count();
  }
  auto rhs_gain(int v) const -> int {
    return (d - 1) - (s.verts.test(v) ? s.degree(v) - 1 : 0);
  }
  auto rhs(const std::vector<int>& u) const -> int {
    int total = 0;
    for (auto v : u) total += rhs_gain(v);
    return total;
  }
};

auto exact_extendable(const ExtendableInstance& inst, int max_size)
    -> std::optional<std::vector<int>> {
  auto n = inst.g.n();
  std::vector<int> candidates;
  for (int v = 0; v < n; ++v) {
    if (!inst.excluded.test(v)) candidates.push_back(v);
  }
  std::vector<int> chosen;
  std::optional<std::vector<int>> found;
  auto dfs = [&](auto&& self, std::size_t start, Bitset acc, int lhs, int rhs) -> void {
    if (found) return;
    if (static_cast<int>(chosen.size()) >= max_size) return;
    auto rem = max_size - static_cast<int>(chosen.size());
    // lhs never shrinks as U grows, rhs gains at most d-1 per vertex.
    if (lhs >= rhs + rem * (inst.d - 1)) return;
    for (auto i = start; i < candidates.size(); ++i) {
      auto v = candidates[i];
      Bitset next = acc;
      next |= inst.g.nbrs(v);
      next.subtract(inst.excluded);
      next.subtract(inst.s.verts);
      auto nlhs = next.count();
      auto nrhs = rhs + inst.rhs_gain(v);
      chosen.push_back(v);
      if (nlhs < nrhs) {
        found = chosen;
        return;
      }
      self(self, i + 1, next, nlhs, nrhs);
      chosen.pop_back();
      if (found) return;
    }
  };
  dfs(dfs, 0, Bitset(n), 0, 0);
  return found;
}

auto sampled_extendable(const ExtendableInstance& inst, int max_size, int trials,
                        std::uint64_t seed) -> std::optional<std::vector<int>> {
  auto n = inst.g.n();
  std::vector<int> candidates;
  for (int v = 0; v < n; ++v) {
    if (!inst.excluded.test(v)) candidates.push_back(v);
  }
  if (candidates.empty()) return std::nullopt;
  auto violates = [&](const std::vector<int>& u) -> bool {
    return inst.lhs(u) < inst.rhs(u);
  };

  // Adversarial growth: start from the vertices with the fewest fresh
  // neighbours and keep adding whichever vertex worsens the slack most.
  std::vector<int> seeds = candidates;
  std::sort(seeds.begin(), seeds.end(), [&](int x, int y) {
    auto fx = inst.lhs({x}) - inst.rhs_gain(x);
    auto fy = inst.lhs({y}) - inst.rhs_gain(y);
    return fx != fy ? fx < fy : x < y;
  });
  if (seeds.size() > 24) seeds.resize(24);
  for (auto seed_v : seeds) {
    std::vector<int> u{seed_v};
    Bitset acc = inst.g.nbrs(seed_v);
    acc.subtract(inst.excluded);
    acc.subtract(inst.s.verts);
    auto rhs = inst.rhs_gain(seed_v);
    Bitset in_u(n);
    in_u.set(seed_v);
    if (acc.count() < rhs) return u;
    for (int size = 2; size <= max_size; ++size) {
      int best = -1;
      int best_slack = 0;
      Bitset best_acc(n);
      for (auto v : candidates) {
        if (in_u.test(v)) continue;
        Bitset next = acc;
        next |= inst.g.nbrs(v);
        next.subtract(inst.excluded);
        next.subtract(inst.s.verts);
        auto slack = next.count() - (rhs + inst.rhs_gain(v));
        if (best < 0 || slack < best_slack) {
          best = v;
          best_slack = slack;
          best_acc = next;
        }
      }
      if (best < 0) break;
      u.push_back(best);
      in_u.set(best);
      acc = best_acc;
      rhs += inst.rhs_gain(best);
      if (acc.count() < rhs) return u;
    }
  }

  RngStream rng(seed, 0xe71e);
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
    if (!u.empty() && violates(u)) return u;
  }
  return std::nullopt;
}

}  // namespace

auto extendable_check_mode(int n, int m) -> CheckMode {
  return subset_work(n, 2 * m) <= kExactWorkBudget ? CheckMode::Exact
                                                   : CheckMode::Sampled;
}

auto check_extendable(const UGraph& g, const Subgraph& s, int d, int m,
                      CheckMode mode, const Bitset* excluded, int sample_trials,
                      std::uint64_t sample_seed) -> ExtendableReport {
  require_input(d >= 3, "extendability needs d >= 3");
  require_input(m >= 1, "extendability needs m >= 1");
  require_input(s.max_degree() <= d, "subgraph exceeds maximum degree d");
  ExtendableInstance inst{g, s, d,
                          excluded != nullptr ? *excluded : Bitset(g.n())};
  ExtendableReport report;
  report.mode = mode;
  auto refutation = mode == CheckMode::Exact
                        ? exact_extendable(inst, 2 * m)
                        : sampled_extendable(inst, 2 * m, sample_trials, sample_seed);
  if (refutation) {
    report.witness = *refutation;
  } else {
    report.ok = true;
  }
  return report;
}

namespace {

// Bounded-degree search tree grown through fresh vertices; level[v] and
// parent[v] identify the path back to the root.
struct SearchTree {
  std::vector<std::vector<int>> levels;
  std::vector<int> parent;

  auto path_to_root(int v) const -> std::vector<int> {
    std::vector<int> p{v};
    while (parent[std::size_t(p.back())] != p.back()) {
      p.push_back(parent[std::size_t(p.back())]);
    }
    return p;  // v first, root last
  }
};

auto fresh_degree(const UGraph& g, int v, const Bitset& blocked) -> int {
  Bitset nb = g.nbrs(v);
  nb.subtract(blocked);
  return nb.count();
}

// Children are the fresh neighbours with the largest forward degree, at most
// branch per node.
auto grow_tree(const UGraph& g, int root, int depth, int branch, Bitset& taken,
               SearchTree& tree) -> void {
  auto n = g.n();
  tree.levels.assign(1, {root});
  tree.parent.assign(std::size_t(n), -1);
  tree.parent[std::size_t(root)] = root;
  for (int lev = 0; lev < depth; ++lev) {
    std::vector<int> next;
    for (auto u : tree.levels[std::size_t(lev)]) {
      std::vector<int> cand;
      Bitset nb = g.nbrs(u);
      nb.subtract(taken);
      nb.for_each([&](int v) { cand.push_back(v); });
      std::sort(cand.begin(), cand.end(), [&](int x, int y) {
        auto fx = fresh_degree(g, x, taken);
        auto fy = fresh_degree(g, y, taken);
        return fx != fy ? fx > fy : x < y;
      });
      if (static_cast<int>(cand.size()) > branch) cand.resize(std::size_t(branch));
      for (auto v : cand) {
        taken.set(v);
        tree.parent[std::size_t(v)] = u;
        next.push_back(v);
      }
    }
    if (next.empty()) break;
    tree.levels.push_back(std::move(next));
  }
}

}  // namespace

auto extend_path(const UGraph& g, const Subgraph& s, int a, int b, int ell, int d,
                 int m, RngStream& rng, const Bitset* excluded, int attempts)
    -> PathResult {
  auto n = g.n();
  require_input(d >= 3, "extend_path needs d >= 3");
  require_input(m >= 1, "extend_path needs m >= 1");
  require_input(a != b, "endpoints must differ");
  require_input(a >= 0 && a < n && b >= 0 && b < n, "endpoint out of range");
  require_input(s.verts.test(a) && s.verts.test(b),
                "endpoints must belong to the subgraph");
  require_input(2 * s.degree(a) <= d && 2 * s.degree(b) <= d,
                "endpoints must have degree at most d/2 in the subgraph");
  require_input(s.max_degree() <= d, "subgraph exceeds maximum degree d");
  auto k = static_cast<int>(std::ceil(std::log(2.0 * m) / std::log(d - 1.0)));
  k = std::max(k, 1);
  require_input(ell >= 2 * k + 1, "path length below the 2k+1 lower bound");
  Bitset excl = excluded != nullptr ? *excluded : Bitset(n);
  require_input(!excl.test(a) && !excl.test(b), "endpoints are excluded vertices");

  Bitset blocked_base = s.verts;
  blocked_base |= excl;

  PathResult result;
  result.stage = "walk";
  auto t = ell - (2 * k + 1);
  auto check_mode = extendable_check_mode(n, m);

  for (int attempt = 0; attempt < attempts; ++attempt) {
    // Padding walk of t fresh steps from a, preferring well-connected steps.
    Bitset taken = blocked_base;
    std::vector<int> walk{a};
    bool walk_ok = true;
    for (int step = 0; step < t; ++step) {
      std::vector<int> cand;
      Bitset nb = g.nbrs(walk.back());
      nb.subtract(taken);
      nb.for_each([&](int v) { cand.push_back(v); });
      if (cand.empty()) {
        walk_ok = false;
        break;
      }
      std::sort(cand.begin(), cand.end(), [&](int x, int y) {
        auto fx = fresh_degree(g, x, taken);
        auto fy = fresh_degree(g, y, taken);
        return fx != fy ? fx > fy : x < y;
      });
      auto pick = rng.next_below(std::min<std::uint64_t>(3, cand.size()));
      auto v = cand[std::size_t(pick)];
      taken.set(v);
      walk.push_back(v);
    }
    if (!walk_ok) {
      result.stage = "walk";
      result.message = "ran out of fresh vertices while padding";
      continue;
    }

    SearchTree from_a;
    grow_tree(g, walk.back(), 2 * k, d - 1, taken, from_a);
    SearchTree from_b;
    grow_tree(g, b, 2 * k, d - 1, taken, from_b);

    // Join frontier levels i and j with i + j = 2k, balanced splits first.
    std::vector<int> splits{k};
    for (int off = 1; off <= k; ++off) {
      splits.push_back(k + off);
      splits.push_back(k - off);
    }
    std::vector<int> path;
    for (auto i : splits) {
      auto j = 2 * k - i;
      if (i >= static_cast<int>(from_a.levels.size())) continue;
      if (j >= static_cast<int>(from_b.levels.size())) continue;
      Bitset bj = Bitset::of(n, from_b.levels[std::size_t(j)]);
      for (auto u : from_a.levels[std::size_t(i)]) {
        Bitset hit = g.nbrs(u);
        hit &= bj;
        auto v = hit.first();
        if (v < 0) continue;
        auto up = from_a.path_to_root(u);    // u .. a'
        std::reverse(up.begin(), up.end());  // a' .. u
        auto down = from_b.path_to_root(v);  // v .. b
        path = walk;
        path.insert(path.end(), up.begin() + 1, up.end());
        path.insert(path.end(), down.begin(), down.end());
        break;
      }
      if (!path.empty()) break;
    }
    if (path.empty()) {
      result.stage = "join";
      result.message = "no edge between the two search trees";
      continue;
    }
    if (static_cast<int>(path.size()) != ell + 1) {
      result.stage = "join";
      result.message = "assembled path has the wrong length";
      continue;
    }

    Subgraph grown = s;
    add_path(grown, path);
    auto check = check_extendable(g, grown, d, m, check_mode, &excl, 1200,
                                  rng.next_u64());
    if (!check.ok) {
      result.stage = "extendability";
      std::ostringstream msg;
      msg << "adding the path breaks (d,m)-extendability; witness size "
          << check.witness.size();
      result.message = msg.str();
      continue;
    }
    result.ok = true;
    result.path = path;
    result.stage.clear();
    result.message.clear();
    return result;
  }
  return result;
}

namespace {

auto compact_induced(const UGraph& g, const std::vector<int>& keep)
    -> UGraph {
  UGraph h(static_cast<int>(keep.size()));
  std::vector<int> pos(std::size_t(g.n()), -1);
  for (std::size_t i = 0; i < keep.size(); ++i) pos[std::size_t(keep[i])] = static_cast<int>(i);
  for (std::size_t i = 0; i < keep.size(); ++i) {
    g.nbrs(keep[i]).for_each([&](int u) {
      auto j = pos[std::size_t(u)];
      if (j > static_cast<int>(i)) h.add_edge(static_cast<int>(i), j);
    });
  }
  return h;
}

}  // namespace

auto connect_pairs(const UGraph& g, const std::vector<int>& v0,
                   const std::vector<int>& b,
                   const std::vector<std::pair<int, int>>& pairs,
                   const std::vector<int>& lengths, const PipelineParams& params,
                   RngStream& rng) -> ConnectResult {
  auto n = g.n();
  auto v0s = member_set(n, v0, "v0");
  auto bs = member_set(n, b, "bad set");
  require_input(pairs.size() == lengths.size(),
                "one length per pair is required");
  auto d = extend_d(params);
  auto m = extend_m(params);
  auto k = std::max(
      1, static_cast<int>(std::ceil(std::log(2.0 * m) / std::log(d - 1.0))));

  Bitset endpoint_seen(n);
  Bitset outside = v0s;
  outside |= bs;
  long long total_len = 0;
  // Both the analysis floor and the structural floor 2k+1 must hold.
  auto min_len = std::max(min_connect_length(params, n), 2 * k + 1);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    auto [x, y] = pairs[i];
    require_input(x >= 0 && x < n && y >= 0 && y < n, "pair endpoint out of range");
    require_input(x != y, "pair endpoints must differ");
    require_input(!outside.test(x) && !outside.test(y),
                  "pair endpoints must lie outside v0 and the bad set");
    require_input(!endpoint_seen.test(x) && !endpoint_seen.test(y),
                  "pair endpoints must be distinct across pairs");
    endpoint_seen.set(x);
    endpoint_seen.set(y);
    require_input(lengths[i] >= min_len,
                  "requested length below the minimum connection length");
    total_len += lengths[i];
  }
  require_input(8 * total_len <= n, "requested lengths sum to more than n/8");

  // The edgeless seed subgraph lives on everything outside v0 and the bad set.
  Subgraph s(n);
  for (int v = 0; v < n; ++v) {
    if (!v0s.test(v) && !bs.test(v)) s.add_vertex(v);
  }

  ConnectResult result;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    auto path =
        extend_path(g, s, pairs[i].first, pairs[i].second, lengths[i], d, m, rng, &bs);
    if (!path.ok) {
      result.failed_pair = static_cast<int>(i);
      result.stage = path.stage;
      std::ostringstream msg;
      msg << "pair " << i << ": " << path.message;
      result.message = msg.str();
      return result;
    }
    add_path(s, path.path);
    result.paths.push_back(std::move(path.path));
  }

  Bitset residual = v0s;
  residual.subtract(bs);
  residual.subtract(s.verts);
  result.residual = residual.to_vector();

  if (!result.residual.empty()) {
    auto h = compact_induced(g, result.residual);
    auto mode = h.n() <= 20 ? CheckMode::Exact : CheckMode::Sampled;
    result.residual_report =
        is_k_expander(h, static_cast<int>(params.expander_ratio),
                      params.expander_frac, mode, 2000, rng.next_u64());
    if (result.residual_report.witness) {
      for (auto& v : *result.residual_report.witness) v = result.residual[std::size_t(v)];
    }
  }
  result.ok = true;
  return result;
}

}  // namespace orient
