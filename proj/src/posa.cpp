#include "orient/posa.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cassert>
#include <cstdint>

#include "orient/errors.hpp"

namespace orient {

namespace {

auto norm(Edge e) -> Edge {
  return e.first <= e.second ? e : Edge{e.second, e.first};
}

auto checked_edge(int n, Edge e, const char* what) -> Edge {
  require_input(e.first >= 0 && e.first < n && e.second >= 0 && e.second < n,
                std::string(what) + ": edge endpoint out of range");
  require_input(e.first != e.second, std::string(what) + ": edge endpoints equal");
  return norm(e);
}

// (path - u_i u_{i+1}) + u_l u_i, keeping the stored orientation: the prefix
// up to u_i stays, the suffix comes back reversed.
auto rotated(const std::vector<int>& path, int i) -> std::vector<int> {
  int l = int(path.size()) - 1;
  std::vector<int> out;
  out.reserve(path.size());
  out.insert(out.end(), path.begin(), path.begin() + i + 1);
  out.insert(out.end(), path.rbegin(), path.rbegin() + (l - i));
  return out;
}

auto contains_edge(const std::vector<int>& path, Edge e) -> bool {
  for (std::size_t k = 0; k + 1 < path.size(); ++k)
    if (norm({path[k], path[k + 1]}) == e) return true;
  return false;
}

}  // namespace

auto rotate(const std::vector<int>& path, int fixed_end, Edge fixed_edge,
            int pivot) -> std::optional<std::vector<int>> {
  require_input(path.size() >= 2, "rotate: path needs at least one edge");
  require_input(path.front() == fixed_end,
                "rotate: fixed end must be the first path vertex");
  auto sorted = path;
  std::sort(sorted.begin(), sorted.end());
  require_input(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(),
                "rotate: path repeats a vertex");
  auto e = norm(fixed_edge);
  require_input(e.first != e.second, "rotate: fixed edge endpoints equal");
  require_input(contains_edge(path, e),
                "rotate: fixed edge is not an edge of the path");

  int l = int(path.size()) - 1;
  int i = -1;
  for (int k = 0; k <= l; ++k)
    if (path[k] == pivot) i = k;
  require_input(i >= 0, "rotate: pivot is not a path vertex");
  require_input(i < l, "rotate: pivot is the free endpoint itself");
  if (i == l - 1) return std::nullopt;  // would remove u_{l-1} u_l and re-add it
  require_input(norm({path[i], path[i + 1]}) != e,
                "rotate: pivot would delete the fixed edge");
  auto out = rotated(path, i);
  assert(contains_edge(out, e));
  return out;
}

auto rotation_closure(const UGraph& g, const std::vector<int>& path,
                      Edge fixed_edge) -> RotationState {
  int n = g.n();
  require_input(path.size() >= 2, "rotation_closure: path needs at least one edge");
  auto e = checked_edge(n, fixed_edge, "rotation_closure");
  Bitset on(n);
  for (std::size_t k = 0; k < path.size(); ++k) {
    int v = path[k];
    require_input(v >= 0 && v < n, "rotation_closure: path vertex out of range");
    require_input(!on.test(v), "rotation_closure: path repeats a vertex");
    on.set(v);
    require_input(k == 0 || g.has_edge(path[k - 1], v),
                  "rotation_closure: not a path of the graph");
  }
  require_input(contains_edge(path, e),
                "rotation_closure: fixed edge is not an edge of the path");

  RotationState st;
  st.base = path;
  st.fixed_end = path.front();
  st.fixed_edge = e;
  st.reached[path.back()] = path;

  std::vector<std::vector<int>> queue{path};
  std::vector<int> pos(n, -1);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    auto q = queue[head];  // copy: the queue reallocates while we push
    int l = int(q.size()) - 1;
    for (int k = 0; k <= l; ++k) pos[q[k]] = k;
    std::vector<std::pair<int, int>> cand;  // (new endpoint, pivot index)
    g.nbrs(q[l]).for_each([&](int u) {
      int i = pos[u];
      if (i < 0 || i >= l - 1) return;  // off the path, degenerate, or u_l
      if (norm({q[i], q[i + 1]}) == e) return;
      cand.push_back({q[i + 1], i});
    });
    for (int k = 0; k <= l; ++k) pos[q[k]] = -1;
    std::sort(cand.begin(), cand.end());
    for (auto [w, i] : cand) {
      if (st.reached.count(w)) continue;
      auto next = rotated(q, i);
      assert(contains_edge(next, e));
      queue.push_back(next);
      st.reached.emplace(w, std::move(next));
    }
  }
  return st;
}

auto booster_set(const UGraph& g, Edge e, int cap) -> std::vector<Edge> {
  int n = g.n();
  require_input(n <= cap, "booster_set: exact subset DP capped at n <= " +
                              std::to_string(cap));
  require_input(n <= 20, "booster_set: subset tables stop at n <= 20");
  auto [p, q] = checked_edge(n, e, "booster_set");

  std::uint32_t full = (std::uint32_t{1} << n) - 1;
  std::vector<std::uint32_t> adj(n, 0);
  for (int v = 0; v < n; ++v)
    g.nbrs(v).for_each([&](int u) { adj[v] |= std::uint32_t{1} << u; });
  adj[p] |= std::uint32_t{1} << q;  // the host is G + e throughout
  adj[q] |= std::uint32_t{1} << p;

  // ends_any[S] / ends_thru[S]: endpoints of paths with vertex set exactly S,
  // the latter restricted to paths containing e. lv = most vertices on any
  // path through e in G + e, the baseline a booster must beat.
  std::vector<std::uint32_t> ends_any(std::size_t(full) + 1, 0);
  std::vector<std::uint32_t> ends_thru(std::size_t(full) + 1, 0);
  for (int v = 0; v < n; ++v) ends_any[std::uint32_t{1} << v] = std::uint32_t{1} << v;
  int lv = 0;
  for (std::uint32_t s = 1; s <= full; ++s) {
    if (std::popcount(s) < 2) continue;
    std::uint32_t ea = 0, et = 0;
    for (std::uint32_t rest = s; rest;) {
      int v = std::countr_zero(rest);
      rest &= rest - 1;
      std::uint32_t prev = s ^ (std::uint32_t{1} << v);
      if (ends_any[prev] & adj[v]) ea |= std::uint32_t{1} << v;
      bool via_e = (v == p && (ends_any[prev] >> q & 1)) ||
                   (v == q && (ends_any[prev] >> p & 1));
      if (via_e || (ends_thru[prev] & adj[v])) et |= std::uint32_t{1} << v;
    }
    ends_any[s] = ea;
    ends_thru[s] = et;
    if (et) lv = std::max(lv, std::popcount(s));
  }

  // Paths from a fixed source; used to split a path at e into its p-side and
  // q-side, which never contain e themselves because they miss q resp. p.
  auto reach_from = [&](int src) {
    std::vector<std::uint32_t> dp(std::size_t(full) + 1, 0);
    dp[std::uint32_t{1} << src] = std::uint32_t{1} << src;
    for (std::uint32_t s = 1; s <= full; ++s) {
      if (!(s >> src & 1) || std::popcount(s) < 2) continue;
      std::uint32_t ends = 0;
      for (std::uint32_t rest = s ^ (std::uint32_t{1} << src); rest;) {
        int v = std::countr_zero(rest);
        rest &= rest - 1;
        if (dp[s ^ (std::uint32_t{1} << v)] & adj[v]) ends |= std::uint32_t{1} << v;
      }
      dp[s] = ends;
    }
    return dp;
  };
  auto dp_p = reach_from(p);

  std::vector<Edge> out;
  if (n >= 3 && (dp_p[full] >> q & 1)) {
    // G + e already has a Hamilton cycle through e (a Hamilton p,q-path plus
    // e), so every pair qualifies.
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b) out.push_back({a, b});
    return out;
  }
  auto dp_q = reach_from(q);

  // pair_ham marks endpoint pairs of Hamilton paths through e; adding that
  // pair closes a Hamilton cycle through e.
  std::vector<char> pair_ham(std::size_t(n) * n, 0);
  if (n >= 3) {
    for (std::uint32_t s = 1; s <= full; ++s) {
      if (!(s >> p & 1) || (s >> q & 1)) continue;
      std::uint32_t a_ends = dp_p[s];
      if (!a_ends) continue;
      std::uint32_t b_ends = dp_q[full ^ s];
      if (!b_ends) continue;
      for (std::uint32_t ra = a_ends; ra;) {
        int a = std::countr_zero(ra);
        ra &= ra - 1;
        for (std::uint32_t rb = b_ends; rb;) {
          int b = std::countr_zero(rb);
          rb &= rb - 1;
          pair_ham[std::size_t(a) * n + b] = 1;
          pair_ham[std::size_t(b) * n + a] = 1;
        }
      }
    }
  }

  // fa[y][S]: most vertices of a path ending at y inside S (subset maximum
  // over ends_any).
  std::vector<std::vector<std::uint8_t>> fa(
      n, std::vector<std::uint8_t>(std::size_t(full) + 1, 0));
  for (std::uint32_t s = 1; s <= full; ++s) {
    auto pc = std::uint8_t(std::popcount(s));
    for (std::uint32_t r = ends_any[s]; r;) {
      int v = std::countr_zero(r);
      r &= r - 1;
      fa[v][s] = pc;
    }
  }
  for (int y = 0; y < n; ++y) {
    auto& t = fa[y];
    for (int i = 0; i < n; ++i) {
      std::uint32_t bit = std::uint32_t{1} << i;
      for (std::uint32_t s = bit; s <= full; ++s)
        if (s & bit) t[s] = std::max(t[s], t[s ^ bit]);
    }
  }

  // best[a][b]: most vertices of a path containing e that a new edge ab can
  // carry, split at ab into a path through e ending at a and a disjoint path
  // ending at b.
  std::vector<int> best(std::size_t(n) * n, 0);
  for (std::uint32_t s = 1; s <= full; ++s) {
    std::uint32_t a_ends = ends_thru[s];
    if (!a_ends) continue;
    int pc = std::popcount(s);
    std::uint32_t rest = full ^ s;
    for (std::uint32_t ra = a_ends; ra;) {
      int a = std::countr_zero(ra);
      ra &= ra - 1;
      for (std::uint32_t rb = rest; rb;) {
        int b = std::countr_zero(rb);
        rb &= rb - 1;
        int len = pc + fa[b][rest];
        int& slot = best[std::size_t(a) * n + b];
        if (len > slot) slot = len;
      }
    }
  }

  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      bool boosts = pair_ham[std::size_t(a) * n + b] ||
                    std::max(best[std::size_t(a) * n + b],
                             best[std::size_t(b) * n + a]) > lv;
      if (boosts) out.push_back({a, b});
    }
  return out;
}

namespace {

enum class GrowKind { Ham, Stable, Budget };

struct GrowResult {
  GrowKind kind = GrowKind::Stable;
  std::vector<int> path;  // Ham: spanning path with adjacent endpoints;
                          // otherwise the (possibly extended) base path
};

// One round of rotation-extension: breadth-first closure of `base` under
// rotations at either end (the other end and e stay fixed), deduplicated by
// endpoint pair. Whenever an endpoint sees a vertex off the path the lowest
// such neighbour is attached and the closure restarts; a spanning path with
// adjacent endpoints ends the round. Each materialized rotation costs one
// unit of budget.
auto grow(const UGraph& h, std::vector<int> base, Edge e, long long& budget,
          long long& rotations) -> GrowResult {
  int n = h.n();
  std::vector<char> visited(std::size_t(n) * n, 0);
  std::vector<int> pos(n, -1);
  std::vector<std::vector<int>> queue;
  Bitset outside(n);
  auto key = [n](int a, int b) {
    return std::size_t(std::min(a, b)) * n + std::max(a, b);
  };

  for (bool restart = true; restart;) {
    restart = false;
    outside.set_all();
    for (int v : base) outside.reset(v);
    std::fill(visited.begin(), visited.end(), 0);
    queue.clear();
    queue.push_back(base);
    visited[key(base.front(), base.back())] = 1;

    for (std::size_t head = 0; head < queue.size(); ++head) {
      auto q = queue[head];  // copy: the queue reallocates while we push
      int l = int(q.size()) - 1;
      if (l + 1 == n && h.has_edge(q.front(), q.back()))
        return {GrowKind::Ham, std::move(q)};

      auto back_fresh = h.nbrs(q.back()) & outside;
      auto front_fresh = h.nbrs(q.front()) & outside;
      int wb = back_fresh.first(), wf = front_fresh.first();
      if (wb >= 0 || wf >= 0) {
        bool at_back = wb >= 0 && (wf < 0 || wb <= wf);
        if (!at_back) std::reverse(q.begin(), q.end());
        q.push_back(at_back ? wb : wf);
        base = std::move(q);
        restart = true;
        break;
      }

      for (int k = 0; k <= l; ++k) pos[q[k]] = k;
      std::vector<std::array<int, 3>> cand;  // endpoint, rotated end, pivot index
      h.nbrs(q[l]).for_each([&](int u) {
        int i = pos[u];
        if (i < 0 || i >= l - 1) return;
        if (norm({q[i], q[i + 1]}) == e) return;
        cand.push_back({q[i + 1], 0, i});
      });
      h.nbrs(q[0]).for_each([&](int u) {
        int j = pos[u];
        if (j < 2) return;  // off the path, u_0 itself, or degenerate
        if (norm({q[j - 1], q[j]}) == e) return;
        cand.push_back({q[j - 1], 1, j});
      });
      for (int k = 0; k <= l; ++k) pos[q[k]] = -1;
      std::sort(cand.begin(), cand.end());

      for (auto [w, side, idx] : cand) {
        auto vk = key(side == 0 ? q.front() : q.back(), w);
        if (visited[vk]) continue;
        if (budget <= 0) return {GrowKind::Budget, std::move(base)};
        --budget;
        ++rotations;
        visited[vk] = 1;
        std::vector<int> next;
        next.reserve(q.size());
        if (side == 0) {
          next.insert(next.end(), q.begin(), q.begin() + idx + 1);
          next.insert(next.end(), q.rbegin(), q.rbegin() + (l - idx));
        } else {
          for (int k = l; k >= idx; --k) next.push_back(q[k]);
          next.insert(next.end(), q.begin(), q.begin() + idx);
        }
        assert(contains_edge(next, e));
        queue.push_back(std::move(next));
      }
    }
  }
  return {GrowKind::Stable, std::move(base)};
}

// The spanning path plus the edge between its endpoints is a Hamilton cycle
// containing e; dropping e leaves the Hamilton path between e's endpoints.
auto cut_cycle(const std::vector<int>& q, Edge e, int x) -> std::vector<int> {
  int n = int(q.size());
  int i = -1;
  for (int k = 0; k + 1 < n; ++k)
    if (norm({q[k], q[k + 1]}) == e) {
      i = k;
      break;
    }
  assert(i >= 0);
  std::vector<int> out;
  out.reserve(n);
  for (int k = i; k >= 0; --k) out.push_back(q[k]);
  for (int k = n - 1; k > i; --k) out.push_back(q[k]);
  if (out.front() != x) std::reverse(out.begin(), out.end());
  return out;
}

}  // namespace

auto posa_ham_path(const UGraph& g0, int x, int y,
                   const std::vector<Edge>& sprinkle, long long budget)
    -> PosaResult {
  int n = g0.n();
  require_input(x >= 0 && x < n && y >= 0 && y < n,
                "posa_ham_path: endpoint out of range");
  require_input(x != y, "posa_ham_path: endpoints must differ");
  require_input(budget >= 0, "posa_ham_path: negative budget");

  PosaResult res;
  Edge e = norm({x, y});
  auto absorb = [&](UGraph& h) {
    auto f = sprinkle[res.consumed++];
    require_input(f.first >= 0 && f.first < n && f.second >= 0 &&
                      f.second < n && f.first != f.second,
                  "posa_ham_path: malformed sprinkled edge");
    if (!h.has_edge(f.first, f.second)) h.add_edge(f.first, f.second);
    return norm(f);
  };

  UGraph h = g0;
  if (n == 2) {
    // The only Hamilton x,y-path on two vertices is the edge xy itself, so
    // the artificial e cannot stand in for it.
    bool have = g0.has_edge(x, y);
    while (!have && res.consumed < int(sprinkle.size())) have = absorb(h) == e;
    if (have) {
      res.ok = true;
      res.path = {x, y};
    } else {
      res.message = "stream exhausted";
    }
    return res;
  }

  if (!h.has_edge(x, y)) h.add_edge(x, y);
  std::vector<int> base{x, y};
  for (;;) {
    auto g = grow(h, std::move(base), e, budget, res.rotations);
    if (g.kind == GrowKind::Ham) {
      res.ok = true;
      res.path = cut_cycle(g.path, e, x);
      return res;
    }
    if (g.kind == GrowKind::Budget) {
      res.message = "rotation budget exhausted";
      return res;
    }
    base = std::move(g.path);
    if (res.consumed >= int(sprinkle.size())) {
      res.message = "stream exhausted";
      return res;
    }
    absorb(h);
  }
}

}  // namespace orient
