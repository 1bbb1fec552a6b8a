// Exceptional-cover machinery: a calming hierarchy over the badly-behaved
// sets, doubled Hall matchings on level-stratified auxiliary graphs, and the
// greedy two-sided growth realizing one oriented slice per covered vertex.
#include "orient/cover.hpp"

#include <algorithm>
#include <array>
#include <cassert>
#include <cmath>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <utility>

#include "orient/errors.hpp"

namespace orient {

namespace {

auto member_set(int n, const std::vector<int>& verts, const char* what) -> Bitset {
  Bitset s(n);
  for (auto v : verts) {
    require_input(v >= 0 && v < n, std::string(what) + " vertex out of range");
    require_input(!s.test(v), std::string(what) + " contains a duplicate vertex");
    s.set(v);
  }
  return s;
}

// First-appearance rank behind the stratified edge rule: reservoir vertices
// rank -1, B-vertices one below their hierarchy level, X above everything.
// A vertex may only lean on strictly lower-ranked images, which is what makes
// the level index drop along every cover path.
auto appearance_rank(const CoverInstance& inst, const Hierarchy& h) -> std::vector<int> {
  std::vector<int> rank(inst.d.n(), -1);
  for (auto v : inst.b_plus) rank[v] = h.first_level[v] - 1;
  for (auto v : inst.b_minus) rank[v] = h.first_level[v] - 1;
  for (auto v : inst.x) rank[v] = h.r;
  return rank;
}

struct AuxGraph {
  std::vector<int> lefts;               // X u B, ascending
  std::vector<std::vector<int>> adj;    // per host vertex: A-images then B-images
};

// The sign's auxiliary bipartite graph. Dir::Out pairs X u B with B+ u A+
// along out-edges, Dir::In with B- u A- along in-edges; B-images must rank
// strictly below the leaning vertex. Reservoir images come first in each
// candidate list so the matching and the growth both prefer them.
auto aux_graph(const CoverInstance& inst, const Hierarchy& h, Dir sign) -> AuxGraph {
  const int n = inst.d.n();
  const auto rank = appearance_rank(inst, h);
  const auto cb = member_set(n, sign == Dir::Out ? inst.b_plus : inst.b_minus, "cover set B");
  const auto ca = member_set(n, sign == Dir::Out ? inst.a_plus : inst.a_minus, "cover set A");
  AuxGraph aux;
  aux.adj.assign(n, {});
  const auto xs = member_set(n, inst.x, "cover set X");
  const auto bp = member_set(n, inst.b_plus, "cover set B+");
  const auto bm = member_set(n, inst.b_minus, "cover set B-");
  aux.lefts = (xs | bp | bm).to_vector();
  for (auto v : aux.lefts) {
    std::vector<int> behind;
    inst.d.nbrs(v, sign).for_each([&](int y) {
      if (ca.test(y))
        aux.adj[v].push_back(y);
      else if (cb.test(y) && rank[y] < rank[v])
        behind.push_back(y);
    });
    aux.adj[v].insert(aux.adj[v].end(), behind.begin(), behind.end());
  }
  return aux;
}

}  // namespace

auto validate_cover_instance(const CoverInstance& inst) -> void {
  const int n = inst.d.n();
  require_input(n >= 3, "cover instance needs at least 3 host vertices");
  const auto xs = member_set(n, inst.x, "cover set X");
  const auto bp = member_set(n, inst.b_plus, "cover set B+");
  const auto bm = member_set(n, inst.b_minus, "cover set B-");
  const auto ap = member_set(n, inst.a_plus, "cover set A+");
  const auto am = member_set(n, inst.a_minus, "cover set A-");
  Bitset acc(n);
  for (const Bitset* s : {&xs, &bp, &bm, &ap, &am}) {
    require_input(!acc.intersects(*s), "cover sets must be pairwise disjoint");
    acc |= *s;
  }
  require_input(inst.deg_threshold > 0, "cover degree threshold must be positive");
  const int k = int(inst.slice_start.size());
  require_input(int(inst.assign.size()) == k, "assignment size must match the slice count");
  require_input(k == xs.count() + bp.count() + bm.count(),
                "need exactly one slice per vertex of X u B");
  if (k > 0) {
    const int np = inst.pattern.n();
    require_input(inst.slice_len >= 2 && inst.slice_len % 2 == 0,
                  "slice length must be a positive even edge count");
    require_input(inst.slice_len + 1 <= np, "slice does not fit the pattern");
    std::vector<char> used(np, 0);
    for (auto s : inst.slice_start) {
      require_input(s >= 0 && s < np, "slice start out of range");
      for (int t = 0; t <= inst.slice_len; ++t) {
        const int pos = (s + t) % np;
        require_input(!used[pos], "slices overlap on the pattern");
        used[pos] = 1;
      }
    }
  }
  Bitset assigned(n);
  std::vector<char> slice_taken(k, 0);
  for (auto [v, j] : inst.assign) {
    require_input(v >= 0 && v < n && (xs.test(v) || bp.test(v) || bm.test(v)),
                  "assignment vertex is not in X u B");
    require_input(!assigned.test(v), "assignment repeats a vertex");
    assigned.set(v);
    require_input(j >= 0 && j < k, "assignment slice index out of range");
    require_input(!slice_taken[j], "assignment repeats a slice");
    slice_taken[j] = 1;
  }
}

auto build_hierarchy(const CoverInstance& inst, int level_budget) -> Hierarchy {
  validate_cover_instance(inst);
  const int n = inst.d.n();
  if (level_budget <= 0) {
    const double ln = std::log(double(n));
    level_budget = int(std::ceil(4.0 * ln / std::log(ln)));
  }
  const auto bp = member_set(n, inst.b_plus, "cover set B+");
  const auto bm = member_set(n, inst.b_minus, "cover set B-");
  const auto ap = member_set(n, inst.a_plus, "cover set A+");
  const auto am = member_set(n, inst.a_minus, "cover set A-");
  const Bitset ball = bp | bm;

  Hierarchy h;
  h.first_level.assign(n, -1);
  h.levels_plus.push_back({});
  h.levels_minus.push_back({});
  Bitset cur_p(n), cur_m(n);
  for (int i = 1;; ++i) {
    Bitset left = ball;
    left.subtract(cur_p | cur_m);
    if (left.none()) {
      h.ok = true;
      h.r = i - 1;
      return h;
    }
    if (i > level_budget) {
      h.uncovered = left.to_vector();
      std::ostringstream msg;
      msg << "hierarchy level budget " << level_budget << " exhausted with "
          << h.uncovered.size() << " vertices uncovered";
      h.message = msg.str();
      return h;
    }
    const Bitset sup_p = cur_p | ap;
    const Bitset sup_m = cur_m | am;
    // A vertex calms down once it sees enough already-calm or reservoir
    // support on both sides; the same joint condition admits both signs.
    auto calm = [&](int v) {
      return degree(inst.d, v, Dir::Out, sup_p) >= inst.deg_threshold &&
             degree(inst.d, v, Dir::In, sup_m) >= inst.deg_threshold;
    };
    Bitset next_p = cur_p, next_m = cur_m;
    bp.for_each([&](int v) {
      if (!cur_p.test(v) && calm(v)) next_p.set(v);
    });
    bm.for_each([&](int v) {
      if (!cur_m.test(v) && calm(v)) next_m.set(v);
    });
    // supports only grow, so equal counts mean a fixpoint
    if (next_p.count() + next_m.count() == cur_p.count() + cur_m.count()) {
      h.uncovered = left.to_vector();
      std::ostringstream msg;
      msg << "hierarchy reached a fixpoint with " << h.uncovered.size()
          << " vertices uncovered";
      h.message = msg.str();
      return h;
    }
    Bitset newly = next_p | next_m;
    newly.subtract(cur_p | cur_m);
    newly.for_each([&](int v) { h.first_level[v] = i; });
    h.levels_plus.push_back(next_p.to_vector());
    h.levels_minus.push_back(next_m.to_vector());
    cur_p = next_p;
    cur_m = next_m;
  }
}

auto hall_double_matching(const CoverInstance& inst, const Hierarchy& h,
                          Dir sign) -> DoubleMatching {
  validate_cover_instance(inst);
  const int n = inst.d.n();
  require_input(h.ok, "hall_double_matching needs a completed hierarchy");
  require_input(int(h.first_level.size()) == n, "hierarchy does not match the instance");
  const auto aux = aux_graph(inst, h, sign);
  const int groups = int(aux.lefts.size());

  // Kuhn augmentation on the demand-2 split: split node 2t+c is copy c of
  // aux.lefts[t], and both copies share the original's candidate list.
  std::vector<int> match_left(2 * groups, -1), match_right(n, -1);
  std::vector<char> seen(n, 0);
  std::function<bool(int)> augment = [&](int node) -> bool {
    for (auto y : aux.adj[aux.lefts[node / 2]]) {
      if (seen[y]) continue;
      seen[y] = 1;
      if (match_right[y] < 0 || augment(match_right[y])) {
        match_right[y] = node;
        match_left[node] = y;
        return true;
      }
    }
    return false;
  };

  DoubleMatching out;
  out.g1.assign(n, -1);
  out.g2.assign(n, -1);
  for (int node = 0; node < 2 * groups; ++node) {
    std::fill(seen.begin(), seen.end(), 0);
    if (augment(node)) continue;
    // A failed search certifies a Hall violation: every seen image is
    // matched and its partner was explored in full, so the originals behind
    // the explored split nodes form a set U with |N(U)| < 2|U|.
    Bitset deficient(n);
    deficient.set(aux.lefts[node / 2]);
    for (int y = 0; y < n; ++y)
      if (seen[y]) deficient.set(aux.lefts[match_right[y] / 2]);
    out.deficient = deficient.to_vector();
    Bitset images(n);
    for (auto v : out.deficient)
      for (auto y : aux.adj[v]) images.set(y);
    assert(images.count() < 2 * int(out.deficient.size()));
    std::ostringstream msg;
    msg << "auxiliary matching is deficient: " << out.deficient.size()
        << " vertices share only " << images.count() << " eligible images";
    out.message = msg.str();
    return out;
  }
  for (int t = 0; t < groups; ++t) {
    // copies share one candidate list, so the slot order is a free choice;
    // normalize it away from the augmentation history
    const auto [lo, hi] = std::minmax(match_left[2 * t], match_left[2 * t + 1]);
    out.g1[aux.lefts[t]] = lo;
    out.g2[aux.lefts[t]] = hi;
  }
  out.ok = true;
  return out;
}

auto build_cover_paths(const CoverInstance& inst, const Hierarchy& h,
                       const DoubleMatching& match_plus,
                       const DoubleMatching& match_minus) -> CoverResult {
  validate_cover_instance(inst);
  const int n = inst.d.n();
  require_input(h.ok, "build_cover_paths needs a completed hierarchy");
  require_input(int(h.first_level.size()) == n, "hierarchy does not match the instance");
  require_input(match_plus.ok && match_minus.ok, "build_cover_paths needs both matchings");
  require_input(int(match_plus.g1.size()) == n && int(match_minus.g1.size()) == n,
                "matching does not match the instance");
  const int np = inst.pattern.n();
  const auto xs = member_set(n, inst.x, "cover set X");
  const Bitset in_a = member_set(n, inst.a_plus, "cover set A+") |
                      member_set(n, inst.a_minus, "cover set A-");
  std::vector<int> slice_of(n, -1);
  for (auto [v, j] : inst.assign) slice_of[v] = j;

  // Grow one slice outward from its midpoint. Each step realizes the next
  // slice edge with an image of the current endpoint for the direction that
  // edge demands; a reservoir image closes the side.
  auto grow_one = [&](int v) -> std::optional<CoverPath> {
    const int s = inst.slice_start[slice_of[v]];
    CoverPath q;
    q.v = v;
    q.slice = slice_of[v];
    q.lo = q.hi = s + inst.slice_len / 2;
    q.verts = {v};
    Bitset on_path(n);
    on_path.set(v);
    for (int side : {+1, -1}) {
      while (true) {
        const int u = side > 0 ? q.verts.back() : q.verts.front();
        if (in_a.test(u)) break;
        const int next_pos = side > 0 ? q.hi + 1 : q.lo - 1;
        if (next_pos < s || next_pos > s + inst.slice_len) return std::nullopt;
        // On the right a forward slice edge leaves u, so the new vertex is
        // an out-image of u; every other case mirrors.
        const bool fwd = inst.pattern.forward((side > 0 ? q.hi : next_pos) % np);
        const auto& m = (side > 0) == fwd ? match_plus : match_minus;
        std::array<int, 2> cand{m.g1[u], m.g2[u]};
        assert(cand[0] >= 0 && cand[1] >= 0);
        // reservoir images first so the side can close, lower ids on ties
        std::sort(cand.begin(), cand.end(), [&](int a, int b) {
          return std::pair(!in_a.test(a), a) < std::pair(!in_a.test(b), b);
        });
        int w = -1;
        for (auto c : cand)
          if (!on_path.test(c)) {
            w = c;
            break;
          }
        if (w < 0) return std::nullopt;
        on_path.set(w);
        if (side > 0) {
          q.verts.push_back(w);
          ++q.hi;
        } else {
          q.verts.insert(q.verts.begin(), w);
          --q.lo;
        }
      }
    }
    return q;
  };

  CoverResult out;
  const auto targets = (xs | member_set(n, inst.b_plus, "cover set B+") |
                        member_set(n, inst.b_minus, "cover set B-"))
                           .to_vector();
  std::vector<CoverPath> grown;
  grown.reserve(targets.size());
  std::vector<int> grown_at(n, -1);
  for (auto v : targets) {
    auto q = grow_one(v);
    if (!q) {
      out.failed_vertex = v;
      std::ostringstream msg;
      msg << "cover path for vertex " << v << " stalled before reaching the reservoirs";
      out.message = msg.str();
      return out;
    }
    grown_at[v] = int(grown.size());
    grown.push_back(std::move(*q));
  }

  // Keep every X path, then walk levels r..1 keeping paths of first-time
  // vertices not already covered; colliding selections are a failure.
  Bitset covered(n);
  auto select = [&](int v) -> bool {
    const CoverPath& q = grown[grown_at[v]];
    for (auto w : q.verts)
      if (covered.test(w)) {
        out.failed_vertex = v;
        std::ostringstream msg;
        msg << "selected cover paths collide at vertex " << w;
        out.message = msg.str();
        return false;
      }
    for (auto w : q.verts) covered.set(w);
    out.paths.push_back(q);
    return true;
  };
  for (auto v : targets)
    if (xs.test(v) && !select(v)) return out;
  for (int i = h.r; i >= 1; --i)
    for (auto v : targets)
      if (h.first_level[v] == i && !covered.test(v)) {
        if (!select(v)) return out;
        out.b_bar.push_back(v);
      }
  std::sort(out.b_bar.begin(), out.b_bar.end());

  for (auto v : targets)
    if (!covered.test(v)) {
      out.failed_vertex = v;
      std::ostringstream msg;
      msg << "vertex " << v << " is on no selected cover path";
      out.message = msg.str();
      return out;
    }
  // replay each selected portion against its slice orientation
  for (const auto& q : out.paths) {
    for (int t = 0; t + 1 < int(q.verts.size()); ++t) {
      const bool fwd = inst.pattern.forward((q.lo + t) % np);
      const int a = q.verts[t], b = q.verts[t + 1];
      if (fwd ? !inst.d.has_edge(a, b) : !inst.d.has_edge(b, a)) {
        out.failed_vertex = q.v;
        std::ostringstream msg;
        msg << "cover path for vertex " << q.v << " disagrees with its slice orientation";
        out.message = msg.str();
        return out;
      }
    }
    if (!in_a.test(q.verts.front()) || !in_a.test(q.verts.back())) {
      out.failed_vertex = q.v;
      std::ostringstream msg;
      msg << "cover path for vertex " << q.v << " ends outside the reservoirs";
      out.message = msg.str();
      return out;
    }
  }
  out.ok = true;
  return out;
}

}  // namespace orient
