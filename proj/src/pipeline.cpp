// Full-cycle assembly (partition, bad set, slice cover, gap connection,
// rotation-search closing path) and the triple-contraction adapter that
// reduces the conditioned random-process setting to that assembly.
#include "orient/pipeline.hpp"

#include <algorithm>
#include <array>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <utility>

#include "orient/cover.hpp"
#include "orient/errors.hpp"
#include "orient/extend.hpp"
#include "orient/posa.hpp"
#include "orient/pseudo.hpp"

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

auto fail(EmbedReport& r, const char* stage, std::string message) -> EmbedReport {
  r.ok = false;
  r.stage = stage;
  r.message = std::move(message);
  return std::move(r);
}

// Slice layout in coordinates relative to the window start. Pinned slices are
// centred on their pins; slices for unpinned vertices are packed after the
// window end (or after the last pinned slice), consecutive slices one minimum
// connection length apart.
struct Layout {
  int slice_len = 0;
  std::vector<int> rel_start;               // per slice, window-relative start
  std::vector<int> abs_start;               // per slice, wrapped pattern position
  std::vector<std::pair<int, int>> assign;  // (vertex, slice)
  std::string error;                        // nonempty when the span is infeasible
};

auto lay_slices(int n, int window_start, int window_len,
                const std::vector<std::pair<int, int>>& rel_pins,
                const std::vector<int>& unpinned, int slice_len, int ell0)
    -> Layout {
  Layout lay;
  lay.slice_len = slice_len;
  for (auto [centre, v] : rel_pins) {
    const int start = centre - slice_len / 2;
    if (!lay.rel_start.empty()) {
      const int prev_end = lay.rel_start.back() + slice_len;
      require_input(start - prev_end >= ell0,
                    "pinned positions too close for the slice layout");
    }
    lay.assign.emplace_back(v, int(lay.rel_start.size()));
    lay.rel_start.push_back(start);
  }
  int cursor_end = window_len;
  if (!lay.rel_start.empty())
    cursor_end = std::max(cursor_end, lay.rel_start.back() + slice_len);
  for (auto v : unpinned) {
    const int start = cursor_end + ell0;
    lay.assign.emplace_back(v, int(lay.rel_start.size()));
    lay.rel_start.push_back(start);
    cursor_end = start + slice_len;
  }
  const int span = cursor_end - lay.rel_start.front();
  if (span > n / 2) {
    std::ostringstream os;
    os << "slice layout spans " << span << " positions, more than half the "
       << "cycle; too many cover targets for this size";
    lay.error = os.str();
    return lay;
  }
  for (auto r : lay.rel_start)
    lay.abs_start.push_back(((window_start + r) % n + n) % n);
  return lay;
}

}  // namespace

auto sample_sprinkle(int n, const PipelineParams& params, RngStream& rng)
    -> SprinkleStreams {
  SprinkleStreams s;
  s.walk = sample_gnp(n, sprinkle_connect_p(params, n), rng);
  s.boost = sample_gnp(n, sprinkle_posa_p(params, n), rng);
  return s;
}

auto replay_graph(const Digraph& host, const UGraph& walk_used,
                  const UGraph& boost_used) -> Digraph {
  require_input(walk_used.n() == host.n() && boost_used.n() == host.n(),
                "replay parts must share the host vertex set");
  return graph_union(graph_union(host, biorient(walk_used)),
                     biorient(boost_used));
}

auto embed_cycle(const Digraph& d0, const std::vector<int>& x,
                 const OrientationPattern& c, int window_start, int window_len,
                 const std::vector<Pin>& pins, const UGraph& sprinkle_walk,
                 const UGraph& sprinkle_boost, const PipelineParams& params,
                 RngStream& rng) -> EmbedReport {
  EmbedReport rep;
  const int n = d0.n();
  require_input(n >= 3, "assembly needs at least 3 host vertices");
  require_input(c.n() == n, "pattern must span the host digraph");
  require_input(sprinkle_walk.n() == n && sprinkle_boost.n() == n,
                "sprinkle streams must live on the host vertex set");
  validate_params(params);
  const auto xs = member_set(n, x, "exceptional set X");
  require_input(window_start >= 0 && window_start < n,
                "window start out of range");
  require_input(window_len >= 0 && window_len <= n / 8,
                "window longer than n/8");
  require_input(pins.size() == x.size(),
                "need exactly one pin per exceptional vertex");

  const int ell0 = min_connect_length(params, n);
  const int spacing = 10 * ell0;
  std::vector<char> pos_used(n, 0);
  Bitset pinned(n);
  std::vector<std::pair<int, int>> rel_pins;  // (relative centre, vertex)
  for (auto [pos, v] : pins) {
    require_input(pos >= 0 && pos < n, "pin position out of range");
    require_input(!pos_used[pos], "pins repeat a position");
    pos_used[pos] = 1;
    require_input(v >= 0 && v < n && xs.test(v),
                  "pin vertex is not in the exceptional set");
    require_input(!pinned.test(v), "pins repeat a vertex");
    pinned.set(v);
    const int rel = ((pos - window_start) % n + n) % n;
    require_input(rel <= window_len, "pin position outside the window");
    rel_pins.emplace_back(rel, v);
  }
  std::sort(rel_pins.begin(), rel_pins.end());
  for (std::size_t i = 1; i < rel_pins.size(); ++i)
    require_input(rel_pins[i].first - rel_pins[i - 1].first >= spacing,
                  "pinned positions closer than the params' spacing");

  // Three-way partition of the non-exceptional vertices.
  const auto part = partition_exceptional(d0, x, params, rng);
  if (!part.ok) return fail(rep, "partition", part.message);
  const auto& v0 = part.parts[0];
  const auto& v1 = part.parts[1];
  const auto& v2 = part.parts[2];

  // Bad set, extracted from the walk stream's underlying graph. The whole
  // stream is read from here on, so it counts as consumed.
  rep.walk_used = sprinkle_walk;
  rep.boost_used = UGraph(n);
  const auto bad = find_bad_set(sprinkle_walk, v0, params);
  if (!bad.ok) return fail(rep, "bad-set", bad.message);
  rep.bad_set_size = int(bad.b.size());
  const auto bset = member_set(n, bad.b, "bad set");
  const auto c1 = member_set(n, v1, "partition class 1");
  const auto c2 = member_set(n, v2, "partition class 2");

  // Cover targets: bad vertices inside the two reservoir classes become
  // B+/B-, the rest travel with X; every target outside X needs a free slice.
  std::vector<int> x_cov = x, b_plus, b_minus, unpinned;
  for (auto b : bad.b) {
    if (c1.test(b))
      b_plus.push_back(b);
    else if (c2.test(b))
      b_minus.push_back(b);
    else if (!xs.test(b))
      x_cov.push_back(b);
    if (!xs.test(b)) unpinned.push_back(b);
  }
  std::sort(x_cov.begin(), x_cov.end());
  std::vector<int> a_plus, a_minus;
  for (auto v : v1)
    if (!bset.test(v)) a_plus.push_back(v);
  for (auto v : v2)
    if (!bset.test(v)) a_minus.push_back(v);

  // Slice width: one configured half-slice on each side of the target when
  // the connector budget allows. Paths grow at least one position per side,
  // so a gap between consecutive portions is at most slice_len + ell0 - 2;
  // narrow the slices until the worst-case gap sum fits the n/8 budget.
  const int portions = int(rel_pins.size()) + int(unpinned.size());
  int slice_len = 2 * cover_slice_half(params, n);
  if (portions >= 2) {
    int fit = (n / 8) / (portions - 1) - ell0 + 2;
    fit -= fit % 2;
    slice_len = std::max(2, std::min(slice_len, fit));
  }

  auto lay = lay_slices(n, window_start, window_len, rel_pins, unpinned,
                        slice_len, ell0);
  if (!lay.error.empty()) return fail(rep, "cover", lay.error);

  CoverInstance inst;
  inst.d = d0;
  inst.x = x_cov;
  inst.b_plus = b_plus;
  inst.b_minus = b_minus;
  inst.a_plus = a_plus;
  inst.a_minus = a_minus;
  inst.pattern = c;
  inst.slice_start = lay.abs_start;
  inst.slice_len = slice_len;
  inst.assign = lay.assign;
  inst.deg_threshold = cover_degree(params, n);

  const auto hier = build_hierarchy(inst);
  if (!hier.ok) return fail(rep, "cover", hier.message);
  const auto match_plus = hall_double_matching(inst, hier, Dir::Out);
  if (!match_plus.ok) return fail(rep, "cover", match_plus.message);
  const auto match_minus = hall_double_matching(inst, hier, Dir::In);
  if (!match_minus.ok) return fail(rep, "cover", match_minus.message);
  const auto cov = build_cover_paths(inst, hier, match_plus, match_minus);
  if (!cov.ok) return fail(rep, "cover", cov.message);
  rep.cover_paths = int(cov.paths.size());

  // Clockwise order of the kept paths, by the relative position of the
  // portion each one realizes.
  struct Placed {
    int glo = 0, ghi = 0;
    const CoverPath* path = nullptr;
  };
  std::vector<Placed> order;
  for (const auto& q : cov.paths) {
    Placed pl;
    pl.glo = lay.rel_start[q.slice] + (q.lo - lay.abs_start[q.slice]);
    pl.ghi = lay.rel_start[q.slice] + (q.hi - lay.abs_start[q.slice]);
    pl.path = &q;
    order.push_back(pl);
  }
  std::sort(order.begin(), order.end(),
            [](const Placed& a, const Placed& b) { return a.glo < b.glo; });

  // Gap lengths between consecutive portions; each gap is one connection.
  std::vector<std::pair<int, int>> gap_pairs;
  std::vector<int> gap_lens;
  long long gap_total = 0;
  for (std::size_t i = 0; i + 1 < order.size(); ++i) {
    const int len = order[i + 1].glo - order[i].ghi;
    if (len < ell0) {
      std::ostringstream os;
      os << "gap between cover portions is " << len
         << " positions, below the minimum connection length " << ell0;
      return fail(rep, "connect", os.str());
    }
    gap_pairs.emplace_back(order[i].path->verts.back(),
                           order[i + 1].path->verts.front());
    gap_lens.push_back(len);
    gap_total += len;
  }
  if (gap_total > n / 8) {
    std::ostringstream os;
    os << "gap lengths sum to " << gap_total << ", above the n/8 budget "
       << n / 8;
    return fail(rep, "connect", os.str());
  }

  ConnectResult con;
  if (!gap_pairs.empty()) {
    con = connect_pairs(sprinkle_walk, v0, bad.b, gap_pairs, gap_lens, params,
                        rng);
    if (!con.ok) return fail(rep, "connect", con.message);
    rep.pairs_connected = int(con.paths.size());
  }

  // Assemble the covered arc: slice portions, then the connecting paths in
  // the gaps. Every connecting path runs with the clockwise direction and is
  // usable in both orientations once bi-oriented.
  auto abs_pos = [&](int rel) { return ((window_start + rel) % n + n) % n; };
  Embedding emb(n, -1);
  for (const auto& pl : order)
    for (int t = 0; t <= pl.ghi - pl.glo; ++t)
      emb[abs_pos(pl.glo + t)] = pl.path->verts[t];
  for (std::size_t i = 0; i < gap_pairs.size(); ++i)
    for (int t = 1; t < gap_lens[i]; ++t)
      emb[abs_pos(order[i].ghi + t)] = con.paths[i][t];

  const int glo_first = order.front().glo;
  const int ghi_last = order.back().ghi;
  const int x1 = order.front().path->verts.front();
  const int yk = order.back().path->verts.back();

  // Residual graph: everything off the covered arc, plus its two endpoints.
  Bitset on_arc(n);
  for (int rel = glo_first; rel <= ghi_last; ++rel) {
    const int v = emb[abs_pos(rel)];
    assert(v >= 0);
    on_arc.set(v);
  }
  std::vector<int> rvec;
  std::vector<int> idx(n, -1);
  for (int v = 0; v < n; ++v)
    if (!on_arc.test(v) || v == x1 || v == yk) {
      idx[v] = int(rvec.size());
      rvec.push_back(v);
    }
  const int m = int(rvec.size());
  if (m != n - (ghi_last - glo_first) + 1)
    return fail(rep, "validate", "covered arc repeats a vertex");

  UGraph g0(m);
  for (int j = 0; j < m; ++j)
    sprinkle_walk.nbrs(rvec[j]).for_each([&](int w) {
      if (w > rvec[j] && idx[w] >= 0) g0.add_edge(j, idx[w]);
    });
  std::vector<Edge> stream;
  for (auto [u, w] : sprinkle_boost.edges())
    if (idx[u] >= 0 && idx[w] >= 0) stream.push_back({idx[u], idx[w]});
  rng.shuffle(stream);

  const auto posa = posa_ham_path(g0, idx[yk], idx[x1], stream);
  rep.posa_consumed = posa.consumed;
  rep.posa_rotations = posa.rotations;
  for (int j = 0; j < posa.consumed; ++j)
    rep.boost_used.add_edge(rvec[stream[j].first], rvec[stream[j].second]);
  if (!posa.ok) return fail(rep, "posa", posa.message);
  if (int(posa.path.size()) != m || posa.path.front() != idx[yk] ||
      posa.path.back() != idx[x1])
    return fail(rep, "validate", "rotation search returned a malformed path");

  for (int t = 1; t + 1 < m; ++t)
    emb[abs_pos(ghi_last + t)] = rvec[posa.path[t]];

  const auto replay = replay_graph(d0, rep.walk_used, rep.boost_used);
  if (auto err = embedding_error(replay, c, emb, pins))
    return fail(rep, "validate", *err);
  rep.ok = true;
  rep.embedding = std::move(emb);
  return rep;
}

// --- the process adapter -----------------------------------------------------

auto process_checkpoint(int n, int j) -> long long {
  require_input(n >= 3, "the conditioning schedule needs n >= 3");
  require_input(j >= 0 && j <= 3, "checkpoint index must be 0..3");
  const double ln = std::log(n);
  const double lnln = std::log(ln);
  double v = 0.0;
  switch (j) {
    case 0: v = 9.0 * n * ln / 20.0; break;
    case 1: v = n * ln / 2.0 - n * lnln; break;
    case 2: v = 3.0 * n * ln / 4.0; break;
    default: v = n * ln + 2.0 * n * lnln; break;
  }
  return std::llround(v);
}

auto low_degree_cutoff(int n) -> double {
  require_input(n >= 3, "the degree cutoff needs n >= 3");
  return std::log(n) / 300.0;
}

namespace {

// Closure of a candidate survivor set: the survivors plus all their in- and
// out-neighbours. The plan needs this closure to induce a forest with one
// component per survivor and no conflict-set vertices inside it; a violation
// reports the vertices whose removal could repair it.
struct ClosureCheck {
  bool ok = false;
  std::vector<int> candidates;  // survivors implicated in the violation
};

auto check_closure(const Digraph& h, const std::vector<int>& survivors,
                   const Bitset& conflict) -> ClosureCheck {
  ClosureCheck out;
  const int n = h.n();
  Bitset surv(n);
  for (auto v : survivors) surv.set(v);
  Bitset verts(n);
  for (auto v : survivors) {
    verts.set(v);
    h.out(v).for_each([&](int w) { verts.set(w); });
    h.in(v).for_each([&](int w) { verts.set(w); });
  }
  // A conflict vertex pulled into the closure implicates its survivor
  // neighbours.
  bool bad_member = false;
  verts.for_each([&](int u) {
    if (!conflict.test(u)) return;
    bad_member = true;
    h.out(u).for_each([&](int w) {
      if (surv.test(w)) out.candidates.push_back(w);
    });
    h.in(u).for_each([&](int w) {
      if (surv.test(w)) out.candidates.push_back(w);
    });
  });
  if (bad_member) {
    std::sort(out.candidates.begin(), out.candidates.end());
    out.candidates.erase(
        std::unique(out.candidates.begin(), out.candidates.end()),
        out.candidates.end());
    return out;
  }
  // Components of the underlying closure graph: each must be a tree holding
  // exactly one survivor.
  std::vector<int> comp(n, -1);
  int ncomp = 0;
  int nverts = 0;
  std::vector<int> stack;
  std::vector<std::vector<int>> comp_surv;
  verts.for_each([&](int v) {
    ++nverts;
    if (comp[v] >= 0) return;
    comp_surv.emplace_back();
    stack.push_back(v);
    comp[v] = ncomp;
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      if (surv.test(u)) comp_surv.back().push_back(u);
      auto visit = [&](int w) {
        if (verts.test(w) && comp[w] < 0) {
          comp[w] = ncomp;
          stack.push_back(w);
        }
      };
      h.out(u).for_each(visit);
      h.in(u).for_each(visit);
    }
    ++ncomp;
  });
  // Underlying edge count: antiparallel pairs collapse to one edge.
  long long uedges = 0;
  verts.for_each([&](int v) {
    h.out(v).for_each([&](int w) {
      if (verts.test(w) && (v < w || !h.has_edge(w, v))) ++uedges;
    });
  });
  const bool forest = uedges == nverts - ncomp;
  const bool one_each =
      ncomp == int(survivors.size()) &&
      std::all_of(comp_surv.begin(), comp_surv.end(),
                  [](const std::vector<int>& cs) { return cs.size() == 1; });
  if (forest && one_each) {
    out.ok = true;
    return out;
  }
  // Implicate the survivors of every offending component.
  for (std::size_t ci = 0; ci < comp_surv.size(); ++ci) {
    bool off = comp_surv[ci].size() != 1;
    if (!off && !forest) off = true;  // cannot localize the cycle cheaply
    if (off)
      out.candidates.insert(out.candidates.end(), comp_surv[ci].begin(),
                            comp_surv[ci].end());
  }
  std::sort(out.candidates.begin(), out.candidates.end());
  out.candidates.erase(std::unique(out.candidates.begin(), out.candidates.end()),
                       out.candidates.end());
  return out;
}

// Smallest `want` vertices of `from` (a neighbourhood) avoiding `avoid`;
// empty result when short.
auto pick_smallest(const Bitset& from, const Bitset& avoid, int want)
    -> std::vector<int> {
  std::vector<int> out;
  from.for_each([&](int w) {
    if (int(out.size()) < want && !avoid.test(w)) out.push_back(w);
  });
  if (int(out.size()) < want) out.clear();
  return out;
}

}  // namespace

auto plan_low_degree(const Digraph& h, const Bitset& t, double cutoff,
                     int changes) -> LowDegreePlan {
  LowDegreePlan plan;
  const int n = h.n();
  require_input(t.size() == n, "both-ways-low flags must cover the vertex set");
  require_input(cutoff > 0.0, "degree cutoff must be positive");
  std::vector<int> dp(n), dm(n);
  std::vector<int> ys;
  Bitset y(n);
  for (int v = 0; v < n; ++v) {
    dp[v] = degree(h, v, Dir::Out);
    dm[v] = degree(h, v, Dir::In);
    if (double(dp[v]) <= cutoff || double(dm[v]) <= cutoff) {
      y.set(v);
      ys.push_back(v);
    }
  }
  for (auto v : ys) {
    if (dp[v] + dm[v] < 2) {
      std::ostringstream os;
      os << "vertex " << v << " has total degree below 2";
      plan.message = os.str();
      return plan;
    }
  }

  // Class assignment. With many direction changes the degree-0/2 classes are
  // roomy, so every one-sided-high vertex goes there; with few, only forced
  // vertices (degree 0 on a side) and a minimal conflict set do.
  std::vector<int> cls(n, -1);
  if (2 * changes >= n) {
    plan.case_label = '1';
    for (auto v : ys) {
      if (double(dm[v]) > cutoff)
        cls[v] = 0;
      else if (t.test(v) && dm[v] >= 2)
        cls[v] = 0;
    }
    for (auto v : ys) {
      if (cls[v] == 0) continue;
      if (double(dp[v]) > cutoff)
        cls[v] = 2;
      else if (t.test(v) && dp[v] >= 2)
        cls[v] = 2;
    }
    for (auto v : ys)
      if (cls[v] < 0) cls[v] = 1;
  } else {
    plan.case_label = '2';
    // Conflict set: grow until the survivors' closure is a disjoint union of
    // their stars, then shrink to a minimal such set.
    Bitset conflict(n);
    std::vector<int> conf;
    auto survivors = [&]() {
      std::vector<int> s;
      for (auto v : ys)
        if (!conflict.test(v)) s.push_back(v);
      return s;
    };
    for (int round = 0; round <= int(ys.size()); ++round) {
      const auto chk = check_closure(h, survivors(), conflict);
      if (chk.ok) break;
      int add = -1;
      for (auto v : chk.candidates)
        if (!t.test(v) && !conflict.test(v)) {
          add = v;
          break;
        }
      if (add < 0) {
        plan.message =
            "conflict set cannot grow: the closure violation involves only "
            "both-ways-low vertices";
        return plan;
      }
      conflict.set(add);
      conf.push_back(add);
    }
    if (!check_closure(h, survivors(), conflict).ok) {
      plan.message = "conflict set did not stabilize";
      return plan;
    }
    std::sort(conf.begin(), conf.end());
    for (auto v : conf) {
      conflict.reset(v);
      if (!check_closure(h, survivors(), conflict).ok) conflict.set(v);
    }
    for (auto v : ys) {
      if (dp[v] == 0)
        cls[v] = 0;
      else if (conflict.test(v) && double(dm[v]) > cutoff)
        cls[v] = 0;
      else if (dm[v] == 0)
        cls[v] = 2;
      else if (conflict.test(v) && double(dp[v]) > cutoff)
        cls[v] = 2;
      else
        cls[v] = 1;
    }
  }

  // Flank picks, by class and ascending centre. Avoid every low-degree
  // vertex, anything already picked, and for one-sided-high centres also all
  // neighbours of the other low-degree vertices.
  Bitset taken = y;
  for (auto v : ys) {
    // Both-ways-low centres may pick freely; one-sided centres must keep
    // clear of the other low vertices' neighbourhoods.
    Bitset avoid = taken;
    if (!t.test(v)) {
      for (auto u : ys) {
        if (u == v) continue;
        h.out(u).for_each([&](int w) { avoid.set(w); });
        h.in(u).for_each([&](int w) { avoid.set(w); });
      }
    }
    TripleChoice tc;
    tc.v = v;
    tc.out_deg = cls[v];
    std::vector<int> got;
    if (cls[v] == 0) {
      got = pick_smallest(h.in(v), avoid, 2);
    } else if (cls[v] == 2) {
      got = pick_smallest(h.out(v), avoid, 2);
    } else {
      const auto gx = pick_smallest(h.out(v), avoid, 1);
      if (!gx.empty()) {
        Bitset avoid2 = avoid;
        avoid2.set(gx[0]);
        const auto gy = pick_smallest(h.in(v), avoid2, 1);
        if (!gy.empty()) got = {gx[0], gy[0]};
      }
    }
    if (got.size() != 2) {
      std::ostringstream os;
      os << "vertex " << v << " (out-degree class " << cls[v]
         << ") cannot pick two distinct flank neighbours";
      plan.message = os.str();
      return plan;
    }
    tc.xv = got[0];
    tc.yv = got[1];
    taken.set(tc.xv);
    taken.set(tc.yv);
    plan.triples.push_back(tc);
  }
  plan.ok = true;
  return plan;
}

auto contract_instance(const Digraph& h, const OrientationPattern& c,
                       const std::vector<TripleChoice>& triples,
                       int window_start, int window_len, const UGraph& walk,
                       const UGraph& boost, const PipelineParams& params,
                       RngStream& rng) -> Contraction {
  const int n = h.n();
  require_input(c.n() == n, "pattern must span the graph being contracted");
  require_input(walk.n() == n && boost.n() == n,
                "streams must live on the graph being contracted");
  require_input(window_start >= 0 && window_start < n,
                "window start out of range");
  require_input(window_len >= 0 && window_len < n, "window length out of range");
  const int k = int(triples.size());

  // Per-position block ownership: each triple owns the five consecutive
  // positions d b a c e around its landmark; the middle three are deleted.
  std::vector<int> owner(n, -1);
  Bitset dropped_verts(n);
  for (int ti = 0; ti < k; ++ti) {
    const auto& tc = triples[ti];
    require_input(tc.a_pos >= 0 && tc.a_pos < n,
                  "triple landmark position out of range");
    for (int off = -2; off <= 2; ++off) {
      const int p = ((tc.a_pos + off) % n + n) % n;
      require_input(owner[p] < 0, "landmark blocks overlap");
      owner[p] = ti;
    }
    for (int vv : {tc.v, tc.xv, tc.yv}) {
      require_input(vv >= 0 && vv < n, "triple vertex out of range");
      require_input(!dropped_verts.test(vv), "triples share a vertex");
      dropped_verts.set(vv);
    }
  }

  Contraction con;
  std::vector<int> new_id(n, -1);
  for (int v = 0; v < n; ++v)
    if (!dropped_verts.test(v)) {
      new_id[v] = int(con.orig_of.size());
      con.orig_of.push_back(v);
    }
  con.z_of.resize(k);
  for (int ti = 0; ti < k; ++ti) {
    con.z_of[ti] = int(con.orig_of.size());
    con.orig_of.push_back(triples[ti].v);
  }
  const int nn = n - 2 * k;
  require_input(nn >= 3, "contraction leaves fewer than 3 vertices");

  // Contracted graph: kept edges survive; each z vertex inherits in-edges
  // through its x flank (keyed on the pattern edge between the d and b
  // positions) and out-edges through its y flank (keyed between c and e).
  con.h = Digraph(nn);
  for (int u = 0; u < n; ++u) {
    if (new_id[u] < 0) continue;
    h.out(u).for_each([&](int w) {
      if (new_id[w] >= 0) con.h.add_edge(new_id[u], new_id[w]);
    });
  }
  std::vector<char> in_from_x(k, 0), out_from_y(k, 0);
  for (int ti = 0; ti < k; ++ti) {
    const auto& tc = triples[ti];
    const int d_pos = ((tc.a_pos - 2) % n + n) % n;
    const int c_pos = (tc.a_pos + 1) % n;
    in_from_x[ti] = c.forward(d_pos) ? 1 : 0;   // true: the pattern runs d -> b
    out_from_y[ti] = c.forward(c_pos) ? 1 : 0;  // true: the pattern runs c -> e
    for (int w = 0; w < n; ++w) {
      if (new_id[w] < 0) continue;
      const bool in_edge = in_from_x[ti] ? h.has_edge(w, tc.xv)
                                         : h.has_edge(tc.xv, w);
      if (in_edge) con.h.add_edge(new_id[w], con.z_of[ti]);
      const bool out_edge = out_from_y[ti] ? h.has_edge(tc.yv, w)
                                           : h.has_edge(w, tc.yv);
      if (out_edge) con.h.add_edge(con.z_of[ti], new_id[w]);
    }
  }

  // Contracted pattern: walk the positions from an anchor outside every
  // block; a deleted middle triple of positions becomes one fresh position
  // with both replacement edges running clockwise.
  int anchor = -1;
  for (int p = 0; p < n && anchor < 0; ++p) {
    const int ti = owner[p];
    if (ti < 0 || p == ((triples[ti].a_pos - 2) % n + n) % n ||
        p == (triples[ti].a_pos + 2) % n)
      anchor = p;
  }
  require_input(anchor >= 0, "landmark blocks cover the whole pattern");
  con.pos_into.assign(n, -1);
  std::vector<std::uint8_t> bits;
  std::vector<int> entry_kept;  // original position per entry, -1 for a z slot
  std::vector<int> entry_triple;
  for (int step = 0; step < n; ++step) {
    const int p = (anchor + step) % n;
    const int ti = owner[p];
    const bool mid =
        ti >= 0 && p != ((triples[ti].a_pos - 2) % n + n) % n &&
        p != (triples[ti].a_pos + 2) % n;
    if (!mid) {
      con.pos_into[p] = int(entry_kept.size());
      entry_kept.push_back(p);
      entry_triple.push_back(-1);
    } else if (p == ((triples[ti].a_pos - 1) % n + n) % n) {
      con.pos_into[p] = int(entry_kept.size());
      entry_kept.push_back(-1);
      entry_triple.push_back(ti);
    } else {
      con.pos_into[p] = int(entry_kept.size()) - 1;  // joins the open z slot
    }
  }
  require_input(int(entry_kept.size()) == nn,
                "contracted pattern has the wrong length");
  bits.resize(nn);
  for (int e = 0; e < nn; ++e) {
    const int ne = (e + 1) % nn;
    if (entry_triple[e] >= 0 || entry_triple[ne] >= 0) {
      bits[e] = 1;  // replacement edges always run clockwise
    } else {
      const int p = entry_kept[e];
      assert((p + 1) % n == entry_kept[ne]);
      bits[e] = c.forward(p) ? 1 : 0;
    }
  }
  con.c = OrientationPattern(std::move(bits));

  con.window_start = con.pos_into[window_start];
  const int wend = (window_start + window_len) % n;
  con.window_len = ((con.pos_into[wend] - con.window_start) % nn + nn) % nn;
  for (int ti = 0; ti < k; ++ti)
    con.pins.emplace_back(con.pos_into[triples[ti].a_pos], con.z_of[ti]);

  // Contracted streams: kept pairs survive; a z vertex keeps a stream pair
  // only when the stream holds both of its flank pairs, and z-z pairs are
  // tossed fresh at the stream intensities.
  con.walk = UGraph(nn);
  con.boost = UGraph(nn);
  for (auto [u, w] : walk.edges())
    if (new_id[u] >= 0 && new_id[w] >= 0)
      con.walk.add_edge(new_id[u], new_id[w]);
  for (auto [u, w] : boost.edges())
    if (new_id[u] >= 0 && new_id[w] >= 0)
      con.boost.add_edge(new_id[u], new_id[w]);
  for (int ti = 0; ti < k; ++ti) {
    const auto& tc = triples[ti];
    for (int w = 0; w < n; ++w) {
      if (new_id[w] < 0) continue;
      if (walk.has_edge(w, tc.xv) && walk.has_edge(tc.yv, w))
        con.walk.add_edge(new_id[w], con.z_of[ti]);
      if (boost.has_edge(w, tc.xv) && boost.has_edge(tc.yv, w))
        con.boost.add_edge(new_id[w], con.z_of[ti]);
    }
  }
  const double pw = sprinkle_connect_p(params, nn);
  const double pb = sprinkle_posa_p(params, nn);
  for (int ti = 0; ti < k; ++ti)
    for (int tj = ti + 1; tj < k; ++tj) {
      if (rng.bernoulli(pw)) con.walk.add_edge(con.z_of[ti], con.z_of[tj]);
      if (rng.bernoulli(pb)) con.boost.add_edge(con.z_of[ti], con.z_of[tj]);
    }
  return con;
}

auto expand_embedding(const Contraction& con,
                      const std::vector<TripleChoice>& triples,
                      const Embedding& inner) -> Embedding {
  const int n = int(con.pos_into.size());
  const int nn = con.h.n();
  require_input(int(inner.size()) == nn,
                "inner embedding does not match the contracted pattern");
  std::vector<int> block(n, -1);  // owning triple for the three middle slots
  for (std::size_t ti = 0; ti < triples.size(); ++ti)
    for (int off = -1; off <= 1; ++off)
      block[((triples[ti].a_pos + off) % n + n) % n] = int(ti);
  Embedding emb(n, -1);
  for (int p = 0; p < n; ++p) {
    const int ti = block[p];
    if (ti < 0) {
      const int cv = inner[con.pos_into[p]];
      require_input(cv >= 0 && cv < nn, "inner embedding has an invalid copy");
      emb[p] = con.orig_of[cv];
      continue;
    }
    const auto& tc = triples[ti];
    require_input(inner[con.pos_into[tc.a_pos]] == con.z_of[ti],
                  "inner embedding does not honour a contraction pin");
    const int off = ((p - tc.a_pos) % n + n) % n;
    emb[p] = off == 0 ? tc.v : (off == 1 ? tc.yv : tc.xv);
  }
  return emb;
}

namespace {

auto pfail(ProcessReport& r, std::string stage, std::string message)
    -> ProcessReport {
  r.ok = false;
  r.stage = std::move(stage);
  r.message = std::move(message);
  return std::move(r);
}

}  // namespace

auto process_embed(const ProcessTrace& trace, long long i,
                   const OrientationPattern& c, const PipelineParams& params,
                   RngStream& rng) -> ProcessReport {
  ProcessReport rep;
  const int n = trace.n;
  require_input(n >= 3, "the process adapter needs n >= 3");
  require_input(c.n() == n, "pattern must span the process");
  const long long total = (long long)n * (n - 1);
  require_input(i >= 0 && i <= total, "step index outside the process");
  validate_params(params);

  const Digraph di = prefix(trace, i);
  rep.walk_used = UGraph(n);
  rep.boost_used = UGraph(n);
  if (di.m() == total) {
    // Complete prefix: the identity embedding works for any pattern.
    Embedding emb(n);
    for (int p = 0; p < n; ++p) emb[p] = p;
    rep.ok = true;
    rep.message = "complete prefix";
    rep.contracted_n = n;
    rep.embedding = std::move(emb);
    return rep;
  }
  for (int v = 0; v < n; ++v)
    require_input(degree(di, v, Dir::Out) + degree(di, v, Dir::In) >= 2,
                  "vertex " + std::to_string(v) +
                      " has total degree below 2 at this step");
  const long long i0 = process_checkpoint(n, 0);
  require_input(i >= i0,
                "step index is before the conditioning checkpoint " +
                    std::to_string(i0));

  const double cutoff = low_degree_cutoff(n);
  const Digraph base = prefix(trace, i0);
  Bitset low0(n);
  for (int v = 0; v < n; ++v)
    if (double(degree(base, v, Dir::Out)) <= cutoff ||
        double(degree(base, v, Dir::In)) <= cutoff)
      low0.set(v);

  // Conditioned graph: every checkpoint edge, plus later edges touching the
  // checkpoint's low-degree set.
  Digraph h = base;
  for (long long j = i0; j < i; ++j) {
    const auto [u, w] = trace.order[std::size_t(j)];
    if (low0.test(u) || low0.test(w)) h.add_edge(u, w);
  }

  for (int v = 0; v < n; ++v) {
    const int dp = degree(h, v, Dir::Out);
    const int dm = degree(h, v, Dir::In);
    if (dp == 0 || dm == 0) ++rep.s;
    if (dp == 1 && dm == 1) ++rep.t;
  }
  const int changes = lambda(c);
  rep.changes_low = 1.0 + (rep.s - 1) * std::log(n);
  rep.changes_high = n - 1.0 - (rep.t - 1) * std::log(n);
  if (double(changes) < rep.changes_low) {
    std::ostringstream os;
    os << "pattern has " << changes
       << " direction changes, below the lower bound 1+(s-1) ln n = "
       << rep.changes_low << " (s = " << rep.s << ")";
    return pfail(rep, "pattern-range", os.str());
  }
  if (double(changes) > rep.changes_high) {
    std::ostringstream os;
    os << "pattern has " << changes
       << " direction changes, above the upper bound n-1-(t-1) ln n = "
       << rep.changes_high << " (t = " << rep.t << ")";
    return pfail(rep, "pattern-range", os.str());
  }

  // Both-ways-low flags, read at checkpoint 1 (or at i when i comes first).
  const long long i1 = std::min(i, process_checkpoint(n, 1));
  Digraph h1 = base;
  for (long long j = i0; j < std::max(i0, i1); ++j) {
    const auto [u, w] = trace.order[std::size_t(j)];
    if (low0.test(u) || low0.test(w)) h1.add_edge(u, w);
  }
  Bitset tset(n);
  for (int v = 0; v < n; ++v)
    if (double(degree(h1, v, Dir::Out)) <= cutoff &&
        double(degree(h1, v, Dir::In)) <= cutoff)
      tset.set(v);

  auto plan = plan_low_degree(h, tset, cutoff, changes);
  rep.case_label = plan.case_label;
  if (!plan.ok) return pfail(rep, "classify", plan.message);
  const int nn = n - 2 * int(plan.triples.size());
  if (nn < 3)
    return pfail(rep, "classify",
                 "too many low-degree vertices: contraction would leave " +
                     std::to_string(nn) + " vertices");
  if (double(plan.triples.size()) > std::pow(double(nn), 0.75))
    return pfail(rep, "classify",
                 "too many low-degree vertices (" +
                     std::to_string(plan.triples.size()) +
                     ") for the exceptional-set cap at " + std::to_string(nn) +
                     " vertices");

  // Fresh sprinkle, restricted off the conditioning's low-degree set.
  const auto raw = sample_sprinkle(n, params, rng);
  UGraph walk_f(n), boost_f(n);
  for (auto [u, w] : raw.walk.edges())
    if (!low0.test(u) && !low0.test(w)) walk_f.add_edge(u, w);
  for (auto [u, w] : raw.boost.edges())
    if (!low0.test(u) && !low0.test(w)) boost_f.add_edge(u, w);
  rep.walk_used = walk_f;

  // Landmark positions for the triples, widening the window when the base
  // width cannot host them.
  int window_start = 0;
  int window_len = std::min(std::max(1, n / 100), n / 8);
  if (!plan.triples.empty()) {
    LandmarkRequest req;
    for (const auto& tc : plan.triples) {
      if (tc.out_deg == 0) ++req.mu0;
      else if (tc.out_deg == 1) ++req.mu1;
      else ++req.mu2;
    }
    req.spacing =
        10 * min_connect_length(params, n) + 2 * int(plan.triples.size());
    const int base_len = std::max(1, n / 100);
    const int cap_len = std::max(base_len, nn / 8);
    std::optional<Landmarks> lm;
    std::string lm_message;
    for (int w = base_len;; w *= 2) {
      const int wl = std::min(w, cap_len);
      req.window_len = wl;
      auto res = select_landmarks(c, req);
      if (res.ok()) {
        lm = *res.landmarks;
        if (wl > base_len) {
          std::ostringstream os;
          os << "landmark window widened from " << base_len << " to " << wl
             << " positions";
          rep.deviations.push_back(os.str());
        }
        break;
      }
      lm_message = res.failure ? res.failure->message : "landmark selection failed";
      if (wl >= cap_len) break;
    }
    if (!lm)
      return pfail(rep, "landmarks",
                   lm_message + " (window widened up to " +
                       std::to_string(cap_len) + " positions)");
    window_start = lm->window_start;
    window_len = lm->window_len;
    // Hand each class its landmark positions in ascending order.
    std::array<std::vector<int>, 3> zs = {lm->z0, lm->z1, lm->z2};
    for (auto& z : zs) std::sort(z.begin(), z.end());
    std::array<std::size_t, 3> used = {0, 0, 0};
    for (auto& tc : plan.triples) tc.a_pos = int(zs[tc.out_deg][used[tc.out_deg]++]);
    // Swap flanks where needed so x v y copies the b a c block clockwise.
    for (auto& tc : plan.triples) {
      const int b_pos = ((tc.a_pos - 1) % n + n) % n;
      auto fits = [&](int xv, int yv) {
        const bool in_ok =
            c.forward(b_pos) ? h.has_edge(xv, tc.v) : h.has_edge(tc.v, xv);
        const bool out_ok =
            c.forward(tc.a_pos) ? h.has_edge(tc.v, yv) : h.has_edge(yv, tc.v);
        return in_ok && out_ok;
      };
      if (!fits(tc.xv, tc.yv)) {
        if (!fits(tc.yv, tc.xv))
          return pfail(rep, "classify",
                       "flank picks for vertex " + std::to_string(tc.v) +
                           " fit neither orientation of their landmark");
        std::swap(tc.xv, tc.yv);
      }
    }
  }
  rep.triples = plan.triples;

  auto con = contract_instance(h, c, plan.triples, window_start, window_len,
                               walk_f, boost_f, params, rng);
  rep.contracted_n = con.h.n();
  if (con.window_len > con.h.n() / 8)
    return pfail(rep, "landmarks",
                 "window of length " + std::to_string(con.window_len) +
                     " does not fit the contracted instance on " +
                     std::to_string(con.h.n()) + " vertices");
  std::vector<int> xset = con.z_of;

  rep.inner = embed_cycle(con.h, xset, con.c, con.window_start, con.window_len,
                          con.pins, con.walk, con.boost, params, rng);
  if (!rep.inner.ok) return pfail(rep, rep.inner.stage, rep.inner.message);

  Embedding emb = expand_embedding(con, plan.triples, *rep.inner.embedding);
  const int first_z = nn - int(plan.triples.size());
  for (auto [cu, cw] : rep.inner.boost_used.edges()) {
    if (cu >= first_z || cw >= first_z)
      return pfail(rep, "validate",
                   "rotation search consumed a contracted-only stream edge");
    rep.boost_used.add_edge(con.orig_of[cu], con.orig_of[cw]);
  }

  // Flank provenance: each pulled-back flank edge must come from the
  // conditioned graph or a stream, matching the contraction's direction keys.
  for (const auto& tc : plan.triples) {
    const int d_pos = ((tc.a_pos - 2) % n + n) % n;
    const int e_pos = (tc.a_pos + 2) % n;
    const int c_pos = (tc.a_pos + 1) % n;
    const int alpha = emb[d_pos];
    const int beta = emb[e_pos];
    // The booster stream never reaches the contracted pins, so a legitimate
    // flank edge comes from the conditioned graph or the walk stream.
    const bool in_ok = c.forward(d_pos)
                           ? h.has_edge(alpha, tc.xv) ||
                                 walk_f.has_edge(alpha, tc.xv)
                           : h.has_edge(tc.xv, alpha) ||
                                 walk_f.has_edge(tc.xv, alpha);
    const bool out_ok = c.forward(c_pos)
                            ? h.has_edge(tc.yv, beta) ||
                                  walk_f.has_edge(tc.yv, beta)
                            : h.has_edge(beta, tc.yv) ||
                                  walk_f.has_edge(beta, tc.yv);
    if (!in_ok || !out_ok)
      return pfail(rep, "validate",
                   "flank edge for vertex " + std::to_string(tc.v) +
                       " has no source in the conditioned graph or streams");
  }

  const auto replay = replay_graph(di, rep.walk_used, rep.boost_used);
  if (auto err = embedding_error(replay, c, emb))
    return pfail(rep, "validate", *err);
  rep.ok = true;
  rep.embedding = std::move(emb);
  return rep;
}

}  // namespace orient
