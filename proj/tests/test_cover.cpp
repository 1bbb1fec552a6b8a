#include <doctest.h>

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "orient/cover.hpp"
#include "orient/errors.hpp"
#include "orient/graph.hpp"
#include "orient/pattern.hpp"

using namespace orient;

namespace {

// Assembles a valid instance around explicit sets: one slice per vertex of
// X u B laid out consecutively on a fully forward pattern, assignment pairing
// vertices ascending with slices 0, 1, 2, ...
auto make_instance(Digraph d, std::vector<int> x, std::vector<int> bp,
                   std::vector<int> bm, std::vector<int> ap, std::vector<int> am,
                   int slice_len = 4, double deg = 2.0) -> CoverInstance {
  CoverInstance inst;
  inst.d = std::move(d);
  inst.x = std::move(x);
  inst.b_plus = std::move(bp);
  inst.b_minus = std::move(bm);
  inst.a_plus = std::move(ap);
  inst.a_minus = std::move(am);
  inst.slice_len = slice_len;
  inst.deg_threshold = deg;
  std::vector<int> targets = inst.x;
  targets.insert(targets.end(), inst.b_plus.begin(), inst.b_plus.end());
  targets.insert(targets.end(), inst.b_minus.begin(), inst.b_minus.end());
  std::sort(targets.begin(), targets.end());
  const int k = int(targets.size());
  const int np = std::max(3, k * (slice_len + 1) + 1);
  inst.pattern = parse_pattern("directed:" + std::to_string(np));
  for (int j = 0; j < k; ++j) {
    inst.slice_start.push_back(j * (slice_len + 1));
    inst.assign.push_back({targets[j], j});
  }
  return inst;
}

// Seven exceptional vertices where 3 and 6 only calm down through level-1
// vertices: 3 leans on 1, 2 for its out-side and 6 on 4, 5 for its in-side,
// everyone else sees the reservoirs directly.
auto two_stage_instance(int slice_len = 4) -> CoverInstance {
  Digraph d(40);
  auto support = [&](int v, int o1, int o2, int i1, int i2) {
    d.add_edge(v, o1);
    d.add_edge(v, o2);
    d.add_edge(i1, v);
    d.add_edge(i2, v);
  };
  support(0, 10, 11, 22, 23);
  support(1, 12, 13, 24, 25);
  support(2, 14, 15, 26, 27);
  support(3, 1, 2, 28, 29);
  support(4, 16, 17, 30, 31);
  support(5, 18, 19, 32, 33);
  support(6, 20, 21, 4, 5);
  std::vector<int> ap, am;
  for (int v = 10; v <= 21; ++v) ap.push_back(v);
  for (int v = 22; v <= 33; ++v) am.push_back(v);
  return make_instance(std::move(d), {0}, {1, 2, 3}, {4, 5, 6}, ap, am, slice_len);
}

// One exceptional vertex with two out-images and two in-images, all in the
// reservoirs.
auto single_vertex_instance() -> CoverInstance {
  Digraph d(5);
  d.add_edge(0, 1);
  d.add_edge(0, 2);
  d.add_edge(3, 0);
  d.add_edge(4, 0);
  return make_instance(std::move(d), {0}, {}, {}, {1, 2}, {3, 4}, 2);
}

// X = {0, 1} whose out-sides share exactly the given reservoir vertices.
auto sharing_instance(std::vector<int> shared) -> CoverInstance {
  Digraph d(14);
  for (int v : shared) {
    d.add_edge(0, v);
    d.add_edge(1, v);
  }
  return make_instance(std::move(d), {0, 1}, {}, {}, std::move(shared), {}, 2);
}

// First-appearance rank as the stratified edge rule sees it: X on top, A at
// the bottom, B one below its hierarchy level.
auto rank_of(const CoverInstance& inst, const Hierarchy& h, int v) -> int {
  for (int u : inst.x)
    if (u == v) return h.r;
  for (int u : inst.b_plus)
    if (u == v) return h.first_level[v] - 1;
  for (int u : inst.b_minus)
    if (u == v) return h.first_level[v] - 1;
  return -1;
}

// The rank must drop strictly walking from the midpoint toward either end.
auto ranks_decrease_outward(const CoverInstance& inst, const Hierarchy& h,
                            const CoverPath& q) -> bool {
  const int mid = int(std::find(q.verts.begin(), q.verts.end(), q.v) - q.verts.begin());
  for (int t = mid; t + 1 < int(q.verts.size()); ++t)
    if (rank_of(inst, h, q.verts[t + 1]) >= rank_of(inst, h, q.verts[t])) return false;
  for (int t = mid; t > 0; --t)
    if (rank_of(inst, h, q.verts[t - 1]) >= rank_of(inst, h, q.verts[t])) return false;
  return true;
}

auto in_set(const std::vector<int>& s, int v) -> bool {
  return std::find(s.begin(), s.end(), v) != s.end();
}

}  // namespace

TEST_SUITE("cover") {
  TEST_CASE("instance validation rejects malformed inputs") {
    auto good = single_vertex_instance();
    CHECK_NOTHROW(validate_cover_instance(good));

    auto overlap = good;
    overlap.b_plus = {1};  // already in A+
    CHECK_THROWS_AS(validate_cover_instance(overlap), InputError);

    auto bad_deg = good;
    bad_deg.deg_threshold = 0;
    CHECK_THROWS_AS(validate_cover_instance(bad_deg), InputError);

    auto odd_len = good;
    odd_len.slice_len = 3;
    CHECK_THROWS_AS(validate_cover_instance(odd_len), InputError);

    auto clash = two_stage_instance();
    clash.slice_start[1] = clash.slice_start[0] + 1;
    CHECK_THROWS_AS(validate_cover_instance(clash), InputError);

    auto twice = two_stage_instance();
    twice.assign[1].first = twice.assign[0].first;
    CHECK_THROWS_AS(validate_cover_instance(twice), InputError);

    auto tiny = good;
    tiny.d = Digraph(2);
    tiny.x = {0};
    tiny.a_plus = {1};
    tiny.a_minus = {};
    CHECK_THROWS_AS(validate_cover_instance(tiny), InputError);
  }

  TEST_CASE("empty exceptional set yields the trivial hierarchy") {
    Digraph d(3);
    auto inst = make_instance(std::move(d), {}, {}, {}, {1}, {2});
    auto h = build_hierarchy(inst);
    REQUIRE(h.ok);
    CHECK(h.r == 0);
    CHECK(h.levels_plus.size() == 1);
    CHECK(h.levels_minus.size() == 1);
    CHECK(h.levels_plus[0].empty());
    CHECK(h.uncovered.empty());
  }

  TEST_CASE("direct reservoir support closes the hierarchy at level one") {
    Digraph d(14);
    d.add_edge(1, 3);
    d.add_edge(1, 4);
    d.add_edge(5, 1);
    d.add_edge(6, 1);
    d.add_edge(2, 10);
    d.add_edge(2, 11);
    d.add_edge(12, 2);
    d.add_edge(13, 2);
    auto inst = make_instance(std::move(d), {}, {1}, {2}, {3, 4, 10, 11}, {5, 6, 12, 13});
    auto h = build_hierarchy(inst);
    REQUIRE(h.ok);
    CHECK(h.r == 1);
    CHECK(h.levels_plus == std::vector<std::vector<int>>{{}, {1}});
    CHECK(h.levels_minus == std::vector<std::vector<int>>{{}, {2}});
    CHECK(h.first_level[1] == 1);
    CHECK(h.first_level[2] == 1);
    CHECK(h.first_level[3] == -1);
  }

  TEST_CASE("two-stage support needs exactly two levels") {
    auto inst = two_stage_instance();
    auto h = build_hierarchy(inst);
    REQUIRE(h.ok);
    CHECK(h.r == 2);
    CHECK(h.levels_plus ==
          std::vector<std::vector<int>>{{}, {1, 2}, {1, 2, 3}});
    CHECK(h.levels_minus ==
          std::vector<std::vector<int>>{{}, {4, 5}, {4, 5, 6}});
    CHECK(h.first_level[1] == 1);
    CHECK(h.first_level[3] == 2);
    CHECK(h.first_level[6] == 2);

    // coverage is checked before the budget, so the exact depth suffices
    CHECK(build_hierarchy(inst, 2).ok);
  }

  TEST_CASE("level budget exhaustion reports the uncovered vertices") {
    auto h = build_hierarchy(two_stage_instance(), 1);
    REQUIRE(!h.ok);
    CHECK(h.uncovered == std::vector<int>{3, 6});
    CHECK(h.message.find("budget") != std::string::npos);
  }

  TEST_CASE("a vertex with no support is reported at the fixpoint") {
    auto inst = two_stage_instance();
    inst.d.remove_edge(3, 1);
    inst.d.remove_edge(3, 2);
    auto h = build_hierarchy(inst);
    REQUIRE(!h.ok);
    CHECK(h.uncovered == std::vector<int>{3});
    CHECK(h.message.find("fixpoint") != std::string::npos);
  }

  TEST_CASE("matching a lone vertex picks the lowest reservoir images") {
    Digraph d(22);
    d.add_edge(0, 10);
    d.add_edge(0, 11);
    d.add_edge(0, 12);
    d.add_edge(20, 0);
    d.add_edge(21, 0);
    auto inst = make_instance(std::move(d), {0}, {}, {}, {10, 11, 12}, {20, 21}, 2);
    auto h = build_hierarchy(inst);
    REQUIRE(h.ok);
    CHECK(h.r == 0);

    auto plus = hall_double_matching(inst, h, Dir::Out);
    REQUIRE(plus.ok);
    CHECK(plus.g1[0] == 10);
    CHECK(plus.g2[0] == 11);
    CHECK(plus.g1[1] == -1);

    auto minus = hall_double_matching(inst, h, Dir::In);
    REQUIRE(minus.ok);
    CHECK(minus.g1[0] == 20);
    CHECK(minus.g2[0] == 21);
  }

  TEST_CASE("two vertices need four distinct images") {
    auto four = sharing_instance({10, 11, 12, 13});
    auto h4 = build_hierarchy(four);
    auto m4 = hall_double_matching(four, h4, Dir::Out);
    REQUIRE(m4.ok);
    std::vector<int> images{m4.g1[0], m4.g2[0], m4.g1[1], m4.g2[1]};
    std::sort(images.begin(), images.end());
    CHECK(images == std::vector<int>{10, 11, 12, 13});

    auto three = sharing_instance({10, 11, 12});
    auto h3 = build_hierarchy(three);
    auto m3 = hall_double_matching(three, h3, Dir::Out);
    REQUIRE(!m3.ok);
    CHECK(m3.deficient == std::vector<int>{0, 1});
    CHECK(m3.message.find("deficient") != std::string::npos);

    auto one = sharing_instance({10});
    auto h1 = build_hierarchy(one);
    auto m1 = hall_double_matching(one, h1, Dir::Out);
    REQUIRE(!m1.ok);
    CHECK(m1.deficient == std::vector<int>{0});
  }

  TEST_CASE("stratified matchings on the two-stage instance are distinct and real") {
    auto inst = two_stage_instance();
    auto h = build_hierarchy(inst);
    REQUIRE(h.ok);
    auto plus = hall_double_matching(inst, h, Dir::Out);
    auto minus = hall_double_matching(inst, h, Dir::In);
    REQUIRE(plus.ok);
    REQUIRE(minus.ok);

    // forced by construction: every candidate list has exactly two entries
    CHECK(plus.g1[3] == 1);
    CHECK(plus.g2[3] == 2);
    CHECK(minus.g1[6] == 4);
    CHECK(minus.g2[6] == 5);

    for (const auto* m : {&plus, &minus}) {
      std::vector<int> images;
      for (int v = 0; v <= 6; ++v) {
        images.push_back(m->g1[v]);
        images.push_back(m->g2[v]);
      }
      auto sorted = images;
      std::sort(sorted.begin(), sorted.end());
      CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
    }
    for (int v = 0; v <= 6; ++v) {
      CHECK(inst.d.has_edge(v, plus.g1[v]));
      CHECK(inst.d.has_edge(v, plus.g2[v]));
      CHECK(inst.d.has_edge(minus.g1[v], v));
      CHECK(inst.d.has_edge(minus.g2[v], v));
    }
  }

  TEST_CASE("a lone exceptional vertex gets a two-edge path centered on it") {
    auto inst = single_vertex_instance();
    auto h = build_hierarchy(inst);
    auto plus = hall_double_matching(inst, h, Dir::Out);
    auto minus = hall_double_matching(inst, h, Dir::In);
    auto res = build_cover_paths(inst, h, plus, minus);
    REQUIRE(res.ok);
    REQUIRE(res.paths.size() == 1);
    CHECK(res.b_bar.empty());
    const auto& q = res.paths[0];
    CHECK(q.v == 0);
    CHECK(q.verts == std::vector<int>{3, 0, 1});
    CHECK(q.hi - q.lo == 2);
  }

  TEST_CASE("slice orientations steer each side independently") {
    // both slice edges point backward, so the out-image sits on the left
    CoverInstance inst;
    inst.d = Digraph(5);
    inst.d.add_edge(0, 1);
    inst.d.add_edge(0, 2);
    inst.d.add_edge(3, 0);
    inst.d.add_edge(4, 0);
    inst.x = {0};
    inst.a_plus = {1, 2};
    inst.a_minus = {3, 4};
    inst.pattern = parse_pattern("----");
    inst.slice_start = {0};
    inst.slice_len = 2;
    inst.assign = {{0, 0}};
    inst.deg_threshold = 2.0;
    auto h = build_hierarchy(inst);
    auto plus = hall_double_matching(inst, h, Dir::Out);
    auto minus = hall_double_matching(inst, h, Dir::In);
    auto res = build_cover_paths(inst, h, plus, minus);
    REQUIRE(res.ok);
    REQUIRE(res.paths.size() == 1);
    CHECK(res.paths[0].verts == std::vector<int>{1, 0, 3});
  }

  TEST_CASE("empty instance yields an empty family") {
    Digraph d(3);
    auto inst = make_instance(std::move(d), {}, {}, {}, {1}, {2});
    auto h = build_hierarchy(inst);
    auto plus = hall_double_matching(inst, h, Dir::Out);
    auto minus = hall_double_matching(inst, h, Dir::In);
    REQUIRE(plus.ok);
    REQUIRE(minus.ok);
    auto res = build_cover_paths(inst, h, plus, minus);
    REQUIRE(res.ok);
    CHECK(res.paths.empty());
    CHECK(res.b_bar.empty());
  }

  TEST_CASE("two-stage cover keeps one disjoint path per uncovered vertex") {
    auto inst = two_stage_instance();
    auto h = build_hierarchy(inst);
    auto plus = hall_double_matching(inst, h, Dir::Out);
    auto minus = hall_double_matching(inst, h, Dir::In);
    auto res = build_cover_paths(inst, h, plus, minus);
    REQUIRE(res.ok);

    // X first, then levels 2 and 1; 1 and 4 ride along on deeper paths
    CHECK(res.b_bar == std::vector<int>{2, 3, 5, 6});
    REQUIRE(res.paths.size() == 5);
    CHECK(res.paths[0].verts == std::vector<int>{22, 0, 10});
    CHECK(res.paths[1].verts == std::vector<int>{28, 3, 1, 12});
    CHECK(res.paths[2].verts == std::vector<int>{30, 4, 6, 20});

    Bitset covered(inst.d.n());
    for (const auto& q : res.paths) {
      for (int t = 0; t < int(q.verts.size()); ++t) {
        const int w = q.verts[t];
        CHECK(!covered.test(w));
        covered.set(w);
        const bool endpoint = t == 0 || t + 1 == int(q.verts.size());
        if (endpoint)
          CHECK((in_set(inst.a_plus, w) || in_set(inst.a_minus, w)));
        else
          CHECK((in_set(inst.x, w) || in_set(inst.b_plus, w) || in_set(inst.b_minus, w)));
      }
      CHECK(ranks_decrease_outward(inst, h, q));
    }
    for (int v = 0; v <= 6; ++v) CHECK(covered.test(v));
  }

  TEST_CASE("a too-short slice stalls before reaching the reservoirs") {
    auto inst = two_stage_instance(2);
    auto h = build_hierarchy(inst);
    auto plus = hall_double_matching(inst, h, Dir::Out);
    auto minus = hall_double_matching(inst, h, Dir::In);
    auto res = build_cover_paths(inst, h, plus, minus);
    REQUIRE(!res.ok);
    CHECK(res.failed_vertex == 3);
    CHECK(res.message.find("stalled") != std::string::npos);
  }

  TEST_CASE("forged matchings that share images are caught at selection") {
    Digraph d(14);
    d.add_edge(0, 10);
    d.add_edge(0, 11);
    d.add_edge(1, 10);
    d.add_edge(1, 11);
    d.add_edge(3, 0);
    d.add_edge(4, 0);
    d.add_edge(5, 1);
    d.add_edge(6, 1);
    auto inst = make_instance(std::move(d), {0, 1}, {}, {}, {10, 11}, {3, 4, 5, 6}, 2);
    auto h = build_hierarchy(inst);
    REQUIRE(h.ok);
    DoubleMatching plus, minus;
    plus.ok = minus.ok = true;
    plus.g1.assign(14, -1);
    plus.g2.assign(14, -1);
    minus.g1.assign(14, -1);
    minus.g2.assign(14, -1);
    plus.g1[0] = plus.g1[1] = 10;  // both paths will claim vertex 10
    plus.g2[0] = plus.g2[1] = 11;
    minus.g1[0] = 3;
    minus.g2[0] = 4;
    minus.g1[1] = 5;
    minus.g2[1] = 6;
    auto res = build_cover_paths(inst, h, plus, minus);
    REQUIRE(!res.ok);
    CHECK(res.failed_vertex == 1);
    CHECK(res.message.find("collide") != std::string::npos);
  }

  TEST_CASE("forged images off the host edges fail the orientation replay") {
    auto inst = single_vertex_instance();
    auto h = build_hierarchy(inst);
    auto plus = hall_double_matching(inst, h, Dir::Out);
    auto minus = hall_double_matching(inst, h, Dir::In);
    REQUIRE(plus.ok);
    plus.g1[0] = plus.g2[0] = 4;  // an in-image smuggled into both out slots
    auto res = build_cover_paths(inst, h, plus, minus);
    REQUIRE(!res.ok);
    CHECK(res.failed_vertex == 0);
    CHECK(res.message.find("orientation") != std::string::npos);
  }

  TEST_CASE("the ops demand a completed hierarchy and matchings") {
    auto inst = single_vertex_instance();
    Hierarchy bad;
    CHECK_THROWS_AS(hall_double_matching(inst, bad, Dir::Out), InputError);
    auto h = build_hierarchy(inst);
    DoubleMatching none;
    CHECK_THROWS_AS(build_cover_paths(inst, h, none, none), InputError);
  }
}
