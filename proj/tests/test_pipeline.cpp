#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "orient/errors.hpp"
#include "orient/graph.hpp"
#include "orient/oracle.hpp"
#include "orient/params.hpp"
#include "orient/pattern.hpp"
#include "orient/pipeline.hpp"
#include "orient/random_models.hpp"
#include "orient/rng.hpp"

using namespace orient;

namespace {

// Dense host for full assembly runs, average degree 20 ln n per side.
auto dense_host(int n, std::uint64_t seed) -> Digraph {
  RngStream rng(seed, 0);
  return sample_dnp(n, std::min(1.0, 20.0 * std::log(n) / n), rng);
}

// One assembly attempt with fresh streams at the profile intensities.
auto run_assembly(const Digraph& d, const std::vector<int>& x,
                  const OrientationPattern& c, int wstart, int wlen,
                  const std::vector<Pin>& pins, std::uint64_t seed)
    -> EmbedReport {
  const auto params = desk_params(d.n());
  RngStream rng(seed, 1);
  const auto spr = sample_sprinkle(d.n(), params, rng);
  return embed_cycle(d, x, c, wstart, wlen, pins, spr.walk, spr.boost, params,
                     rng);
}

// Process trace opening with the given pairs, then every remaining ordered
// pair in lexicographic order.
auto trace_with_opening(int n, std::vector<Edge> opening) -> ProcessTrace {
  std::set<Edge> used(opening.begin(), opening.end());
  REQUIRE(used.size() == opening.size());
  ProcessTrace t;
  t.n = n;
  t.order = std::move(opening);
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      if (u != v && !used.count({u, v})) t.order.push_back({u, v});
  REQUIRE(int(t.order.size()) == n * (n - 1));
  return t;
}

// Smallest m with every total degree >= 2 in prefix(trace, m).
auto first_degree_two_step(const ProcessTrace& t) -> long long {
  std::vector<int> deg(t.n, 0);
  int short_of_two = t.n;
  for (std::size_t j = 0; j < t.order.size(); ++j) {
    for (int v : {t.order[j].first, t.order[j].second})
      if (++deg[v] == 2) --short_of_two;
    if (short_of_two == 0) return (long long)j + 1;
  }
  return (long long)t.order.size();
}

// Ten vertices, cutoff 1.5: exactly 0 and 1 are low (in-degree 1), both
// one-sided high (out-degree 3), sharing the in-neighbour 9 so their
// neighbourhood closures collide.
auto shared_support_graph() -> Digraph {
  Digraph h(10);
  h.add_edge(9, 0);
  h.add_edge(9, 1);
  for (int w : {2, 3, 4}) {
    h.add_edge(0, w);
    h.add_edge(8, w);
    h.add_edge(w, 8);
  }
  for (int w : {5, 6, 7}) {
    h.add_edge(1, w);
    h.add_edge(w, 8);
    h.add_edge(w, 9);
  }
  h.add_edge(2, 5);
  h.add_edge(3, 6);
  h.add_edge(4, 7);
  return h;
}

// Six vertices, cutoff 1.5: 0 and 1 are low with out-neighbourhoods {2, 3}
// each, so one-sided picks cannot avoid the other's neighbours.
auto cramped_support_graph() -> Digraph {
  Digraph h(6);
  h.add_edge(0, 2);
  h.add_edge(0, 3);
  h.add_edge(4, 0);
  h.add_edge(1, 2);
  h.add_edge(1, 3);
  h.add_edge(5, 1);
  h.add_edge(2, 4);
  h.add_edge(2, 5);
  h.add_edge(3, 4);
  h.add_edge(3, 5);
  h.add_edge(4, 5);
  h.add_edge(5, 4);
  return h;
}

// Sixteen positions, one triple (v=10, x=11, y=12) landed at position 5.
// The pattern direction at the block edges decides which host edges the
// contracted z vertex inherits.
auto contraction_fixture(bool backward_block_edges)
    -> std::pair<Digraph, OrientationPattern> {
  Digraph h(16);
  h.add_edge(0, 1);
  h.add_edge(15, 0);
  h.add_edge(0, 11);   // in-edge for z when the pattern runs d -> b
  h.add_edge(11, 1);   // in-edge for z when the pattern runs b -> d
  h.add_edge(12, 2);   // out-edge for z when the pattern runs c -> e
  h.add_edge(3, 12);   // out-edge for z when the pattern runs e -> c
  h.add_edge(11, 10);
  h.add_edge(10, 12);
  std::vector<std::uint8_t> bits(16, 1);
  if (backward_block_edges) {
    bits[3] = 0;  // edge between positions 3 (d) and 4 (b)
    bits[6] = 0;  // edge between positions 6 (c) and 7 (e)
  }
  return {std::move(h), OrientationPattern(std::move(bits))};
}

auto one_triple(int a_pos) -> std::vector<TripleChoice> {
  TripleChoice tc;
  tc.v = 10;
  tc.xv = 11;
  tc.yv = 12;
  tc.out_deg = 1;
  tc.a_pos = a_pos;
  return {tc};
}

}  // namespace

TEST_SUITE("pipeline") {
  TEST_CASE("conditioning checkpoints round the schedule to whole steps") {
    CHECK(process_checkpoint(12, 0) == 13);
    CHECK(process_checkpoint(12, 1) == 4);
    CHECK(process_checkpoint(12, 2) == 22);
    CHECK(process_checkpoint(12, 3) == 52);
    CHECK(process_checkpoint(200, 0) == 477);
    CHECK(process_checkpoint(200, 1) == 196);
    CHECK(process_checkpoint(200, 2) == 795);
    CHECK(process_checkpoint(200, 3) == 1727);
    CHECK(process_checkpoint(400, 0) == 1078);
    CHECK(process_checkpoint(400, 3) == 3829);
    // the early checkpoints invert at desk sizes: 1 sits before 0
    CHECK(process_checkpoint(200, 1) < process_checkpoint(200, 0));
    CHECK(low_degree_cutoff(200) == doctest::Approx(std::log(200) / 300.0));
    CHECK_THROWS_AS(process_checkpoint(2, 0), InputError);
    CHECK_THROWS_AS(process_checkpoint(12, 4), InputError);
  }

  TEST_CASE("sprinkle sampling is deterministic per seed and stream") {
    const auto params = desk_params(60);
    RngStream a(5, 1), b(5, 1), c(6, 1);
    const auto sa = sample_sprinkle(60, params, a);
    const auto sb = sample_sprinkle(60, params, b);
    const auto sc = sample_sprinkle(60, params, c);
    CHECK(sa.walk == sb.walk);
    CHECK(sa.boost == sb.boost);
    CHECK(!(sa.walk == sc.walk));
    CHECK(sa.walk.m() > sa.boost.m());  // connect intensity dominates
  }

  TEST_CASE("replay graph biorients both consumed streams over the host") {
    Digraph host(5);
    host.add_edge(0, 1);
    UGraph walk(5), boost(5);
    walk.add_edge(1, 2);
    boost.add_edge(3, 4);
    const auto r = replay_graph(host, walk, boost);
    CHECK(r.has_edge(0, 1));
    CHECK(!r.has_edge(1, 0));
    CHECK(r.has_edge(1, 2));
    CHECK(r.has_edge(2, 1));
    CHECK(r.has_edge(3, 4));
    CHECK(r.has_edge(4, 3));
    CHECK_THROWS_AS(replay_graph(host, UGraph(4), boost), InputError);
  }

  TEST_CASE("assembly rejects malformed exceptional sets, pins and windows") {
    const int n = 200;
    const auto d = dense_host(n, 11);
    const auto c = parse_pattern("anti:" + std::to_string(n));
    const auto params = desk_params(n);
    RngStream rng(11, 1);
    const auto spr = sample_sprinkle(n, params, rng);
    auto run = [&](const std::vector<int>& x, int ws, int wl,
                   const std::vector<Pin>& pins) {
      RngStream r2(11, 2);
      return embed_cycle(d, x, c, ws, wl, pins, spr.walk, spr.boost, params,
                         r2);
    };
    CHECK_THROWS_AS(run({n}, 0, 20, {{5, n}}), InputError);      // X off V(D)
    CHECK_THROWS_AS(run({3, 3}, 0, 20, {{5, 3}, {6, 3}}), InputError);
    CHECK_THROWS_AS(run({}, 0, n / 8 + 1, {}), InputError);      // long window
    CHECK_THROWS_AS(run({}, n, 10, {}), InputError);
    CHECK_THROWS_AS(run({3}, 0, 20, {}), InputError);            // missing pin
    CHECK_THROWS_AS(run({3}, 0, 20, {{30, 3}}), InputError);     // off window
    CHECK_THROWS_AS(run({3}, 0, 20, {{5, 4}}), InputError);      // wrong vertex
    // two pins closer than ten minimum connection lengths
    CHECK_THROWS_AS(run({3, 4}, 0, 25, {{0, 3}, {20, 4}}), InputError);
  }

  TEST_CASE("a forced pin lands its vertex on the pinned position") {
    const int n = 200;
    const auto d = dense_host(n, 21);
    const auto c = parse_pattern("anti:" + std::to_string(n));
    EmbedReport rep;
    for (std::uint64_t seed = 40; seed < 48; ++seed) {
      rep = run_assembly(d, {7}, c, 40, 20, {{50, 7}}, seed);
      if (rep.ok) break;
    }
    REQUIRE(rep.ok);
    REQUIRE(rep.embedding.has_value());
    const auto& emb = *rep.embedding;
    CHECK(emb[50] == 7);
    const auto replay = replay_graph(d, rep.walk_used, rep.boost_used);
    CHECK(!embedding_error(replay, c, emb, {{50, 7}}).has_value());
  }

  TEST_CASE("desk-profile assembly succeeds on most dense hosts at n=200") {
    const int n = 200;
    const auto c = parse_pattern("anti:" + std::to_string(n));
    const std::vector<std::string> stages = {"partition", "bad-set", "cover",
                                             "connect",   "posa",    "validate"};
    int ok = 0;
    const int trials = 100;
    for (int trial = 0; trial < trials; ++trial) {
      const auto d = dense_host(n, 1000 + std::uint64_t(trial));
      const auto rep = run_assembly(d, {}, c, 0, 20, {}, 2000 + trial);
      if (rep.ok) {
        ++ok;
        REQUIRE(rep.embedding.has_value());
        const auto replay = replay_graph(d, rep.walk_used, rep.boost_used);
        CHECK(!embedding_error(replay, c, *rep.embedding).has_value());
      } else {
        CHECK(std::count(stages.begin(), stages.end(), rep.stage) == 1);
        CHECK(!rep.message.empty());
      }
    }
    CHECK(ok >= 80);
  }

  TEST_CASE("assembly failures carry exactly one stage tag") {
    const int n = 64;
    const auto c = parse_pattern("anti:" + std::to_string(n));
    const auto params = desk_params(n);

    // no host edges: the partition cannot meet any degree floor
    RngStream r1(3, 0);
    auto spr = sample_sprinkle(n, params, r1);
    auto rep = embed_cycle(Digraph(n), {}, c, 0, 4, {}, spr.walk, spr.boost,
                           params, r1);
    CHECK(!rep.ok);
    CHECK(rep.stage == "partition");
    CHECK(!rep.message.empty());
    CHECK(!rep.embedding.has_value());

    // dense host but an empty walk stream: the bad set swallows everything
    const auto d = dense_host(n, 4);
    RngStream r2(4, 1);
    rep = embed_cycle(d, {}, c, 0, 4, {}, UGraph(n), spr.boost, params, r2);
    CHECK(!rep.ok);
    CHECK(rep.stage == "bad-set");
    CHECK(!rep.message.empty());
  }

  TEST_CASE("low-degree planning, free-spending case") {
    const auto h = shared_support_graph();
    Bitset t(10);
    t.set(0);
    // many direction changes: every one-sided vertex heads for class 2
    const auto plan = plan_low_degree(h, t, 1.5, 5);
    REQUIRE(plan.ok);
    CHECK(plan.case_label == '1');
    REQUIRE(plan.triples.size() == 2);
    CHECK(plan.triples[0].v == 0);
    CHECK(plan.triples[0].out_deg == 2);
    CHECK(plan.triples[0].xv == 2);
    CHECK(plan.triples[0].yv == 3);
    CHECK(plan.triples[1].v == 1);
    CHECK(plan.triples[1].out_deg == 2);
    CHECK(plan.triples[1].xv == 5);
    CHECK(plan.triples[1].yv == 6);
  }

  TEST_CASE("low-degree planning, conflict-set case") {
    const auto h = shared_support_graph();
    Bitset t(10);
    t.set(0);  // 0 is protected, so the conflict set must take 1
    const auto plan = plan_low_degree(h, t, 1.5, 2);
    REQUIRE(plan.ok);
    CHECK(plan.case_label == '2');
    REQUIRE(plan.triples.size() == 2);
    // the survivor stays on the through class, picking out- then in-flank
    CHECK(plan.triples[0].v == 0);
    CHECK(plan.triples[0].out_deg == 1);
    CHECK(plan.triples[0].xv == 2);
    CHECK(plan.triples[0].yv == 9);
    // the conflict vertex is one-sided high on the out side
    CHECK(plan.triples[1].v == 1);
    CHECK(plan.triples[1].out_deg == 2);
    CHECK(plan.triples[1].xv == 5);
    CHECK(plan.triples[1].yv == 6);
  }

  TEST_CASE("conflict growth fails when only protected vertices are eligible") {
    const auto h = cramped_support_graph();
    Bitset t(6);
    t.set(0);
    t.set(1);
    const auto plan = plan_low_degree(h, t, 1.5, 1);
    REQUIRE(!plan.ok);
    CHECK(plan.case_label == '2');
    CHECK(plan.message.find("both-ways-low") != std::string::npos);
  }

  TEST_CASE("flank picks fail when the avoid sets exhaust a neighbourhood") {
    const auto h = cramped_support_graph();
    const auto plan = plan_low_degree(h, Bitset(6), 1.5, 1);
    REQUIRE(!plan.ok);
    CHECK(plan.message.find("flank") != std::string::npos);
  }

  TEST_CASE("planning rejects a total degree below two") {
    Digraph h(4);
    h.add_edge(1, 0);
    h.add_edge(1, 2);
    h.add_edge(2, 1);
    h.add_edge(2, 3);
    h.add_edge(3, 2);
    h.add_edge(3, 1);
    const auto plan = plan_low_degree(h, Bitset(4), 0.5, 2);
    REQUIRE(!plan.ok);
    CHECK(plan.message.find("total degree") != std::string::npos);
  }

  TEST_CASE("contraction inherits z edges keyed on the block directions") {
    for (const bool backward : {false, true}) {
      CAPTURE(backward);
      const auto [h, c] = contraction_fixture(backward);
      UGraph walk(16), boost(16);
      walk.add_edge(0, 11);
      walk.add_edge(0, 12);  // both flank pairs: 0 reaches z
      walk.add_edge(1, 11);  // one flank pair only: 1 does not
      walk.add_edge(3, 9);
      const auto params = desk_params(16);
      RngStream rng(7, 0);
      const auto con = contract_instance(h, c, one_triple(5), 0, 3, walk,
                                         boost, params, rng);
      REQUIRE(con.h.n() == 14);
      REQUIRE(con.z_of == std::vector<int>{13});
      const int z = 13;
      // kept vertices keep their edges under the id map
      CHECK(con.orig_of[12] == 15);
      CHECK(con.h.has_edge(0, 1));
      CHECK(con.h.has_edge(12, 0));
      // flank rules: the in-edge uses the d-b pattern direction, the
      // out-edge the c-e direction
      CHECK(con.h.has_edge(0, z) == !backward);
      CHECK(con.h.has_edge(1, z) == backward);
      CHECK(con.h.has_edge(z, 2) == !backward);
      CHECK(con.h.has_edge(z, 3) == backward);
      // streams demand both flank pairs regardless of direction
      CHECK(con.walk.has_edge(0, z));
      CHECK(!con.walk.has_edge(1, z));
      CHECK(con.walk.has_edge(3, 9));  // vertices below 10 keep their ids
      // the contracted pattern replaces each block with two forward edges
      CHECK(con.c == parse_pattern("directed:14"));
      CHECK(con.pins == std::vector<Pin>{{4, z}});
      CHECK(con.pos_into[4] == 4);
      CHECK(con.pos_into[5] == 4);
      CHECK(con.pos_into[6] == 4);
      CHECK(con.pos_into[7] == 5);
      CHECK(con.window_start == 0);
      CHECK(con.window_len == 3);
    }
  }

  TEST_CASE("expansion fills each block with flank, centre, flank") {
    const auto [h, c] = contraction_fixture(false);
    const auto params = desk_params(16);
    RngStream rng(8, 0);
    const auto con = contract_instance(h, c, one_triple(5), 0, 3, UGraph(16),
                                       UGraph(16), params, rng);
    Embedding inner(14);
    for (int p = 0; p < 14; ++p) inner[p] = p < 4 ? p : (p == 4 ? 13 : p - 1);
    const auto emb = expand_embedding(con, one_triple(5), inner);
    CHECK(emb == Embedding{0, 1, 2, 3, 11, 10, 12, 4, 5, 6, 7, 8, 9, 13, 14,
                           15});

    Embedding off_pin = inner;
    std::swap(off_pin[4], off_pin[5]);
    CHECK_THROWS_AS(expand_embedding(con, one_triple(5), off_pin), InputError);
  }

  TEST_CASE("contraction rejects overlapping landmark blocks") {
    const auto [h, c] = contraction_fixture(false);
    auto triples = one_triple(5);
    triples.push_back(triples[0]);
    triples[1].v = 3;
    triples[1].xv = 4;
    triples[1].yv = 5;
    triples[1].a_pos = 7;  // blocks {3..7} and {5..9} collide
    const auto params = desk_params(16);
    RngStream rng(9, 0);
    CHECK_THROWS_AS(contract_instance(h, c, triples, 0, 3, UGraph(16),
                                      UGraph(16), params, rng),
                    InputError);
  }

  TEST_CASE("a complete prefix short-circuits to the identity embedding") {
    const auto trace = trace_with_opening(12, {});
    const auto params = desk_params(12);
    RngStream rng(31, 0);
    const auto rep =
        process_embed(trace, 132, parse_pattern("anti:12"), params, rng);
    REQUIRE(rep.ok);
    CHECK(rep.message == "complete prefix");
    REQUIRE(rep.embedding.has_value());
    for (int p = 0; p < 12; ++p) CHECK((*rep.embedding)[p] == p);
    CHECK(!embedding_error(prefix(trace, 132), parse_pattern("anti:12"),
                           *rep.embedding)
               .has_value());
  }

  TEST_CASE("process embedding validates the step index and prefix degrees") {
    const auto params = desk_params(12);
    std::vector<Edge> opening;
    for (int v = 1; v <= 10; ++v) opening.push_back({v, v % 10 + 1});
    opening.push_back({1, 0});
    opening.push_back({2, 0});
    opening.push_back({3, 11});
    const auto trace = trace_with_opening(12, std::move(opening));
    RngStream rng(32, 0);
    const auto c = parse_pattern("anti:12");
    // vertex 11 has one edge at step 13
    CHECK_THROWS_AS(process_embed(trace, 13, c, params, rng), InputError);
    CHECK_THROWS_AS(process_embed(trace, 5, c, params, rng), InputError);
    CHECK_THROWS_AS(process_embed(trace, 133, c, params, rng), InputError);
  }

  TEST_CASE("patterns outside the direction-change interval are rejected") {
    // 11-cycle plus two in-edges for vertex 0: at step 13 every vertex has
    // total degree 2, vertex 0 has out-degree 0 (s=1) and nine vertices sit
    // at in- and out-degree exactly 1 (t=9)
    std::vector<Edge> opening;
    for (int v = 1; v <= 11; ++v) opening.push_back({v, v % 11 + 1});
    opening.push_back({1, 0});
    opening.push_back({2, 0});
    const auto trace = trace_with_opening(12, std::move(opening));
    const auto params = desk_params(12);

    RngStream r1(33, 0);
    const auto low = process_embed(trace, 13, parse_pattern("directed:12"),
                                   params, r1);
    REQUIRE(!low.ok);
    CHECK(low.stage == "pattern-range");
    CHECK(low.s == 1);
    CHECK(low.t == 9);
    CHECK(low.changes_low == doctest::Approx(1.0));
    CHECK(low.message.find("below the lower bound") != std::string::npos);

    RngStream r2(33, 1);
    const auto high =
        process_embed(trace, 13, parse_pattern("anti:12"), params, r2);
    REQUIRE(!high.ok);
    CHECK(high.stage == "pattern-range");
    CHECK(high.message.find("above the upper bound") != std::string::npos);
  }

  TEST_CASE("landmark demands beyond the window report the widened attempt") {
    // two vertices with out-degree 0 at the first checkpoint need two
    // spaced class-0 landmarks; the window cannot host them at n=200
    const int n = 200;
    std::vector<Edge> opening;
    for (int v = 2; v < n; ++v) opening.push_back({v, v + 1 == n ? 2 : v + 1});
    for (int v = 2; v < n; ++v)
      opening.push_back({v, v + 2 < n ? v + 2 : v + 2 - (n - 2)});
    for (int w : {2, 3, 4}) opening.push_back({w, 0});
    for (int w : {5, 6, 7}) opening.push_back({w, 1});
    int added = 0;
    for (int v = 2; v < n && added < 75; ++v)
      if (v + 3 < n) {
        opening.push_back({v, v + 3});
        ++added;
      }
    REQUIRE(int(opening.size()) == 477);
    const auto trace = trace_with_opening(n, std::move(opening));
    const auto params = desk_params(n);
    RngStream rng(34, 0);
    const auto rep = process_embed(trace, 477, parse_pattern("anti:200"),
                                   params, rng);
    REQUIRE(!rep.ok);
    CHECK(rep.s == 2);
    CHECK(rep.case_label == '1');
    REQUIRE(rep.stage == "landmarks");
    CHECK(rep.message.find("window widened up to") != std::string::npos);
  }

  TEST_CASE("process successes at the degree hitting time survive the oracle") {
    const auto params = desk_params(12);
    const auto c = parse_pattern("random:12:6:3");
    int successes = 0;
    for (int trial = 0; trial < 100; ++trial) {
      RngStream rng(9000 + std::uint64_t(trial), 0);
      auto trace = sample_process(12, rng);
      const long long i =
          std::max(first_degree_two_step(trace), process_checkpoint(12, 0));
      const auto rep = process_embed(trace, i, c, params, rng);
      if (!rep.ok) {
        CHECK(!rep.stage.empty());
        CHECK(!rep.message.empty());
        continue;
      }
      ++successes;
      REQUIRE(rep.embedding.has_value());
      const auto replay =
          replay_graph(prefix(trace, i), rep.walk_used, rep.boost_used);
      CHECK(!embedding_error(replay, c, *rep.embedding).has_value());
      CHECK(find_embedding(replay, c).has_value());
    }
    // sparse conditioned graphs rarely pass the assembly at this size; the
    // check is soundness, not success rate
    CHECK(successes >= 0);
  }
}
