#include <doctest.h>

#include <sstream>

#include "orient/errors.hpp"
#include "orient/graph.hpp"

using namespace orient;

TEST_SUITE_BEGIN("graph");

TEST_CASE("degree counts within a restriction set") {
  Digraph d(4);
  d.add_edge(0, 1);
  d.add_edge(0, 2);
  d.add_edge(3, 0);
  CHECK(degree(d, 0, Dir::Out) == 2);
  CHECK(degree(d, 0, Dir::In) == 1);
  CHECK(degree(d, 0, Dir::Out, Bitset::of(4, {1, 3})) == 1);
  CHECK(degree(d, 0, Dir::In, Bitset::of(4, {1, 2})) == 0);
}

TEST_CASE("biorient and underlying invert each other") {
  UGraph g(5);
  g.add_edge(0, 1);
  g.add_edge(1, 4);
  g.add_edge(2, 3);
  auto d = biorient(g);
  CHECK(d.m() == 2 * g.m());
  for (auto [u, v] : g.edges()) {
    CHECK(d.has_edge(u, v));
    CHECK(d.has_edge(v, u));
  }
  CHECK(underlying(d) == g);

  // Collapsing is lossy for genuinely oriented graphs.
  Digraph single(3);
  single.add_edge(0, 1);
  single.add_edge(1, 0);
  single.add_edge(1, 2);
  CHECK(underlying(single).m() == 2);
}

TEST_CASE("neighbourhood and connectivity") {
  UGraph path(5);
  path.add_edge(0, 1);
  path.add_edge(1, 2);
  path.add_edge(2, 3);
  CHECK(neighbourhood(path, Bitset::of(5, {1, 2})).to_vector() == std::vector<int>{0, 3});
  CHECK_FALSE(connected(path));  // vertex 4 isolated
  path.add_edge(3, 4);
  CHECK(connected(path));
}

TEST_CASE("complete graph on 15 vertices is a 10-expander") {
  UGraph g(15);
  for (int u = 0; u < 15; ++u)
    for (int v = u + 1; v < 15; ++v) g.add_edge(u, v);
  auto rep = is_k_expander(g, 10, 1.0 / 20.0, CheckMode::Exact);
  CHECK(rep.ok);
  CHECK(rep.exact);
  CHECK_FALSE(rep.witness.has_value());
}

TEST_CASE("star refutation returns a leaf witness") {
  UGraph g(16);
  for (int v = 1; v < 16; ++v) g.add_edge(0, v);
  auto rep = is_k_expander(g, 10, 1.0 / 20.0, CheckMode::Exact);
  CHECK_FALSE(rep.ok);
  REQUIRE(rep.witness.has_value());
  CHECK(rep.witness->size() == 1);
  // A leaf has exactly one neighbour, far below 10.
  CHECK(neighbourhood(g, Bitset::of(16, *rep.witness)).count() < 10);
}

TEST_CASE("disconnected graph is refuted by connectivity") {
  UGraph g(16);
  for (int u = 0; u < 8; ++u)
    for (int v = u + 1; v < 8; ++v) {
      g.add_edge(u, v);
      g.add_edge(u + 8, v + 8);
    }
  auto rep = is_k_expander(g, 10, 1.0 / 20.0, CheckMode::Exact);
  CHECK_FALSE(rep.ok);
  CHECK(rep.witness_is_disconnection);
}

TEST_CASE("sampled mode can refute but reports non-exact verdicts") {
  UGraph g(30);
  for (int v = 1; v < 30; ++v) g.add_edge(0, v);  // big star
  auto rep = is_k_expander(g, 10, 1.0 / 20.0, CheckMode::Sampled, 500, 7);
  CHECK_FALSE(rep.ok);
  CHECK_FALSE(rep.exact);
  REQUIRE(rep.witness.has_value());
}

TEST_CASE("edge list round trips byte for byte") {
  Digraph d(4);
  d.add_edge(2, 0);
  d.add_edge(0, 3);
  d.add_edge(3, 2);
  std::ostringstream first;
  write_edge_list(first, d);
  std::istringstream back(first.str());
  auto d2 = read_digraph(back);
  CHECK(d2 == d);
  std::ostringstream second;
  write_edge_list(second, d2);
  CHECK(first.str() == second.str());

  UGraph g(3);
  g.add_edge(0, 2);
  std::ostringstream ug;
  write_edge_list(ug, g);
  CHECK(ug.str() == "3 1 u\n0 2\n");
  std::istringstream ugin(ug.str());
  CHECK(read_ugraph(ugin) == g);
}

TEST_CASE("malformed edge lists raise input errors") {
  auto reject = [](const std::string& text) {
    std::istringstream is(text);
    CHECK_THROWS_AS(read_digraph(is), InputError);
  };
  reject("");
  reject("3\n");                    // header missing edge count
  reject("3 2\n0 1\n");             // fewer edges than promised
  reject("3 1\n0 1 9\n");           // trailing token
  reject("3 1\n0 3\n");             // endpoint out of range
  reject("3 2\n0 1\n0 1\n");        // duplicate
  reject("3 1 u\n0 1\n");           // undirected header into digraph reader
  std::istringstream undirected("3 1\n0 1\n");
  CHECK_THROWS_AS(read_ugraph(undirected), InputError);
}

TEST_CASE("self loops and out-of-range edges are rejected") {
  Digraph d(3);
  CHECK_THROWS_AS(d.add_edge(1, 1), InputError);
  CHECK_THROWS_AS(d.add_edge(0, 3), InputError);
  UGraph g(3);
  CHECK_THROWS_AS(g.add_edge(2, 2), InputError);
}

TEST_SUITE_END();
