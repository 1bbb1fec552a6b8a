#include <doctest.h>

#include <cmath>

#include "orient/errors.hpp"
#include "orient/oracle.hpp"
#include "orient/random_models.hpp"
#include "support/brute.hpp"

using namespace orient;

namespace {

auto directed_triangle() -> Digraph {
  Digraph d(3);
  d.add_edge(0, 1);
  d.add_edge(1, 2);
  d.add_edge(2, 0);
  return d;
}

}  // namespace

TEST_SUITE_BEGIN("oracle");

TEST_CASE("directed triangle embeds as directed, not as bent cycle") {
  auto d = directed_triangle();
  auto emb = find_embedding(d, parse_pattern("+++"));
  REQUIRE(emb.has_value());
  CHECK(embedding_valid(d, parse_pattern("+++"), *emb));
  // The same cycle read against traversal.
  CHECK(find_embedding(d, parse_pattern("---")).has_value());
  // One direction change can never fit a consistently oriented triangle.
  CHECK_FALSE(find_embedding(d, parse_pattern("++-")).has_value());
  CHECK_FALSE(testref::brute_embedding(d, parse_pattern("++-")).has_value());
}

TEST_CASE("pins force the anchoring") {
  auto d = directed_triangle();
  auto emb = find_embedding(d, parse_pattern("+++"), {{0, 2}});
  REQUIRE(emb.has_value());
  CHECK(*emb == Embedding{2, 0, 1});
  // Pinning two positions that sit against the cycle's direction fails.
  CHECK_FALSE(find_embedding(d, parse_pattern("+++"), {{0, 1}, {1, 0}}).has_value());
  CHECK_THROWS_AS(find_embedding(d, parse_pattern("+++"), {{0, 1}, {0, 2}}), InputError);
  CHECK_THROWS_AS(find_embedding(d, parse_pattern("+++"), {{0, 1}, {1, 1}}), InputError);
  CHECK_THROWS_AS(find_embedding(d, parse_pattern("+++"), {{3, 0}}), InputError);
}

TEST_CASE("complete biorientation contains every pattern") {
  UGraph k4(4);
  for (int u = 0; u < 4; ++u)
    for (int v = u + 1; v < 4; ++v) k4.add_edge(u, v);
  auto sweep = contains_all_patterns(biorient(k4));
  CHECK(sweep.all());
  CHECK(sweep.checked == int(canonical_patterns(4).size()));
}

TEST_CASE("missing patterns are reported") {
  auto d = directed_triangle();
  auto sweep = contains_all_patterns(d);
  CHECK_FALSE(sweep.all());
  REQUIRE(sweep.missing.size() == 1);
  CHECK(lambda(sweep.missing[0]) == 2);
}

TEST_CASE("DP agrees with the permutation oracle on random instances") {
  RngStream rng(1234, 0);
  int with_pins_checked = 0;
  for (int trial = 0; trial < 120; ++trial) {
    auto child = rng.child(std::uint64_t(trial));
    int n = 4 + int(child.next_below(4));  // 4..7
    double p = 0.15 + 0.1 * double(child.next_below(6));
    auto d = sample_dnp(n, p, child);
    auto c = parse_pattern("random:" + std::to_string(n) + ":" +
                           std::to_string(2 * int(child.next_below(std::uint64_t(n / 2 + 1)))) + ":" +
                           std::to_string(trial));
    auto dp = find_embedding(d, c);
    auto ref = testref::brute_embedding(d, c);
    CHECK(dp.has_value() == ref.has_value());
    if (dp) CHECK(embedding_valid(d, c, *dp));
    if (trial % 3 == 0) {
      std::vector<Pin> pins{{int(child.next_below(std::uint64_t(n))), int(child.next_below(std::uint64_t(n)))}};
      auto dp_pin = find_embedding(d, c, pins);
      auto ref_pin = testref::brute_embedding(d, c, pins);
      CHECK(dp_pin.has_value() == ref_pin.has_value());
      if (dp_pin) {
        CHECK(embedding_valid(d, c, *dp_pin, pins));
        ++with_pins_checked;
      }
    }
  }
  CHECK(with_pins_checked > 0);
}

TEST_CASE("exact containment probability for the directed triangle") {
  // Hand count: two labeled directed triangles exist on 3 vertices, so by
  // inclusion-exclusion P = 2p^3 - p^6; at p = 1/2 that is 15/64.
  auto c = parse_pattern("+++");
  CHECK(exact_containment_probability(3, 0.5, c) == doctest::Approx(15.0 / 64.0).epsilon(1e-12));
  CHECK(exact_containment_probability(3, 0.3, c) ==
        doctest::Approx(2 * 0.3 * 0.3 * 0.3 - std::pow(0.3, 6)).epsilon(1e-12));
  CHECK(exact_containment_probability(3, 0.0, c) == doctest::Approx(0.0));
  CHECK(exact_containment_probability(3, 1.0, c) == doctest::Approx(1.0));
  CHECK_THROWS_AS(exact_containment_probability(5, 0.5, parse_pattern("+++++")), InputError);
}

TEST_CASE("containment probability is monotone in p") {
  auto c = parse_pattern("++--");
  double prev = 0.0;
  for (double p : {0.1, 0.25, 0.4, 0.6, 0.8}) {
    double cur = exact_containment_probability(4, p, c);
    CHECK(cur >= prev);
    prev = cur;
  }
}

TEST_CASE("oracle size guards") {
  Digraph d(3);
  CHECK_THROWS_AS(find_embedding(d, parse_pattern("++++")), InputError);
  Digraph big(23);
  CHECK_THROWS_AS(find_embedding(big, OrientationPattern(std::vector<std::uint8_t>(23, 1))),
                  InputError);
}

TEST_SUITE_END();
