#include <doctest.h>

#include "orient/errors.hpp"
#include "orient/pattern.hpp"
#include "support/brute.hpp"

using namespace orient;

TEST_SUITE_BEGIN("pattern");

TEST_CASE("lambda counts direction changes") {
  CHECK(lambda(parse_pattern("++-+--")) == 4);
  CHECK(lambda(parse_pattern("directed:9")) == 0);
  CHECK(lambda(parse_pattern("anti:8")) == 8);
  for (const char* s : {"++-+--", "+++---", "+-+-+-", "++++", "+--+-+"}) {
    auto c = parse_pattern(s);
    CHECK(lambda(c) == testref::brute_lambda(c));
    CHECK(lambda(c) % 2 == 0);
  }
}

TEST_CASE("out-degree profile splits lambda between sinks and sources") {
  auto prof = out_degree_profile(parse_pattern("++-+--"));
  CHECK(prof == std::array<int, 3>{2, 2, 2});
  auto directed = out_degree_profile(parse_pattern("directed:7"));
  CHECK(directed == std::array<int, 3>{0, 7, 0});
  auto anti = out_degree_profile(parse_pattern("anti:6"));
  CHECK(anti == std::array<int, 3>{3, 0, 3});
  for (const char* s : {"++-+--", "+++-+-", "+-----"}) {
    auto p = out_degree_profile(parse_pattern(s));
    int lam = lambda(parse_pattern(s));
    CHECK(p[0] == lam / 2);
    CHECK(p[2] == lam / 2);
    CHECK(p[0] + p[1] + p[2] == int(std::string(s).size()));
  }
}

TEST_CASE("appearance thresholds, natural logs") {
  CHECK(p_threshold(1024, 0) == doctest::Approx(0.0067690154351557155).epsilon(1e-12));
  // lambda small: the 2(log n - log lambda) branch dominates.
  CHECK(p_threshold(100, 4) == doctest::Approx(0.032188758248682006).epsilon(1e-12));
  // lambda large: the log n branch dominates.
  CHECK(p_threshold(100, 60) == doctest::Approx(0.02302585092994046).epsilon(1e-12));
  // Anti-directed threshold is half the directed one.
  CHECK(p_threshold(50, 50) == doctest::Approx(p_threshold(50, 0) / 2.0).epsilon(1e-12));
  CHECK_THROWS_AS(p_threshold(100, 3), InputError);   // odd lambda
  CHECK_THROWS_AS(p_threshold(100, 102), InputError); // lambda > n
}

TEST_CASE("parse and format round trip") {
  for (const char* s : {"+++", "++-+--", "+-+-"}) {
    CHECK(format_pattern(parse_pattern(s)) == s);
  }
  CHECK(format_pattern(parse_pattern("directed:5")) == "+++++");
  CHECK(format_pattern(parse_pattern("anti:6")) == "+-+-+-");
  auto r = parse_pattern("random:12:6:42");
  CHECK(r.n() == 12);
  CHECK(lambda(r) == 6);
  CHECK(parse_pattern("random:12:6:42") == r);        // same seed, same pattern
  CHECK(!(parse_pattern("random:12:6:43") == r));
  CHECK_THROWS_AS(parse_pattern("anti:7"), InputError);
  CHECK_THROWS_AS(parse_pattern("random:10:3:1"), InputError);  // odd lambda
  CHECK_THROWS_AS(parse_pattern("++x-"), InputError);
  CHECK_THROWS_AS(parse_pattern("spiral:8"), InputError);
  CHECK_THROWS_AS(parse_pattern("++"), InputError);
}

TEST_CASE("canonical forms are orbit minima") {
  auto c = parse_pattern("++-+--");
  auto canon = canonical_form(c);
  for (int r = 0; r < c.n(); ++r) {
    CHECK_FALSE(rotated(c, r) < canon);
    CHECK_FALSE(rotated(reflected(c), r) < canon);
  }
  CHECK(canonical_form(canon) == canon);
  // Isomorphic inputs map to one representative.
  CHECK(canonical_form(rotated(c, 3)) == canon);
  CHECK(canonical_form(reflected(c)) == canon);
}

TEST_CASE("canonical enumeration matches an orbit count oracle") {
  for (int n : {3, 4, 5, 6, 7, 8}) {
    auto reps = canonical_patterns(n);
    CHECK(int(reps.size()) == testref::brute_class_count(n));
    for (const auto& c : reps) CHECK(canonical_form(c) == c);
  }
  CHECK(canonical_patterns(4).size() == 4);
}

TEST_CASE("embedding validity checker") {
  Digraph tri(3);
  tri.add_edge(0, 1);
  tri.add_edge(1, 2);
  tri.add_edge(2, 0);
  auto dir = parse_pattern("+++");
  CHECK(embedding_valid(tri, dir, {0, 1, 2}));
  CHECK(embedding_valid(tri, dir, {1, 2, 0}));
  CHECK_FALSE(embedding_valid(tri, dir, {0, 2, 1}));
  CHECK_FALSE(embedding_valid(tri, dir, {0, 1, 1}));
  CHECK(embedding_valid(tri, dir, {1, 2, 0}, {{0, 1}}));
  CHECK_FALSE(embedding_valid(tri, dir, {1, 2, 0}, {{0, 2}}));
  auto err = embedding_error(tri, parse_pattern("++-"), {0, 1, 2});
  REQUIRE(err.has_value());
  CHECK(err->find("missing edge") != std::string::npos);
}

TEST_CASE("landmark selection fills quotas with spacing") {
  // 48 positions, lambda = 4: two sinks and two sources inside one region.
  std::string s;
  for (int i = 0; i < 12; ++i) s += "+";
  s += "--+";
  for (int i = 0; i < 10; ++i) s += "+";
  s += "-";
  for (int i = 0; i < 22; ++i) s += "-";
  auto c = parse_pattern(s);
  REQUIRE(c.n() == 48);
  REQUIRE(lambda(c) == 4);
  LandmarkRequest req;
  req.mu0 = 1;
  req.mu2 = 1;
  req.mu1 = 3;
  req.spacing = 4;
  req.window_len = 40;
  auto res = select_landmarks(c, req);
  REQUIRE(res.ok());
  CHECK_FALSE(landmarks_error(c, req, *res.landmarks).has_value());
}

TEST_CASE("landmark failures name the class that ran short") {
  auto c = parse_pattern("directed:32");  // no sinks at all
  LandmarkRequest req;
  req.mu0 = 1;
  req.mu1 = 2;
  req.spacing = 2;
  req.window_len = 20;
  auto res = select_landmarks(c, req);
  REQUIRE_FALSE(res.ok());
  CHECK(res.failure->cls == 0);

  // Quotas feasible classwise but not with the spacing.
  auto anti = parse_pattern("anti:16");
  LandmarkRequest tight;
  tight.mu0 = 5;
  tight.spacing = 8;
  tight.window_len = 15;
  auto res2 = select_landmarks(anti, tight);
  REQUIRE_FALSE(res2.ok());
  CHECK(res2.failure->cls == 0);
  CHECK(res2.failure->best_filled >= 1);
}

TEST_CASE("default landmark request refuses tiny n") {
  CHECK_THROWS_AS(default_landmark_request(parse_pattern("directed:12")), InputError);
  auto req = default_landmark_request(parse_pattern("anti:200"));
  CHECK(req.mu0 + req.mu2 == 38);  // ceil(200/ln 200)
  CHECK(req.mu1 == 0);
  CHECK(req.window_len == 2);
}

TEST_SUITE_END();
