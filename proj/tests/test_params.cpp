#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "orient/errors.hpp"
#include "orient/params.hpp"

using namespace orient;

TEST_SUITE_BEGIN("params");

TEST_CASE("defaults carry the analysis constants") {
  PipelineParams p;
  CHECK(p.c_maxdeg == 100.0);
  CHECK(p.c_mindeg_inv == 500.0);
  CHECK(p.partition_deg_inv == 5000.0);
  CHECK(p.cover_deg_inv == 10000.0);
  CHECK(p.expander_ratio == 10.0);
  CHECK(p.expander_frac == 0.05);
  CHECK(p.min_connect_len_factor == 10.0);
  CHECK(p.cover_slice_factor == 4.0);
  CHECK(p.sprinkle_connect_factor == 1e-4);
  CHECK(p.sprinkle_posa_factor == 1e-5);
  CHECK_NOTHROW(validate_params(p));
}

TEST_CASE("resolved thresholds at n = 1000") {
  PipelineParams p;
  CHECK(a1_max_degree(p, 1000) == doctest::Approx(690.7755278982137));
  CHECK(a2_min_degree(p, 1000) == doctest::Approx(0.013815510557964273));
  CHECK(a3_size_cap(p, 1000) == doctest::Approx(279.77898113970855));
  CHECK(a3_degree_need(p, 1000) == doctest::Approx(3.627086912339476));
  CHECK(a3_expansion(p, 1000) == doctest::Approx(1.9044912476405547));
  // The two exponents are 2/3 and 1/3 of the same base.
  CHECK(a3_degree_need(p, 1000) ==
        doctest::Approx(a3_expansion(p, 1000) * a3_expansion(p, 1000)));
}

TEST_CASE("paper profile resolves d and m from n") {
  auto p = paper_params(5000);
  CHECK(p.d_extend == 3.0);  // cube root of ln n stays below 3 for feasible n
  CHECK(extend_d(p) == 3);
  CHECK(p.m_extend == doctest::Approx(16.666666666666668));
  CHECK(extend_m(p) == 16);
  CHECK(min_connect_length(p, 200) == 32);
  CHECK_THROWS_AS(paper_params(2), InputError);
}

TEST_CASE("desk profile raises the degree floors to small integers") {
  auto p = desk_params(200);
  CHECK(a2_min_degree(p, 200) == doctest::Approx(1.0));
  CHECK(partition_min_degree(p, 200) == doctest::Approx(2.0));
  CHECK(cover_degree(p, 200) == doctest::Approx(1.0));
  CHECK(extend_d(p) == 3);
  CHECK(extend_m(p) == 1);
  CHECK(min_connect_length(p, 200) == 5);
  CHECK(p.a3_size_frac == 0.25);
  CHECK(p.a3_deg_exponent == 1.0);
  CHECK_NOTHROW(validate_params(p));

  // Large n keeps the literal constants.
  PipelineParams q = desk_params(1000000000);
  CHECK(q.c_mindeg_inv < 500.0);  // ln(1e9)/2 is still below 500
  CHECK(q.sprinkle_connect_factor == 5.0);
}

TEST_CASE("profile lookup by name") {
  CHECK(params_profile("paper", 500).m_extend ==
        doctest::Approx(paper_params(500).m_extend));
  CHECK(params_profile("desk", 500).sprinkle_posa_factor == 2.0);
  CHECK_THROWS_AS(params_profile("fast", 500), InputError);
}

TEST_CASE("validation rejects out-of-range fields") {
  PipelineParams p;
  p.c_maxdeg = 0.0;
  CHECK_THROWS_AS(validate_params(p), InputError);
  p = PipelineParams{};
  p.d_extend = 2.0;
  CHECK_THROWS_AS(validate_params(p), InputError);
  p = PipelineParams{};
  p.m_extend = 0.5;
  CHECK_THROWS_AS(validate_params(p), InputError);
}

TEST_CASE("config text overlays and validates") {
  PipelineParams base;
  auto p = parse_params("# comment\n\nc_maxdeg = 50\nexpander_ratio=8\n", base);
  CHECK(p.c_maxdeg == 50.0);
  CHECK(p.expander_ratio == 8.0);
  CHECK(p.c_mindeg_inv == 500.0);  // untouched fields keep the base values

  CHECK_THROWS_AS(parse_params("no_such_key = 1\n", base), InputError);
  CHECK_THROWS_AS(parse_params("c_maxdeg = 1\nc_maxdeg = 2\n", base), InputError);
  CHECK_THROWS_AS(parse_params("c_maxdeg = 1.5x\n", base), InputError);
  CHECK_THROWS_AS(parse_params("c_maxdeg 1.5\n", base), InputError);
  CHECK_THROWS_AS(parse_params("d_extend = 1\n", base), InputError);
}

TEST_CASE("format and parse round-trip") {
  auto p = desk_params(300);
  p.sprinkle_posa_factor = 0.125;
  auto text = format_params(p);
  auto q = parse_params(text, paper_params(300));
  CHECK(format_params(q) == text);
}

TEST_CASE("config files load from disk") {
  auto path = std::filesystem::temp_directory_path() / "orient_params_test.cfg";
  {
    std::ofstream out(path);
    out << "cover_slice_factor = 2.5\n";
  }
  auto p = load_params(path.string(), PipelineParams{});
  CHECK(p.cover_slice_factor == 2.5);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(load_params(path.string(), PipelineParams{}), InputError);
}

TEST_CASE("bad set cap interpolates between fallback and asymptotic bound") {
  CHECK(bad_set_cap(PipelineParams{}, 20) == 3);  // 3m with m = 1
  auto p = desk_params(1000);                     // m = 3, so fallback 9
  CHECK(bad_set_cap(p, 1000) == 96);              // n lnlnln n / ln n wins
}

TEST_SUITE_END();
