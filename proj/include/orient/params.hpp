#pragma once

#include <cmath>
#include <string>

namespace orient {

/// Tunable constants shared by the pseudorandomness checks, the partition and
/// bad-set routines, path connection, covering, and the embedding pipeline.
///
/// The defaults are the constants used in the asymptotic analysis ("paper"
/// profile). Most of them are scale-broken at the graph sizes this code can
/// actually run, so `desk_params` substitutes documented relaxations.
struct PipelineParams {
  double c_maxdeg = 100.0;        ///< max in/out degree bound, times ln n
  double c_mindeg_inv = 500.0;    ///< min degree outside X is ln n / this
  double a3_deg_exponent = 2.0 / 3.0;       ///< expansion needs d >= (ln n)^this
  double a3_expansion_exponent = 1.0 / 3.0; ///< ... and yields |B| >= |A|(ln n)^this
  double a3_size_frac = 1.0;      ///< expansion applies to |A| <= this * n lnln n / ln n
  double partition_deg_inv = 5000.0;  ///< partition degree floor is ln n / this
  double expander_ratio = 10.0;   ///< residual graphs must be this-expanders
  double expander_frac = 0.05;    ///< ... on sets up to this fraction of vertices
  double d_extend = 3.0;          ///< d of (d,m)-extendability
  double m_extend = 1.0;          ///< m of (d,m)-extendability
  double min_connect_len_factor = 10.0; ///< min connection length, times ln n / lnln n
  double cover_deg_inv = 10000.0; ///< cover hierarchy threshold is ln n / this
  double cover_slice_factor = 4.0;      ///< cover slice half-length, times ln n / lnln n
  double sprinkle_connect_factor = 1e-4; ///< connection stream density, times ln n / n
  double sprinkle_posa_factor = 1e-5;    ///< rotation stream density, times ln n / n
};

/// Throws InputError unless all fields are positive, d_extend >= 3 and
/// m_extend >= 1.
auto validate_params(const PipelineParams& p) -> void;

/// Literal analysis constants, with (d, m) resolved for this n.
auto paper_params(int n) -> PipelineParams;

/// Relaxations that keep every stage meaningful at n in the hundreds. Degree
/// floors are raised to small integers, connection lengths shortened, and the
/// sprinkle streams made dense enough that the constructions usually succeed.
auto desk_params(int n) -> PipelineParams;

/// Profile lookup by name ("paper" or "desk"); unknown names are InputError.
auto params_profile(const std::string& name, int n) -> PipelineParams;

/// Overlays key=value assignments from a config file onto `base`. Lines may be
/// blank or start with '#'. Unknown keys, repeated keys and malformed numbers
/// are InputError.
auto load_params(const std::string& path, PipelineParams base) -> PipelineParams;
auto parse_params(const std::string& text, PipelineParams base) -> PipelineParams;

/// Formats all fields as key=value lines, in declaration order. Reports embed
/// this so every run records the parameter set it actually used.
auto format_params(const PipelineParams& p) -> std::string;

// Resolved quantities. Thresholds are real-valued and compared against
// integer degrees with a small tolerance, as in `a1_max_degree(p, n) + kEps`.

inline auto a1_max_degree(const PipelineParams& p, int n) -> double {
  return p.c_maxdeg * std::log(n);
}
inline auto a2_min_degree(const PipelineParams& p, int n) -> double {
  return std::log(n) / p.c_mindeg_inv;
}
inline auto a3_size_cap(const PipelineParams& p, int n) -> double {
  return p.a3_size_frac * n * std::log(std::log(n)) / std::log(n);
}
inline auto a3_degree_need(const PipelineParams& p, int n) -> double {
  return std::pow(std::log(n), p.a3_deg_exponent);
}
inline auto a3_expansion(const PipelineParams& p, int n) -> double {
  return std::pow(std::log(n), p.a3_expansion_exponent);
}
inline auto partition_min_degree(const PipelineParams& p, int n) -> double {
  return std::log(n) / p.partition_deg_inv;
}
inline auto cover_degree(const PipelineParams& p, int n) -> double {
  return std::log(n) / p.cover_deg_inv;
}
inline auto extend_d(const PipelineParams& p) -> int {
  return static_cast<int>(p.d_extend);
}
inline auto extend_m(const PipelineParams& p) -> int {
  return static_cast<int>(p.m_extend) < 1 ? 1 : static_cast<int>(p.m_extend);
}
inline auto min_connect_length(const PipelineParams& p, int n) -> int {
  return static_cast<int>(
      std::ceil(p.min_connect_len_factor * std::log(n) / std::log(std::log(n))));
}
inline auto cover_slice_half(const PipelineParams& p, int n) -> int {
  return static_cast<int>(
      std::ceil(p.cover_slice_factor * std::log(n) / std::log(std::log(n))));
}
inline auto sprinkle_connect_p(const PipelineParams& p, int n) -> double {
  auto v = p.sprinkle_connect_factor * std::log(n) / n;
  return v < 1.0 ? v : 1.0;
}
inline auto sprinkle_posa_p(const PipelineParams& p, int n) -> double {
  auto v = p.sprinkle_posa_factor * std::log(n) / n;
  return v < 1.0 ? v : 1.0;
}

/// Largest admissible bad set. The analysis bounds it by n lnlnln n / ln n,
/// which is meaningful only once lnlnln n > 0; the 3m fallback keeps the cap
/// usable for the small fixtures in the test suite.
auto bad_set_cap(const PipelineParams& p, int n) -> int;

}  // namespace orient
