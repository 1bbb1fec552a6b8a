#pragma once

#include <string>
#include <utility>
#include <vector>

#include "orient/graph.hpp"
#include "orient/pattern.hpp"

namespace orient {

/// Inputs of the exceptional-cover step: a host digraph, the exceptional set
/// X, the badly-behaved sets B+/B- with their absorption reservoirs A+/A-,
/// and one pattern slice per vertex of X u B. Slice j occupies the cyclic
/// positions slice_start[j] .. slice_start[j] + slice_len of `pattern`, its
/// midpoint sits at slice_start[j] + slice_len / 2, and `assign` pairs every
/// vertex of X u B with the slice whose midpoint it must realize. The five
/// vertex sets are pairwise disjoint and the slices share no position.
struct CoverInstance {
  Digraph d;
  std::vector<int> x, b_plus, b_minus, a_plus, a_minus;
  OrientationPattern pattern;
  std::vector<int> slice_start;
  int slice_len = 0;
  std::vector<std::pair<int, int>> assign;  ///< (vertex, slice index)
  double deg_threshold = 0;                 ///< per-side degree demand d
};

/// Throws InputError when the sets overlap, a slice is malformed or two
/// slices collide, or `assign` is not a bijection from X u B onto the slices.
auto validate_cover_instance(const CoverInstance& inst) -> void;

/// The calming hierarchy over B = B+ u B-. Level 0 is empty; level i admits
/// the B-vertices with out-degree >= d into (B+ level i-1) u A+ and in-degree
/// >= d into (B- level i-1) u A-. On success r is the first level containing
/// all of B. `first_level` maps each B-vertex to the level where it first
/// appears (-1 off B, or for B-vertices never admitted).
struct Hierarchy {
  bool ok = false;
  int r = 0;
  std::vector<std::vector<int>> levels_plus;   ///< B+_0 .. B+_r, sorted
  std::vector<std::vector<int>> levels_minus;  ///< B-_0 .. B-_r, sorted
  std::vector<int> first_level;
  std::vector<int> uncovered;  ///< B-vertices never admitted, on failure
  std::string message;
};

/// Iterates the level rule until B is covered, the levels stop growing, or
/// the budget runs out; the last two are failures carrying the uncovered
/// vertices. `level_budget` <= 0 selects the default ceil(4 ln n / lnln n).
auto build_hierarchy(const CoverInstance& inst, int level_budget = 0) -> Hierarchy;

/// A pair of functions g1, g2 : X u B -> B(sign) u A(sign), as arrays indexed
/// by host vertex (-1 outside X u B, and g1(v) < g2(v) everywhere else). On
/// success all 2|X u B| images are distinct and every v g_i(v) is an edge of
/// the level-stratified auxiliary bipartite graph. On failure `deficient` is
/// a set U with fewer than 2|U| auxiliary neighbours.
struct DoubleMatching {
  bool ok = false;
  std::vector<int> g1, g2;
  std::vector<int> deficient;
  std::string message;
};

/// Builds the auxiliary bipartite graph for one sign (Dir::Out works with
/// B+ u A+ along out-edges, Dir::In with B- u A- along in-edges): x may lean
/// on y when y is a D-neighbour of x in that direction, y lies in the sign's
/// class, and y first appears strictly earlier in the hierarchy than x (with
/// X-vertices last and A-vertices earliest). Each vertex of X u B then gets
/// two distinct images via maximum matching on the demand-2 split graph,
/// preferring A-images so that cover paths terminate sooner.
auto hall_double_matching(const CoverInstance& inst, const Hierarchy& h,
                          Dir sign) -> DoubleMatching;

/// One realized slice portion: `verts[k]` is the host vertex standing at
/// pattern position lo + k, and the slice midpoint lands on `v`.
struct CoverPath {
  int v = -1;
  int slice = -1;
  int lo = 0, hi = 0;  ///< realized pattern positions, lo <= mid <= hi
  std::vector<int> verts;
};

/// The selected disjoint family {Q_v : v in X u b_bar} covering X u B.
struct CoverResult {
  bool ok = false;
  std::vector<CoverPath> paths;
  std::vector<int> b_bar;
  int failed_vertex = -1;
  std::string message;
};

/// Grows every Q_v outward from v along its slice, each step taking the
/// first unused g1/g2 image of the current endpoint for the orientation the
/// slice demands (A-images first, ending the side). Keeps the paths of X
/// plus, walking levels r..1, the paths of first-time vertices not already
/// covered; verifies the selected family is disjoint, covers X u B, and ends
/// in A+ u A-. Any stalled side or a verification miss is a failure naming
/// the offending vertex.
auto build_cover_paths(const CoverInstance& inst, const Hierarchy& h,
                       const DoubleMatching& match_plus,
                       const DoubleMatching& match_minus) -> CoverResult;

}  // namespace orient
