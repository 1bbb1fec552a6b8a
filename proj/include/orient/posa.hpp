#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "orient/graph.hpp"

namespace orient {

/// Rotation closure of a path with its first vertex and one edge held fixed:
/// for every endpoint reachable by iterated rotations, one witness path.
/// Every stored path starts at `fixed_end`, contains `fixed_edge` and has the
/// same vertex set as `base`.
struct RotationState {
  std::vector<int> base;
  int fixed_end = -1;
  Edge fixed_edge{-1, -1};
  std::map<int, std::vector<int>> reached;  ///< free endpoint -> witness path
};

/// One rotation of the path u_0...u_l keeping u_0 and `fixed_edge`: for an
/// interior pivot u_i (a neighbour of the free endpoint u_l, supplied by the
/// caller), removes u_i u_{i+1} and adds u_l u_i, giving a u_0,u_{i+1}-path on
/// the same vertex set. The degenerate pivot i = l-1 would recreate the path
/// and is rejected as nullopt. Throws InputError when `fixed_end` is not the
/// first vertex, `fixed_edge` is not a path edge, the pivot is missing or not
/// interior, or the removed edge is `fixed_edge`.
auto rotate(const std::vector<int>& path, int fixed_end, Edge fixed_edge,
            int pivot) -> std::optional<std::vector<int>>;

/// Breadth-first closure of `path` under rotations in g with the first vertex
/// and `fixed_edge` held fixed. New endpoints found from one path are visited
/// in ascending vertex order; the base endpoint itself counts as reached.
/// The path must be a path of g containing `fixed_edge`.
auto rotation_closure(const UGraph& g, const std::vector<int>& path,
                      Edge fixed_edge) -> RotationState;

/// All pairs f of distinct vertices such that G + e + f has a longer path
/// containing e than G + e does, or a Hamilton cycle through e. Every pair is
/// eligible, existing edges and e itself included. Pairs come back as
/// (lo, hi) in lexicographic order. The longest-path-through-e computation is
/// a DP over vertex subsets, so n above `cap` is an InputError.
auto booster_set(const UGraph& g, Edge e, int cap = 18) -> std::vector<Edge>;

/// Outcome of the sprinkled Hamilton x,y-path search.
struct PosaResult {
  bool ok = false;
  std::vector<int> path;    ///< Hamilton x,y-path when ok
  int consumed = 0;         ///< sprinkled edges absorbed into the host
  long long rotations = 0;  ///< rotated paths materialized over the search
  std::string message;      ///< which resource ran out, on failure
};

/// Searches for a Hamilton x,y-path in g0 plus a prefix of `sprinkle`,
/// working in the host plus the fixed edge e = xy (added artificially when
/// absent). Maintains the longest known path through e: the rotation closure
/// of the current path is explored breadth first over endpoint pairs, any
/// closure path whose endpoint sees a vertex off the path is extended, and
/// when a closure path spans all vertices with adjacent endpoints the
/// resulting Hamilton cycle through e loses e and the x,y-path is returned.
/// When the closure stalls, the next sprinkled edge is absorbed into the host
/// (and kept whether or not it helps) and the closure rebuilt. Fails with
/// ok = false once the stream or the rotation budget runs out.
auto posa_ham_path(const UGraph& g0, int x, int y,
                   const std::vector<Edge>& sprinkle,
                   long long budget = 1'000'000) -> PosaResult;

}  // namespace orient
