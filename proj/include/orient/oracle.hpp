// Exact containment engine for oriented Hamilton cycle patterns.
//
// find_embedding runs a Held-Karp style DP over (vertex subset, last vertex)
// where the orientation consulted at step s is the pattern edge between
// positions s-1 and s, so one sweep handles an arbitrary orientation
// sequence. State is one bitset of feasible last vertices per subset.
#pragma once

#include <optional>
#include <vector>

#include "orient/graph.hpp"
#include "orient/pattern.hpp"

namespace orient {

// Exhaustive search for a copy of c in d honouring pins. Without pins the
// pattern is tried at every cyclic offset and both traversal directions
// (duplicate variants skipped); pins name absolute positions, so only the
// identity anchoring is searched. Cap n <= 22.
auto find_embedding(const Digraph& d, const OrientationPattern& c, const std::vector<Pin>& pins = {})
    -> std::optional<Embedding>;

auto contains_pattern(const Digraph& d, const OrientationPattern& c) -> bool;

struct PatternSweep {
  int checked = 0;
  std::vector<OrientationPattern> missing;
  auto all() const -> bool { return missing.empty(); }
};

// Checks d against every canonical pattern on n(d) positions (cap n <= 14),
// or against an explicit list.
auto contains_all_patterns(const Digraph& d) -> PatternSweep;
auto contains_all_patterns(const Digraph& d, const std::vector<OrientationPattern>& patterns)
    -> PatternSweep;

// P(D(n,p) contains a copy of c) by summing over all 2^(n(n-1)) digraphs.
// Cap n <= 4.
auto exact_containment_probability(int n, double p, const OrientationPattern& c) -> double;

}  // namespace orient
