#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "orient/graph.hpp"
#include "orient/params.hpp"
#include "orient/rng.hpp"

namespace orient {

/// A subgraph of a host graph: a vertex subset plus edges between its members,
/// kept on the host's vertex ids.
struct Subgraph {
  Bitset verts;
  UGraph edges;

  explicit Subgraph(int n = 0) : verts(n), edges(n) {}

  auto add_vertex(int v) -> void { verts.set(v); }
  auto add_edge(int u, int v) -> void;  // requires both endpoints present
  [[nodiscard]] auto degree(int v) const -> int { return edges.degree(v); }
  [[nodiscard]] auto max_degree() const -> int;
};

/// Adds a path (vertex sequence) to the subgraph, vertices included.
auto add_path(Subgraph& s, const std::vector<int>& path) -> void;

/// Verdict of the (d, m)-extendability check: S has maximum degree at most d
/// and every vertex set U with |U| <= 2m satisfies
///   |N'(U) \ V(S)| >= (d-1)|U| - sum over x in U and V(S) of (deg_S(x) - 1),
/// where N'(U) is the union of the members' neighbourhoods. A refutation
/// carries the violating U.
struct ExtendableReport {
  bool ok = false;
  CheckMode mode = CheckMode::Exact;
  std::vector<int> witness;
};

/// Exact mode enumerates every U up to size 2m (use only when that subset
/// count is small); sampled mode tries adversarial and random sets and can
/// only refute. Vertices in `excluded` are treated as absent from the host
/// graph: they are never put in U and never counted in N'. Throws InputError
/// when S exceeds degree d.
auto check_extendable(const UGraph& g, const Subgraph& s, int d, int m,
                      CheckMode mode, const Bitset* excluded = nullptr,
                      int sample_trials = 2000, std::uint64_t sample_seed = 1)
    -> ExtendableReport;

/// Picks Exact when the subset enumeration is affordable for this n and m.
auto extendable_check_mode(int n, int m) -> CheckMode;

/// Result of growing one connecting path. On failure `stage` names the step
/// that gave up (walk, join, extendability).
struct PathResult {
  bool ok = false;
  std::vector<int> path;  // vertex sequence from a to b, length edges = size-1
  std::string stage;
  std::string message;
};

/// Finds an a,b-path of exactly `ell` edges whose internal vertices lie
/// outside S (and outside `excluded`), such that S plus the path is still
/// (d, m)-extendable (verified exactly when affordable, else not refuted).
/// The construction pads with a random walk from a, then grows bounded-degree
/// search trees from the walk end and from b and joins them by an edge.
/// Requires d >= 3, m >= 1, ell >= 2 ceil(log(2m)/log(d-1)) + 1, endpoints
/// distinct members of S with degree at most d/2 in S.
auto extend_path(const UGraph& g, const Subgraph& s, int a, int b, int ell, int d,
                 int m, RngStream& rng, const Bitset* excluded = nullptr,
                 int attempts = 24) -> PathResult;

/// Result of connecting several pairs in sequence. `residual` is V1, the part
/// of v0 left untouched; its induced graph is checked as an expander and the
/// verdict reported (a sampled non-refutation is not a certificate).
struct ConnectResult {
  bool ok = false;
  std::vector<std::vector<int>> paths;
  std::vector<int> residual;
  ExpanderReport residual_report;
  int failed_pair = -1;
  std::string stage;
  std::string message;
};

/// Connects (x_i, y_i) by internally disjoint paths of the requested lengths,
/// with internal vertices drawn from v0 minus the bad set b. Endpoints must be
/// distinct and lie outside v0 and b; each length must be at least the
/// params' minimum connection length and the lengths must sum to at most n/8.
auto connect_pairs(const UGraph& g, const std::vector<int>& v0,
                   const std::vector<int>& b,
                   const std::vector<std::pair<int, int>>& pairs,
                   const std::vector<int>& lengths, const PipelineParams& params,
                   RngStream& rng) -> ConnectResult;

}  // namespace orient
