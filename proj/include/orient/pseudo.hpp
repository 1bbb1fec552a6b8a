#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "orient/graph.hpp"
#include "orient/params.hpp"
#include "orient/rng.hpp"

namespace orient {

/// Outcome of the three pseudorandomness conditions for a digraph with an
/// exceptional vertex set X:
///   A1  every in- and out-degree is at most c_maxdeg * ln n,
///   A2  every vertex has in- and out-degree at least ln n / c_mindeg_inv
///       counting only vertices outside X,
///   A3  whenever every vertex of A has at least (ln n)^{2/3} neighbours (in a
///       fixed direction) inside B, and A is not too large, then B has at
///       least |A| (ln n)^{1/3} vertices.
///
/// A failed check always carries a witness that literally violates the stated
/// inequality. A3 is co-NP-like, so above the exact cap only refutation is
/// attempted; `a3_mode` records which regime ran.
struct PseudoReport {
  bool a1_ok = true;
  bool a2_ok = true;
  bool a3_ok = true;
  CheckMode a3_mode = CheckMode::Exact;
  int a1_witness = -1;  ///< vertex with an in- or out-degree above the bound
  int a2_witness = -1;  ///< vertex short of neighbours outside X
  std::vector<int> a3_witness_a;
  std::vector<int> a3_witness_b;
  Dir a3_witness_dir = Dir::Out;

  [[nodiscard]] auto ok() const -> bool { return a1_ok && a2_ok && a3_ok; }
};

/// Checks A1 and A2 exhaustively and A3 exactly for n <= 20 (enumerating all
/// candidate sets B), otherwise by seeded refutation with greedily grown and
/// random candidates. X must be a duplicate-free subset of the vertices.
auto check_pseudorandom(const Digraph& d, const std::vector<int>& x,
                        const PipelineParams& params, int sample_trials = 400,
                        std::uint64_t sample_seed = 1) -> PseudoReport;

/// Result of the three-way partition of V(D) \ X. On success `parts` holds
/// V0, V1 and V2 (sorted), with |V1| = |V2| = floor(n/4) and every vertex of
/// the digraph keeping at least the partition degree floor into V1 and V2 in
/// both directions. On failure `worst_vertex` is the vertex that blocked.
struct PartitionResult {
  bool ok = false;
  std::array<std::vector<int>, 3> parts;
  int worst_vertex = -1;
  std::string message;
};

/// Randomly assigns V(D) \ X to three classes with probabilities 3/5, 1/5 and
/// 1/5, then repairs violated per-vertex degree events by resampling the
/// offending vertex's in/out-neighbourhood, restarting if a class overshoots
/// n/4. Gives up after `budget_factor * n` resampling steps. Requires
/// |X| <= n^{3/4}.
auto partition_exceptional(const Digraph& d, const std::vector<int>& x,
                           const PipelineParams& params, RngStream& rng,
                           int budget_factor = 50) -> PartitionResult;

/// Result of extracting the set B of badly expanding vertices relative to V0.
/// On success every set U disjoint from B with |U| <= 2m was verified (or
/// sampled-not-refuted) to satisfy |N(U, V0 \ B)| >= d |U|.
struct BadSetResult {
  bool ok = false;
  std::vector<int> b;  ///< sorted, 1 <= |b| <= bad_set_cap on success
  CheckMode verify_mode = CheckMode::Exact;
  std::string message;
};

/// Peels vertices with fewer than 2d neighbours in V0 \ B, augments B with any
/// refuting set the verifier finds, and re-verifies, up to a small number of
/// rounds. d and m come from the params' extendability fields.
auto find_bad_set(const UGraph& g, const std::vector<int>& v0,
                  const PipelineParams& params, int sample_trials = 2000,
                  std::uint64_t sample_seed = 1) -> BadSetResult;

}  // namespace orient
