// Statistics and experiments over the random digraph process: hitting-time
// extraction, structural diagnostics on the conditioning checkpoints,
// threshold scans, and tabular emission (CSV and JSON) of the results.
#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "orient/params.hpp"
#include "orient/pattern.hpp"
#include "orient/random_models.hpp"

namespace orient {

// Degree milestones of one process run. The arrays are indexed by prefix
// length and are raw counts, not assumed monotone anywhere.
struct ProcessStats {
  // smallest m with every total degree at least 2, or -1 if never reached
  long long m0 = -1;
  // largest m with a vertex of in-degree 0 or out-degree 0
  long long m1 = 0;
  std::vector<int> s;  // s[i]: vertices with in- or out-degree 0 after i steps
  std::vector<int> t;  // t[i]: vertices with in- and out-degree exactly 1
};

// Single pass over the trace with incremental degree counters.
auto hitting_times(const ProcessTrace& trace) -> ProcessStats;

// One structural diagnostic evaluated on the checkpoint prefixes. The
// properties are likely (not certain) at large n, so callers aggregate pass
// frequencies across seeds rather than asserting a single trace.
struct PropertyResult {
  int id = 0;           // 1..12, see check_process_properties
  std::string name;
  bool pass = false;
  double value = 0.0;   // measured quantity the bound applies to
  double bound = 0.0;   // threshold; ids 10..12 pass with value >= bound
  std::string mode;     // "exact", "sampled" (id 8 at n > 20), or "capped"
  std::string witness;  // short description of a violation, empty on pass
};

// Evaluates the selected diagnostics (ids 1..12) at the conditioning
// checkpoints K_j = prefix(trace, i_j) with the low-degree cutoff d:
//   1 low-set-size:            |S_0| <= n^(2/3)
//   2 stream-edges-at-low-set: at most n edges of K_3 minus K_0 touch S_0
//   3 short-paths-between-low: at most n^(1/6) paths of length <= 4 in
//                              underlying K_3 joining two S_1 vertices
//   4 short-cycles-at-low:     no 2-cycles or underlying triangles of K_3
//                              touching S_1
//   5 low-set-star-forest:     K_3 induced on S_2 and its neighbourhoods is
//                              a disjoint union of |S_2| stars
//   6 double-low-star-forest:  the same for T, avoiding S_1 minus T
//   7 low-neighbourhood-spread: every vertex sends at most 2 edges each way
//                              into S_1 and the neighbourhoods of S_1 minus v
//   8 small-set-expansion:     no small set A whose vertices all have degree
//                              (log n)^(2/3)/2 into a set B smaller than
//                              100 (log n)^(1/3) |A|
//   9 stream-max-degree:       max in/out degree of K_3 at most 50 log n
//  10 isolated-vertex-present: K_1 still has a total-degree-0 vertex
//  11 in-degree-zero-count:    K_2 has at least n^(1/5) in-degree-0 vertices
//  12 min-degree-two:          min in/out degree of K_3 at least 2
// where S_j collects vertices with in- or out-degree at most d in K_j and T
// those with both degrees at most d in K_1. The seed drives the sampled
// search in id 8. Unknown ids, or checkpoints that fall outside the process
// or out of order for the selected ids, raise InputError; an empty selection
// returns an empty report.
auto check_process_properties(const ProcessTrace& trace, const std::vector<int>& which,
                              std::uint64_t seed = 0) -> std::vector<PropertyResult>;

// One emitted table row. Negative trial/i/p mean "not applicable" and emit
// as blank fields.
struct Row {
  std::string experiment;
  int n = 0;
  std::uint64_t seed = 0;
  int trial = -1;
  long long i = -1;
  double p = -1.0;
  std::string pattern;
  std::string metric;
  double value = 0.0;
  friend auto operator==(const Row&, const Row&) -> bool = default;
};

// CSV with the fixed header "experiment, n, seed, trial, i, p, pattern,
// metric, value"; fields are ", "-separated, doubles printed shortest
// round-trip. parse_csv(emit_csv(rows)) == rows.
auto emit_csv(const std::vector<Row>& rows) -> std::string;
auto parse_csv(const std::string& text) -> std::vector<Row>;

// JSON object mirroring the CSV: schema_version, columns, and one object
// per row with blanks as null.
auto emit_json(const std::vector<Row>& rows) -> std::string;

// 95% Wilson score interval for successes out of trials.
auto wilson_interval(int successes, int trials) -> std::pair<double, double>;

// Per seeded trial: extract m0/m1, check the directed cycle is absent at
// m1, sweep all canonical patterns at m1 (expecting only the directed one
// missing) and at m1 + 1 (expecting none missing), and test that every
// canonical pattern whose direction-change count lies in
// [1 + (s-1) log n, n-1 - (t-1) log n] at m0 is contained in prefix(m0).
// The all-patterns sweep caps n at 12.
auto hitting_experiment(int n, int trials, std::uint64_t seed) -> std::vector<Row>;

// One aggregate scan row per grid probability, sorted by p. Every row
// repeats the predicted appearance threshold for the pattern so a table is
// self-describing about where the scan sits relative to it.
struct ThresholdRow {
  double p = 0.0;
  int successes = 0;
  int trials = 0;
  double frequency = 0.0;
  double wilson_low = 0.0;
  double wilson_high = 0.0;
  double p_c = 0.0;
  friend auto operator==(const ThresholdRow&, const ThresholdRow&) -> bool = default;
};

// Containment frequency of c in D(n, p) across the grid. Engine "oracle"
// decides containment exactly (n <= 22); engine "pipeline" runs the full
// assembly on a host/stream split of one sample, so its frequency is a
// lower bound on the containment probability.
auto threshold_scan(const OrientationPattern& c, int n, const std::vector<double>& p_grid,
                    int trials, const std::string& engine, std::uint64_t seed)
    -> std::vector<ThresholdRow>;

}  // namespace orient
