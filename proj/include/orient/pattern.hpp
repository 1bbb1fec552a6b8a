// Oriented cycle patterns.
//
// A pattern on n positions is the orientation sequence of a Hamilton cycle:
// entry k says whether the edge between cyclic positions k and k+1 runs
// forward (k -> k+1) or backward. Vertices of the pattern are "positions" to
// keep them apart from graph vertices.
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "orient/graph.hpp"

namespace orient {

class OrientationPattern {
 public:
  OrientationPattern() = default;
  explicit OrientationPattern(std::vector<std::uint8_t> fwd) : fwd_(std::move(fwd)) {}

  auto n() const -> int { return int(fwd_.size()); }
  // Orientation of the edge between positions k and k+1 (mod n).
  auto forward(int k) const -> bool { return fwd_[k] != 0; }
  auto bits() const -> const std::vector<std::uint8_t>& { return fwd_; }

  // Out-degree of the vertex at position p: 0 sink, 1 through, 2 source.
  auto out_degree(int p) const -> int;

  friend auto operator==(const OrientationPattern& a, const OrientationPattern& b) -> bool {
    return a.fwd_ == b.fwd_;
  }
  friend auto operator<(const OrientationPattern& a, const OrientationPattern& b) -> bool {
    return a.fwd_ < b.fwd_;
  }

 private:
  std::vector<std::uint8_t> fwd_;
};

// Number of positions with in- or out-degree 0; equals the number of
// direction changes around the cycle, always even. 0 for consistently
// oriented cycles, n for anti-directed ones.
auto lambda(const OrientationPattern& c) -> int;

// Appearance threshold for this shape: log n/n when lambda = 0, else
// max(log n, 2(log n - log lambda)) / (2n). Natural logarithms.
auto p_threshold(int n, int lambda_value) -> double;
auto p_threshold(const OrientationPattern& c) -> double;

// (count of out-degree-0, -1, -2 positions). First and last are lambda/2.
auto out_degree_profile(const OrientationPattern& c) -> std::array<int, 3>;

// Lexicographically least among all rotations of the sequence and of its
// reversal-with-complement; two patterns describe isomorphic cycles exactly
// when their canonical forms agree.
auto canonical_form(const OrientationPattern& c) -> OrientationPattern;
// All canonical representatives on n positions, sorted. Enumeration cap n <= 14.
auto canonical_patterns(int n) -> std::vector<OrientationPattern>;

// '+'/'-' text form, e.g. "++-+--". Shorthands: "directed:n", "anti:n"
// (n even), "random:n:lambda:seed" (uniform pattern with that many direction
// changes).
auto parse_pattern(const std::string& spec) -> OrientationPattern;
auto format_pattern(const OrientationPattern& c) -> std::string;

// Rotate so old position r becomes position 0; reflect fixes position 0 and
// reverses traversal (complementing orientations).
auto rotated(const OrientationPattern& c, int r) -> OrientationPattern;
auto reflected(const OrientationPattern& c) -> OrientationPattern;

// --- embeddings --------------------------------------------------------------

// Position -> vertex map of a pattern into a digraph.
using Embedding = std::vector<int>;
using Pin = std::pair<int, int>;  // (position, vertex)

// Empty when valid, else a description of the first violated constraint.
auto embedding_error(const Digraph& d, const OrientationPattern& c, const Embedding& emb,
                     const std::vector<Pin>& pins = {}) -> std::optional<std::string>;
auto embedding_valid(const Digraph& d, const OrientationPattern& c, const Embedding& emb,
                     const std::vector<Pin>& pins = {}) -> bool;

// --- landmark selection ------------------------------------------------------

struct LandmarkRequest {
  int mu0 = 0, mu1 = 0, mu2 = 0;  // picks needed per out-degree class
  int spacing = 1;                // min pairwise distance on the cycle
  int window_len = 0;             // picks confined to a window of this length
};

struct Landmarks {
  int window_start = 0;  // window = positions window_start .. +window_len (cyclic)
  int window_len = 0;
  std::vector<int> z0, z1, z2;  // absolute positions, one vector per class
};

struct LandmarkFailure {
  int cls = -1;       // out-degree class whose quota could not be met
  int best_filled = 0;  // most picks achieved for that class over all windows
  std::string message;
};

struct LandmarkResult {
  std::optional<Landmarks> landmarks;
  std::optional<LandmarkFailure> failure;
  auto ok() const -> bool { return landmarks.has_value(); }
};

// Sliding-window balance selection: windows are ranked by how closely their
// out-degree-1 share tracks the global (n - lambda)/n density, then picks are
// made greedily, smaller of {class 0+2, class 1} first, spaced >= spacing.
auto select_landmarks(const OrientationPattern& c, const LandmarkRequest& req) -> LandmarkResult;

// mu defaults ceil(lambda/log n), ceil((n-lambda)/log n); spacing
// ceil(100 log n/loglog n); window floor(n/100). Needs n >= 16.
auto default_landmark_request(const OrientationPattern& c) -> LandmarkRequest;

// Empty when lm satisfies req for c, else a description.
auto landmarks_error(const OrientationPattern& c, const LandmarkRequest& req, const Landmarks& lm)
    -> std::optional<std::string>;

}  // namespace orient
