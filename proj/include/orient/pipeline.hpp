#pragma once

#include <optional>
#include <string>
#include <vector>

#include "orient/graph.hpp"
#include "orient/params.hpp"
#include "orient/pattern.hpp"
#include "orient/random_models.hpp"
#include "orient/rng.hpp"

namespace orient {

/// The two undirected sprinkle streams consumed by one embedding attempt. The
/// walk stream feeds the bad-set extraction, the gap connections and the
/// residual host graph; the booster stream feeds the rotation search. Each is
/// bi-oriented wherever directed edges are needed, so a stream edge always
/// contributes both directions.
struct SprinkleStreams {
  UGraph walk;
  UGraph boost;
};

/// Samples both streams at the params' intensities.
auto sample_sprinkle(int n, const PipelineParams& params, RngStream& rng)
    -> SprinkleStreams;

/// Report of one full assembly run. On failure `stage` names the single step
/// that gave up: partition, bad-set, cover, connect, posa, or validate (the
/// defensive final replay). `walk_used` and `boost_used` are the stream parts
/// the run consumed, kept so callers can re-verify a success independently.
struct EmbedReport {
  bool ok = false;
  std::string stage;
  std::string message;
  int bad_set_size = 0;       ///< |B| extracted from the walk stream
  int cover_paths = 0;        ///< cover paths selected
  int pairs_connected = 0;    ///< gap paths routed through the walk stream
  int posa_consumed = 0;      ///< booster edges absorbed by the rotation search
  long long posa_rotations = 0;
  UGraph walk_used;
  UGraph boost_used;
  std::optional<Embedding> embedding;
};

/// The digraph a success is replayed against: the host plus both consumed
/// stream parts, bi-oriented.
auto replay_graph(const Digraph& host, const UGraph& walk_used,
                  const UGraph& boost_used) -> Digraph;

/// Embeds the spanning cycle pattern `c` into d0 plus the sprinkle streams,
/// sending each pinned vertex to its pinned position.
///
/// The run partitions the non-exceptional vertices, extracts a bad set from
/// the walk stream's underlying graph, covers X u B by oriented slices laid
/// out around the window, connects consecutive slice portions through the
/// walk stream honoring the inter-slice pattern lengths, and closes the cycle
/// with a rotation-search Hamilton path on the residual graph boosted by the
/// second stream. A success is validity-replayed (edges and pins) against
/// `replay_graph` before it is returned.
///
/// `x` lists the pinned vertices; `pins` maps them to positions, one pin per
/// member of x, each position inside the window, pairwise at least ten
/// minimum-connection-lengths apart. The window is `window_len` edges of the
/// pattern starting at `window_start` and must be at most n/8 long. Slices
/// for unpinned bad vertices are packed after the window when it cannot hold
/// them. Violations of these input shapes throw InputError; everything
/// data-driven comes back as a stage-tagged failure.
auto embed_cycle(const Digraph& d0, const std::vector<int>& x,
                 const OrientationPattern& c, int window_start, int window_len,
                 const std::vector<Pin>& pins, const UGraph& sprinkle_walk,
                 const UGraph& sprinkle_boost, const PipelineParams& params,
                 RngStream& rng) -> EmbedReport;

// --- the process adapter -----------------------------------------------------

/// Conditioning schedule for the random digraph process, rounded to whole
/// steps: checkpoint 0 at 9 n ln n/20, 1 at n ln n/2 - n lnln n, 2 at
/// 3 n ln n/4 and 3 at n ln n + 2 n lnln n. Requires n >= 3.
auto process_checkpoint(int n, int j) -> long long;

/// Degree cutoff below which a vertex counts as low in the conditioning
/// (ln n / 300, compared against integer degrees with <=).
auto low_degree_cutoff(int n) -> double;

/// One low-degree vertex with its picked path-of-length-2 neighbours: v will
/// sit at a cycle position of out-degree `out_deg`, flanked by xv and yv.
struct TripleChoice {
  int v = -1;
  int xv = -1, yv = -1;
  int out_deg = 0;
  int a_pos = -1;  ///< landmark position on the original pattern, once chosen
};

/// Partition of the low-degree vertices into out-degree classes with
/// neighbour picks. Case '1' spends direction changes freely (many
/// available); case '2' routes a minimal conflict set to the degree-0/2
/// classes first and keeps everyone else on the through class.
struct LowDegreePlan {
  bool ok = false;
  char case_label = '-';
  std::vector<TripleChoice> triples;  ///< ascending by centre vertex
  std::string message;
};

/// Plans the triples for the conditioned graph h. `t` flags vertices that
/// were low in both directions at checkpoint 1; `cutoff` is the low-degree
/// cutoff; `changes` is the pattern's direction-change count. Picks are the
/// smallest eligible vertex ids so plans are deterministic. Fails (ok =
/// false) when a class cannot pick distinct flanks, or when the case II
/// conflict set cannot avoid the both-ways-low vertices.
auto plan_low_degree(const Digraph& h, const Bitset& t, double cutoff,
                     int changes) -> LowDegreePlan;

/// Everything produced by contracting each planned triple to a fresh vertex:
/// the contracted conditioned graph, pattern, window, sprinkle streams and
/// pins, plus the maps needed to undo the contraction. Contracted ids order
/// the kept original vertices first (ascending), then one z vertex per triple
/// (by triple index); `orig_of` sends a z vertex to its centre.
struct Contraction {
  Digraph h;
  OrientationPattern c;
  int window_start = 0, window_len = 0;
  std::vector<Pin> pins;
  UGraph walk, boost;
  std::vector<int> orig_of;   ///< contracted id -> original id
  std::vector<int> z_of;      ///< triple index -> contracted id of its z
  std::vector<int> pos_into;  ///< original position -> contracted position
};

/// Contracts the triples out of h, the pattern and the streams. Each triple's
/// five consecutive positions d b a c e around its landmark collapse to d f e
/// with both new pattern edges forward; z vertices inherit in-edges from the
/// flank x (direction keyed on the pattern edge at d-b) and out-edges from
/// the flank y (keyed at c-e); a stream edge reaches a z vertex only when the
/// stream holds both flank pairs, and z-z stream pairs are tossed fresh at
/// the stream intensities. Landmarks must be spaced so the five-position
/// blocks are disjoint and clear of each other.
auto contract_instance(const Digraph& h, const OrientationPattern& c,
                       const std::vector<TripleChoice>& triples,
                       int window_start, int window_len, const UGraph& walk,
                       const UGraph& boost, const PipelineParams& params,
                       RngStream& rng) -> Contraction;

/// Undoes the contraction on an embedding of the contracted pattern: kept
/// positions pull their copy through the maps, and each triple's block is
/// filled with x, centre, y in clockwise order.
auto expand_embedding(const Contraction& con,
                      const std::vector<TripleChoice>& triples,
                      const Embedding& inner) -> Embedding;

/// Report of one process-embedding attempt. Stages add pattern-range (the
/// direction-change interval test), classify, and landmarks to the assembly
/// stages; inner stage names are propagated unchanged. `deviations` records
/// fallbacks taken (currently only landmark window widening).
struct ProcessReport {
  bool ok = false;
  std::string stage;
  std::string message;
  int s = 0;  ///< vertices with in- or out-degree 0 in the conditioned graph
  int t = 0;  ///< vertices with in- and out-degree exactly 1
  double changes_low = 0.0;   ///< admissible direction-change interval
  double changes_high = 0.0;
  char case_label = '-';
  std::vector<TripleChoice> triples;
  int contracted_n = 0;
  std::vector<std::string> deviations;
  EmbedReport inner;          ///< filled once the assembly ran
  UGraph walk_used, boost_used;  ///< consumed sprinkle, original vertex ids
  std::optional<Embedding> embedding;  ///< for the original pattern
};

/// Embeds `c` into prefix(trace, i) plus fresh sprinkle, following the
/// conditioning construction: the prefix at checkpoint 0 fixes the low-degree
/// set S, the conditioned graph keeps all checkpoint-0 edges plus later edges
/// touching S, low-degree vertices are planned into triples, triples are
/// contracted against landmark positions selected from the pattern, the
/// assembly embeds the contracted instance, and the result is expanded and
/// replayed against the original prefix plus consumed sprinkle (with each
/// flank edge's provenance checked against the contraction rules).
///
/// A complete prefix short-circuits to the identity embedding. The pattern
/// must have between 1+(s-1) ln n and n-1-(t-1) ln n direction changes or the
/// run fails at stage pattern-range quoting the violated bound. Requires
/// checkpoint 0 <= i <= n(n-1) and every vertex of prefix(trace, i) to have
/// total degree at least 2 (InputError otherwise).
auto process_embed(const ProcessTrace& trace, long long i,
                   const OrientationPattern& c, const PipelineParams& params,
                   RngStream& rng) -> ProcessReport;

}  // namespace orient
