// Random digraph models and the interpolation chain between D*(n,p) and
// D(n,p).
//
// D(n,p): each of the n(n-1) ordered pairs is an edge independently.
// D*(n,p): each unordered pair carries both directed edges with probability p,
// i.e. the biorientation of G(n,p).
// The chain Dhat_0..Dhat_ell flips one unordered pair at a time from
// "joint coin Z" to "independent coins X, Y"; Dhat_0 = D*(n,p) and
// Dhat_ell = D(n,p), and consecutive elements differ only inside pair j.
#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "orient/graph.hpp"
#include "orient/rng.hpp"

namespace orient {

auto sample_dnp(int n, double p, RngStream& rng) -> Digraph;
auto sample_gnp(int n, double p, RngStream& rng) -> UGraph;
auto sample_dstar(int n, double q, RngStream& rng) -> Digraph;

// Unordered pairs {x,y}, x < y, lexicographic. Chain and coupling indices
// refer to this order.
auto canonical_pairs(int n) -> std::vector<Edge>;

// --- the random digraph process ----------------------------------------------

// A uniformly random permutation of all n(n-1) ordered pairs; D_i is the
// digraph of the first i of them.
struct ProcessTrace {
  int n = 0;
  std::vector<Edge> order;
};

auto sample_process(int n, RngStream& rng) -> ProcessTrace;
auto prefix(const ProcessTrace& t, long long i) -> Digraph;

// Header "n", then one "u v" line per step.
auto write_trace(std::ostream& os, const ProcessTrace& t) -> void;
auto read_trace(std::istream& is) -> ProcessTrace;

// --- coupling chain ----------------------------------------------------------

struct CouplingRandomness {
  int n = 0;
  double p = 0.0;
  // Per unordered pair i: X = coin for the lex-forward edge, Y = for the
  // reverse edge, Z = joint coin for both at once.
  std::vector<std::uint8_t> x, y, z;
};

auto sample_coupling(int n, double p, RngStream& rng) -> CouplingRandomness;

// Dhat_j: pairs with index < j read (X, Y); pairs with index >= j read Z.
auto coupling_chain(const CouplingRandomness& r, int j) -> Digraph;

struct MonotoneCheckResult {
  int trials = 0;
  int hits_start = 0;  // family present in base + Dhat_0
  int hits_end = 0;    // family present in base + Dhat_ell
  double freq_start = 0.0, freq_end = 0.0;
  // One-sided 95% lower confidence bound on E[freq_end - freq_start],
  // paired across trials (both ends of the chain reuse one randomness draw).
  double diff_lower_bound = 0.0;
};

// Estimates how much likelier a monotone family is under independent
// orientations than under paired ones.
auto monotone_family_check(int n, double p, const std::function<bool(const Digraph&)>& family,
                           int trials, RngStream& rng, const Digraph* base = nullptr)
    -> MonotoneCheckResult;

}  // namespace orient
