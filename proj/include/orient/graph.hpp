// Digraph and undirected graph over vertex set {0..n-1}, bitset adjacency.
#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "orient/bits.hpp"

namespace orient {

enum class Dir { Out, In };
inline auto flip(Dir d) -> Dir { return d == Dir::Out ? Dir::In : Dir::Out; }

using Edge = std::pair<int, int>;

class Digraph {
 public:
  Digraph() = default;
  explicit Digraph(int n) : n_(n), out_(n, Bitset(n)), in_(n, Bitset(n)) {}

  auto n() const -> int { return n_; }
  auto m() const -> long long { return m_; }

  auto has_edge(int u, int v) const -> bool { return out_[u].test(v); }
  auto add_edge(int u, int v) -> void;
  auto remove_edge(int u, int v) -> void;

  auto out(int v) const -> const Bitset& { return out_[v]; }
  auto in(int v) const -> const Bitset& { return in_[v]; }
  auto nbrs(int v, Dir d) const -> const Bitset& { return d == Dir::Out ? out_[v] : in_[v]; }

  // Edges in lexicographic (u, v) order; the on-disk order.
  auto edges() const -> std::vector<Edge>;

  friend auto operator==(const Digraph& a, const Digraph& b) -> bool {
    return a.n_ == b.n_ && a.out_ == b.out_;
  }

 private:
  int n_ = 0;
  long long m_ = 0;
  std::vector<Bitset> out_, in_;
};

class UGraph {
 public:
  UGraph() = default;
  explicit UGraph(int n) : n_(n), adj_(n, Bitset(n)) {}

  auto n() const -> int { return n_; }
  auto m() const -> long long { return m_; }

  auto has_edge(int u, int v) const -> bool { return adj_[u].test(v); }
  auto add_edge(int u, int v) -> void;
  auto remove_edge(int u, int v) -> void;

  auto nbrs(int v) const -> const Bitset& { return adj_[v]; }
  auto degree(int v) const -> int { return adj_[v].count(); }

  // Edges as (u, v) with u < v, lexicographic.
  auto edges() const -> std::vector<Edge>;

  friend auto operator==(const UGraph& a, const UGraph& b) -> bool {
    return a.n_ == b.n_ && a.adj_ == b.adj_;
  }

 private:
  int n_ = 0;
  long long m_ = 0;
  std::vector<Bitset> adj_;
};

// d(v) restricted to S when given. Dir::Out counts out-neighbours.
auto degree(const Digraph& d, int v, Dir dir) -> int;
auto degree(const Digraph& d, int v, Dir dir, const Bitset& s) -> int;

auto min_degree(const Digraph& d, Dir dir) -> int;
auto max_degree(const Digraph& d, Dir dir) -> int;

// Each undirected edge becomes an antiparallel pair.
auto biorient(const UGraph& g) -> Digraph;
// Forgets orientation (antiparallel pairs collapse to one edge).
auto underlying(const Digraph& d) -> UGraph;

auto induced(const UGraph& g, const Bitset& keep) -> UGraph;  // vertex ids preserved
auto graph_union(const UGraph& a, const UGraph& b) -> UGraph;
auto graph_union(const Digraph& a, const Digraph& b) -> Digraph;

// N(A) \ A.
auto neighbourhood(const UGraph& g, const Bitset& a) -> Bitset;
auto connected(const UGraph& g) -> bool;                     // whole vertex set
auto connected_within(const UGraph& g, const Bitset& verts) -> bool;

enum class CheckMode { Exact, Sampled };

struct ExpanderReport {
  bool ok = false;            // exact: property holds; sampled: not refuted
  bool exact = false;         // whether the verdict is exhaustive
  std::optional<std::vector<int>> witness;  // violating A when refuted
  bool witness_is_disconnection = false;
};

// k-expander: connected, and |N(A)| >= k|A| for all A with |A| <= phi*n.
// Exact mode enumerates all A up to max(1, floor(phi*n)) vertices (cap n <= 20
// for the subset sweep; above that use Sampled). Sampled mode tries
// greedy-grown and random candidate sets; it can refute, never certify.
auto is_k_expander(const UGraph& g, int k, double phi, CheckMode mode,
                   int sample_trials = 2000, std::uint64_t sample_seed = 1)
    -> ExpanderReport;

// --- edge-list files ---------------------------------------------------------
// First line "n m" for digraphs, "n m u" for undirected graphs; then m lines
// "u v". Writers emit edges in the edges() order so files are byte-stable.
auto write_edge_list(std::ostream& os, const Digraph& d) -> void;
auto write_edge_list(std::ostream& os, const UGraph& g) -> void;
auto read_digraph(std::istream& is) -> Digraph;
auto read_ugraph(std::istream& is) -> UGraph;
// Reads either kind, tag tells which.
struct AnyGraph {
  std::optional<Digraph> digraph;
  std::optional<UGraph> ugraph;
};
auto read_any_graph(std::istream& is) -> AnyGraph;

}  // namespace orient
