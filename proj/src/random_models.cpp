#include "orient/random_models.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "orient/errors.hpp"

namespace orient {

auto sample_dnp(int n, double p, RngStream& rng) -> Digraph {
  require_input(n >= 1 && p >= 0.0 && p <= 1.0, "sample_dnp: need n >= 1, p in [0,1]");
  Digraph d(n);
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      if (u != v && rng.bernoulli(p)) d.add_edge(u, v);
  return d;
}

auto sample_gnp(int n, double p, RngStream& rng) -> UGraph {
  require_input(n >= 1 && p >= 0.0 && p <= 1.0, "sample_gnp: need n >= 1, p in [0,1]");
  UGraph g(n);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (rng.bernoulli(p)) g.add_edge(u, v);
  return g;
}

auto sample_dstar(int n, double q, RngStream& rng) -> Digraph {
  return biorient(sample_gnp(n, q, rng));
}

auto canonical_pairs(int n) -> std::vector<Edge> {
  std::vector<Edge> ps;
  ps.reserve(std::size_t(n) * std::size_t(n - 1) / 2);
  for (int x = 0; x < n; ++x)
    for (int y = x + 1; y < n; ++y) ps.emplace_back(x, y);
  return ps;
}

auto sample_process(int n, RngStream& rng) -> ProcessTrace {
  require_input(n >= 2, "sample_process: n >= 2");
  ProcessTrace t;
  t.n = n;
  t.order.reserve(std::size_t(n) * std::size_t(n - 1));
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      if (u != v) t.order.emplace_back(u, v);
  rng.shuffle(t.order);
  return t;
}

auto prefix(const ProcessTrace& t, long long i) -> Digraph {
  require_input(i >= 0 && i <= (long long)t.order.size(), "prefix: index out of range");
  Digraph d(t.n);
  for (long long k = 0; k < i; ++k) d.add_edge(t.order[std::size_t(k)].first, t.order[std::size_t(k)].second);
  return d;
}

auto write_trace(std::ostream& os, const ProcessTrace& t) -> void {
  os << t.n << '\n';
  for (auto [u, v] : t.order) os << u << ' ' << v << '\n';
}

auto read_trace(std::istream& is) -> ProcessTrace {
  std::string line;
  require_input(bool(std::getline(is, line)), "trace: missing header");
  ProcessTrace t;
  {
    std::istringstream hs(line);
    require_input(bool(hs >> t.n) && t.n >= 2, "trace: header must be the vertex count");
  }
  long long want = (long long)t.n * (t.n - 1);
  std::vector<std::vector<char>> seen(std::size_t(t.n), std::vector<char>(std::size_t(t.n), 0));
  for (long long i = 0; i < want; ++i) {
    require_input(bool(std::getline(is, line)), "trace: expected " + std::to_string(want) + " steps");
    std::istringstream ls(line);
    int u, v;
    require_input(bool(ls >> u >> v), "trace: malformed step " + std::to_string(i));
    require_input(u >= 0 && u < t.n && v >= 0 && v < t.n && u != v, "trace: step out of range");
    require_input(!seen[std::size_t(u)][std::size_t(v)], "trace: repeated ordered pair");
    seen[std::size_t(u)][std::size_t(v)] = 1;
    t.order.emplace_back(u, v);
  }
  return t;
}

auto sample_coupling(int n, double p, RngStream& rng) -> CouplingRandomness {
  require_input(n >= 2 && p >= 0.0 && p <= 1.0, "sample_coupling: need n >= 2, p in [0,1]");
  CouplingRandomness r;
  r.n = n;
  r.p = p;
  std::size_t ell = std::size_t(n) * std::size_t(n - 1) / 2;
  r.x.resize(ell);
  r.y.resize(ell);
  r.z.resize(ell);
  for (std::size_t i = 0; i < ell; ++i) {
    r.x[i] = rng.bernoulli(p) ? 1 : 0;
    r.y[i] = rng.bernoulli(p) ? 1 : 0;
    r.z[i] = rng.bernoulli(p) ? 1 : 0;
  }
  return r;
}

auto coupling_chain(const CouplingRandomness& r, int j) -> Digraph {
  int ell = int(r.x.size());
  require_input(j >= 0 && j <= ell, "coupling_chain: j in [0, ell]");
  Digraph d(r.n);
  auto pairs = canonical_pairs(r.n);
  for (int i = 0; i < ell; ++i) {
    auto [a, b] = pairs[std::size_t(i)];
    if (i < j) {
      if (r.x[std::size_t(i)]) d.add_edge(a, b);
      if (r.y[std::size_t(i)]) d.add_edge(b, a);
    } else if (r.z[std::size_t(i)]) {
      d.add_edge(a, b);
      d.add_edge(b, a);
    }
  }
  return d;
}

auto monotone_family_check(int n, double p, const std::function<bool(const Digraph&)>& family,
                           int trials, RngStream& rng, const Digraph* base) -> MonotoneCheckResult {
  require_input(trials >= 1, "monotone_family_check: trials >= 1");
  MonotoneCheckResult res;
  res.trials = trials;
  double sum_d = 0.0, sum_d2 = 0.0;
  int ell = n * (n - 1) / 2;
  for (int t = 0; t < trials; ++t) {
    auto child = rng.child(std::uint64_t(t));
    auto r = sample_coupling(n, p, child);
    auto d0 = coupling_chain(r, 0);
    auto d1 = coupling_chain(r, ell);
    if (base != nullptr) {
      d0 = graph_union(d0, *base);
      d1 = graph_union(d1, *base);
    }
    int h0 = family(d0) ? 1 : 0;
    int h1 = family(d1) ? 1 : 0;
    res.hits_start += h0;
    res.hits_end += h1;
    double diff = double(h1 - h0);
    sum_d += diff;
    sum_d2 += diff * diff;
  }
  res.freq_start = double(res.hits_start) / trials;
  res.freq_end = double(res.hits_end) / trials;
  double mean = sum_d / trials;
  double var = trials > 1 ? std::max(0.0, (sum_d2 - trials * mean * mean) / (trials - 1)) : 0.0;
  res.diff_lower_bound = mean - 1.6448536269514722 * std::sqrt(var / trials);
  return res;
}

}  // namespace orient
