#include "orient/pattern.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "orient/errors.hpp"
#include "orient/rng.hpp"

namespace orient {

auto OrientationPattern::out_degree(int p) const -> int {
  int n = int(fwd_.size());
  int prev = (p + n - 1) % n;
  // Edge (p, p+1) leaves p when forward; edge (prev, p) leaves p when backward.
  return (fwd_[p] ? 1 : 0) + (fwd_[prev] ? 0 : 1);
}

auto lambda(const OrientationPattern& c) -> int {
  int changes = 0;
  int n = c.n();
  for (int k = 0; k < n; ++k)
    if (c.forward(k) != c.forward((k + 1) % n)) ++changes;
  return changes;
}

auto p_threshold(int n, int lambda_value) -> double {
  require_input(n >= 3, "p_threshold: n >= 3 required");
  require_input(lambda_value >= 0 && lambda_value <= n && lambda_value % 2 == 0,
                "p_threshold: lambda must be even and in [0, n]");
  double ln_n = std::log(double(n));
  if (lambda_value == 0) return ln_n / n;
  return std::max(ln_n, 2.0 * (ln_n - std::log(double(lambda_value)))) / (2.0 * n);
}

auto p_threshold(const OrientationPattern& c) -> double { return p_threshold(c.n(), lambda(c)); }

auto out_degree_profile(const OrientationPattern& c) -> std::array<int, 3> {
  std::array<int, 3> counts{0, 0, 0};
  for (int p = 0; p < c.n(); ++p) ++counts[std::size_t(c.out_degree(p))];
  return counts;
}

auto rotated(const OrientationPattern& c, int r) -> OrientationPattern {
  int n = c.n();
  r = ((r % n) + n) % n;
  std::vector<std::uint8_t> out(std::size_t(n), 0);
  for (int k = 0; k < n; ++k) out[std::size_t(k)] = c.forward((k + r) % n) ? 1 : 0;
  return OrientationPattern(std::move(out));
}

auto reflected(const OrientationPattern& c) -> OrientationPattern {
  // New position k is old position -k; the edge between new positions k, k+1
  // is the old edge (n-1-k, n-k) traversed against its old direction.
  int n = c.n();
  std::vector<std::uint8_t> out(std::size_t(n), 0);
  for (int k = 0; k < n; ++k) out[std::size_t(k)] = c.forward((n - 1 - k) % n) ? 0 : 1;
  return OrientationPattern(std::move(out));
}

auto canonical_form(const OrientationPattern& c) -> OrientationPattern {
  auto best = c;
  auto refl = reflected(c);
  for (int r = 0; r < c.n(); ++r) {
    for (const auto& base : {c, refl}) {
      auto cand = rotated(base, r);
      if (cand < best) best = cand;
    }
  }
  return best;
}

auto canonical_patterns(int n) -> std::vector<OrientationPattern> {
  require_input(n >= 3 && n <= 14, "canonical_patterns: 3 <= n <= 14");
  std::vector<OrientationPattern> out;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    std::vector<std::uint8_t> fwd(std::size_t(n), 0);
    for (int k = 0; k < n; ++k) fwd[std::size_t(k)] = (mask >> k) & 1u;
    OrientationPattern c(std::move(fwd));
    if (canonical_form(c) == c) out.push_back(std::move(c));
  }
  std::sort(out.begin(), out.end());
  return out;
}

auto format_pattern(const OrientationPattern& c) -> std::string {
  std::string s;
  s.reserve(std::size_t(c.n()));
  for (int k = 0; k < c.n(); ++k) s.push_back(c.forward(k) ? '+' : '-');
  return s;
}

namespace {

auto parse_plain(const std::string& s) -> OrientationPattern {
  require_input(s.size() >= 3, "pattern: at least 3 positions required");
  std::vector<std::uint8_t> fwd;
  fwd.reserve(s.size());
  for (char ch : s) {
    require_input(ch == '+' || ch == '-', std::string("pattern: unexpected character '") + ch + "'");
    fwd.push_back(ch == '+' ? 1 : 0);
  }
  return OrientationPattern(std::move(fwd));
}

auto parse_fields(const std::string& spec) -> std::vector<std::string> {
  std::vector<std::string> fields;
  std::string cur;
  for (char ch : spec) {
    if (ch == ':') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  fields.push_back(cur);
  return fields;
}

auto to_long(const std::string& s, const std::string& what) -> long long {
  try {
    std::size_t used = 0;
    long long v = std::stoll(s, &used);
    require_input(used == s.size(), "pattern: bad " + what + " '" + s + "'");
    return v;
  } catch (const InputError&) {
    throw;
  } catch (...) {
    throw InputError("pattern: bad " + what + " '" + s + "'");
  }
}

auto random_pattern(int n, int lambda_value, std::uint64_t seed) -> OrientationPattern {
  require_input(n >= 3, "random pattern: n >= 3");
  require_input(lambda_value >= 0 && lambda_value <= n && lambda_value % 2 == 0,
                "random pattern: lambda must be even and in [0, n]");
  RngStream rng(seed, 0x70a7);
  std::vector<std::uint8_t> fwd(std::size_t(n), std::uint8_t(rng.bernoulli(0.5) ? 1 : 0));
  if (lambda_value > 0) {
    // Direction changes sit exactly at the chosen boundary positions.
    std::vector<int> all(std::size_t(n), 0);
    for (int i = 0; i < n; ++i) all[std::size_t(i)] = i;
    rng.shuffle(all);
    all.resize(std::size_t(lambda_value));
    std::sort(all.begin(), all.end());
    std::vector<bool> change(std::size_t(n), false);
    for (int b : all) change[std::size_t(b)] = true;
    for (int k = 1; k < n; ++k)
      fwd[std::size_t(k)] = change[std::size_t(k)] ? std::uint8_t(1 - fwd[std::size_t(k - 1)])
                                                   : fwd[std::size_t(k - 1)];
  }
  return OrientationPattern(std::move(fwd));
}

}  // namespace

auto parse_pattern(const std::string& spec) -> OrientationPattern {
  if (spec.find(':') == std::string::npos) return parse_plain(spec);
  auto fields = parse_fields(spec);
  const auto& kind = fields[0];
  if (kind == "directed") {
    require_input(fields.size() == 2, "pattern: directed:n");
    int n = int(to_long(fields[1], "n"));
    require_input(n >= 3, "pattern: n >= 3");
    return OrientationPattern(std::vector<std::uint8_t>(std::size_t(n), 1));
  }
  if (kind == "anti") {
    require_input(fields.size() == 2, "pattern: anti:n");
    int n = int(to_long(fields[1], "n"));
    require_input(n >= 4 && n % 2 == 0, "pattern: anti-directed cycles need even n >= 4");
    std::vector<std::uint8_t> fwd(std::size_t(n), 0);
    for (int k = 0; k < n; ++k) fwd[std::size_t(k)] = std::uint8_t(k % 2 == 0 ? 1 : 0);
    return OrientationPattern(std::move(fwd));
  }
  if (kind == "random") {
    require_input(fields.size() == 4, "pattern: random:n:lambda:seed");
    int n = int(to_long(fields[1], "n"));
    int lam = int(to_long(fields[2], "lambda"));
    auto seed = std::uint64_t(to_long(fields[3], "seed"));
    return random_pattern(n, lam, seed);
  }
  throw InputError("pattern: unknown shorthand '" + kind + "'");
}

// --- embeddings --------------------------------------------------------------

auto embedding_error(const Digraph& d, const OrientationPattern& c, const Embedding& emb,
                     const std::vector<Pin>& pins) -> std::optional<std::string> {
  int n = c.n();
  if (int(emb.size()) != n) return "embedding has " + std::to_string(emb.size()) + " positions, pattern has " + std::to_string(n);
  if (d.n() != n) return "pattern covers " + std::to_string(n) + " vertices, digraph has " + std::to_string(d.n());
  std::vector<char> used(std::size_t(d.n()), 0);
  for (int p = 0; p < n; ++p) {
    int v = emb[std::size_t(p)];
    if (v < 0 || v >= d.n()) return "position " + std::to_string(p) + " maps outside the vertex set";
    if (used[std::size_t(v)]) return "vertex " + std::to_string(v) + " used twice";
    used[std::size_t(v)] = 1;
  }
  for (auto [pos, vert] : pins) {
    if (pos < 0 || pos >= n) return "pin position " + std::to_string(pos) + " out of range";
    if (emb[std::size_t(pos)] != vert)
      return "pin " + std::to_string(pos) + "=" + std::to_string(vert) + " not honoured";
  }
  for (int k = 0; k < n; ++k) {
    int a = emb[std::size_t(k)], b = emb[std::size_t((k + 1) % n)];
    int u = c.forward(k) ? a : b, v = c.forward(k) ? b : a;
    if (!d.has_edge(u, v))
      return "missing edge " + std::to_string(u) + "->" + std::to_string(v) +
             " for pattern edge at position " + std::to_string(k);
  }
  return std::nullopt;
}

auto embedding_valid(const Digraph& d, const OrientationPattern& c, const Embedding& emb,
                     const std::vector<Pin>& pins) -> bool {
  return !embedding_error(d, c, emb, pins).has_value();
}

// --- landmark selection ------------------------------------------------------

auto default_landmark_request(const OrientationPattern& c) -> LandmarkRequest {
  int n = c.n();
  require_input(n >= 16, "default landmark parameters need n >= 16");
  double ln_n = std::log(double(n));
  double lnln_n = std::log(ln_n);
  int lam = lambda(c);
  LandmarkRequest req;
  int mu02 = int(std::ceil(double(lam) / ln_n));
  req.mu0 = (mu02 + 1) / 2;
  req.mu2 = mu02 - req.mu0;
  req.mu1 = int(std::ceil(double(n - lam) / ln_n));
  req.spacing = int(std::ceil(100.0 * ln_n / lnln_n));
  req.window_len = n / 100;
  return req;
}

namespace {

struct WindowScore {
  int start;
  double imbalance;
};

}  // namespace

auto select_landmarks(const OrientationPattern& c, const LandmarkRequest& req) -> LandmarkResult {
  int n = c.n();
  require_input(req.mu0 >= 0 && req.mu1 >= 0 && req.mu2 >= 0, "landmarks: negative quota");
  require_input(req.spacing >= 1, "landmarks: spacing >= 1");
  require_input(req.window_len >= 0 && req.window_len < n, "landmarks: window length in [0, n)");
  auto profile = out_degree_profile(c);
  LandmarkResult res;
  auto fail = [&](int cls, int got, const std::string& why) {
    if (!res.failure || res.failure->best_filled < got) {
      res.failure = LandmarkFailure{cls, got, why};
    }
  };
  for (int cls = 0; cls < 3; ++cls) {
    int quota = cls == 0 ? req.mu0 : cls == 1 ? req.mu1 : req.mu2;
    if (quota > profile[std::size_t(cls)]) {
      res.failure = LandmarkFailure{
          cls, profile[std::size_t(cls)],
          "pattern has only " + std::to_string(profile[std::size_t(cls)]) +
              " positions of out-degree " + std::to_string(cls)};
      return res;
    }
  }

  std::vector<int> cls_of(std::size_t(n), 0);
  for (int p = 0; p < n; ++p) cls_of[std::size_t(p)] = c.out_degree(p);

  // Rank windows by |f|, the drift between the window's share of out-degree-1
  // positions and the global density; the sliding argument guarantees some
  // window has |f| <= 1, and balanced windows give the greedy the best odds.
  int lam = lambda(c);
  int wl = req.window_len;
  std::vector<WindowScore> windows;
  windows.reserve(std::size_t(n));
  int ones = 0;
  for (int p = 0; p <= wl; ++p) ones += cls_of[std::size_t(p % n)] == 1 ? 1 : 0;
  for (int s = 0; s < n; ++s) {
    double f = (double(n - lam) / double(n)) * double(wl + 1) - double(ones);
    windows.push_back({s, std::abs(f)});
    ones -= cls_of[std::size_t(s)] == 1 ? 1 : 0;
    ones += cls_of[std::size_t((s + wl + 1) % n)] == 1 ? 1 : 0;
  }
  std::stable_sort(windows.begin(), windows.end(),
                   [](const WindowScore& a, const WindowScore& b) { return a.imbalance < b.imbalance; });

  auto cyc_dist = [n](int a, int b) {
    int d = std::abs(a - b) % n;
    return std::min(d, n - d);
  };

  for (const auto& w : windows) {
    std::vector<int> picked;  // absolute positions, all classes
    auto far_enough = [&](int p) {
      for (int q : picked)
        if (cyc_dist(p, q) < req.spacing) return false;
      return true;
    };
    std::array<std::vector<int>, 3> z;
    std::array<int, 3> need{req.mu0, req.mu1, req.mu2};
    // Case I picks the rarer sink/source classes first, Case II the
    // out-degree-1 class; the other group then dodges the fixed picks.
    bool sinks_first = req.mu0 + req.mu2 <= req.mu1;
    std::array<std::vector<int>, 2> phases =
        sinks_first ? std::array<std::vector<int>, 2>{{{0, 2}, {1}}}
                    : std::array<std::vector<int>, 2>{{{1}, {0, 2}}};
    bool ok = true;
    for (const auto& phase : phases) {
      for (int off = 0; off <= wl; ++off) {
        int p = (w.start + off) % n;
        int cls = cls_of[std::size_t(p)];
        if (std::find(phase.begin(), phase.end(), cls) == phase.end()) continue;
        if (need[std::size_t(cls)] == 0) continue;
        if (!far_enough(p)) continue;
        picked.push_back(p);
        z[std::size_t(cls)].push_back(p);
        --need[std::size_t(cls)];
      }
      for (int cls : phase)
        if (need[std::size_t(cls)] > 0) {
          ok = false;
          fail(cls, int(z[std::size_t(cls)].size()),
               "window at " + std::to_string(w.start) + " ran out of spaced out-degree-" +
                   std::to_string(cls) + " positions");
        }
      if (!ok) break;
    }
    if (ok) {
      res.failure.reset();
      res.landmarks = Landmarks{w.start, wl, std::move(z[0]), std::move(z[1]), std::move(z[2])};
      return res;
    }
  }
  if (!res.failure) res.failure = LandmarkFailure{-1, 0, "no feasible window"};
  return res;
}

auto landmarks_error(const OrientationPattern& c, const LandmarkRequest& req, const Landmarks& lm)
    -> std::optional<std::string> {
  int n = c.n();
  auto in_window = [&](int p) {
    int off = ((p - lm.window_start) % n + n) % n;
    return off <= lm.window_len;
  };
  auto check_class = [&](const std::vector<int>& zs, int cls, int quota) -> std::optional<std::string> {
    if (int(zs.size()) != quota)
      return "class " + std::to_string(cls) + ": got " + std::to_string(zs.size()) + " picks, want " +
             std::to_string(quota);
    for (int p : zs) {
      if (p < 0 || p >= n) return "pick out of range";
      if (!in_window(p)) return "pick " + std::to_string(p) + " outside window";
      if (c.out_degree(p) != cls)
        return "pick " + std::to_string(p) + " has out-degree " + std::to_string(c.out_degree(p)) +
               ", want " + std::to_string(cls);
    }
    return std::nullopt;
  };
  if (auto e = check_class(lm.z0, 0, req.mu0)) return e;
  if (auto e = check_class(lm.z1, 1, req.mu1)) return e;
  if (auto e = check_class(lm.z2, 2, req.mu2)) return e;
  std::vector<int> all;
  for (const auto* zs : {&lm.z0, &lm.z1, &lm.z2}) all.insert(all.end(), zs->begin(), zs->end());
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t j = i + 1; j < all.size(); ++j) {
      int d = std::abs(all[i] - all[j]) % n;
      d = std::min(d, n - d);
      if (all[i] == all[j] || d < req.spacing)
        return "picks " + std::to_string(all[i]) + " and " + std::to_string(all[j]) + " closer than spacing";
    }
  return std::nullopt;
}

}  // namespace orient
