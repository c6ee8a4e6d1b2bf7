#pragma once

#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "gphc/errors.hpp"

namespace gphc {

/// Generalized progressive hybrid censoring design.
///
/// `n` units go on test; at the i-th observed failure `removals[i-1]` surviving
/// units are withdrawn. The test stops at max(Z_k, min(T, Z_m)), so at least
/// `k` failures are always observed and at most `m`.
struct censoring_scheme {
  int n = 0;
  int m = 0;
  int k = 0;
  double T = 0.0;
  std::vector<int> removals;

  friend bool operator==(const censoring_scheme&, const censoring_scheme&) = default;
};

/// Throws error_kind::scheme_invalid naming the first violated constraint.
inline const censoring_scheme& validate_scheme(const censoring_scheme& s) {
  auto fail = [](const std::string& why) { throw error(error_kind::scheme_invalid, why); };
  if (s.n <= 0 || s.m <= 0 || s.k <= 0) fail("n, m and k must be positive");
  if (!(s.k < s.m)) fail("k must be smaller than m (k=" + std::to_string(s.k) + ", m=" + std::to_string(s.m) + ")");
  if (s.m > s.n) fail("m must not exceed n");
  if (!(s.T > 0.0) || !std::isfinite(s.T)) fail("T must be a positive finite time");
  if (static_cast<int>(s.removals.size()) != s.m)
    fail("removal vector has " + std::to_string(s.removals.size()) + " entries, expected m=" + std::to_string(s.m));
  long total = s.m;
  for (int r : s.removals) {
    if (r < 0) fail("removals must be non-negative");
    total += r;
  }
  if (total != s.n)
    fail("m + sum(R) = " + std::to_string(total) + " but n = " + std::to_string(s.n));
  return s;
}

/// Units still on test just before each failure: gamma_v = n - (v-1) - sum_{u<v} R_u,
/// returned 1-based as element v-1 for v = 1..m+1 (so the last entry is 0).
inline std::vector<int> gamma_seq(const censoring_scheme& s) {
  std::vector<int> g(static_cast<std::size_t>(s.m) + 1);
  int alive = s.n;
  for (int v = 0; v < s.m; ++v) {
    g[static_cast<std::size_t>(v)] = alive;
    alive -= 1 + s.removals[static_cast<std::size_t>(v)];
  }
  g[static_cast<std::size_t>(s.m)] = alive;
  return g;
}

}  // namespace gphc
