#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "gphc/gphc.hpp"

namespace gphc::oracle {

/// Asymptotic Kolmogorov p-value with Stephens' small-sample correction.
inline double kolmogorov_pvalue(double d, std::size_t n) {
  const double sn = std::sqrt(static_cast<double>(n));
  const double lam = (sn + 0.12 + 0.11 / sn) * d;
  if (lam < 0.2) return 1.0;
  double p = 0.0;
  for (int k = 1; k < 200; ++k) {
    const double term = std::exp(-2.0 * k * k * lam * lam);
    p += (k % 2 ? 2.0 : -2.0) * term;
    if (term < 1e-16) break;
  }
  return std::clamp(p, 0.0, 1.0);
}

/// One-sample KS statistic sup |F_n - F|.
inline double ks_statistic(std::vector<double> x, const std::function<double(double)>& cdf) {
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    d = std::max({d, f - i / n, (i + 1) / n - f});
  }
  return d;
}

/// P(N(T) = j), j = 0..m, for the pure-birth count of observed failures:
/// from state s the next failure arrives at rate lambda * gamma_{s+1}.
/// Computed by uniformization (sums of positive terms only).
inline std::vector<double> failure_count_distribution(const censoring_scheme& s, double lambda) {
  const auto g = gamma_seq(s);
  const int m = s.m;
  double rate_max = 0.0;
  for (int v = 0; v < m; ++v) rate_max = std::max(rate_max, lambda * g[v]);
  const double mu = rate_max * s.T;
  std::vector<long double> state(m + 1, 0.0L), out(m + 1, 0.0L);
  state[0] = 1.0L;
  long double log_pois = -mu;  // log Poisson(n; mu)
  for (int n = 0;; ++n) {
    if (n > 0) {
      std::vector<long double> next(m + 1, 0.0L);
      for (int j = 0; j <= m; ++j) {
        const long double leave = j < m ? lambda * g[j] / rate_max : 0.0L;
        next[j] += state[j] * (1.0L - leave);
        if (j < m) next[j + 1] += state[j] * leave;
      }
      state.swap(next);
      log_pois += std::log(mu) - std::log(static_cast<double>(n));
    }
    const long double w = std::exp(log_pois);
    for (int j = 0; j <= m; ++j) out[j] += w * state[j];
    if (n > mu + 20.0 * std::sqrt(mu + 1.0) + 40.0) break;
  }
  return {out.begin(), out.end()};
}

/// A random valid scheme with n <= max_n.
inline censoring_scheme random_scheme(rng_stream& rng, int max_n, double T_lo = 0.3, double T_hi = 2.0) {
  std::uniform_int_distribution<int> dn(3, max_n);
  censoring_scheme s;
  s.n = dn(rng);
  s.m = std::uniform_int_distribution<int>(2, s.n)(rng);
  s.k = std::uniform_int_distribution<int>(1, s.m - 1)(rng);
  s.T = T_lo + (T_hi - T_lo) * rng.uniform();
  s.removals.assign(s.m, 0);
  for (int r = 0; r < s.n - s.m; ++r) ++s.removals[std::uniform_int_distribution<int>(0, s.m - 1)(rng)];
  return s;
}

inline censoring_scheme late_removal_scheme() {
  censoring_scheme s;
  s.n = 20;
  s.m = 18;
  s.k = 5;
  s.T = 1.2;
  s.removals = expand_scheme(scheme_family::III, 20, 18);
  return s;
}

inline censoring_scheme early_removal_scheme() {
  censoring_scheme s;
  s.n = 20;
  s.m = 14;
  s.k = 3;
  s.T = 1.2;
  s.removals = expand_scheme(scheme_family::I, 20, 14);
  return s;
}

inline double relative_error(double got, double want) { return std::abs(got - want) / std::abs(want); }

}  // namespace gphc::oracle
