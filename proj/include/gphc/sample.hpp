#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "gphc/errors.hpp"
#include "gphc/model.hpp"
#include "gphc/rng.hpp"
#include "gphc/scheme.hpp"

namespace gphc {

enum class cause { one = 1, two = 2 };

struct observation {
  double z = 0.0;        ///< ordered failure time
  cause failure_cause = cause::one;
  int removed = 0;       ///< units withdrawn at this failure

  friend bool operator==(const observation&, const observation&) = default;
};

/// How the experiment ended.
///  - A: Z_k < T < Z_m, stopped at T.
///  - B: T < Z_k, stopped at Z_k.
///  - C: Z_m < T, stopped at Z_m.
enum class terminal_case { A, B, C };

inline const char* to_string(terminal_case c) {
  switch (c) {
    case terminal_case::A: return "A";
    case terminal_case::B: return "B";
    case terminal_case::C: return "C";
  }
  return "?";
}

struct gphc_sample {
  censoring_scheme scheme;
  std::vector<observation> observations;  ///< truncated at t_star
  terminal_case terminal = terminal_case::C;
  double t_star = 0.0;
  int J = 0;
  int D1 = 0;
  int D2 = 0;
  double W = 0.0;   ///< total time on test
  int r_star = 0;   ///< R*_J in case A, R*_k in case B, 0 in case C
  bool has_ties = false;

  int count(target t) const { return t == target::theta1 ? D1 : D2; }

  friend bool operator==(const gphc_sample&, const gphc_sample&) = default;
};

namespace detail {

/// Total time on test, evaluated with the branch that matches the terminal case.
inline double total_time_on_test(const censoring_scheme& s, std::span<const double> z, terminal_case tc, int J,
                                 int r_star) {
  double w = 0.0;
  switch (tc) {
    case terminal_case::A:
      for (int i = 0; i < J; ++i) w += z[i] * (1.0 + s.removals[i]);
      w += s.T * r_star;
      break;
    case terminal_case::B:
      for (int i = 0; i + 1 < s.k; ++i) w += z[i] * (1.0 + s.removals[i]);
      w += z[s.k - 1] * (1.0 + r_star);
      break;
    case terminal_case::C:
      for (int i = 0; i < s.m; ++i) w += z[i] * (1.0 + s.removals[i]);
      break;
  }
  return w;
}

}  // namespace detail

/// Determines the terminal case from ordered failure times, truncates at T*
/// and fills every sufficient statistic.
///
/// `times` may hold the full m failures of a progressive experiment or an
/// already-truncated record. Ties are accepted (kept in input order) and
/// flagged in `has_ties`.
inline gphc_sample classify_and_summarize(std::span<const double> times, std::span<const cause> causes,
                                          const censoring_scheme& scheme) {
  validate_scheme(scheme);
  if (times.size() != causes.size())
    throw error(error_kind::length_mismatch, std::to_string(times.size()) + " times but " +
                                                 std::to_string(causes.size()) + " cause labels");
  if (times.size() > static_cast<std::size_t>(scheme.m))
    throw error(error_kind::length_mismatch, "more than m observed failures");

  gphc_sample out;
  out.scheme = scheme;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] > 0.0) || !std::isfinite(times[i]))
      throw error(error_kind::unsorted_times, "failure times must be positive and finite");
    if (i > 0) {
      if (times[i] < times[i - 1])
        throw error(error_kind::unsorted_times, "failure time " + std::to_string(i + 1) + " precedes its predecessor");
      if (times[i] == times[i - 1]) out.has_ties = true;
    }
  }

  const auto L = static_cast<int>(times.size());
  const int k = scheme.k;
  const int m = scheme.m;
  const double T = scheme.T;
  const auto gamma = gamma_seq(scheme);

  if (L >= k && times[k - 1] > T) {
    out.terminal = terminal_case::B;
    out.J = k;
    out.t_star = times[k - 1];
    out.r_star = gamma[k - 1] - 1;
  } else if (L == m && times[m - 1] <= T) {
    out.terminal = terminal_case::C;
    out.J = m;
    out.t_star = times[m - 1];
    out.r_star = 0;
  } else {
    int J = 0;
    while (J < L && times[J] <= T) ++J;
    if (J < k)
      throw error(error_kind::length_mismatch,
                  "record ends after " + std::to_string(J) + " failures before T; at least k=" + std::to_string(k) +
                      " are required");
    out.terminal = terminal_case::A;
    out.J = J;
    out.t_star = T;
    out.r_star = gamma[J];
  }

  out.observations.reserve(static_cast<std::size_t>(out.J));
  for (int i = 0; i < out.J; ++i) {
    observation o;
    o.z = times[i];
    o.failure_cause = causes[i];
    o.removed = scheme.removals[i];
    if (causes[i] == cause::one)
      ++out.D1;
    else
      ++out.D2;
    out.observations.push_back(o);
  }
  if (out.terminal == terminal_case::B) out.observations.back().removed = out.r_star;
  out.W = detail::total_time_on_test(scheme, times, out.terminal, out.J, out.r_star);
  return out;
}

/// Simulates one GPHC competing-risks sample via the progressive spacings
/// construction: Z_v - Z_{v-1} ~ Exp(rate = lambda * gamma_v), with each
/// failure attributed to cause 1 independently with probability lambda1/lambda.
inline gphc_sample generate_sample(const exp_competing_model& model, const censoring_scheme& scheme, rng_stream& rng) {
  validate_scheme(scheme);
  const auto gamma = gamma_seq(scheme);
  const double lambda = model.lambda();
  const double p1 = model.cause_probability(target::theta1);
  std::vector<double> z(static_cast<std::size_t>(scheme.m));
  std::vector<cause> c(static_cast<std::size_t>(scheme.m));
  double t = 0.0;
  for (int v = 0; v < scheme.m; ++v) {
    t += rng.exponential() / (lambda * gamma[v]);
    z[v] = t;
    c[v] = rng.uniform() < p1 ? cause::one : cause::two;
  }
  return classify_and_summarize(z, c, scheme);
}

inline std::vector<double> failure_times(const gphc_sample& s) {
  std::vector<double> z;
  z.reserve(s.observations.size());
  for (const auto& o : s.observations) z.push_back(o.z);
  return z;
}

inline std::vector<cause> failure_causes(const gphc_sample& s) {
  std::vector<cause> c;
  c.reserve(s.observations.size());
  for (const auto& o : s.observations) c.push_back(o.failure_cause);
  return c;
}

}  // namespace gphc
