#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <ostream>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/distributions/beta.hpp>
#include <boost/math/distributions/gamma.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "gphc/errors.hpp"
#include "gphc/rng.hpp"
#include "gphc/sample.hpp"
#include "gphc/sample_io.hpp"

namespace gphc {

/// Beta-Gamma prior/posterior on (lambda1, lambda2): U = lambda1 + lambda2 ~
/// Gamma(a0, rate b0) independent of V = lambda1 / U ~ Beta(a1, a2).
struct beta_gamma_params {
  double b0 = 0.0;
  double a0 = 1.0;
  double a1 = 1.0;
  double a2 = 1.0;

  friend bool operator==(const beta_gamma_params&, const beta_gamma_params&) = default;

  bool proper() const { return b0 > 0.0 && a0 > 0.0 && a1 > 0.0 && a2 > 0.0; }
};

inline const beta_gamma_params& validate(const beta_gamma_params& p) {
  if (!(p.a0 > 0.0 && p.a1 > 0.0 && p.a2 > 0.0) || !std::isfinite(p.a0) || !std::isfinite(p.a1) ||
      !std::isfinite(p.a2))
    throw error(error_kind::out_of_domain, "shape hyperparameters a0, a1, a2 must be positive");
  if (!(p.b0 >= 0.0) || !std::isfinite(p.b0)) throw error(error_kind::out_of_domain, "b0 must be non-negative");
  return p;
}

/// Prior means E(theta1) = 1 and E(theta2) = 1.3.
inline beta_gamma_params prior_one() { return {1.0, 46.0 / 13.0, 2.3, 2.0}; }

/// Matching prior: Bayes estimates equal the MLEs.
inline beta_gamma_params prior_matching() { return {0.0, 2.0, 1.0, 1.0}; }

inline beta_gamma_params posterior(const beta_gamma_params& prior, int D1, int D2, double W) {
  validate(prior);
  return {prior.b0 + W, prior.a0 + D1 + D2, prior.a1 + D1, prior.a2 + D2};
}

inline beta_gamma_params posterior(const beta_gamma_params& prior, const gphc_sample& s) {
  return posterior(prior, s.D1, s.D2, s.W);
}

namespace detail {

inline void require_proper(const beta_gamma_params& p) {
  validate(p);
  if (!(p.b0 > 0.0)) throw error(error_kind::improper_posterior, "posterior rate b0 + W must be positive");
}

}  // namespace detail

/// Posterior mean of 1/lambda_k.
inline double bayes_estimate(const beta_gamma_params& post, target t) {
  detail::require_proper(post);
  const double ak = t == target::theta1 ? post.a1 : post.a2;
  if (!(post.a0 > 1.0 && ak > 1.0))
    throw error(error_kind::nonintegrable_mean, std::string("posterior mean of ") + to_string(t) + " needs a0 > 1 and a_k > 1");
  // ratio first: it is exactly 1 under the matching prior, so the estimate reduces to W / D_k bit for bit
  return post.b0 * ((post.a1 + post.a2 - 1.0) / (post.a0 - 1.0)) / (ak - 1.0);
}

inline std::pair<double, double> bayes_estimates(const beta_gamma_params& post) {
  return {bayes_estimate(post, target::theta1), bayes_estimate(post, target::theta2)};
}

inline std::pair<double, double> posterior_variances(const beta_gamma_params& post) {
  detail::require_proper(post);
  if (!(post.a0 > 2.0 && post.a1 > 2.0 && post.a2 > 2.0))
    throw error(error_kind::nonintegrable_variance, "posterior variance of 1/lambda needs a0, a1, a2 > 2");
  const double s = post.a1 + post.a2;
  auto var = [&](double ak) {
    const double A = post.b0 * post.b0 * (s - 1.0) / ((post.a0 - 1.0) * (ak - 1.0));
    const double B = (s - 2.0) / ((post.a0 - 2.0) * (ak - 2.0)) - (s - 1.0) / ((post.a0 - 1.0) * (ak - 1.0));
    return A * B;
  };
  return {var(post.a1), var(post.a2)};
}

/// log pi(lambda1, lambda2) for a proper BG distribution.
inline double log_density(const beta_gamma_params& p, double lambda1, double lambda2) {
  detail::require_proper(p);
  if (!(lambda1 > 0.0 && lambda2 > 0.0)) return -INFINITY;
  const double u = lambda1 + lambda2;
  return p.a0 * std::log(p.b0) - std::lgamma(p.a0) + std::lgamma(p.a1 + p.a2) - std::lgamma(p.a1) -
         std::lgamma(p.a2) + (p.a0 - p.a1 - p.a2) * std::log(u) + (p.a1 - 1.0) * std::log(lambda1) +
         (p.a2 - 1.0) * std::log(lambda2) - p.b0 * u;
}

struct posterior_draw {
  double lambda1;
  double lambda2;

  double u() const { return lambda1 + lambda2; }
  double v() const { return lambda1 / (lambda1 + lambda2); }
};

/// Independent draws U ~ Gamma(a0, rate b0), V ~ Beta(a1, a2); returns (UV, U(1-V)).
inline std::vector<posterior_draw> sample_posterior(const beta_gamma_params& post, std::size_t n, rng_stream& rng) {
  detail::require_proper(post);
  std::gamma_distribution<double> gu(post.a0, 1.0 / post.b0);
  std::gamma_distribution<double> g1(post.a1, 1.0);
  std::gamma_distribution<double> g2(post.a2, 1.0);
  std::vector<posterior_draw> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = gu(rng);
    const double x = g1(rng), y = g2(rng);
    const double v = x / (x + y);
    out.push_back({u * v, u * (1.0 - v)});
  }
  return out;
}

inline void write_draws_csv(std::ostream& out, const std::vector<posterior_draw>& draws) {
  out << "lambda1,lambda2,theta1,theta2\n";
  for (const auto& d : draws)
    out << format_double(d.lambda1) << ',' << format_double(d.lambda2) << ',' << format_double(1.0 / d.lambda1) << ','
        << format_double(1.0 / d.lambda2) << '\n';
}

/// Trapezoid {A <= lambda1 + lambda2 <= B, C <= lambda1/(lambda1+lambda2) <= D}
/// with posterior probability (1 - alpha1)(1 - alpha2) = 1 - alpha.
struct credible_set {
  double A = 0.0, B = 0.0, C = 0.0, D = 0.0;
  double alpha = 0.05, alpha1 = 0.0, alpha2 = 0.0;

  bool contains(double lambda1, double lambda2) const {
    const double u = lambda1 + lambda2, v = lambda1 / u;
    return A <= u && u <= B && C <= v && v <= D;
  }
};

/// alpha1 = alpha2 = 1 - sqrt(1 - alpha) unless `alpha1` is given.
inline credible_set make_credible_set(const beta_gamma_params& post, double alpha, double alpha1 = -1.0) {
  detail::require_proper(post);
  if (!(alpha > 0.0 && alpha < 1.0)) throw error(error_kind::out_of_domain, "alpha must lie in (0, 1)");
  credible_set cs;
  cs.alpha = alpha;
  cs.alpha1 = alpha1 < 0.0 ? 1.0 - std::sqrt(1.0 - alpha) : alpha1;
  if (!(cs.alpha1 > 0.0 && cs.alpha1 < alpha + 1e-15))
    throw error(error_kind::out_of_domain, "alpha1 must lie in (0, alpha]");
  cs.alpha2 = 1.0 - (1.0 - alpha) / (1.0 - cs.alpha1);
  const boost::math::gamma_distribution<double> gu(post.a0, 1.0 / post.b0);
  const boost::math::beta_distribution<double> bv(post.a1, post.a2);
  cs.A = boost::math::quantile(gu, cs.alpha1 / 2.0);
  cs.B = boost::math::quantile(boost::math::complement(gu, cs.alpha1 / 2.0));
  cs.C = cs.alpha2 > 0.0 ? boost::math::quantile(bv, cs.alpha2 / 2.0) : 0.0;
  cs.D = cs.alpha2 > 0.0 ? boost::math::quantile(boost::math::complement(bv, cs.alpha2 / 2.0)) : 1.0;
  return cs;
}

struct boundary_point {
  double theta1;
  double theta2;
  int curve_id;  ///< 1: u = A, 2: u = B, 3: v = C, 4: v = D
};

/// Edges of the set mapped to (theta1, theta2). The u-edges are the curves
/// theta1 + theta2 = u theta1 theta2, the v-edges the lines theta2 (1 - v) = v theta1.
inline std::vector<boundary_point> boundary_curves(const credible_set& cs, int points_per_edge = 100) {
  std::vector<boundary_point> out;
  auto push = [&](double u, double v, int id) {
    if (u > 0.0 && v > 0.0 && v < 1.0) out.push_back({1.0 / (u * v), 1.0 / (u * (1.0 - v)), id});
  };
  for (int i = 0; i <= points_per_edge; ++i) {
    const double t = static_cast<double>(i) / points_per_edge;
    const double v = cs.C + t * (cs.D - cs.C);
    const double u = cs.A + t * (cs.B - cs.A);
    push(cs.A, v, 1);
    push(cs.B, v, 2);
    push(u, cs.C, 3);
    push(u, cs.D, 4);
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.curve_id < b.curve_id; });
  return out;
}

inline void write_boundary_csv(std::ostream& out, const std::vector<boundary_point>& pts) {
  out << "theta1,theta2,curve_id\n";
  for (const auto& p : pts) out << format_double(p.theta1) << ',' << format_double(p.theta2) << ',' << p.curve_id << '\n';
}

struct credible_interval {
  double lower = 0.0;
  double upper = 0.0;
  double alpha = 0.05;

  double length() const { return upper - lower; }
};

/// Shortest window holding ceil((1 - alpha) N) of the sorted values.
inline credible_interval hpd_from_sorted(const std::vector<double>& sorted, double alpha) {
  if (sorted.empty()) throw error(error_kind::out_of_domain, "no draws");
  const auto n = sorted.size();
  auto k = static_cast<std::size_t>(std::ceil((1.0 - alpha) * static_cast<double>(n) - 1e-9));
  k = std::clamp<std::size_t>(k, 1, n);
  std::size_t best = 0;
  for (std::size_t i = 1; i + k - 1 < n; ++i)
    if (sorted[i + k - 1] - sorted[i] < sorted[best + k - 1] - sorted[best]) best = i;
  return {sorted[best], sorted[best + k - 1], alpha};
}

/// Equal-tail interval from the same sorted values (order statistics).
inline credible_interval equal_tail_from_sorted(const std::vector<double>& sorted, double alpha) {
  if (sorted.empty()) throw error(error_kind::out_of_domain, "no draws");
  const auto n = sorted.size();
  auto k = static_cast<std::size_t>(std::ceil((1.0 - alpha) * static_cast<double>(n) - 1e-9));
  k = std::clamp<std::size_t>(k, 1, n);
  const std::size_t lo = (n - k) / 2;
  return {sorted[lo], sorted[lo + k - 1], alpha};
}

enum class posterior_function { theta1, theta2, lambda1, lambda2, ratio };

inline double evaluate(posterior_function g, const posterior_draw& d) {
  switch (g) {
    case posterior_function::theta1: return 1.0 / d.lambda1;
    case posterior_function::theta2: return 1.0 / d.lambda2;
    case posterior_function::lambda1: return d.lambda1;
    case posterior_function::lambda2: return d.lambda2;
    case posterior_function::ratio: return d.lambda1 / d.lambda2;
  }
  return 0.0;
}

inline const char* to_string(posterior_function g) {
  switch (g) {
    case posterior_function::theta1: return "theta1";
    case posterior_function::theta2: return "theta2";
    case posterior_function::lambda1: return "lambda1";
    case posterior_function::lambda2: return "lambda2";
    case posterior_function::ratio: return "ratio";
  }
  return "?";
}

inline std::vector<double> transformed_sorted(const std::vector<posterior_draw>& draws,
                                              const std::function<double(const posterior_draw&)>& g) {
  std::vector<double> x;
  x.reserve(draws.size());
  for (const auto& d : draws) x.push_back(g(d));
  std::sort(x.begin(), x.end());
  return x;
}

inline credible_interval hpd_interval(const beta_gamma_params& post,
                                      const std::function<double(const posterior_draw&)>& g, double alpha,
                                      std::size_t n_draws, rng_stream& rng) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw error(error_kind::out_of_domain, "alpha must lie in (0, 1)");
  return hpd_from_sorted(transformed_sorted(sample_posterior(post, n_draws, rng), g), alpha);
}

inline credible_interval hpd_interval(const beta_gamma_params& post, posterior_function g, double alpha,
                                      std::size_t n_draws, rng_stream& rng) {
  return hpd_interval(post, [g](const posterior_draw& d) { return evaluate(g, d); }, alpha, n_draws, rng);
}

}  // namespace gphc
