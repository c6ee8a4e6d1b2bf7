#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <ostream>
#include <thread>
#include <utility>
#include <vector>

#include "gphc/errors.hpp"
#include "gphc/estimation.hpp"
#include "gphc/exact_dist.hpp"
#include "gphc/model.hpp"
#include "gphc/rng.hpp"
#include "gphc/sample.hpp"
#include "gphc/sample_io.hpp"

namespace gphc {

enum class interval_method { exact, bootstrap, asymptotic };

inline const char* to_string(interval_method m) {
  switch (m) {
    case interval_method::exact: return "exact";
    case interval_method::bootstrap: return "bootstrap";
    case interval_method::asymptotic: return "asymptotic";
  }
  return "?";
}

struct interval_diagnostics {
  int bracket_expansions = 0;
  int iterations_lower = 0;
  int iterations_upper = 0;
  double residual_lower = std::numeric_limits<double>::quiet_NaN();
  double residual_upper = std::numeric_limits<double>::quiet_NaN();
  std::optional<double> limiting_probability;  ///< P at the top of the bracket when no upper root exists
  double other_theta = std::numeric_limits<double>::quiet_NaN();
  long redraws = 0;                            ///< bootstrap replicates redrawn because D_target = 0
};

struct interval_result {
  std::optional<double> lower;
  std::optional<double> upper;
  double alpha = 0.05;
  interval_method method = interval_method::exact;
  bool exists = false;
  interval_diagnostics diagnostics;

  double length() const { return exists ? *upper - *lower : std::numeric_limits<double>::infinity(); }
  bool contains(double x) const { return exists && *lower <= x && x <= *upper; }
};

/// Value of the other mean inside P_theta(theta_hat <= x_obs) while the
/// target is varied.
enum class nuisance_policy {
  plug_in_mle,  ///< the other cause's MLE; +inf (zero rate) when that cause has no failures
  fixed,        ///< caller-supplied value
};

struct exact_ci_options {
  double alpha = 0.05;
  nuisance_policy nuisance = nuisance_policy::plug_in_mle;
  double other_theta = 0.0;  ///< used with nuisance_policy::fixed
  precision_policy precision = precision_policy::automatic;
  double residual_tolerance = 1e-6;
};

/// P_theta(theta_hat <= x_obs) as a function of the target mean, with the
/// other mean held fixed. Shares one coefficient kernel across evaluations.
class parameter_cdf {
 public:
  parameter_cdf(const censoring_scheme& scheme, target t, double x_obs, double other_theta,
                precision_policy policy = precision_policy::automatic)
      : kernel_(std::make_shared<scheme_kernel>(scheme)), target_(t), x_(x_obs), other_(other_theta), policy_(policy) {}

  double operator()(double theta) const {
    ++evaluations_;
    const exp_competing_model model =
        target_ == target::theta1 ? exp_competing_model(theta, other_) : exp_competing_model(other_, theta);
    return signed_gamma_mixture(kernel_, model, target_, true, policy_).cdf(x_);
  }

  double x_obs() const noexcept { return x_; }
  double other_theta() const noexcept { return other_; }
  long evaluations() const noexcept { return evaluations_; }

 private:
  std::shared_ptr<const scheme_kernel> kernel_;
  target target_;
  double x_;
  double other_;
  precision_policy policy_;
  mutable long evaluations_ = 0;
};

namespace detail {

struct root_result {
  double theta;
  double residual;
  int iterations;
};

/// Bisection on log theta for a nonincreasing f with f(lo) >= goal >= f(hi).
/// Every evaluation is checked against the bracket ends for monotonicity.
inline root_result bisect_log(const parameter_cdf& f, double lo, double f_lo, double hi, double f_hi, double goal,
                              double tol) {
  constexpr double slack = 1e-9;
  double a = std::log(lo), b = std::log(hi);
  double fa = f_lo, fb = f_hi;
  int it = 0;
  double best = std::exp(0.5 * (a + b)), best_res = INFINITY;
  for (; it < 200; ++it) {
    const double mid = 0.5 * (a + b);
    const double fm = f(std::exp(mid));
    if (fm > fa + slack || fm < fb - slack)
      throw error(error_kind::numerical_failure,
                  "P_theta(theta_hat <= x) is not monotone in theta near theta=" + std::to_string(std::exp(mid)));
    const double res = std::abs(fm - goal);
    if (res < best_res) {
      best_res = res;
      best = std::exp(mid);
    }
    if (res <= tol * 1e-3 || b - a < 1e-14) break;
    if (fm > goal) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
      fb = fm;
    }
  }
  if (best_res > tol)
    throw error(error_kind::numerical_failure, "bisection stalled with residual " + std::to_string(best_res));
  return {best, best_res, it + 1};
}

}  // namespace detail

/// Exact interval from P_theta(theta_hat <= x_obs) = 1 - alpha/2 (lower) and
/// = alpha/2 (upper), with the other mean fixed at `other_theta`.
inline interval_result exact_ci_at(const censoring_scheme& scheme, target t, double x_obs, double other_theta,
                                   double alpha = 0.05, precision_policy policy = precision_policy::automatic,
                                   double residual_tolerance = 1e-6) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw error(error_kind::out_of_domain, "alpha must lie in (0, 1)");
  if (!(x_obs > 0.0) || !std::isfinite(x_obs)) throw error(error_kind::out_of_domain, "x_obs must be positive");
  parameter_cdf F(scheme, t, x_obs, other_theta, policy);
  interval_result r;
  r.alpha = alpha;
  r.method = interval_method::exact;
  r.diagnostics.other_theta = other_theta;
  const double lo_goal = 1.0 - alpha / 2.0, hi_goal = alpha / 2.0;

  double lo = x_obs / 100.0, hi = x_obs * 100.0;
  double f_lo = F(lo), f_hi = F(hi);
  for (int e = 0; e < 6 && f_lo < lo_goal; ++e) {
    lo /= 10.0;
    f_lo = F(lo);
    ++r.diagnostics.bracket_expansions;
  }
  if (f_lo < lo_goal)
    throw error(error_kind::numerical_failure,
                "cannot bracket the lower limit: P=" + std::to_string(f_lo) + " at theta=" + std::to_string(lo));
  for (int e = 0; e < 6 && f_hi > hi_goal; ++e) {
    hi *= 10.0;
    f_hi = F(hi);
    ++r.diagnostics.bracket_expansions;
  }
  if (f_lo < f_hi - 1e-9) throw error(error_kind::numerical_failure, "P_theta(theta_hat <= x) increases in theta");

  if (f_hi > hi_goal) {
    const double h = 0.01 * hi;
    const double slope = (F(hi + h) - F(hi - h)) / (2.0 * h);
    if (!(std::abs(slope) < 1e-10))
      throw error(error_kind::numerical_failure,
                  "upper bracket failed but the curve has not levelled off (slope " + std::to_string(slope) + ")");
    r.exists = false;
    r.diagnostics.limiting_probability = f_hi;
  } else {
    auto up = detail::bisect_log(F, lo, f_lo, hi, f_hi, hi_goal, residual_tolerance);
    r.upper = up.theta;
    r.diagnostics.iterations_upper = up.iterations;
    r.diagnostics.residual_upper = up.residual;
  }
  // the lower root lies below the upper one (or below the plateau top)
  const double lo_top = r.upper ? *r.upper : hi;
  const double f_lo_top = r.upper ? F(lo_top) : f_hi;
  auto down = detail::bisect_log(F, lo, f_lo, lo_top, f_lo_top, lo_goal, residual_tolerance);
  r.lower = down.theta;
  r.diagnostics.iterations_lower = down.iterations;
  r.diagnostics.residual_lower = down.residual;
  r.exists = r.upper.has_value() && *r.lower < *r.upper;
  return r;
}

/// Nuisance value implied by `policy` for a sample.
inline double nuisance_value(const gphc_sample& s, target t, const exact_ci_options& opt) {
  if (opt.nuisance == nuisance_policy::fixed) return opt.other_theta;
  const target other = t == target::theta1 ? target::theta2 : target::theta1;
  auto est = fit_mle(s).estimate(other);
  return est ? *est : std::numeric_limits<double>::infinity();
}

inline interval_result exact_ci(const gphc_sample& s, target t, const exact_ci_options& opt = {}) {
  auto est = fit_mle(s).estimate(t);
  if (!est) throw error(error_kind::missing_mle, std::string("no MLE for ") + to_string(t));
  return exact_ci_at(s.scheme, t, *est, nuisance_value(s, t, opt), opt.alpha, opt.precision, opt.residual_tolerance);
}

inline interval_result exact_ci(const gphc_sample& s, target t, double alpha) {
  exact_ci_options opt;
  opt.alpha = alpha;
  return exact_ci(s, t, opt);
}

/// Linear-interpolation percentile (type 7) of sorted data.
inline double percentile_sorted(const std::vector<double>& sorted, double prob) {
  if (sorted.empty()) throw error(error_kind::out_of_domain, "percentile of an empty set");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * prob;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

/// Percentile interval of B replicate statistics. `replicate(b, redraws)`
/// returns the statistic of replicate b and adds its redraw count.
inline interval_result percentile_bootstrap(int B, double alpha, const std::function<double(int, long&)>& replicate,
                                            int workers = 1) {
  if (B < 1) throw error(error_kind::out_of_domain, "bootstrap needs B >= 1");
  std::vector<double> stats(static_cast<std::size_t>(B));
  std::vector<long> redraws(static_cast<std::size_t>(B), 0);
  workers = std::max(1, std::min(workers, B));
  auto run = [&](int w) {
    for (int b = w; b < B; b += workers) stats[b] = replicate(b, redraws[b]);
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (auto& th : pool) th.join();
  }
  std::sort(stats.begin(), stats.end());
  interval_result r;
  r.alpha = alpha;
  r.method = interval_method::bootstrap;
  r.lower = percentile_sorted(stats, alpha / 2.0);
  r.upper = percentile_sorted(stats, 1.0 - alpha / 2.0);
  r.exists = true;
  for (long d : redraws) r.diagnostics.redraws += d;
  return r;
}

/// Parametric percentile bootstrap: B samples from the fitted model under
/// the original scheme. Replicate b uses stream b split from `rng`, so the
/// result does not depend on `workers`.
inline interval_result bootstrap_ci(const gphc_sample& s, target t, double alpha, int B, rng_stream& rng,
                                    int workers = 1) {
  if (B < 100) throw error(error_kind::out_of_domain, "bootstrap needs B >= 100");
  const auto fit = fit_mle(s);
  if (!fit.theta1_hat || !fit.theta2_hat)
    throw error(error_kind::missing_mle, "bootstrap needs both MLEs");
  const exp_competing_model model(*fit.theta1_hat, *fit.theta2_hat);
  const std::uint64_t base = rng();
  auto rep = [&](int b, long& redraws) {
    rng_stream stream(base, static_cast<std::uint64_t>(b));
    for (;;) {
      auto bs = generate_sample(model, s.scheme, stream);
      if (bs.count(t) > 0) return bs.W / bs.count(t);
      ++redraws;
    }
  };
  auto r = percentile_bootstrap(B, alpha, rep, workers);
  r.diagnostics.other_theta = t == target::theta1 ? *fit.theta2_hat : *fit.theta1_hat;
  return r;
}

inline interval_result to_interval(const approx_interval& a) {
  interval_result r;
  r.lower = a.lower;
  r.upper = a.upper;
  r.alpha = a.alpha;
  r.method = interval_method::asymptotic;
  r.exists = true;
  return r;
}

/// (theta, P_theta(theta_hat <= x_obs)) over `theta_grid`.
inline std::vector<std::pair<double, double>> cdf_in_parameter(double x_obs, const std::vector<double>& theta_grid,
                                                               const censoring_scheme& scheme, double other_theta,
                                                               target t) {
  parameter_cdf F(scheme, t, x_obs, other_theta);
  std::vector<std::pair<double, double>> out;
  out.reserve(theta_grid.size());
  for (double th : theta_grid) out.emplace_back(th, F(th));
  return out;
}

inline void write_curve_csv(std::ostream& out, const std::vector<std::pair<double, double>>& curve) {
  out << "theta,probability\n";
  for (const auto& [th, p] : curve) out << format_double(th) << ',' << format_double(p) << '\n';
}

}  // namespace gphc
