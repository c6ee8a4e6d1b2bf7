#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <utility>

#include <boost/math/distributions/normal.hpp>

#include "gphc/errors.hpp"
#include "gphc/model.hpp"
#include "gphc/sample.hpp"

namespace gphc {

struct mle_result {
  std::optional<double> theta1_hat;  ///< absent when D1 == 0 (likelihood unbounded)
  std::optional<double> theta2_hat;  ///< absent when D2 == 0
  int D1 = 0;
  int D2 = 0;
  double W = 0.0;

  std::optional<double> estimate(target t) const { return t == target::theta1 ? theta1_hat : theta2_hat; }
  int count(target t) const { return t == target::theta1 ? D1 : D2; }
};

/// -D1 log theta1 - D2 log theta2 - W / theta, optionally plus log of the
/// constant prod_{v<=J} gamma_v.
inline double log_likelihood(const exp_competing_model& model, const gphc_sample& s, bool include_constant = false) {
  double ll = -s.D1 * std::log(model.theta1()) - s.D2 * std::log(model.theta2()) - s.W * model.lambda();
  if (include_constant) {
    const auto gamma = gamma_seq(s.scheme);
    for (int v = 0; v < s.J; ++v) ll += std::log(static_cast<double>(gamma[v]));
  }
  return ll;
}

inline mle_result fit_mle(const gphc_sample& s) {
  mle_result r;
  r.D1 = s.D1;
  r.D2 = s.D2;
  r.W = s.W;
  if (s.D1 > 0) r.theta1_hat = s.W / s.D1;
  if (s.D2 > 0) r.theta2_hat = s.W / s.D2;
  return r;
}

struct approx_interval {
  double lower = 0.0;
  double upper = 0.0;
  double alpha = 0.05;
  static constexpr const char* label = "approximate";
};

/// Normal-approximation interval theta_hat -/+ z * theta_hat / sqrt(D) from
/// the observed information D / theta_hat^2 of the log-likelihood.
/// alpha = 1 yields the zero-length interval at the estimate.
inline approx_interval asymptotic_ci(const mle_result& r, target t, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw error(error_kind::out_of_domain, "alpha must lie in (0, 1]");
  auto est = r.estimate(t);
  if (!est) throw error(error_kind::missing_mle, std::string("no MLE for ") + to_string(t));
  const double z = alpha >= 1.0 ? 0.0 : boost::math::quantile(boost::math::normal(), 1.0 - alpha / 2.0);
  const double half = z * *est / std::sqrt(static_cast<double>(r.count(t)));
  return {*est - half, *est + half, alpha};
}

/// Intervals for (theta1, theta2); both MLEs must exist.
inline std::pair<approx_interval, approx_interval> asymptotic_ci(const mle_result& r, double alpha) {
  if (!r.theta1_hat || !r.theta2_hat) throw error(error_kind::missing_mle, "asymptotic intervals need both MLEs");
  return {asymptotic_ci(r, target::theta1, alpha), asymptotic_ci(r, target::theta2, alpha)};
}

}  // namespace gphc
