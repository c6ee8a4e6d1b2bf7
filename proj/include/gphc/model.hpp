#pragma once

#include <cmath>
#include <limits>
#include <utility>

#include "gphc/errors.hpp"

namespace gphc {

/// Which cause-specific mean an operation is about.
enum class target { theta1, theta2 };

inline const char* to_string(target t) { return t == target::theta1 ? "theta1" : "theta2"; }

/// Two independent exponential latent lifetimes with means theta1, theta2.
///
/// A mean of +infinity is accepted and means the cause never fires (rate 0);
/// it is the limit used when a nuisance MLE does not exist.
class exp_competing_model {
 public:
  exp_competing_model(double theta1, double theta2) : theta1_(theta1), theta2_(theta2) {
    if (!(theta1 > 0.0) || !(theta2 > 0.0))
      throw error(error_kind::out_of_domain, "cause means must be positive");
    if (std::isinf(theta1) && std::isinf(theta2))
      throw error(error_kind::out_of_domain, "at least one cause must have a finite mean");
  }

  double theta1() const noexcept { return theta1_; }
  double theta2() const noexcept { return theta2_; }
  double lambda1() const noexcept { return 1.0 / theta1_; }
  double lambda2() const noexcept { return 1.0 / theta2_; }
  /// Total failure rate 1/theta = 1/theta1 + 1/theta2.
  double lambda() const noexcept { return lambda1() + lambda2(); }
  double theta() const noexcept { return 1.0 / lambda(); }

  /// Probability that a failure is attributed to the given cause.
  double cause_probability(target t) const noexcept {
    return t == target::theta1 ? lambda1() / lambda() : lambda2() / lambda();
  }

  double theta_of(target t) const noexcept { return t == target::theta1 ? theta1_ : theta2_; }

  /// Same model with the target's mean replaced.
  exp_competing_model with(target t, double value) const {
    return t == target::theta1 ? exp_competing_model(value, theta2_) : exp_competing_model(theta1_, value);
  }

  exp_competing_model swapped() const { return {theta2_, theta1_}; }

 private:
  double theta1_;
  double theta2_;
};

}  // namespace gphc
