#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/float128.hpp>

namespace gphc {

using big_int = boost::multiprecision::cpp_int;
using rational = boost::multiprecision::cpp_rational;
using quad = boost::multiprecision::float128;
using wide = boost::multiprecision::cpp_bin_float_50;

namespace numeric {

template <class Real>
Real from_rational(const rational& r) {
  if constexpr (std::is_same_v<Real, wide>) {
    return wide(boost::multiprecision::numerator(r)) / wide(boost::multiprecision::denominator(r));
  } else if constexpr (std::is_same_v<Real, double>) {
    return r.template convert_to<double>();
  } else {
    return from_rational<wide>(r).template convert_to<Real>();
  }
}

template <class Real>
Real from_double(double x) {
  return Real(x);
}

template <class Real>
double to_double(const Real& x) {
  if constexpr (std::is_same_v<Real, double>)
    return x;
  else
    return x.template convert_to<double>();
}

template <class Real>
Real epsilon() {
  return std::numeric_limits<Real>::epsilon();
}

/// Neumaier's variant of Kahan summation.
template <class Real>
class compensated_sum {
 public:
  void add(const Real& x) {
    using std::abs;
    Real t = sum_ + x;
    if (abs(sum_) >= abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
    abs_ += abs(x);
  }
  Real value() const { return sum_ + comp_; }
  /// Sum of magnitudes of everything added; scales the rounding error bound.
  Real magnitude() const { return abs_; }

 private:
  Real sum_ = 0;
  Real comp_ = 0;
  Real abs_ = 0;
};

/// Compensated sum of `terms` taken in descending order of magnitude.
template <class Real>
compensated_sum<Real> sum_descending(std::vector<Real>& terms) {
  using std::abs;
  std::sort(terms.begin(), terms.end(), [](const Real& a, const Real& b) { return abs(a) > abs(b); });
  compensated_sum<Real> s;
  for (const auto& t : terms) s.add(t);
  return s;
}

/// log((n)!) for n = 0..size-1 in the requested precision.
template <class Real>
std::vector<Real> log_factorials(int size) {
  using std::log;
  std::vector<Real> out(static_cast<std::size_t>(std::max(size, 1)));
  out[0] = 0;
  for (int i = 1; i < size; ++i) out[i] = out[i - 1] + log(Real(i));
  return out;
}

/// Regularized incomplete gamma functions P(b, y) and Q(b, y) = 1 - P for a
/// positive integer shape `b`, each with full relative accuracy.
template <class Real>
struct incomplete_gamma {
  Real p;
  Real q;
};

template <class Real>
incomplete_gamma<Real> regularized_gamma_int(int b, const Real& y, const Real& log_fact_b_minus_1) {
  using std::exp;
  using std::log;
  if (!(y > 0)) return {Real(0), Real(1)};
  const Real log_lead = -y + Real(b - 1) * log(y) - log_fact_b_minus_1;  // log(e^-y y^(b-1)/(b-1)!)
  if (y < Real(b)) {
    // P = e^-y y^b / b! * sum_{n>=0} y^n / ((b+1)...(b+n))
    Real term = 1;
    Real sum = 1;
    for (int n = 1; n < 100000; ++n) {
      term *= y / Real(b + n);
      sum += term;
      if (term < sum * epsilon<Real>()) break;
    }
    Real p = exp(log_lead) * y / Real(b) * sum;
    return {p, Real(1) - p};
  }
  // Q = e^-y sum_{l<b} y^l / l! = e^-y y^(b-1)/(b-1)! * (1 + (b-1)/y (1 + (b-2)/y (...)))
  Real s = 1;
  for (int r = 1; r <= b - 1; ++r) s = Real(1) + s * Real(r) / y;
  Real q = exp(log_lead) * s;
  return {Real(1) - q, q};
}

/// Shifted gamma density c^b (x-a)^(b-1) e^{-c(x-a)} / Gamma(b) for integer b.
template <class Real>
Real shifted_gamma_pdf(const Real& x, const Real& shift, int shape, const Real& rate, const Real& log_fact_b_minus_1) {
  using std::exp;
  using std::log;
  Real y = rate * (x - shift);
  if (!(y > 0)) return Real(0);
  return rate * exp(-y + Real(shape - 1) * log(y) - log_fact_b_minus_1);
}

}  // namespace numeric
}  // namespace gphc
