#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <memory>
#include <mutex>
#include <ostream>
#include <string>
#include <type_traits>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/binomial.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "gphc/errors.hpp"
#include "gphc/model.hpp"
#include "gphc/numeric.hpp"
#include "gphc/sample.hpp"
#include "gphc/sample_io.hpp"
#include "gphc/scheme.hpp"

namespace gphc {

/// f_G(x; a, b, c) = c^b (x-a)^(b-1) e^{-c(x-a)} / Gamma(b) for x > a.
struct shifted_gamma {
  double shift = 0.0;
  int shape = 1;
  double rate = 1.0;

  double pdf(double x) const {
    return numeric::shifted_gamma_pdf<double>(x, shift, shape, rate, std::lgamma(static_cast<double>(shape)));
  }
  double cdf(double x) const {
    return numeric::regularized_gamma_int<double>(shape, rate * (x - shift), std::lgamma(static_cast<double>(shape))).p;
  }
};

/// Which closed form to use for P(Z_k < T < Z_m, J = j).
///  - derived: the slice mass of the case-A mixture block (sums with the B and
///    C masses to one for every scheme).
///  - as_printed: the commonly quoted closed form, which carries an extra
///    factor gamma_{j+1} / (gamma_{j-u+1} - u) per summand. It agrees with the
///    derived form only when R_1 = ... = R_j = 0.
enum class case_a_formula { derived, as_printed };

enum class precision_policy {
  automatic,    ///< escalate double -> quad -> 50 digits while the error bound is too loose
  double_only,  ///< never escalate; raise CancellationOverflow on severe cancellation
  wide_only,    ///< always evaluate with 50 digits (reference values)
};

/// Alternating-sum coefficients shared by every summand with a given terminal
/// case and effective sample size J. Coefficient v multiplies
/// exp(-lambda T c_v) and the component shifted by T c_v (in W units).
struct kernel_block {
  terminal_case terminal = terminal_case::C;
  int J = 0;
  std::vector<rational> coefficient;
  std::vector<int> gamma_factor;
};

namespace detail {

/// prod_{h<=j} gamma_h * (-1)^v / ({prod_{h=1}^{v} (g_{j+1-v} - g_{j+1-v+h})} {prod_{h=1}^{j-v} (g_h - g_{j-v+1})})
inline rational block_a_coefficient(const std::vector<int>& g, int j, int v) {
  big_int num = 1;
  for (int h = 1; h <= j; ++h) num *= g[h - 1];
  big_int den = 1;
  for (int h = 1; h <= v; ++h) den *= g[j - v] - g[j - v + h];
  for (int h = 1; h <= j - v; ++h) den *= g[h - 1] - g[j - v];
  rational r(num, den);
  return v % 2 ? rational(-r) : r;
}

inline rational block_b_coefficient(const std::vector<int>& g, int k, int v) {
  big_int num = 1;
  for (int h = 1; h <= k; ++h) num *= g[h - 1];
  big_int den = g[k - v - 1];
  for (int h = 1; h <= v; ++h) den *= g[k - v - 1] - g[k - v - 1 + h];
  for (int h = 1; h <= k - 1 - v; ++h) den *= g[h - 1] - g[k - v - 1];
  rational r(num, den);
  return v % 2 ? rational(-r) : r;
}

}  // namespace detail

/// Exact coefficients of every block for one censoring scheme. They do not
/// depend on the model, so one kernel serves every theta along a CI search.
class scheme_kernel {
 public:
  explicit scheme_kernel(const censoring_scheme& s) : scheme_(validate_scheme(s)), gamma_(gamma_seq(s)) {
    const int k = s.k, m = s.m;
    for (int j = k; j <= m - 1; ++j) {
      kernel_block b{terminal_case::A, j, {}, {}};
      for (int v = 0; v <= j; ++v) {
        b.coefficient.push_back(detail::block_a_coefficient(gamma_, j, v));
        b.gamma_factor.push_back(gamma_[j - v]);
      }
      blocks_.push_back(std::move(b));
    }
    {
      kernel_block b{terminal_case::B, k, {}, {}};
      for (int v = 0; v <= k - 1; ++v) {
        b.coefficient.push_back(detail::block_b_coefficient(gamma_, k, v));
        b.gamma_factor.push_back(gamma_[k - v - 1]);
      }
      blocks_.push_back(std::move(b));
    }
    {
      kernel_block b{terminal_case::C, m, {}, {}};
      for (int v = 0; v <= m; ++v) {
        b.coefficient.push_back(detail::block_a_coefficient(gamma_, m, v));
        b.gamma_factor.push_back(gamma_[m - v] - gamma_[m]);
      }
      blocks_.push_back(std::move(b));
    }
  }

  const censoring_scheme& scheme() const noexcept { return scheme_; }
  const std::vector<int>& gamma() const noexcept { return gamma_; }
  const std::vector<kernel_block>& blocks() const noexcept { return blocks_; }

  /// Number of (block, i, v) summands in the density.
  std::size_t term_count() const {
    std::size_t n = 0;
    for (const auto& b : blocks_) n += static_cast<std::size_t>(b.J) * b.coefficient.size();
    return n;
  }

  /// Extra as_printed multiplier for case-A summand u of block j:
  /// gamma_{j+1} / (gamma_{j-u+1} - u).
  rational printed_case_a_factor(int j, int u) const {
    const int den = gamma_[j - u] - u;
    if (den == 0)
      throw error(error_kind::degenerate_denominator,
                  "gamma_{j-u+1} - u = 0 at j=" + std::to_string(j) + ", u=" + std::to_string(u));
    return rational(big_int(gamma_[j]), big_int(den));
  }

 private:
  censoring_scheme scheme_;
  std::vector<int> gamma_;
  std::vector<kernel_block> blocks_;
};

struct case_probabilities_result {
  int k = 0;
  std::vector<double> p_a_by_j;  ///< P(A, J = j) for j = k..m-1
  double p_b = 0.0;
  double p_c = 0.0;

  double p_a() const {
    double s = 0.0;
    for (double p : p_a_by_j) s += p;
    return s;
  }
  double total() const { return p_a() + p_b + p_c; }
};

namespace detail {

template <class Real>
Real block_probability(const kernel_block& b, const Real& lambda_T, const scheme_kernel* printed = nullptr) {
  using std::exp;
  std::vector<Real> terms;
  terms.reserve(b.coefficient.size());
  for (std::size_t v = 0; v < b.coefficient.size(); ++v) {
    rational c = b.coefficient[v];
    if (printed) c *= printed->printed_case_a_factor(b.J, static_cast<int>(v));
    terms.push_back(numeric::from_rational<Real>(c) * exp(-lambda_T * Real(b.gamma_factor[v])));
  }
  return numeric::sum_descending(terms).value();
}

}  // namespace detail

/// P(A, J=j) for j = k..m-1, P(B), P(C); evaluated with exact coefficients and
/// 50-digit exponentials.
inline case_probabilities_result case_probabilities(const exp_competing_model& model, const censoring_scheme& scheme,
                                                    case_a_formula formula = case_a_formula::derived) {
  scheme_kernel kernel(scheme);
  const wide lambda_T = wide(model.lambda()) * wide(scheme.T);
  case_probabilities_result out;
  out.k = scheme.k;
  for (const auto& b : kernel.blocks()) {
    const scheme_kernel* printed = (b.terminal == terminal_case::A && formula == case_a_formula::as_printed) ? &kernel : nullptr;
    double p = numeric::to_double(detail::block_probability<wide>(b, lambda_T, printed));
    switch (b.terminal) {
      case terminal_case::A: out.p_a_by_j.push_back(p); break;
      case terminal_case::B: out.p_b = p; break;
      case terminal_case::C: out.p_c = p; break;
    }
  }
  return out;
}

/// P(D = 0) for the target cause: every observed failure came from the other
/// cause. For target theta2 the roles of the causes are swapped.
inline double prob_d_zero(const exp_competing_model& model, const censoring_scheme& scheme, target t = target::theta1,
                          case_a_formula formula = case_a_formula::derived) {
  using std::pow;
  scheme_kernel kernel(scheme);
  const wide lambda_T = wide(model.lambda()) * wide(scheme.T);
  const wide q = wide(model.cause_probability(t == target::theta1 ? target::theta2 : target::theta1));
  wide total = 0;
  for (const auto& b : kernel.blocks()) {
    const scheme_kernel* printed = (b.terminal == terminal_case::A && formula == case_a_formula::as_printed) ? &kernel : nullptr;
    total += detail::block_probability<wide>(b, lambda_T, printed) * pow(q, b.J);
  }
  return numeric::to_double(total);
}

struct term_origin {
  terminal_case terminal = terminal_case::C;
  int j = 0;  ///< effective sample size of the block (k for case B, m for case C)
  int i = 0;  ///< number of failures from the target cause
  int v = 0;  ///< index inside the alternating sum
};

/// One summand of the exact density: weight * f_G(x; component).
/// weight = sign * exp(log_magnitude) = binomial(j, i) p^i q^(j-i) * coefficient * exp(-lambda T c_v).
struct mixture_term {
  term_origin origin;
  int sign = 1;
  double log_magnitude = 0.0;
  rational coefficient;
  shifted_gamma component;

  double weight() const { return sign * std::exp(log_magnitude); }
};

struct evaluation_stats {
  std::size_t double_evals = 0;
  std::size_t quad_evals = 0;
  std::size_t wide_evals = 0;
};

/// Exact law of theta_hat for one cause conditional on that cause having at
/// least one failure. Immutable after construction and safe to share between
/// threads; higher-precision evaluation states are built on first use.
class signed_gamma_mixture {
 public:
  static constexpr double cdf_tolerance = 1e-11;
  /// pdf error tolerance, relative to the total failure rate (a natural density scale).
  static constexpr double pdf_tolerance = 1e-11;
  static constexpr double clamp_epsilon = 1e-12;

  signed_gamma_mixture(std::shared_ptr<const scheme_kernel> kernel, const exp_competing_model& model, target t,
                       bool binomial_variant = true, precision_policy policy = precision_policy::automatic)
      : kernel_(std::move(kernel)),
        model_(model),
        target_(t),
        binomial_(binomial_variant),
        policy_(policy),
        lazy_(std::make_shared<lazy_states>()) {}

  const scheme_kernel& kernel() const noexcept { return *kernel_; }
  const exp_competing_model& model() const noexcept { return model_; }
  target which() const noexcept { return target_; }
  bool binomial_variant() const noexcept { return binomial_; }

  /// P(D > 0) for the target cause.
  double normalizer() const { return numeric::to_double(state<wide>().norm); }

  /// Smallest component shift (the density vanishes to its left).
  double min_shift() const {
    const double T = kernel_->scheme().T;
    double lo = INFINITY;
    for (const auto& b : kernel_->blocks())
      for (int c : b.gamma_factor) lo = std::min(lo, T * c / b.J);
    return lo;
  }

  double pdf(double x) const {
    const double scale = model_.lambda();
    auto r = evaluate(kind::pdf, x, pdf_tolerance * scale);
    if (r < 0.0) {
      if (-r <= clamp_epsilon * peak_density()) return 0.0;
      throw error(error_kind::numerical_failure, "negative density " + std::to_string(r) + " at x=" + std::to_string(x));
    }
    return r;
  }

  double cdf(double x) const {
    auto r = evaluate(kind::cdf, x, cdf_tolerance);
    return std::clamp(r, 0.0, 1.0);
  }

  /// Every summand with its exact coefficient, in block/i/v order.
  std::vector<mixture_term> terms() const {
    using std::log;
    const auto& st = state<wide>();
    std::vector<mixture_term> out;
    out.reserve(kernel_->term_count());
    const double lambda = model_.lambda();
    const double T = kernel_->scheme().T;
    for (std::size_t b = 0; b < kernel_->blocks().size(); ++b) {
      const auto& blk = kernel_->blocks()[b];
      for (int i = 1; i <= blk.J; ++i) {
        for (std::size_t v = 0; v < blk.coefficient.size(); ++v) {
          mixture_term t;
          t.origin = {blk.terminal, blk.J, i, static_cast<int>(v)};
          wide w = st.binom[b][i] * st.weight[b][v];
          t.sign = w < 0 ? -1 : 1;
          t.log_magnitude = w == 0 ? -INFINITY : numeric::to_double(log(abs(w)));
          t.coefficient = blk.coefficient[v];
          t.component = {T * blk.gamma_factor[v] / i, blk.J, i * lambda};
          out.push_back(std::move(t));
        }
      }
    }
    return out;
  }

  struct slice_probability {
    terminal_case terminal;
    int j;
    int i;
    double probability;
  };

  /// P(case, J=j, D=i) for i >= 1: the total weight of each (block, i) slice.
  std::vector<slice_probability> slice_probabilities() const {
    const auto& st = state<wide>();
    std::vector<slice_probability> out;
    for (std::size_t b = 0; b < kernel_->blocks().size(); ++b) {
      const auto& blk = kernel_->blocks()[b];
      for (int i = 1; i <= blk.J; ++i)
        out.push_back({blk.terminal, blk.J, i, numeric::to_double(st.binom[b][i] * st.block_prob[b])});
    }
    return out;
  }

  evaluation_stats stats() const {
    return {lazy_->n_double.load(), lazy_->n_quad.load(), lazy_->n_wide.load()};
  }

 private:
  enum class kind { pdf, cdf };

  template <class Real>
  struct eval_state {
    Real lambda;
    Real T;
    std::vector<std::vector<Real>> weight;  // coefficient * exp(-lambda T c_v)
    std::vector<std::vector<Real>> shift;   // T * c_v (W units)
    std::vector<std::vector<Real>> binom;   // C(J,i) p^i q^(J-i) (no binomial factor when disabled)
    std::vector<Real> block_prob;
    std::vector<Real> some_target;  // 1 - q^J
    std::vector<Real> log_fact;
    Real norm;
    Real norm_err;
    Real eps_scale;  // relative error scale of individual terms
  };

  struct lazy_states {
    std::once_flag f_double, f_quad, f_wide, f_peak;
    std::unique_ptr<eval_state<double>> s_double;
    std::unique_ptr<eval_state<quad>> s_quad;
    std::unique_ptr<eval_state<wide>> s_wide;
    double peak = 0.0;
    std::atomic<std::size_t> n_double{0}, n_quad{0}, n_wide{0};
  };

  template <class Real>
  const eval_state<Real>& state() const {
    if constexpr (std::is_same_v<Real, double>) {
      std::call_once(lazy_->f_double, [&] { lazy_->s_double = std::make_unique<eval_state<double>>(build<double>()); });
      return *lazy_->s_double;
    } else if constexpr (std::is_same_v<Real, quad>) {
      std::call_once(lazy_->f_quad, [&] { lazy_->s_quad = std::make_unique<eval_state<quad>>(build<quad>()); });
      return *lazy_->s_quad;
    } else {
      std::call_once(lazy_->f_wide, [&] { lazy_->s_wide = std::make_unique<eval_state<wide>>(build<wide>()); });
      return *lazy_->s_wide;
    }
  }

  template <class Real>
  eval_state<Real> build() const {
    using std::abs;
    using std::exp;
    using std::pow;
    eval_state<Real> st;
    const auto& blocks = kernel_->blocks();
    st.lambda = Real(model_.lambda1()) + Real(model_.lambda2());
    st.T = Real(kernel_->scheme().T);
    const Real p = Real(target_ == target::theta1 ? model_.lambda1() : model_.lambda2()) / st.lambda;
    const Real q = Real(target_ == target::theta1 ? model_.lambda2() : model_.lambda1()) / st.lambda;
    int max_j = 0;
    Real max_arg = 0;
    for (const auto& b : blocks) max_j = std::max(max_j, b.J);
    st.log_fact = numeric::log_factorials<Real>(max_j + 1);
    numeric::compensated_sum<Real> norm;
    for (const auto& b : blocks) {
      std::vector<Real> w, sh;
      for (std::size_t v = 0; v < b.coefficient.size(); ++v) {
        const Real arg = st.lambda * st.T * Real(b.gamma_factor[v]);
        max_arg = std::max(max_arg, arg);
        w.push_back(numeric::from_rational<Real>(b.coefficient[v]) * exp(-arg));
        sh.push_back(st.T * Real(b.gamma_factor[v]));
      }
      std::vector<Real> tmp = w;
      auto bp = numeric::sum_descending(tmp);
      st.block_prob.push_back(bp.value());
      std::vector<Real> bin(static_cast<std::size_t>(b.J) + 1);
      for (int i = 0; i <= b.J; ++i) {
        Real c = binomial_ ? Real(boost::math::binomial_coefficient<double>(b.J, i)) : Real(1);
        if (binomial_ && b.J > 50) c = exact_binomial<Real>(b.J, i);
        bin[i] = c * pow(p, i) * pow(q, b.J - i);
      }
      // mass of this block with at least one target failure
      Real some;
      if constexpr (std::is_same_v<Real, double>)
        some = -std::expm1(b.J * std::log1p(-p));
      else
        some = Real(1) - pow(q, b.J);
      norm.add(bp.value() * some);
      st.some_target.push_back(some);
      st.weight.push_back(std::move(w));
      st.shift.push_back(std::move(sh));
      st.binom.push_back(std::move(bin));
    }
    st.eps_scale = numeric::epsilon<Real>() * (Real(16) + Real(2 * max_j) + Real(2) * max_arg);
    st.norm = norm.value();
    Real abs_sum = 0;
    for (std::size_t b = 0; b < st.weight.size(); ++b)
      for (const auto& w : st.weight[b]) abs_sum += abs(w) * st.some_target[b];
    st.norm_err = abs_sum * st.eps_scale;
    return st;
  }

  template <class Real>
  static Real exact_binomial(int n, int k) {
    big_int c = 1;
    for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
    return numeric::from_rational<Real>(rational(c));
  }

  struct eval_result {
    double value;
    double error;
    double magnitude;
  };

  template <class Real>
  eval_result eval(kind what, double x_in) const {
    using std::abs;
    const auto& st = state<Real>();
    const Real x = Real(x_in);
    const auto& blocks = kernel_->blocks();
    std::vector<Real> terms;
    terms.reserve(kernel_->term_count());
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      const int J = blocks[b].J;
      const Real& lf = st.log_fact[J - 1];
      for (int i = 1; i <= J; ++i) {
        const Real& bin = st.binom[b][i];
        if (bin == 0) continue;
        const Real ix = Real(i) * x;
        const Real rate = Real(i) * st.lambda;
        for (std::size_t v = 0; v < st.weight[b].size(); ++v) {
          const Real y = st.lambda * (ix - st.shift[b][v]);
          if (!(y > 0)) continue;
          Real f;
          if (what == kind::cdf) {
            f = numeric::regularized_gamma_int<Real>(J, y, lf).p;
          } else {
            using std::exp;
            using std::log;
            f = rate * exp(-y + Real(J - 1) * log(y) - lf);
          }
          terms.push_back(bin * st.weight[b][v] * f);
        }
      }
    }
    auto s = numeric::sum_descending(terms);
    const Real sum = s.value();
    const Real err_sum = s.magnitude() * st.eps_scale;
    const Real value = sum / st.norm;
    const Real an = abs(st.norm);
    Real err = err_sum / an + abs(sum) * st.norm_err / (an * an);
    // the normalizer itself may be lost to cancellation at low precision
    if (!(st.norm_err < Real(0.5) * an)) err = std::numeric_limits<Real>::infinity();
    return {numeric::to_double(value), numeric::to_double(err), numeric::to_double(s.magnitude() / an)};
  }

  double evaluate(kind what, double x, double tol) const {
    if (policy_ == precision_policy::wide_only) {
      ++lazy_->n_wide;
      return eval<wide>(what, x).value;
    }
    auto r = eval<double>(what, x);
    ++lazy_->n_double;
    auto ok = [tol](const eval_result& e) { return e.error >= 0.0 && e.error <= tol; };
    if (ok(r)) return r.value;
    if (policy_ == precision_policy::double_only) {
      if (r.magnitude > 1.0 && r.error > 1e-3 * std::abs(r.value))
        throw error(error_kind::cancellation_overflow,
                    "fewer than 3 significant digits survive cancellation at x=" + std::to_string(x));
      return r.value;
    }
    r = eval<quad>(what, x);
    ++lazy_->n_quad;
    if (ok(r)) return r.value;
    r = eval<wide>(what, x);
    ++lazy_->n_wide;
    if (ok(r)) return r.value;
    throw error(error_kind::cancellation_overflow,
                "50-digit evaluation still loses the result to cancellation at x=" + std::to_string(x));
  }

  double peak_density() const {
    std::call_once(lazy_->f_peak, [&] {
      const double lo = min_shift();
      const double hi = upper_support_hint();
      double peak = 0.0;
      for (int g = 1; g < 400; ++g) {
        double x = lo + (hi - lo) * g / 400.0;
        peak = std::max(peak, evaluate(kind::pdf, x, pdf_tolerance * model_.lambda()));
      }
      lazy_->peak = peak;
    });
    return lazy_->peak;
  }

 public:
  /// A point beyond which the remaining probability mass is negligible.
  double upper_support_hint() const {
    const double T = kernel_->scheme().T;
    const double lambda = model_.lambda();
    double hi = 0.0;
    for (const auto& b : kernel_->blocks()) {
      int cmax = *std::max_element(b.gamma_factor.begin(), b.gamma_factor.end());
      hi = std::max(hi, T * cmax + (b.J + 12.0 * std::sqrt(static_cast<double>(b.J)) + 40.0) / lambda);
    }
    return hi;
  }

  /// Sorted distinct component shifts; the density is smooth between them.
  std::vector<double> breakpoints() const {
    std::vector<double> out;
    const double T = kernel_->scheme().T;
    for (const auto& b : kernel_->blocks())
      for (int i = 1; i <= b.J; ++i)
        for (int c : b.gamma_factor) out.push_back(T * c / i);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

 private:
  std::shared_ptr<const scheme_kernel> kernel_;
  exp_competing_model model_;
  target target_;
  bool binomial_;
  precision_policy policy_;
  std::shared_ptr<lazy_states> lazy_;
};

inline signed_gamma_mixture build_mixture(const exp_competing_model& model, const censoring_scheme& scheme,
                                          target t = target::theta1, bool binomial_variant = true,
                                          precision_policy policy = precision_policy::automatic) {
  return signed_gamma_mixture(std::make_shared<scheme_kernel>(scheme), model, t, binomial_variant, policy);
}

inline double exact_pdf(const signed_gamma_mixture& mix, double x) { return mix.pdf(x); }
inline double exact_cdf(const signed_gamma_mixture& mix, double x) { return mix.cdf(x); }

/// Integral of the density by adaptive Gauss-Kronrod with the component
/// shifts as panel boundaries and a semi-infinite last panel.
inline double integrate_pdf(const signed_gamma_mixture& mix, double tol = 1e-10) {
  auto f = [&](double x) { return mix.pdf(x); };
  auto bp = mix.breakpoints();
  double total = 0.0;
  using gk = boost::math::quadrature::gauss_kronrod<double, 31>;
  for (std::size_t p = 0; p + 1 < bp.size(); ++p) {
    if (bp[p + 1] - bp[p] <= 0) continue;
    total += gk::integrate(f, bp[p], bp[p + 1], 4, tol);
  }
  total += gk::integrate(f, bp.back(), std::numeric_limits<double>::infinity(), 8, tol);
  return total;
}

/// E(exp(t theta_hat) | case, J=j, D=i), normalised by the slice probability.
/// Defined for t < i / theta.
inline double conditional_mgf(const exp_competing_model& model, const censoring_scheme& scheme, terminal_case which,
                              int j, int i, double t) {
  using std::exp;
  using std::pow;
  scheme_kernel kernel(scheme);
  const double lambda = model.lambda();
  if (i < 1 || i > j) throw error(error_kind::out_of_domain, "slice index i must lie in 1..j");
  if (!(t < i * lambda)) throw error(error_kind::out_of_domain, "MGF argument must satisfy t < i/theta");
  const kernel_block* blk = nullptr;
  for (const auto& b : kernel.blocks())
    if (b.terminal == which && b.J == j) blk = &b;
  if (!blk) throw error(error_kind::out_of_domain, "no block for this case and j");
  const wide lam = wide(model.lambda1()) + wide(model.lambda2());
  const wide mu = lam - wide(t) / wide(i);
  const wide T = wide(scheme.T);
  std::vector<wide> num, den;
  for (std::size_t v = 0; v < blk->coefficient.size(); ++v) {
    const wide c = numeric::from_rational<wide>(blk->coefficient[v]);
    num.push_back(c * exp(-T * mu * blk->gamma_factor[v]));
    den.push_back(c * exp(-T * lam * blk->gamma_factor[v]));
  }
  const wide ratio = numeric::sum_descending(num).value() / numeric::sum_descending(den).value();
  return numeric::to_double(pow(lam / mu, j) * ratio);
}

/// `x,pdf,cdf` rows on the given grid.
inline void write_plot_data(std::ostream& out, const signed_gamma_mixture& mix, const std::vector<double>& grid) {
  out << "x,pdf,cdf\n";
  for (double x : grid) out << format_double(x) << ',' << format_double(mix.pdf(x)) << ',' << format_double(mix.cdf(x)) << '\n';
}

}  // namespace gphc
