#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "gphc/bayes.hpp"
#include "gphc/errors.hpp"
#include "gphc/estimation.hpp"
#include "gphc/intervals.hpp"
#include "gphc/model.hpp"
#include "gphc/rng.hpp"
#include "gphc/sample.hpp"
#include "gphc/sample_io.hpp"
#include "gphc/scheme.hpp"

namespace gphc {

enum class scheme_family { I, II, III, custom };

inline const char* to_string(scheme_family f) {
  switch (f) {
    case scheme_family::I: return "I";
    case scheme_family::II: return "II";
    case scheme_family::III: return "III";
    case scheme_family::custom: return "custom";
  }
  return "?";
}

inline scheme_family parse_scheme_family(const std::string& s) {
  if (s == "I" || s == "1") return scheme_family::I;
  if (s == "II" || s == "2") return scheme_family::II;
  if (s == "III" || s == "3") return scheme_family::III;
  if (s == "custom") return scheme_family::custom;
  throw error(error_kind::scheme_invalid, "unknown scheme family '" + s + "'");
}

/// I: R_1 = n-m; II: R_ceil(m/2) = n-m; III: R_m = n-m; all other R_i = 0.
inline std::vector<int> expand_scheme(scheme_family f, int n, int m) {
  if (!(m >= 1 && m <= n)) throw error(error_kind::scheme_invalid, "need 1 <= m <= n");
  std::vector<int> r(static_cast<std::size_t>(m), 0);
  switch (f) {
    case scheme_family::I: r.front() = n - m; break;
    case scheme_family::II: r[(m + 1) / 2 - 1] = n - m; break;
    case scheme_family::III: r.back() = n - m; break;
    case scheme_family::custom: throw error(error_kind::scheme_invalid, "custom schemes carry their own removals");
  }
  return r;
}

enum class method { mle, exact_ci, bootstrap_ci, bayes_prior_one, bayes_prior_two };

inline const char* to_string(method m) {
  switch (m) {
    case method::mle: return "mle";
    case method::exact_ci: return "exact";
    case method::bootstrap_ci: return "bootstrap";
    case method::bayes_prior_one: return "prior1";
    case method::bayes_prior_two: return "prior2";
  }
  return "?";
}

inline method parse_method(const std::string& s) {
  for (method m : {method::mle, method::exact_ci, method::bootstrap_ci, method::bayes_prior_one, method::bayes_prior_two})
    if (s == to_string(m)) return m;
  throw error(error_kind::out_of_domain, "unknown method '" + s + "'");
}

struct experiment_config {
  double theta1 = 1.0;
  double theta2 = 1.3;
  scheme_family family = scheme_family::I;
  int n = 20;
  int m = 14;
  int k = 3;
  double T = 1.2;
  std::vector<int> custom_removals;
  int replications = 1000;
  double alpha = 0.05;
  std::vector<method> methods{method::mle, method::exact_ci, method::bootstrap_ci, method::bayes_prior_one,
                              method::bayes_prior_two};
  std::uint64_t seed = 1;
  int workers = 1;
  int bootstrap_B = 1000;
  std::size_t posterior_draws = 10000;
  /// Count replications without a finite exact interval as misses instead of
  /// leaving them out of the coverage denominator.
  bool neci_as_noncoverage = false;

  censoring_scheme scheme() const {
    censoring_scheme s;
    s.n = n;
    s.m = m;
    s.k = k;
    s.T = T;
    s.removals = family == scheme_family::custom ? custom_removals : expand_scheme(family, n, m);
    validate_scheme(s);
    return s;
  }

  bool uses(method x) const {
    for (method y : methods)
      if (x == y) return true;
    return false;
  }
};

/// Outcome of one method for one parameter in one replication.
struct replication_outcome {
  std::optional<double> estimate;
  std::optional<interval_result> interval;
  bool skipped = false;  ///< estimate undefined (D = 0 or non-integrable posterior)
  bool failed = false;   ///< numerical failure
};

struct metrics_row {
  int n = 0, m = 0, k = 0;
  std::string scheme;
  target parameter = target::theta1;
  method which = method::mle;
  double true_value = 0.0;
  int replications = 0;
  int used = 0;  ///< replications contributing to bias and MSE
  double bias = NAN, bias_se = NAN;
  double mse = NAN, mse_se = NAN;
  double ci_len = NAN;
  double coverage = NAN;  ///< percent
  double coverage_se = NAN;
  int intervals = 0;
  int neci = 0;
  int skipped = 0;
  int failures = 0;
};

namespace detail {

constexpr method all_methods[] = {method::mle, method::exact_ci, method::bootstrap_ci, method::bayes_prior_one,
                                  method::bayes_prior_two};
constexpr int method_count = 5;

inline int slot(target t, method m) { return static_cast<int>(t) * method_count + static_cast<int>(m); }

inline std::vector<replication_outcome> run_replication(const experiment_config& cfg, const censoring_scheme& scheme,
                                                        int r) {
  std::vector<replication_outcome> out(2 * method_count);
  rng_stream stream(cfg.seed, static_cast<std::uint64_t>(r));
  rng_stream boot_rng = stream.split(1);
  rng_stream post_rng = stream.split(2);
  const exp_competing_model model(cfg.theta1, cfg.theta2);
  const gphc_sample s = generate_sample(model, scheme, stream);
  const mle_result fit = fit_mle(s);

  for (target t : {target::theta1, target::theta2}) {
    const auto est = fit.estimate(t);
    if (cfg.uses(method::mle)) {
      auto& o = out[slot(t, method::mle)];
      if (!est) {
        o.skipped = true;
      } else {
        o.estimate = est;
        o.interval = to_interval(asymptotic_ci(fit, t, cfg.alpha));
      }
    }
    if (cfg.uses(method::exact_ci)) {
      auto& o = out[slot(t, method::exact_ci)];
      if (!est) {
        o.skipped = true;
      } else {
        o.estimate = est;
        try {
          o.interval = exact_ci(s, t, cfg.alpha);
        } catch (const error&) {
          o.failed = true;
        }
      }
    }
    if (cfg.uses(method::bootstrap_ci)) {
      auto& o = out[slot(t, method::bootstrap_ci)];
      if (!fit.theta1_hat || !fit.theta2_hat) {
        o.skipped = true;
      } else {
        o.estimate = est;
        rng_stream br = boot_rng.split(static_cast<std::uint64_t>(t));
        o.interval = bootstrap_ci(s, t, cfg.alpha, cfg.bootstrap_B, br);
      }
    }
  }

  for (method bm : {method::bayes_prior_one, method::bayes_prior_two}) {
    if (!cfg.uses(bm)) continue;
    const auto post = posterior(bm == method::bayes_prior_one ? prior_one() : prior_matching(), s);
    std::vector<posterior_draw> draws;
    if (post.proper()) {
      rng_stream pr = post_rng.split(static_cast<std::uint64_t>(bm));
      draws = sample_posterior(post, cfg.posterior_draws, pr);
    }
    for (target t : {target::theta1, target::theta2}) {
      auto& o = out[slot(t, bm)];
      try {
        o.estimate = bayes_estimate(post, t);
      } catch (const error&) {
        o.skipped = true;
        continue;
      }
      auto sorted = transformed_sorted(draws, [t](const posterior_draw& d) {
        return t == target::theta1 ? 1.0 / d.lambda1 : 1.0 / d.lambda2;
      });
      auto ci = hpd_from_sorted(sorted, cfg.alpha);
      interval_result ir;
      ir.lower = ci.lower;
      ir.upper = ci.upper;
      ir.alpha = cfg.alpha;
      ir.exists = true;
      o.interval = ir;
    }
  }
  return out;
}

struct running {
  double n = 0, mean = 0, m2 = 0;
  void add(double x) {
    n += 1;
    const double d = x - mean;
    mean += d / n;
    m2 += d * (x - mean);
  }
  double se() const { return n > 1 ? std::sqrt(m2 / (n - 1) / n) : NAN; }
};

}  // namespace detail

struct experiment_result {
  experiment_config config;
  std::vector<metrics_row> rows;
  double seconds = 0.0;
};

/// Runs the replications (interleaved across `config.workers` threads, each
/// with its own stream) and reduces them in replication order.
inline experiment_result run_experiment(const experiment_config& cfg) {
  if (cfg.replications < 1) throw error(error_kind::out_of_domain, "replications must be positive");
  const auto t0 = std::chrono::steady_clock::now();
  const censoring_scheme scheme = cfg.scheme();
  (void)exp_competing_model(cfg.theta1, cfg.theta2);
  std::vector<std::vector<replication_outcome>> reps(static_cast<std::size_t>(cfg.replications));
  const int workers = std::max(1, std::min(cfg.workers, cfg.replications));
  auto work = [&](int w) {
    for (int r = w; r < cfg.replications; r += workers) reps[r] = detail::run_replication(cfg, scheme, r);
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }

  experiment_result res;
  res.config = cfg;
  for (target t : {target::theta1, target::theta2}) {
    const double truth = t == target::theta1 ? cfg.theta1 : cfg.theta2;
    for (method mth : detail::all_methods) {
      if (!cfg.uses(mth)) continue;
      metrics_row row;
      row.n = cfg.n;
      row.m = cfg.m;
      row.k = cfg.k;
      row.scheme = to_string(cfg.family);
      row.parameter = t;
      row.which = mth;
      row.true_value = truth;
      row.replications = cfg.replications;
      detail::running err, sq, len, cov;
      for (const auto& rep : reps) {
        const auto& o = rep[detail::slot(t, mth)];
        if (o.skipped) ++row.skipped;
        if (o.failed) ++row.failures;
        if (o.estimate) {
          err.add(*o.estimate - truth);
          sq.add((*o.estimate - truth) * (*o.estimate - truth));
        }
        if (o.interval) {
          if (o.interval->exists) {
            ++row.intervals;
            len.add(o.interval->length());
            cov.add(o.interval->contains(truth) ? 100.0 : 0.0);
          } else {
            ++row.neci;
            if (cfg.neci_as_noncoverage) cov.add(0.0);
          }
        }
      }
      row.used = static_cast<int>(err.n);
      if (err.n > 0) {
        row.bias = err.mean;
        row.bias_se = err.se();
        row.mse = sq.mean;
        row.mse_se = sq.se();
      }
      if (len.n > 0) row.ci_len = len.mean;
      if (cov.n > 0) {
        row.coverage = cov.mean;
        row.coverage_se = cov.se();
      }
      res.rows.push_back(row);
    }
  }
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

inline void write_metrics_csv(std::ostream& out, const std::vector<metrics_row>& rows) {
  out << "n,m,k,scheme,parameter,method,true_value,replications,used,bias,bias_se,mse,mse_se,ci_len,coverage,"
         "coverage_se,intervals,neci,skipped,failures\n";
  for (const auto& r : rows) {
    out << r.n << ',' << r.m << ',' << r.k << ',' << r.scheme << ',' << to_string(r.parameter) << ','
        << to_string(r.which) << ',' << format_double(r.true_value) << ',' << r.replications << ',' << r.used << ','
        << format_double(r.bias) << ',' << format_double(r.bias_se) << ',' << format_double(r.mse) << ','
        << format_double(r.mse_se) << ',' << format_double(r.ci_len) << ',' << format_double(r.coverage) << ','
        << format_double(r.coverage_se) << ',' << r.intervals << ',' << r.neci << ',' << r.skipped << ','
        << r.failures << '\n';
  }
}

inline nlohmann::json config_to_json(const experiment_config& c) {
  nlohmann::json methods = nlohmann::json::array();
  for (method m : c.methods) methods.push_back(to_string(m));
  nlohmann::json j{{"theta1", c.theta1},
                   {"theta2", c.theta2},
                   {"scheme_family", to_string(c.family)},
                   {"scheme", scheme_to_json(c.scheme())},
                   {"replications", c.replications},
                   {"alpha", c.alpha},
                   {"methods", methods},
                   {"seed", c.seed},
                   {"workers", c.workers},
                   {"bootstrap_B", c.bootstrap_B},
                   {"posterior_draws", c.posterior_draws},
                   {"neci_as_noncoverage", c.neci_as_noncoverage},
                   {"exact_ci_nuisance", "plug-in MLE"}};
  if (c.family == scheme_family::II)
    j["scheme_note"] = "Scheme II read as all n-m removals at failure ceil(m/2)";
  return j;
}

inline nlohmann::json metrics_to_json(const metrics_row& r) {
  auto num = [](double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); };
  return {{"parameter", to_string(r.parameter)},
          {"method", to_string(r.which)},
          {"true_value", r.true_value},
          {"replications", r.replications},
          {"used", r.used},
          {"bias", num(r.bias)},
          {"bias_se", num(r.bias_se)},
          {"mse", num(r.mse)},
          {"mse_se", num(r.mse_se)},
          {"ci_len", num(r.ci_len)},
          {"coverage", num(r.coverage)},
          {"coverage_se", num(r.coverage_se)},
          {"intervals", r.intervals},
          {"neci", r.neci},
          {"skipped", r.skipped},
          {"failures", r.failures}};
}

}  // namespace gphc
