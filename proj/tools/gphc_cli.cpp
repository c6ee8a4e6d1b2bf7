// gphc: command-line front end. JSON results go to stdout, a readable
// table to stderr, and every run leaves a manifest next to its output.
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "gphc/gphc.hpp"

using namespace gphc;
using json = nlohmann::json;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_numerical = 1;
constexpr int exit_validation = 2;

struct run_context {
  std::string command;
  std::vector<std::string> argv;
  json config = json::object();
  json stages = json::array();
  std::string out;       ///< primary output file, if any
  std::string manifest;  ///< explicit manifest path
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  std::chrono::steady_clock::time_point last = start;

  void stage(const std::string& name) {
    const auto now = std::chrono::steady_clock::now();
    stages.push_back({{"stage", name}, {"seconds", std::chrono::duration<double>(now - last).count()}});
    last = now;
  }
};

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

void write_manifest(const run_context& ctx, int exit_code) {
  json m{{"command", ctx.command},
         {"argv", ctx.argv},
         {"config", ctx.config},
         {"tool", "gphc"},
         {"version", version},
         {"started_utc", utc_now()},
         {"wall_clock_seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - ctx.start).count()},
         {"stages", ctx.stages},
         {"exit_code", exit_code}};
  if (ctx.config.contains("seed")) m["seed"] = ctx.config["seed"];
  std::string path = ctx.manifest;
  if (path.empty()) path = ctx.out.empty() ? ctx.command + ".manifest.json" : ctx.out + ".manifest.json";
  std::ofstream f(path);
  if (!f) {
    std::cerr << "warning: cannot write manifest '" << path << "'\n";
    return;
  }
  f << m.dump(2) << '\n';
}

json opt_json(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

std::string show(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::string show(const std::optional<double>& x) { return x ? show(*x) : std::string("-"); }

std::vector<target> targets_from(const std::string& s) {
  if (s == "theta1") return {target::theta1};
  if (s == "theta2") return {target::theta2};
  if (s == "both") return {target::theta1, target::theta2};
  throw error(error_kind::out_of_domain, "target must be theta1, theta2 or both");
}

sample_format format_for(const std::string& path, const std::string& requested) {
  if (requested == "csv") return sample_format::csv;
  if (requested == "json") return sample_format::json;
  if (!requested.empty() && requested != "auto") throw error(error_kind::out_of_domain, "format must be csv or json");
  return path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0 ? sample_format::json : sample_format::csv;
}

/// Design flags shared by simulate, experiment and plot-data.
struct design_options {
  int n = 20, m = 14, k = 3;
  double T = 1.2;
  std::string scheme = "I";
  std::string R;

  void add(CLI::App* app) {
    app->add_option("--n", n, "units placed on test (n)")->capture_default_str();
    app->add_option("--m", m, "maximum number of observed failures (m)")->capture_default_str();
    app->add_option("--k", k, "guaranteed number of failures (k)")->capture_default_str();
    app->add_option("--T", T, "time threshold (T)")->capture_default_str();
    app->add_option("--scheme", scheme,
                    "removal pattern: I (all n-m at the first failure), II (at failure ceil(m/2)), III (at failure m)")
        ->capture_default_str();
    app->add_option("--R", R, "explicit removals R_1,...,R_m (comma separated); overrides --scheme");
  }

  scheme_family family() const { return R.empty() ? parse_scheme_family(scheme) : scheme_family::custom; }

  std::vector<int> removals() const {
    std::vector<int> out;
    std::stringstream ss(R);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        std::size_t used = 0;
        out.push_back(std::stoi(item, &used));
        if (used != item.size()) throw std::invalid_argument(item);
      } catch (const std::exception&) {
        throw error(error_kind::parse_error, "--R entry '" + item + "' is not an integer");
      }
    }
    return out;
  }

  censoring_scheme build() const {
    censoring_scheme s;
    s.n = n;
    s.m = m;
    s.k = k;
    s.T = T;
    s.removals = R.empty() ? expand_scheme(family(), n, m) : removals();
    validate_scheme(s);
    return s;
  }
};

struct data_options {
  std::string data;
  std::string format = "auto";

  void add(CLI::App* app) {
    app->add_option("--data", data,
                    "sample file (CSV z,cause,removed with a <file>.scheme.json sidecar, or JSON), or builtin:hoel-gphc")
        ->required();
    app->add_option("--format", format, "input format: auto, csv or json")->capture_default_str();
  }

  gphc_sample load() const {
    if (data == hoel_builtin_name || data == "hoel-gphc" || data == "builtin:hoel") return hoel_sample();
    return load_sample(data, format_for(data, format));
  }
};

void print_sample_table(const gphc_sample& s) {
  std::cerr << "n=" << s.scheme.n << " m=" << s.scheme.m << " k=" << s.scheme.k << " T=" << show(s.scheme.T)
            << "  case " << to_string(s.terminal) << "  J=" << s.J << " D1=" << s.D1 << " D2=" << s.D2
            << " W=" << show(s.W) << '\n';
}

void print_interval_row(const std::string& label, const interval_result& r) {
  std::fprintf(stderr, "%-8s %-10s %14s %14s %s\n", label.c_str(), to_string(r.method), show(r.lower).c_str(),
               show(r.upper).c_str(), r.exists ? "" : "(no finite upper limit)");
}

json interval_json(const interval_result& r) {
  json d{{"bracket_expansions", r.diagnostics.bracket_expansions},
         {"iterations_lower", r.diagnostics.iterations_lower},
         {"iterations_upper", r.diagnostics.iterations_upper},
         {"residual_lower", finite_or_null(r.diagnostics.residual_lower)},
         {"residual_upper", finite_or_null(r.diagnostics.residual_upper)},
         {"other_theta", finite_or_null(r.diagnostics.other_theta)},
         {"redraws", r.diagnostics.redraws}};
  if (r.diagnostics.limiting_probability) d["limiting_probability"] = *r.diagnostics.limiting_probability;
  return {{"method", to_string(r.method)},
          {"alpha", r.alpha},
          {"exists", r.exists},
          {"lower", opt_json(r.lower)},
          {"upper", opt_json(r.upper)},
          {"diagnostics", d}};
}

void emit(const json& j) { std::cout << j.dump(2) << '\n'; }

// ---- commands ----

struct simulate_cmd {
  design_options design;
  double theta1 = 1.0, theta2 = 1.3;
  std::uint64_t seed = 1;
  std::string out, format = "auto";

  void add(CLI::App* app) {
    design.add(app);
    app->add_option("--theta1", theta1, "mean lifetime for cause 1 (theta1)")->capture_default_str();
    app->add_option("--theta2", theta2, "mean lifetime for cause 2 (theta2)")->capture_default_str();
    app->add_option("--seed", seed, "master seed")->capture_default_str();
    app->add_option("--out", out, "write the sample here (CSV also gets <out>.scheme.json)");
    app->add_option("--format", format, "output format: auto (from extension), csv or json")->capture_default_str();
  }

  int run(run_context& ctx) {
    const auto scheme = design.build();
    const exp_competing_model model(theta1, theta2);
    ctx.config = {{"scheme", scheme_to_json(scheme)}, {"theta1", theta1}, {"theta2", theta2}, {"seed", seed}};
    rng_stream rng(seed);
    const auto s = generate_sample(model, scheme, rng);
    ctx.stage("generate");
    if (!out.empty()) {
      const auto fmt = format_for(out, format);
      save_sample(s, out, fmt);
      if (fmt == sample_format::csv) {
        std::ofstream sc(out + ".scheme.json");
        sc << scheme_to_json(scheme).dump(2) << '\n';
        if (!sc) throw error(error_kind::io_error, "cannot write scheme sidecar for '" + out + "'");
      }
      ctx.stage("write");
    }
    emit(sample_to_json(s));
    print_sample_table(s);
    return exit_ok;
  }
};

struct fit_cmd {
  data_options data;
  double alpha = 0.05;

  void add(CLI::App* app) {
    data.add(app);
    app->add_option("--alpha", alpha, "level for the large-sample intervals (1 - alpha coverage)")
        ->capture_default_str();
  }

  int run(run_context& ctx) {
    const auto s = data.load();
    ctx.config = {{"data", data.data}, {"alpha", alpha}};
    const auto fit = fit_mle(s);
    json j{{"D1", s.D1},
           {"D2", s.D2},
           {"J", s.J},
           {"W", s.W},
           {"terminal_case", to_string(s.terminal)},
           {"theta1_hat", opt_json(fit.theta1_hat)},
           {"theta2_hat", opt_json(fit.theta2_hat)}};
    if (fit.theta1_hat && fit.theta2_hat) {
      auto [a, b] = asymptotic_ci(fit, alpha);
      j["asymptotic_ci"] = {{"label", approx_interval::label},
                            {"theta1", {a.lower, a.upper}},
                            {"theta2", {b.lower, b.upper}}};
    }
    ctx.stage("fit");
    emit(j);
    print_sample_table(s);
    std::cerr << "theta1_hat = " << show(fit.theta1_hat) << "   theta2_hat = " << show(fit.theta2_hat) << '\n';
    return exit_ok;
  }
};

struct exact_ci_cmd {
  data_options data;
  double alpha = 0.05;
  std::string target_name = "both";
  std::string nuisance = "mle";
  double other_theta = 0.0;
  std::string precision = "auto";

  void add(CLI::App* app) {
    data.add(app);
    app->add_option("--alpha", alpha, "1 - alpha coverage")->capture_default_str();
    app->add_option("--target", target_name, "theta1, theta2 or both")->capture_default_str();
    app->add_option("--nuisance", nuisance, "other mean during the search: mle (plug-in estimate) or fixed")
        ->capture_default_str();
    app->add_option("--other-theta", other_theta, "value of the other mean with --nuisance fixed");
    app->add_option("--precision", precision, "auto (escalate on cancellation) or double")->capture_default_str();
  }

  int run(run_context& ctx) {
    const auto s = data.load();
    exact_ci_options opt;
    opt.alpha = alpha;
    if (nuisance == "fixed") {
      opt.nuisance = nuisance_policy::fixed;
      opt.other_theta = other_theta;
      if (!(other_theta > 0.0)) throw error(error_kind::out_of_domain, "--other-theta must be positive");
    } else if (nuisance != "mle") {
      throw error(error_kind::out_of_domain, "--nuisance must be mle or fixed");
    }
    if (precision == "double")
      opt.precision = precision_policy::double_only;
    else if (precision != "auto")
      throw error(error_kind::out_of_domain, "--precision must be auto or double");
    ctx.config = {{"data", data.data}, {"alpha", alpha}, {"target", target_name}, {"nuisance", nuisance},
                  {"precision", precision}};
    if (opt.nuisance == nuisance_policy::fixed) ctx.config["other_theta"] = other_theta;
    json j = json::object();
    const auto fit = fit_mle(s);
    std::fprintf(stderr, "%-8s %-10s %14s %14s\n", "param", "method", "lower", "upper");
    for (target t : targets_from(target_name)) {
      auto r = exact_ci(s, t, opt);
      ctx.stage(std::string("exact_ci ") + to_string(t));
      j[to_string(t)] = interval_json(r);
      j[to_string(t)]["estimate"] = opt_json(fit.estimate(t));
      print_interval_row(to_string(t), r);
    }
    emit(j);
    return exit_ok;
  }
};

struct boot_ci_cmd {
  data_options data;
  double alpha = 0.05;
  std::string target_name = "both";
  int B = 1000;
  std::uint64_t seed = 1;
  int workers = 1;

  void add(CLI::App* app) {
    data.add(app);
    app->add_option("--alpha", alpha, "1 - alpha coverage")->capture_default_str();
    app->add_option("--target", target_name, "theta1, theta2 or both")->capture_default_str();
    app->add_option("--B", B, "bootstrap replicates (>= 100)")->capture_default_str();
    app->add_option("--seed", seed, "master seed")->capture_default_str();
    app->add_option("--workers", workers, "threads; results do not depend on this")->capture_default_str();
  }

  int run(run_context& ctx) {
    const auto s = data.load();
    ctx.config = {{"data", data.data}, {"alpha", alpha}, {"target", target_name},
                  {"B", B},           {"seed", seed},   {"workers", workers}};
    json j = json::object();
    std::fprintf(stderr, "%-8s %-10s %14s %14s\n", "param", "method", "lower", "upper");
    for (target t : targets_from(target_name)) {
      // one stream per target so --target theta2 alone matches the pair run
      rng_stream tr(seed, static_cast<std::uint64_t>(t) + 1);
      auto r = bootstrap_ci(s, t, alpha, B, tr, workers);
      ctx.stage(std::string("bootstrap ") + to_string(t));
      j[to_string(t)] = interval_json(r);
      print_interval_row(to_string(t), r);
    }
    emit(j);
    return exit_ok;
  }
};

struct bayes_cmd {
  data_options data;
  std::string prior = "matching";
  double alpha = 0.05;
  std::vector<std::string> hpd;
  std::size_t draws = 100000;
  std::uint64_t seed = 1;
  double alpha1 = -1.0;
  std::string draws_out, boundary_out;

  void add(CLI::App* app) {
    data.add(app);
    app->add_option("--prior", prior,
                    "Beta-Gamma hyperparameters b0,a0,a1,a2, or 'matching' (0,2,1,1) or 'prior1' (1,46/13,2.3,2)")
        ->capture_default_str();
    app->add_option("--alpha", alpha, "1 - alpha credibility")->capture_default_str();
    app->add_option("--hpd", hpd, "HPD interval for theta1, theta2, lambda1, lambda2 or ratio (repeatable)");
    app->add_option("--draws", draws, "posterior draws for HPD intervals")->capture_default_str();
    app->add_option("--seed", seed, "master seed")->capture_default_str();
    app->add_option("--alpha1", alpha1, "credible-set split for lambda1+lambda2 (default symmetric)");
    app->add_option("--draws-out", draws_out, "write the posterior draws as CSV");
    app->add_option("--boundary-out", boundary_out, "write the credible-set boundary in (theta1, theta2) as CSV");
  }

  beta_gamma_params parse_prior() const {
    if (prior == "matching" || prior == "prior2") return prior_matching();
    if (prior == "prior1") return prior_one();
    std::vector<double> v;
    std::stringstream ss(prior);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        v.push_back(std::stod(item));
      } catch (const std::exception&) {
        throw error(error_kind::parse_error, "--prior entry '" + item + "' is not a number");
      }
    }
    if (v.size() != 4) throw error(error_kind::parse_error, "--prior needs four values b0,a0,a1,a2");
    return validate(beta_gamma_params{v[0], v[1], v[2], v[3]});
  }

  static posterior_function parse_function(const std::string& s) {
    for (auto g : {posterior_function::theta1, posterior_function::theta2, posterior_function::lambda1,
                   posterior_function::lambda2, posterior_function::ratio})
      if (s == to_string(g)) return g;
    throw error(error_kind::out_of_domain, "unknown HPD function '" + s + "'");
  }

  int run(run_context& ctx) {
    const auto s = data.load();
    const auto pr = parse_prior();
    ctx.config = {{"data", data.data},
                  {"prior", {pr.b0, pr.a0, pr.a1, pr.a2}},
                  {"alpha", alpha},
                  {"hpd", hpd},
                  {"draws", draws},
                  {"seed", seed}};
    const auto post = posterior(pr, s);
    json j{{"posterior", {{"b0", post.b0}, {"a0", post.a0}, {"a1", post.a1}, {"a2", post.a2}}}};
    std::cerr << "posterior BG(" << show(post.b0) << ", " << show(post.a0) << ", " << show(post.a1) << ", "
              << show(post.a2) << ")\n";
    detail::require_proper(post);
    for (target t : {target::theta1, target::theta2}) {
      try {
        const double e = bayes_estimate(post, t);
        j["estimate"][to_string(t)] = e;
        std::cerr << to_string(t) << " Bayes estimate " << show(e) << '\n';
      } catch (const error& e) {
        j["estimate"][to_string(t)] = nullptr;
        std::cerr << to_string(t) << ": " << e.what() << '\n';
      }
    }
    try {
      auto [v1, v2] = posterior_variances(post);
      j["variance"] = {{"theta1", v1}, {"theta2", v2}};
    } catch (const error&) {
      j["variance"] = nullptr;
    }
    const auto cs = make_credible_set(post, alpha, alpha1);
    j["credible_set"] = {{"A", cs.A}, {"B", cs.B}, {"C", cs.C}, {"D", cs.D},
                         {"alpha", cs.alpha}, {"alpha1", cs.alpha1}, {"alpha2", cs.alpha2}};
    std::cerr << "credible set: " << show(cs.A) << " <= lambda1+lambda2 <= " << show(cs.B) << ", " << show(cs.C)
              << " <= lambda1/(lambda1+lambda2) <= " << show(cs.D) << '\n';
    if (!boundary_out.empty()) {
      std::ofstream f(boundary_out);
      write_boundary_csv(f, boundary_curves(cs));
      if (!f) throw error(error_kind::io_error, "cannot write '" + boundary_out + "'");
    }
    ctx.stage("posterior");
    if (!hpd.empty() || !draws_out.empty()) {
      rng_stream rng(seed);
      const auto sample = sample_posterior(post, draws, rng);
      ctx.stage("sampling");
      for (const auto& name : hpd) {
        const auto g = parse_function(name);
        const auto h = hpd_from_sorted(transformed_sorted(sample, [g](const auto& d) { return evaluate(g, d); }), alpha);
        j["hpd"][name] = {{"lower", h.lower}, {"upper", h.upper}, {"alpha", alpha}};
        std::cerr << "HPD " << name << ": (" << show(h.lower) << ", " << show(h.upper) << ")\n";
      }
      if (!draws_out.empty()) {
        std::ofstream f(draws_out);
        write_draws_csv(f, sample);
        if (!f) throw error(error_kind::io_error, "cannot write '" + draws_out + "'");
      }
      ctx.stage("hpd");
    }
    emit(j);
    return exit_ok;
  }
};

struct experiment_cmd {
  design_options design;
  experiment_config cfg;
  std::vector<std::string> methods;
  std::string out;

  void add(CLI::App* app) {
    design.add(app);
    app->add_option("--theta1", cfg.theta1, "true theta1")->capture_default_str();
    app->add_option("--theta2", cfg.theta2, "true theta2")->capture_default_str();
    app->add_option("--replications", cfg.replications, "Monte Carlo replications")
        ->capture_default_str();
    app->add_option("--alpha", cfg.alpha, "1 - alpha interval level")->capture_default_str();
    app->add_option("--methods", methods, "subset of mle, exact, bootstrap, prior1, prior2 (default all)")
        ->delimiter(',');
    app->add_option("--seed", cfg.seed, "master seed")->capture_default_str();
    app->add_option("--workers", cfg.workers, "threads; results do not depend on this")->capture_default_str();
    app->add_option("--B", cfg.bootstrap_B, "bootstrap replicates per replication")->capture_default_str();
    app->add_option("--draws", cfg.posterior_draws, "posterior draws per replication")->capture_default_str();
    app->add_flag("--neci-as-noncoverage", cfg.neci_as_noncoverage,
                  "score missing exact intervals as misses instead of excluding them");
    app->add_option("--out", out, "write the metrics table as CSV");
  }

  int run(run_context& ctx) {
    cfg.n = design.n;
    cfg.m = design.m;
    cfg.k = design.k;
    cfg.T = design.T;
    cfg.family = design.family();
    if (cfg.family == scheme_family::custom) cfg.custom_removals = design.removals();
    if (!methods.empty()) {
      cfg.methods.clear();
      for (const auto& m : methods) cfg.methods.push_back(parse_method(m));
    }
    (void)exp_competing_model(cfg.theta1, cfg.theta2);
    ctx.config = config_to_json(cfg);
    const auto res = run_experiment(cfg);
    ctx.stage("replications");
    if (!out.empty()) {
      std::ofstream f(out);
      write_metrics_csv(f, res.rows);
      if (!f) throw error(error_kind::io_error, "cannot write '" + out + "'");
    }
    json rows = json::array();
    for (const auto& r : res.rows) rows.push_back(metrics_to_json(r));
    emit({{"config", ctx.config}, {"rows", rows}});
    std::fprintf(stderr, "%-7s %-10s %9s %9s %9s %9s %6s\n", "param", "method", "bias", "mse", "ci_len", "cover%",
                 "neci");
    for (const auto& r : res.rows)
      std::fprintf(stderr, "%-7s %-10s %9.4f %9.4f %9.4f %9.2f %6d\n", to_string(r.parameter), to_string(r.which),
                   r.bias, r.mse, r.ci_len, r.coverage, r.neci);
    return exit_ok;
  }
};

struct plot_data_cmd {
  design_options design;
  std::string kind = "density";
  double theta1 = 1.0, theta2 = 1.3;
  std::string target_name = "theta1";
  double x = 0.0;
  double from = 0.0, to = 0.0;
  int points = 200;
  bool log_grid = false;
  std::string out;

  void add(CLI::App* app) {
    design.add(app);
    app->add_option("--kind", kind,
                    "density: x,pdf,cdf of the estimator; curve: theta,P_theta(estimate <= x) over the target mean")
        ->capture_default_str();
    app->add_option("--theta1", theta1, "theta1 (for a curve over theta2 this is the fixed value)")
        ->capture_default_str();
    app->add_option("--theta2", theta2, "theta2 (for a curve over theta1 this is the fixed value)")
        ->capture_default_str();
    app->add_option("--target", target_name, "theta1 or theta2")->capture_default_str();
    app->add_option("--x", x, "observed estimate for --kind curve");
    app->add_option("--from", from, "grid start (default: lower end of the support, or 0.01 x)");
    app->add_option("--to", to, "grid end (default: upper support hint, or 100 x)");
    app->add_option("--points", points, "grid size")->capture_default_str();
    app->add_flag("--log-grid", log_grid, "space the grid evenly in log scale");
    app->add_option("--out", out, "CSV destination (default stdout)");
  }

  std::vector<double> grid(double lo, double hi) const {
    if (points < 2) throw error(error_kind::out_of_domain, "--points must be at least 2");
    if (!(hi > lo)) throw error(error_kind::out_of_domain, "--to must exceed --from");
    if (log_grid && !(lo > 0.0)) throw error(error_kind::out_of_domain, "log grid needs a positive start");
    std::vector<double> g;
    for (int i = 0; i < points; ++i) {
      const double t = static_cast<double>(i) / (points - 1);
      g.push_back(log_grid ? lo * std::pow(hi / lo, t) : lo + t * (hi - lo));
    }
    return g;
  }

  int run(run_context& ctx) {
    const auto scheme = design.build();
    const auto ts = targets_from(target_name);
    if (ts.size() != 1) throw error(error_kind::out_of_domain, "--target must be theta1 or theta2");
    const target t = ts.front();
    ctx.out = out;
    ctx.config = {{"scheme", scheme_to_json(scheme)}, {"kind", kind}, {"theta1", theta1}, {"theta2", theta2},
                  {"target", target_name}, {"points", points}, {"log_grid", log_grid}};
    std::ostringstream csv;
    if (kind == "density") {
      const auto mix = build_mixture(exp_competing_model(theta1, theta2), scheme, t);
      const double lo = from > 0.0 ? from : std::max(mix.min_shift(), 1e-9);
      const double hi = to > 0.0 ? to : mix.upper_support_hint();
      write_plot_data(csv, mix, grid(lo, hi));
      ctx.config["from"] = lo;
      ctx.config["to"] = hi;
    } else if (kind == "curve") {
      if (!(x > 0.0)) throw error(error_kind::out_of_domain, "--kind curve needs a positive --x");
      const double other = t == target::theta1 ? theta2 : theta1;
      const double lo = from > 0.0 ? from : 0.01 * x;
      const double hi = to > 0.0 ? to : 100.0 * x;
      write_curve_csv(csv, cdf_in_parameter(x, grid(lo, hi), scheme, other, t));
      ctx.config["x"] = x;
      ctx.config["from"] = lo;
      ctx.config["to"] = hi;
    } else {
      throw error(error_kind::out_of_domain, "--kind must be density or curve");
    }
    ctx.stage("evaluate");
    if (out.empty()) {
      std::cout << csv.str();
    } else {
      std::ofstream f(out);
      f << csv.str();
      if (!f) throw error(error_kind::io_error, "cannot write '" + out + "'");
      std::cerr << "wrote " << points << " rows to " << out << '\n';
    }
    return exit_ok;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Inference for two-cause exponential competing risks under generalized progressive hybrid censoring"};
  app.set_version_flag("--version", std::string("gphc ") + version);
  app.require_subcommand(1);
  run_context ctx;
  for (int i = 0; i < argc; ++i) ctx.argv.emplace_back(argv[i]);
  std::string manifest;
  app.add_option("--manifest", manifest, "manifest path (default <out>.manifest.json or <command>.manifest.json)");

  simulate_cmd simulate;
  fit_cmd fit;
  exact_ci_cmd exact;
  boot_ci_cmd boot;
  bayes_cmd bayes;
  experiment_cmd experiment;
  plot_data_cmd plot;
  std::vector<std::pair<CLI::App*, std::function<int(run_context&)>>> commands;
  auto reg = [&](const char* name, const char* help, auto& cmd) {
    CLI::App* sub = app.add_subcommand(name, help);
    cmd.add(sub);
    commands.emplace_back(sub, [&cmd](run_context& c) { return cmd.run(c); });
  };
  reg("simulate", "draw one censored sample", simulate);
  reg("fit", "maximum likelihood estimates", fit);
  reg("exact-ci", "exact confidence intervals from the exact distribution of the estimator", exact);
  reg("boot-ci", "parametric percentile bootstrap intervals", boot);
  reg("bayes", "Beta-Gamma posterior, Bayes estimates, credible set and HPD intervals", bayes);
  reg("experiment", "Monte Carlo study of bias, MSE and interval coverage", experiment);
  reg("plot-data", "density or parameter-curve data for plotting", plot);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_validation;
  }

  int code = exit_ok;
  for (auto& [sub, run] : commands) {
    if (!sub->parsed()) continue;
    ctx.command = sub->get_name();
    ctx.manifest = manifest;
    if (ctx.command == "simulate") ctx.out = simulate.out;
    if (ctx.command == "experiment") ctx.out = experiment.out;
    try {
      code = run(ctx);
    } catch (const gphc::error& e) {
      std::cerr << "error: " << e.what() << '\n';
      code = e.is_validation() ? exit_validation : exit_numerical;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      code = exit_numerical;
    }
    write_manifest(ctx, code);
  }
  return code;
}
