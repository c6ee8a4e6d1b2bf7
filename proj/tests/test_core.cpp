#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "support.hpp"

using namespace gphc;

namespace {

censoring_scheme make_scheme(int n, int m, int k, double T, std::vector<int> R) {
  censoring_scheme s;
  s.n = n;
  s.m = m;
  s.k = k;
  s.T = T;
  s.removals = std::move(R);
  return s;
}

error_kind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return error_kind::numerical_failure;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("gphc_test_" + name)).string();
}

}  // namespace

TEST(Scheme, AcceptsSchemeOne) {
  auto s = make_scheme(20, 14, 3, 1.2, expand_scheme(scheme_family::I, 20, 14));
  EXPECT_NO_THROW(validate_scheme(s));
  EXPECT_EQ(s.removals[0], 6);
}

TEST(Scheme, RejectsViolations) {
  EXPECT_EQ(kind_of([] { validate_scheme(make_scheme(10, 5, 5, 1.0, {1, 1, 1, 1, 1})); }), error_kind::scheme_invalid);
  EXPECT_EQ(kind_of([] { validate_scheme(make_scheme(10, 4, 2, 1.0, {1, 1, 1, 1})); }), error_kind::scheme_invalid);
  EXPECT_EQ(kind_of([] { validate_scheme(make_scheme(4, 2, 1, 0.0, {1, 1})); }), error_kind::scheme_invalid);
  EXPECT_EQ(kind_of([] { validate_scheme(make_scheme(4, 2, 1, 1.0, {3, -1})); }), error_kind::scheme_invalid);
  EXPECT_EQ(kind_of([] { validate_scheme(make_scheme(4, 2, 1, 1.0, {2})); }), error_kind::scheme_invalid);
  EXPECT_EQ(kind_of([] { validate_scheme(make_scheme(3, 4, 1, 1.0, {0, 0, 0, 0})); }), error_kind::scheme_invalid);
}

TEST(Scheme, GammaSequence) {
  auto one = gamma_seq(make_scheme(20, 14, 3, 1.2, expand_scheme(scheme_family::I, 20, 14)));
  std::vector<int> want{20};
  for (int v = 13; v >= 0; --v) want.push_back(v);
  EXPECT_EQ(one, want);

  auto three = gamma_seq(make_scheme(20, 14, 3, 1.2, expand_scheme(scheme_family::III, 20, 14)));
  want.clear();
  for (int v = 20; v >= 7; --v) want.push_back(v);
  want.push_back(0);
  EXPECT_EQ(three, want);

  auto complete = gamma_seq(make_scheme(6, 6, 2, 1.0, {0, 0, 0, 0, 0, 0}));
  for (int v = 1; v <= 6; ++v) EXPECT_EQ(complete[v - 1], 6 - v + 1);
  EXPECT_EQ(complete.back(), 0);
}

TEST(Scheme, GammaStepsAreOnePlusRemovals) {
  rng_stream rng(11);
  for (int t = 0; t < 200; ++t) {
    auto s = oracle::random_scheme(rng, 40);
    auto g = gamma_seq(s);
    EXPECT_EQ(g.front(), s.n);
    EXPECT_EQ(g.back(), 0);
    for (int v = 0; v < s.m; ++v) EXPECT_EQ(g[v] - g[v + 1], 1 + s.removals[v]);
  }
}

TEST(Scheme, ExpandFamilies) {
  EXPECT_EQ(expand_scheme(scheme_family::III, 20, 14)[13], 6);
  auto two = expand_scheme(scheme_family::II, 20, 14);
  EXPECT_EQ(two[6], 6);
  EXPECT_EQ(std::accumulate(two.begin(), two.end(), 0), 6);
  EXPECT_EQ(expand_scheme(scheme_family::II, 20, 15)[7], 5);
  for (int r : expand_scheme(scheme_family::I, 7, 7)) EXPECT_EQ(r, 0);
}

TEST(Classify, HoelDataset) {
  auto s = hoel_sample();
  EXPECT_EQ(s.terminal, terminal_case::C);
  EXPECT_EQ(s.J, 25);
  EXPECT_EQ(s.D1, 7);
  EXPECT_EQ(s.D2, 18);
  EXPECT_EQ(s.W, 28962.0);
  EXPECT_EQ(s.r_star, 0);
}

TEST(Classify, CaseCHandArithmetic) {
  std::vector<double> z{1.0, 2.0};
  std::vector<cause> c{cause::one, cause::two};
  auto s = classify_and_summarize(z, c, make_scheme(4, 2, 1, 10.0, {1, 1}));
  EXPECT_EQ(s.terminal, terminal_case::C);
  EXPECT_DOUBLE_EQ(s.W, 6.0);
  EXPECT_DOUBLE_EQ(s.t_star, 2.0);
}

TEST(Classify, CaseBHandArithmetic) {
  // both failures after T with k = 2: W = z1 (1 + R1) + z2 (1 + R*_2), R*_2 = gamma_2 - 1 = 1
  std::vector<double> z{1.0, 2.0};
  std::vector<cause> c{cause::one, cause::one};
  auto s = classify_and_summarize(z, c, make_scheme(4, 3, 2, 0.5, {1, 0, 0}));
  EXPECT_EQ(s.terminal, terminal_case::B);
  EXPECT_EQ(s.J, 2);
  EXPECT_EQ(s.r_star, 1);
  EXPECT_DOUBLE_EQ(s.W, 6.0);
  EXPECT_EQ(s.observations.back().removed, 1);

  auto b1 = classify_and_summarize(std::vector<double>{1.0, 2.0}, c, make_scheme(4, 2, 1, 0.5, {1, 1}));
  EXPECT_EQ(b1.terminal, terminal_case::B);
  EXPECT_EQ(b1.J, 1);
  EXPECT_EQ(b1.r_star, 3);
  EXPECT_DOUBLE_EQ(b1.W, 4.0);
}

TEST(Classify, CaseATruncatesAtT) {
  std::vector<double> z{0.1, 0.2, 0.5, 0.9};
  std::vector<cause> c{cause::one, cause::two, cause::two, cause::one};
  auto s = classify_and_summarize(z, c, make_scheme(6, 4, 1, 0.3, {1, 0, 0, 1}));
  EXPECT_EQ(s.terminal, terminal_case::A);
  EXPECT_EQ(s.J, 2);
  EXPECT_EQ(s.D1, 1);
  EXPECT_EQ(s.D2, 1);
  EXPECT_EQ(s.r_star, 3);  // gamma_3 = 6 - 2 - 1
  EXPECT_DOUBLE_EQ(s.W, 0.1 * 2 + 0.2 * 1 + 0.3 * 3);
}

TEST(Classify, Errors) {
  auto sch = make_scheme(4, 2, 1, 10.0, {1, 1});
  std::vector<cause> c2{cause::one, cause::two};
  EXPECT_EQ(kind_of([&] { classify_and_summarize(std::vector<double>{2.0, 1.0}, c2, sch); }),
            error_kind::unsorted_times);
  EXPECT_EQ(kind_of([&] { classify_and_summarize(std::vector<double>{-1.0, 1.0}, c2, sch); }),
            error_kind::unsorted_times);
  EXPECT_EQ(kind_of([&] { classify_and_summarize(std::vector<double>{1.0}, c2, sch); }), error_kind::length_mismatch);
  // only 1 failure before T with k = 2 and no k-th failure recorded
  EXPECT_EQ(kind_of([&] {
              classify_and_summarize(std::vector<double>{0.1}, std::vector<cause>{cause::one},
                                     make_scheme(5, 3, 2, 1.0, {1, 1, 0}));
            }),
            error_kind::length_mismatch);
}

TEST(Classify, TiesAreFlagged) {
  auto s = classify_and_summarize(std::vector<double>{1.0, 1.0}, std::vector<cause>{cause::one, cause::two},
                                  make_scheme(4, 2, 1, 10.0, {1, 1}));
  EXPECT_TRUE(s.has_ties);
  EXPECT_EQ(s.observations[0].failure_cause, cause::one);
}

TEST(Generate, DeterministicGivenSeed) {
  auto sch = oracle::late_removal_scheme();
  exp_competing_model model(1.0, 1.3);
  rng_stream a(99), b(99);
  for (int i = 0; i < 50; ++i) EXPECT_EQ(generate_sample(model, sch, a), generate_sample(model, sch, b));
}

TEST(Generate, DegenerateCause) {
  exp_competing_model model(1.0, std::numeric_limits<double>::infinity());
  rng_stream rng(5);
  for (int i = 0; i < 100; ++i) {
    auto s = generate_sample(model, oracle::late_removal_scheme(), rng);
    EXPECT_EQ(s.D2, 0);
    EXPECT_EQ(s.D1, s.J);
  }
}

TEST(Generate, StructuralInvariants) {
  rng_stream rng(2024);
  for (int t = 0; t < 300; ++t) {
    auto sch = oracle::random_scheme(rng, 30);
    exp_competing_model model(0.5 + 2.0 * rng.uniform(), 0.5 + 2.0 * rng.uniform());
    auto s = generate_sample(model, sch, rng);
    EXPECT_EQ(s.J, s.D1 + s.D2);
    EXPECT_EQ(s.J, static_cast<int>(s.observations.size()));
    switch (s.terminal) {
      case terminal_case::A:
        EXPECT_GE(s.J, sch.k);
        EXPECT_LT(s.J, sch.m);
        break;
      case terminal_case::B: EXPECT_EQ(s.J, sch.k); break;
      case terminal_case::C: EXPECT_EQ(s.J, sch.m); break;
    }
    for (std::size_t i = 0; i < s.observations.size(); ++i) {
      EXPECT_LE(s.observations[i].z, s.t_star);
      if (i) {
        EXPECT_GT(s.observations[i].z, s.observations[i - 1].z);
      }
    }
    auto again = classify_and_summarize(failure_times(s), failure_causes(s), sch);
    EXPECT_EQ(again.W, s.W);
  }
}

TEST(Generate, FirstFailureMean) {
  // Z_1 ~ Exp(n / theta)
  exp_competing_model model(1.0, 1.3);
  rng_stream rng(77);
  const int N = 100000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < N; ++i) {
    double z = generate_sample(model, oracle::late_removal_scheme(), rng).observations.front().z;
    sum += z;
    sq += z * z;
  }
  const double mean = sum / N, sd = std::sqrt(sq / N - mean * mean);
  EXPECT_NEAR(mean, model.theta() / 20.0, 3.0 * sd / std::sqrt(double(N)));
}

TEST(Generate, CauseFrequency) {
  exp_competing_model model(1.0, 1.3);
  rng_stream rng(78);
  long ones = 0, total = 0;
  for (int i = 0; i < 20000; ++i) {
    auto s = generate_sample(model, oracle::late_removal_scheme(), rng);
    ones += s.D1;
    total += s.J;
  }
  const double p = 1.3 / 2.3;
  EXPECT_NEAR(double(ones) / total, p, 3.0 * std::sqrt(p * (1 - p) / total));
}

TEST(Generate, CaseFrequenciesMatchCaseProbabilities) {
  exp_competing_model model(1.0, 1.3);
  auto sch = oracle::late_removal_scheme();
  sch.T = 0.6;  // every case has visible mass
  auto cp = case_probabilities(model, sch);
  rng_stream rng(79);
  const int N = 100000;
  int a = 0, b = 0, c = 0;
  for (int i = 0; i < N; ++i) {
    switch (generate_sample(model, sch, rng).terminal) {
      case terminal_case::A: ++a; break;
      case terminal_case::B: ++b; break;
      case terminal_case::C: ++c; break;
    }
  }
  for (auto [count, p] : {std::pair{a, cp.p_a()}, std::pair{b, cp.p_b}, std::pair{c, cp.p_c}})
    EXPECT_NEAR(double(count) / N, p, 3.0 * std::sqrt(p * (1 - p) / N) + 1e-12);
}

TEST(SampleIo, CsvRoundTrip) {
  auto s = hoel_sample();
  auto path = temp_path("hoel.csv");
  save_sample(s, path, sample_format::csv);
  auto back = load_sample(path, sample_format::csv, &s.scheme);
  EXPECT_EQ(back, s);
  std::filesystem::remove(path);
}

TEST(SampleIo, JsonRoundTripBitExact) {
  exp_competing_model model(1.0, 1.3);
  rng_stream rng(3);
  auto s = generate_sample(model, oracle::late_removal_scheme(), rng);
  auto path = temp_path("gen.json");
  save_sample(s, path, sample_format::json);
  auto back = load_sample(path, sample_format::json);
  EXPECT_EQ(back, s);
  std::filesystem::remove(path);
}

TEST(SampleIo, CsvWithSidecar) {
  auto s = hoel_sample();
  auto path = temp_path("side.csv");
  save_sample(s, path, sample_format::csv);
  {
    std::ofstream sc(path + ".scheme.json");
    sc << scheme_to_json(s.scheme).dump();
  }
  auto back = load_sample(path, sample_format::csv);
  EXPECT_EQ(back.J, 25);
  EXPECT_EQ(back.W, 28962.0);
  std::filesystem::remove(path);
  std::filesystem::remove(path + ".scheme.json");
}

TEST(SampleIo, ParseErrors) {
  auto sch = hoel_scheme();
  std::istringstream bad_cause("z,cause,removed\n40,2,2\n42,3,2\n");
  try {
    sample_from_csv(bad_cause, sch);
    FAIL();
  } catch (const parse_error& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  std::istringstream bad_header("time,cause\n");
  EXPECT_THROW(sample_from_csv(bad_header, sch), parse_error);
  std::ostringstream csv;
  sample_to_csv(csv, hoel_sample());
  std::string text = csv.str();
  text.replace(text.find("62,2,2"), 6, "62,2,5");
  std::istringstream bad_removed(text);
  try {
    sample_from_csv(bad_removed, sch);
    FAIL();
  } catch (const parse_error& e) {
    EXPECT_EQ(e.line(), 4u);
  }
  std::istringstream bad_number("z,cause,removed\nforty,2,2\n");
  EXPECT_THROW(sample_from_csv(bad_number, sch), parse_error);
}

TEST(SampleIo, MissingFile) {
  EXPECT_EQ(kind_of([] { load_sample("/nonexistent/x.json", sample_format::json); }), error_kind::io_error);
  EXPECT_EQ(kind_of([] { save_sample(hoel_sample(), "/nonexistent/dir/x.csv", sample_format::csv); }),
            error_kind::io_error);
}
