#pragma once

#include <array>
#include <string_view>
#include <utility>
#include <vector>

#include "gphc/sample.hpp"

namespace gphc {

/// Irradiated male mice (Hoel's RFM data) recast as a GPHC sample:
/// cause 1 is reticulum cell sarcoma, cause 2 pools every other cause.
/// n=77, k=20, m=25, T=700, R_1..R_24 = 2, R_25 = 4.
inline censoring_scheme hoel_scheme() {
  censoring_scheme s;
  s.n = 77;
  s.m = 25;
  s.k = 20;
  s.T = 700.0;
  s.removals.assign(25, 2);
  s.removals[24] = 4;
  return s;
}

inline constexpr std::array<std::pair<double, int>, 25> hoel_records{{
    {40, 2},  {42, 2},  {62, 2},  {163, 2}, {179, 2}, {206, 2}, {222, 2}, {228, 2}, {252, 2},
    {259, 2}, {318, 1}, {385, 2}, {407, 2}, {420, 2}, {462, 2}, {507, 2}, {517, 2}, {524, 2},
    {525, 1}, {528, 1}, {536, 1}, {605, 1}, {612, 1}, {620, 2}, {621, 1},
}};

inline gphc_sample hoel_sample() {
  std::vector<double> z;
  std::vector<cause> c;
  for (const auto& [t, k] : hoel_records) {
    z.push_back(t);
    c.push_back(k == 1 ? cause::one : cause::two);
  }
  return classify_and_summarize(z, c, hoel_scheme());
}

inline constexpr std::string_view hoel_builtin_name = "builtin:hoel-gphc";

}  // namespace gphc
