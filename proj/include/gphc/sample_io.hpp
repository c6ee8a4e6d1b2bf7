#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gphc/errors.hpp"
#include "gphc/sample.hpp"

namespace gphc {

enum class sample_format { csv, json };

inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline nlohmann::json scheme_to_json(const censoring_scheme& s) {
  return {{"n", s.n}, {"m", s.m}, {"k", s.k}, {"T", s.T}, {"R", s.removals}};
}

inline censoring_scheme scheme_from_json(const nlohmann::json& j) {
  try {
    censoring_scheme s;
    s.n = j.at("n").get<int>();
    s.m = j.at("m").get<int>();
    s.k = j.at("k").get<int>();
    s.T = j.at("T").get<double>();
    s.removals = j.at("R").get<std::vector<int>>();
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw error(error_kind::parse_error, std::string("scheme: ") + e.what());
  }
}

namespace detail {

inline cause parse_cause(const std::string& field, std::size_t line) {
  if (field == "1") return cause::one;
  if (field == "2") return cause::two;
  throw parse_error(line, "cause must be 1 or 2, got '" + field + "'");
}

inline double parse_number(const std::string& field, std::size_t line, const char* what) {
  try {
    std::size_t used = 0;
    double v = std::stod(field, &used);
    if (used != field.size()) throw std::invalid_argument(field);
    return v;
  } catch (const std::exception&) {
    throw parse_error(line, std::string("bad ") + what + " '" + field + "'");
  }
}

inline std::string trim(std::string s) {
  const char* ws = " \t\r\n";
  s.erase(0, s.find_first_not_of(ws));
  s.erase(s.find_last_not_of(ws) + 1);
  return s;
}

/// Rebuilds the sample and checks the recorded removals against the design.
/// `first_line` is the line number of the first observation (for messages).
inline gphc_sample rebuild(const censoring_scheme& scheme, const std::vector<observation>& obs,
                           std::size_t first_line) {
  std::vector<double> z;
  std::vector<cause> c;
  for (const auto& o : obs) {
    z.push_back(o.z);
    c.push_back(o.failure_cause);
  }
  gphc_sample s = classify_and_summarize(z, c, scheme);
  for (std::size_t i = 0; i < s.observations.size(); ++i) {
    if (obs[i].removed != s.observations[i].removed)
      throw parse_error(first_line + i, "removed=" + std::to_string(obs[i].removed) + " but the design withdraws " +
                                            std::to_string(s.observations[i].removed) + " units at this failure");
  }
  return s;
}

}  // namespace detail

/// Parses the `z,cause,removed` table. The scheme is not part of the CSV.
inline gphc_sample sample_from_csv(std::istream& in, const censoring_scheme& scheme) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw parse_error(1, "empty input");
  ++line_no;
  if (detail::trim(line) != "z,cause,removed") throw parse_error(1, "expected header 'z,cause,removed'");
  std::vector<observation> obs;
  while (std::getline(in, line)) {
    ++line_no;
    line = detail::trim(line);
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(detail::trim(f));
    if (fields.size() != 3) throw parse_error(line_no, "expected 3 fields");
    observation o;
    o.z = detail::parse_number(fields[0], line_no, "time");
    o.failure_cause = detail::parse_cause(fields[1], line_no);
    double r = detail::parse_number(fields[2], line_no, "removal count");
    if (r < 0 || r != std::floor(r)) throw parse_error(line_no, "removal count must be a non-negative integer");
    o.removed = static_cast<int>(r);
    obs.push_back(o);
  }
  return detail::rebuild(scheme, obs, 2);
}

inline void sample_to_csv(std::ostream& out, const gphc_sample& s) {
  out << "z,cause,removed\n";
  for (const auto& o : s.observations)
    out << format_double(o.z) << ',' << static_cast<int>(o.failure_cause) << ',' << o.removed << '\n';
}

inline nlohmann::json sample_to_json(const gphc_sample& s) {
  nlohmann::json obs = nlohmann::json::array();
  for (const auto& o : s.observations)
    obs.push_back({{"z", o.z}, {"cause", static_cast<int>(o.failure_cause)}, {"removed", o.removed}});
  return {{"scheme", scheme_to_json(s.scheme)},
          {"observations", obs},
          {"terminal_case", to_string(s.terminal)},
          {"t_star", s.t_star},
          {"J", s.J},
          {"D1", s.D1},
          {"D2", s.D2},
          {"W", s.W},
          {"r_star", s.r_star},
          {"has_ties", s.has_ties}};
}

/// Derived fields in the document are ignored and recomputed.
inline gphc_sample sample_from_json(const nlohmann::json& j) {
  censoring_scheme scheme = scheme_from_json(j.at("scheme"));
  std::vector<observation> obs;
  try {
    for (const auto& o : j.at("observations")) {
      observation x;
      x.z = o.at("z").get<double>();
      int c = o.at("cause").get<int>();
      if (c != 1 && c != 2) throw parse_error(obs.size() + 1, "cause must be 1 or 2");
      x.failure_cause = static_cast<cause>(c);
      x.removed = o.at("removed").get<int>();
      obs.push_back(x);
    }
  } catch (const nlohmann::json::exception& e) {
    throw error(error_kind::parse_error, std::string("observations: ") + e.what());
  }
  return detail::rebuild(scheme, obs, 1);
}

inline void save_sample(const gphc_sample& s, const std::string& path, sample_format fmt) {
  std::ofstream out(path);
  if (!out) throw error(error_kind::io_error, "cannot open '" + path + "' for writing");
  if (fmt == sample_format::csv) {
    sample_to_csv(out, s);
  } else {
    out << sample_to_json(s).dump(2) << '\n';
  }
  if (!out) throw error(error_kind::io_error, "write to '" + path + "' failed");
}

/// Loads a sample. CSV input needs the scheme, either passed in or read from
/// the JSON sidecar `<path>.scheme.json`.
inline gphc_sample load_sample(const std::string& path, sample_format fmt,
                               const censoring_scheme* scheme = nullptr) {
  std::ifstream in(path);
  if (!in) throw error(error_kind::io_error, "cannot open '" + path + "'");
  if (fmt == sample_format::json) {
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw error(error_kind::parse_error, e.what());
    }
    return sample_from_json(j);
  }
  if (scheme) return sample_from_csv(in, *scheme);
  const std::string sidecar = path + ".scheme.json";
  std::ifstream sc(sidecar);
  if (!sc) throw error(error_kind::io_error, "CSV sample needs a scheme; sidecar '" + sidecar + "' not found");
  nlohmann::json j;
  try {
    sc >> j;
  } catch (const nlohmann::json::exception& e) {
    throw error(error_kind::parse_error, sidecar + ": " + e.what());
  }
  return sample_from_csv(in, scheme_from_json(j));
}

}  // namespace gphc
