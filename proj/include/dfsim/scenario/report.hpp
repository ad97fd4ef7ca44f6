// Copyright 2026 The dfsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "dfsim/dynamics.hpp"
#include "dfsim/errors.hpp"

namespace dfsim::scenario {

enum class Comparison {
  kWithin,   // |measured - expected| <= tolerance
  kAtLeast,  // measured >= expected - tolerance
  kAtMost,   // measured <= expected + tolerance
  kAbove,    // measured > expected
};

struct ClaimVerdict {
  std::string name;
  Comparison comparison = Comparison::kWithin;
  double measured = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

inline ClaimVerdict make_verdict(std::string name, Comparison cmp, double measured, double expected, double tolerance) {
  bool ok = false;
  switch (cmp) {
    case Comparison::kWithin:
      ok = std::abs(measured - expected) <= tolerance;
      break;
    case Comparison::kAtLeast:
      ok = measured >= expected - tolerance;
      break;
    case Comparison::kAtMost:
      ok = measured <= expected + tolerance;
      break;
    case Comparison::kAbove:
      ok = measured > expected;
      break;
  }
  if (!std::isfinite(measured)) ok = false;
  return {std::move(name), cmp, measured, expected, tolerance, ok};
}

inline const char* symbol(Comparison c) {
  switch (c) {
    case Comparison::kWithin:
      return "~=";
    case Comparison::kAtLeast:
      return ">=";
    case Comparison::kAtMost:
      return "<=";
    case Comparison::kAbove:
      return ">";
  }
  return "?";
}

struct RunReport {
  std::string scenario;
  double wall_time_s = 0.0;
  std::vector<std::pair<std::string, std::string>> echoed;  // parameters and tolerances
  std::vector<ClaimVerdict> verdicts;
  std::vector<std::string> csv_paths;
  std::vector<std::string> notes;

  bool all_passed() const {
    for (const auto& v : verdicts) {
      if (!v.passed) return false;
    }
    return true;
  }
};

/// Round-trip decimal form (17 significant digits).
inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string render(const RunReport& r) {
  std::ostringstream os;
  os << "scenario: " << r.scenario << "\n";
  for (const auto& [k, v] : r.echoed) os << k << ": " << v << "\n";
  for (const auto& n : r.notes) os << "note: " << n << "\n";
  for (const auto& v : r.verdicts) {
    os << (v.passed ? "[PASS] " : "[FAIL] ") << v.name << ": measured=" << format_double(v.measured) << " "
       << symbol(v.comparison) << " expected=" << format_double(v.expected)
       << " tolerance=" << format_double(v.tolerance) << "\n";
  }
  for (const auto& p : r.csv_paths) os << "csv: " << p << "\n";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", r.wall_time_s);
  os << "wall_time_s: " << buf << "\n";
  os << "result: " << (r.all_passed() ? "PASS" : "FAIL") << "\n";
  return os.str();
}

/// Plain CSV with a fixed header; values are written with format_double.
inline void write_csv(const std::filesystem::path& path, const std::string& header,
                      const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << header << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_double(row[i]);
    out << "\n";
  }
  if (!out) throw IoError("write failed for " + path.string());
}

inline void write_trace_csv(const EvolutionTrace& trace, const std::filesystem::path& path) {
  std::vector<std::vector<double>> rows;
  rows.reserve(trace.size());
  for (std::size_t i = 0; i < trace.size(); ++i) {
    rows.push_back({trace.times[i], trace.fidelities[i], trace.coherences[i], trace.purities[i], trace.leakages[i]});
  }
  write_csv(path, "time,fidelity,coherence,purity,leakage", rows);
}

}  // namespace dfsim::scenario
