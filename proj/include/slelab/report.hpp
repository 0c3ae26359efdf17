#pragma once

// Machine-readable experiment reports.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace slelab::expmt {

struct ExperimentReport {
  std::string name;
  double estimate = 0.0;
  double stderr_mean = 0.0;
  double reference = 0.0;
  std::string provenance;  // where the reference value comes from
  double tolerance = 0.0;
  bool pass = false;
  bool tainted = false;    // excluded_runs/n_samples above 1%
  std::size_t n_samples = 0;
  std::size_t excluded_runs = 0;
  std::uint64_t seed = 0;
  double wall_time_ms = 0.0;
  double p_value = -1.0;   // two-sample tests only
};

std::string to_json(const ExperimentReport& r);
std::string to_json(const std::vector<ExperimentReport>& rs);
void write_csv_samples(std::ostream& os, const std::vector<double>& samples);

// Verdict helper: |estimate - reference| <= tolerance, or p >= threshold when
// a p-value is present; sets pass and the taint flag.
void finalize(ExperimentReport& r, double p_threshold = 0.01);

}  // namespace slelab::expmt
