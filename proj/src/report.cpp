#include "slelab/report.hpp"

#include <cmath>
#include <ostream>

#include <nlohmann/json.hpp>

namespace slelab::expmt {

namespace {

nlohmann::ordered_json to_json_obj(const ExperimentReport& r) {
  nlohmann::ordered_json j;
  j["name"] = r.name;
  j["estimate"] = r.estimate;
  j["stderr"] = r.stderr_mean;
  j["reference"] = r.reference;
  j["provenance"] = r.provenance;
  j["tolerance"] = r.tolerance;
  j["verdict"] = r.pass ? "pass" : "fail";
  j["tainted"] = r.tainted;
  j["n_samples"] = r.n_samples;
  j["excluded_runs"] = r.excluded_runs;
  j["seed"] = r.seed;
  j["wall_time_ms"] = r.wall_time_ms;
  if (r.p_value >= 0.0) j["p_value"] = r.p_value;
  return j;
}

}  // namespace

std::string to_json(const ExperimentReport& r) { return to_json_obj(r).dump(2); }

std::string to_json(const std::vector<ExperimentReport>& rs) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : rs) arr.push_back(to_json_obj(r));
  return arr.dump(2);
}

void write_csv_samples(std::ostream& os, const std::vector<double>& samples) {
  os << "sample\n";
  os.precision(17);
  for (double s : samples) os << s << "\n";
}

void finalize(ExperimentReport& r, double p_threshold) {
  if (r.n_samples > 0 &&
      static_cast<double>(r.excluded_runs) > 0.01 * static_cast<double>(r.n_samples)) {
    r.tainted = true;
  }
  if (r.p_value >= 0.0) {
    r.pass = r.p_value >= p_threshold;
  } else {
    r.pass = std::abs(r.estimate - r.reference) <= r.tolerance;
  }
  if (r.tainted) r.pass = false;
}

}  // namespace slelab::expmt
