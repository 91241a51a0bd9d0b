#ifndef HALFLINE_IO_HPP
#define HALFLINE_IO_HPP

#include <set>
#include <string>

#include <json.hpp>

#include "halfline/connections.hpp"
#include "halfline/orbit.hpp"
#include "halfline/selfsim.hpp"

namespace halfline {

using json = nlohmann::json;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Reject unknown keys (schema is closed).
void require_keys(const json& obj, const std::set<std::string>& allowed,
                  const std::string& context);

json flux_to_json(const FluxModel& f);
FluxModel flux_from_json(const json& j);

json field_to_json(const Field& f);
json orbit_to_json(const OrbitRecord& rec);
json connection_to_json(const ConnectionRecord& rec);
json spectrum_to_json(const SpectrumReport& rep);

std::string format_double(double v);

void write_text(const std::string& path, const std::string& content);
void write_field_csv(const std::string& path, const Field& f);
void write_trace_csv(const std::string& path, const Trajectory& traj);
void write_trajectory_csv(const std::string& path, const Trajectory& traj);
void write_branch_csv(const std::string& path, const std::vector<BranchPoint>& branch);
void write_scan_csv(const std::string& path, const std::vector<ScanRow>& rows);
void write_snic_csv(const std::string& path, const std::vector<SnicRow>& rows);
void write_profile_csv(const std::string& path, const Vec& xi, const Vec& V);

/// Per-run manifest: config echo, metadata, and the hard/soft invariant
/// table. Any failed hard invariant makes the run exit nonzero.
struct InvariantStatus {
  std::string name;
  bool pass = false;
  bool hard = true;
  double value = 0.0;
  double threshold = 0.0;
};

struct RunManifest {
  json config_echo;
  std::string version;
  json meta;
  double wall_time_s = 0.0;
  std::vector<InvariantStatus> invariants;

  void add(const std::string& name, bool pass, double value, double threshold, bool hard = true);
  bool all_hard_pass() const;
  json to_json() const;
};

}  // namespace halfline

#endif
