#include "halfline/io.hpp"

#include <cstdio>
#include <fstream>

namespace halfline {

void require_keys(const json& obj, const std::set<std::string>& allowed,
                  const std::string& context) {
  if (!obj.is_object()) throw ConfigError(context + ": expected an object");
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key()))
      throw ConfigError(context + ": unknown key '" + it.key() + "'");
}

json flux_to_json(const FluxModel& f) {
  switch (f.kind()) {
    case FluxModel::Kind::cosine:
      return json{{"kind", "cosine"}, {"theta", f.theta()}};
    case FluxModel::Kind::table:
      return json{{"kind", "table"}, {"samples", f.samples()}};
    case FluxModel::Kind::affine_shift:
      return json{{"kind", "affine-shift"}, {"base", flux_to_json(f.base())},
                  {"offset", f.offset()}};
  }
  return {};
}

FluxModel flux_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind")) throw ConfigError("flux: missing 'kind'");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "cosine") {
    require_keys(j, {"kind", "theta"}, "flux(cosine)");
    return FluxModel::cosine(j.at("theta").get<double>());
  }
  if (kind == "table") {
    require_keys(j, {"kind", "samples"}, "flux(table)");
    return FluxModel::table(j.at("samples").get<Vec>());
  }
  if (kind == "affine-shift") {
    require_keys(j, {"kind", "base", "offset"}, "flux(affine-shift)");
    return FluxModel::affine_shift(flux_from_json(j.at("base")), j.at("offset").get<double>());
  }
  throw ConfigError("flux: unknown kind '" + kind + "'");
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

json field_to_json(const Field& f) {
  return json{{"x", f.grid->nodes},
              {"u", f.values},
              {"farfield", {{"strain", f.farfield.strain}, {"intercept", f.farfield.intercept}}}};
}

json orbit_to_json(const OrbitRecord& rec) {
  json mult = json::array();
  for (const auto& m : rec.floquet) mult.push_back({{"re", m.real()}, {"im", m.imag()}});
  return json{{"c", rec.c},
              {"flux", flux_to_json(rec.flux)},
              {"T", rec.T},
              {"omega", rec.omega},
              {"strain", rec.strain},
              {"y_phase", rec.y_phase},
              {"k_far", rec.k_far},
              {"residual", rec.residual},
              {"min_slope", rec.min_slope},
              {"max_slope", rec.max_slope},
              {"max_dtu0", rec.max_dtu0},
              {"floquet", mult},
              {"ok", rec.ok},
              {"message", rec.message},
              {"profile0", field_to_json(rec.profile0)}};
}

json connection_to_json(const ConnectionRecord& rec) {
  return json{{"pair",
               {{"y1", rec.pair.y1},
                {"y2", rec.pair.y2},
                {"sign_between", rec.pair.sign_between},
                {"gprime_y1", rec.pair.gprime_y1},
                {"gprime_y2", rec.pair.gprime_y2},
                {"degenerate", rec.pair.degenerate}}},
              {"c", rec.c},
              {"t_half", rec.t_half},
              {"increasing", rec.increasing},
              {"confinement_lo", rec.confinement_lo},
              {"confinement_hi", rec.confinement_hi},
              {"monotone_in_time", rec.monotone_in_time},
              {"rates",
               {{"backward_fit", rec.rates.backward_fit},
                {"backward_theory", rec.rates.backward_theory}}},
              {"ok", rec.ok},
              {"message", rec.message}};
}

json spectrum_to_json(const SpectrumReport& rep) {
  json ladder = json::array();
  for (std::size_t i = 0; i < rep.grid_ladder.size(); ++i)
    ladder.push_back({{"n", rep.grid_ladder[i]}, {"eigs", rep.eigenvalues[i]}});
  return json{{"operator", rep.op == SpectrumReport::Operator::L0_similarity ? "L0-similarity"
                                                                             : "A0-constant"},
              {"ladder", ladder},
              {"extrapolated", rep.extrapolated},
              {"weight", rep.weight},
              {"ladder_cauchy", rep.ladder_cauchy}};
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

void write_field_csv(const std::string& path, const Field& f) {
  std::string s = "x,u\n";
  for (std::size_t i = 0; i < f.n(); ++i)
    s += format_double(f.grid->nodes[i]) + "," + format_double(f.values[i]) + "\n";
  write_text(path, s);
}

void write_trace_csv(const std::string& path, const Trajectory& traj) {
  std::string s = "t,u0,ux0\n";
  for (const TracePoint& tp : traj.trace)
    s += format_double(tp.t) + "," + format_double(tp.u0) + "," + format_double(tp.ux0) + "\n";
  write_text(path, s);
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
  std::string s = "t,x,u\n";
  for (const Snapshot& snap : traj.snapshots)
    for (std::size_t i = 0; i < snap.values.size(); ++i)
      s += format_double(snap.t) + "," + format_double(traj.grid->nodes[i]) + "," +
           format_double(snap.values[i]) + "\n";
  write_text(path, s);
}

void write_branch_csv(const std::string& path, const std::vector<BranchPoint>& branch) {
  std::string s = "theta,c,T,omega,strain,res,mult1_re,mult1_im,mult2_abs\n";
  for (const BranchPoint& bp : branch) {
    const auto& fl = bp.orbit.floquet;
    const double m1r = fl.size() > 0 ? fl[0].real() : 0.0;
    const double m1i = fl.size() > 0 ? fl[0].imag() : 0.0;
    const double m2a = fl.size() > 1 ? std::abs(fl[1]) : 0.0;
    s += format_double(bp.theta) + "," + format_double(bp.orbit.c) + "," +
         format_double(bp.orbit.T) + "," + format_double(bp.orbit.omega) + "," +
         format_double(bp.orbit.strain) + "," + format_double(bp.orbit.residual) + "," +
         format_double(m1r) + "," + format_double(m1i) + "," + format_double(m2a) + "\n";
  }
  write_text(path, s);
}

void write_scan_csv(const std::string& path, const std::vector<ScanRow>& rows) {
  std::string s = "c,T,omega,k,k_fit,k_fit_err,ok\n";
  for (const ScanRow& r : rows)
    s += format_double(r.c) + "," + format_double(r.T) + "," + format_double(r.omega) + "," +
         format_double(r.k) + "," + format_double(r.k_fit) + "," + format_double(r.k_fit_err) +
         "," + (r.ok ? "1" : "0") + "\n";
  write_text(path, s);
}

void write_snic_csv(const std::string& path, const std::vector<SnicRow>& rows) {
  std::string s = "theta,T\n";
  for (const SnicRow& r : rows) s += format_double(r.theta) + "," + format_double(r.T) + "\n";
  write_text(path, s);
}

void write_profile_csv(const std::string& path, const Vec& xi, const Vec& V) {
  std::string s = "xi,V\n";
  for (std::size_t i = 0; i < xi.size(); ++i)
    s += format_double(xi[i]) + "," + format_double(V[i]) + "\n";
  write_text(path, s);
}

void RunManifest::add(const std::string& name, bool pass, double value, double threshold,
                      bool hard) {
  invariants.push_back({name, pass, hard, value, threshold});
}

bool RunManifest::all_hard_pass() const {
  for (const InvariantStatus& inv : invariants)
    if (inv.hard && !inv.pass) return false;
  return true;
}

json RunManifest::to_json() const {
  json inv = json::array();
  for (const InvariantStatus& s : invariants)
    inv.push_back({{"name", s.name},
                   {"pass", s.pass},
                   {"hard", s.hard},
                   {"value", s.value},
                   {"threshold", s.threshold}});
  return json{{"config", config_echo},
              {"version", version},
              {"meta", meta},
              {"wall_time_s", wall_time_s},
              {"invariants", inv}};
}

}  // namespace halfline
