// hobmsim: batch front end for the balanced-manipulator simulation library.
//
// Subcommands: fk, torques, ringdown, doe (run | fit | limit). Configuration
// comes from an optional JSON file plus flags; angles are degrees at this
// boundary and radians inside the library. All CSV output is written with
// shortest-round-trip formatting so identical inputs give byte-identical
// files.
//
// Exit codes: 0 success, 2 configuration error, 3 dimension error,
// 4 infeasible path, 5 numerical failure.

#include "hobmsim.h"

#include "CLI11.hpp"
#include "json.hpp"

#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using json = nlohmann::json;

namespace {

constexpr double kPi = 3.14159265358979323846;

double deg2rad(double deg) { return deg * kPi / 180.0; }
double rad2deg(double rad) { return rad * 180.0 / kPi; }

std::string fmt(double v) {
  if (v == 0.0) v = 0.0;  // print negative zero as "0"
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

/// Thrown by helpers; main turns it into a message and an exit code.
struct CliError {
  int code;
  std::string message;
};

CliError config_error(const std::string& message) { return CliError{2, message}; }

int exit_for(hobmsim_status status) {
  switch (status) {
    case HOBMSIM_OK: return 0;
    case HOBMSIM_ERR_DIMENSION: return 3;
    case HOBMSIM_ERR_SINGULAR:
    case HOBMSIM_ERR_UNREACHABLE: return 4;
    case HOBMSIM_ERR_NUMERIC: return 5;
    default: return 2;
  }
}

CliError status_error(hobmsim_status status) {
  return CliError{exit_for(status), hobmsim_last_error()};
}

CliError last_error(int code) { return CliError{code, hobmsim_last_error()}; }

template <typename T, void (*Free)(T*)>
struct Handle {
  T* ptr = nullptr;
  Handle() = default;
  explicit Handle(T* p) : ptr(p) {}
  ~Handle() { Free(ptr); }
  Handle(Handle&& other) noexcept : ptr(other.ptr) { other.ptr = nullptr; }
  Handle& operator=(Handle&& other) noexcept {
    if (this != &other) {
      Free(ptr);
      ptr = other.ptr;
      other.ptr = nullptr;
    }
    return *this;
  }
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  T* get() const { return ptr; }
  explicit operator bool() const { return ptr != nullptr; }
};

using ModelHandle = Handle<hobmsim_model, hobmsim_model_free>;
using ProfileHandle = Handle<hobmsim_profile, hobmsim_profile_free>;
using SystemHandle = Handle<hobmsim_system, hobmsim_system_free>;
using SeriesHandle = Handle<hobmsim_coupled_series, hobmsim_coupled_free>;
using ReportHandle = Handle<hobmsim_path_report, hobmsim_path_report_free>;
using RingdownHandle = Handle<hobmsim_ringdown_series, hobmsim_ringdown_free>;
using DesignHandle = Handle<hobmsim_design, hobmsim_design_free>;
using SurfaceHandle = Handle<hobmsim_surface, hobmsim_surface_free>;
using StudyHandle = Handle<hobmsim_study, hobmsim_study_free>;

/// CSV sink: a file when a path is given, stdout otherwise. Summaries go to
/// the stream the table does not occupy.
struct Output {
  std::ofstream file;
  bool to_stdout = true;

  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file.open(path, std::ios::binary);
      if (!file) throw config_error("cannot open output file: " + path);
      to_stdout = false;
    }
  }
  std::ostream& table() { return to_stdout ? std::cout : file; }
  std::ostream& summary() { return to_stdout ? std::cerr : std::cout; }
};

void write_row(std::ostream& os, const std::vector<std::string>& cells) {
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i) os << ',';
    os << cells[i];
  }
  os << '\n';
}

bool parse_number(const std::string& token, double& out) {
  const char* begin = token.data();
  const char* end = begin + token.size();
  while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
  while (end > begin && (end[-1] == ' ' || end[-1] == '\t')) --end;
  if (begin == end) return false;
  const auto res = std::from_chars(begin, end, out);
  return res.ec == std::errc() && res.ptr == end;
}

bool parse_number_list(const std::string& text, std::vector<double>& out) {
  out.clear();
  std::stringstream ss(text);
  std::string token;
  while (std::getline(ss, token, ',')) {
    double value = 0.0;
    if (!parse_number(token, value)) return false;
    out.push_back(value);
  }
  return !out.empty();
}

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file: " + path);
  try {
    json j;
    in >> j;
    if (!j.is_object()) throw config_error("config root must be a JSON object");
    return j;
  } catch (const json::exception& e) {
    throw config_error(std::string("config parse failure: ") + e.what());
  }
}

std::vector<double> number_array(const json& j, const std::string& key, size_t n) {
  const json& a = j.at(key);
  if (!a.is_array() || a.size() != n)
    throw config_error(key + " must be an array of " + std::to_string(n) + " numbers");
  std::vector<double> out(n);
  for (size_t i = 0; i < n; ++i) out[i] = a[i].get<double>();
  return out;
}

/// Row-major Rz(yaw) * Ry(pitch) * Rx(roll), angles in radians.
void rpy_to_rotation(double roll, double pitch, double yaw, double* r9) {
  const double cr = std::cos(roll), sr = std::sin(roll);
  const double cp = std::cos(pitch), sp = std::sin(pitch);
  const double cy = std::cos(yaw), sy = std::sin(yaw);
  r9[0] = cy * cp;
  r9[1] = cy * sp * sr - sy * cr;
  r9[2] = cy * sp * cr + sy * sr;
  r9[3] = sy * cp;
  r9[4] = sy * sp * sr + cy * cr;
  r9[5] = sy * sp * cr - cy * sr;
  r9[6] = -sp;
  r9[7] = cp * sr;
  r9[8] = cp * cr;
}

/// Model from a config section: {"preset": name} or an inline definition with
/// dh rows [theta_offset_deg, a_m, d_m, alpha_deg], joint_types, masses_kg,
/// coms_m (dof x 3), inertias_kgm2 (dof x 9) and optional gravity_mps2.
ModelHandle model_from_json(const json& spec, const std::string& fallback_preset) {
  if (spec.is_null()) {
    ModelHandle model(hobmsim_model_preset(fallback_preset.c_str()));
    if (!model) throw last_error(2);
    return model;
  }
  if (!spec.is_object()) throw config_error("model section must be an object");
  if (spec.contains("preset")) {
    const std::string name = spec.at("preset").get<std::string>();
    ModelHandle model(hobmsim_model_preset(name.c_str()));
    if (!model) throw last_error(2);
    return model;
  }

  const json& dh = spec.at("dh");
  if (!dh.is_array() || dh.empty()) throw config_error("dh must be a non-empty array of rows");
  const int dof = static_cast<int>(dh.size());
  std::vector<double> dh_rows(4 * dof);
  for (int i = 0; i < dof; ++i) {
    const json& row = dh[i];
    if (!row.is_array() || row.size() != 4)
      throw config_error("each dh row needs [theta_offset_deg, a_m, d_m, alpha_deg]");
    dh_rows[4 * i + 0] = deg2rad(row[0].get<double>());
    dh_rows[4 * i + 1] = row[1].get<double>();
    dh_rows[4 * i + 2] = row[2].get<double>();
    dh_rows[4 * i + 3] = deg2rad(row[3].get<double>());
  }

  const json& types = spec.at("joint_types");
  if (!types.is_array() || static_cast<int>(types.size()) != dof)
    throw config_error("joint_types must list one entry per dh row");
  std::vector<int> joint_types(dof);
  for (int i = 0; i < dof; ++i) {
    const std::string t = types[i].get<std::string>();
    if (t == "revolute")
      joint_types[i] = HOBMSIM_JOINT_REVOLUTE;
    else if (t == "prismatic")
      joint_types[i] = HOBMSIM_JOINT_PRISMATIC;
    else
      throw config_error("joint_types entries must be \"revolute\" or \"prismatic\"");
  }

  const std::vector<double> masses = number_array(spec, "masses_kg", dof);
  const json& coms = spec.at("coms_m");
  const json& inertias = spec.at("inertias_kgm2");
  if (!coms.is_array() || static_cast<int>(coms.size()) != dof)
    throw config_error("coms_m must list one [x, y, z] per link");
  if (!inertias.is_array() || static_cast<int>(inertias.size()) != dof)
    throw config_error("inertias_kgm2 must list one row-major 3x3 per link");
  std::vector<double> com_rows(3 * dof);
  std::vector<double> inertia_rows(9 * dof);
  for (int i = 0; i < dof; ++i) {
    if (!coms[i].is_array() || coms[i].size() != 3)
      throw config_error("each coms_m entry needs 3 numbers");
    if (!inertias[i].is_array() || inertias[i].size() != 9)
      throw config_error("each inertias_kgm2 entry needs 9 numbers");
    for (int c = 0; c < 3; ++c) com_rows[3 * i + c] = coms[i][c].get<double>();
    for (int c = 0; c < 9; ++c) inertia_rows[9 * i + c] = inertias[i][c].get<double>();
  }

  std::vector<double> gravity;
  if (spec.contains("gravity_mps2")) gravity = number_array(spec, "gravity_mps2", 3);

  ModelHandle model(hobmsim_model_create(dof, dh_rows.data(), joint_types.data(), masses.data(),
                                         com_rows.data(), inertia_rows.data(),
                                         gravity.empty() ? nullptr : gravity.data()));
  if (!model) throw last_error(2);
  return model;
}

std::vector<double> joints_to_rad(const hobmsim_model* model, const std::vector<double>& values) {
  std::vector<double> rad(values.size());
  for (size_t i = 0; i < values.size(); ++i) {
    const int type = hobmsim_model_joint_type(model, static_cast<int>(i));
    rad[i] = type == HOBMSIM_JOINT_REVOLUTE ? deg2rad(values[i]) : values[i];
  }
  return rad;
}

/* -------------------------------------------------------------------- fk */

struct FkOptions {
  std::string preset = "lwr-table2";
  std::string config_path;
  std::string chain = "lwr";
  std::string q_text;
  std::string csv_path;
};

int cmd_fk(const FkOptions& opt) {
  const json config = load_config(opt.config_path);
  ModelHandle model = opt.config_path.empty()
                          ? model_from_json(json(), opt.preset)
                          : model_from_json(config.value(opt.chain, json()), opt.preset);
  const int dof = hobmsim_model_dof(model.get());

  std::vector<double> q_deg;
  if (!parse_number_list(opt.q_text, q_deg)) throw CliError{3, "malformed joint list: " + opt.q_text};
  if (static_cast<int>(q_deg.size()) != dof)
    throw CliError{3, "expected " + std::to_string(dof) + " joint values, got " +
                          std::to_string(q_deg.size())};
  const std::vector<double> q = joints_to_rad(model.get(), q_deg);

  std::vector<double> poses(12 * dof);
  const hobmsim_status status = hobmsim_fk(model.get(), q.data(), dof, poses.data());
  if (status != HOBMSIM_OK) throw status_error(status);

  const double* ee = poses.data() + 12 * (dof - 1);
  std::cout << "rotation:\n";
  for (int r = 0; r < 3; ++r)
    std::cout << "  " << fmt(ee[3 * r]) << ' ' << fmt(ee[3 * r + 1]) << ' ' << fmt(ee[3 * r + 2])
              << '\n';
  std::cout << "translation_m: " << fmt(ee[9]) << ' ' << fmt(ee[10]) << ' ' << fmt(ee[11])
            << '\n';

  if (!opt.csv_path.empty()) {
    Output out(opt.csv_path);
    write_row(out.table(), {"frame", "r11", "r12", "r13", "r21", "r22", "r23", "r31", "r32",
                            "r33", "x_m", "y_m", "z_m"});
    for (int i = 0; i < dof; ++i) {
      std::vector<std::string> cells{std::to_string(i + 1)};
      for (int c = 0; c < 12; ++c) cells.push_back(fmt(poses[12 * i + c]));
      write_row(out.table(), cells);
    }
  }
  return 0;
}

/* --------------------------------------------------------------- torques */

struct TorquesOptions {
  std::string config_path;
  std::string output_path;
  double dt = 0.0;
  bool dt_set = false;
  double payload = 0.0;
  bool payload_set = false;
  bool no_hobm = false;
};

struct SweepSetup {
  ModelHandle lwr;
  ProfileHandle profile;
  std::vector<double> fixed;  // rad, dof-1 values
  double dt = 1e-3;
  double payload = 50.0;
};

SweepSetup sweep_from_config(const json& config) {
  SweepSetup setup;
  setup.lwr = model_from_json(config.value("lwr", json()), "lwr-table2");
  const int dof = hobmsim_model_dof(setup.lwr.get());

  const json sweep = config.value("sweep", json::object());
  const double start = deg2rad(sweep.value("start_deg", -40.0));
  const double end = deg2rad(sweep.value("end_deg", 40.0));
  const double ramp = sweep.value("ramp_s", 0.2);
  const double total = sweep.value("total_s", 2.0);
  setup.profile = ProfileHandle(hobmsim_profile_create(start, end, ramp, total));
  if (!setup.profile) throw last_error(2);

  std::vector<double> fixed_deg{-45.0, 90.0, -225.0, 90.0, 0.0};
  if (config.contains("fixed_joints_deg"))
    fixed_deg = number_array(config, "fixed_joints_deg", static_cast<size_t>(dof - 1));
  if (static_cast<int>(fixed_deg.size()) != dof - 1)
    throw config_error("fixed_joints_deg must list " + std::to_string(dof - 1) + " values");
  setup.fixed.resize(fixed_deg.size());
  for (size_t i = 0; i < fixed_deg.size(); ++i) {
    const int type = hobmsim_model_joint_type(setup.lwr.get(), static_cast<int>(i) + 1);
    setup.fixed[i] = type == HOBMSIM_JOINT_REVOLUTE ? deg2rad(fixed_deg[i]) : fixed_deg[i];
  }

  setup.dt = config.value("dt_s", 1e-3);
  setup.payload = config.value("payload_kg", 50.0);
  return setup;
}

SystemHandle system_from_config(const json& config, const SweepSetup& setup) {
  ModelHandle hobm = model_from_json(config.value("hobm", json()), "hobm-table1");
  SystemHandle system(hobmsim_system_create(setup.lwr.get(), hobm.get(), setup.payload));
  if (!system) throw last_error(2);

  double rotation[9], translation[3];
  hobmsim_default_base_offset(rotation, translation);
  if (config.contains("base_offset")) {
    const json& base = config.at("base_offset");
    const std::vector<double> t = number_array(base, "translation_m", 3);
    std::copy(t.begin(), t.end(), translation);
    if (base.contains("rpy_deg")) {
      const std::vector<double> rpy = number_array(base, "rpy_deg", 3);
      rpy_to_rotation(deg2rad(rpy[0]), deg2rad(rpy[1]), deg2rad(rpy[2]), rotation);
    }
  }
  hobmsim_status status = hobmsim_system_set_base_offset(system.get(), rotation, translation);
  if (status != HOBMSIM_OK) throw status_error(status);

  if (config.contains("elbow") || config.contains("singularity_tolerance")) {
    const std::string elbow = config.value("elbow", "positive");
    if (elbow != "positive" && elbow != "negative")
      throw config_error("elbow must be \"positive\" or \"negative\"");
    status = hobmsim_system_set_options(system.get(), elbow == "positive" ? 1 : 0,
                                        config.value("singularity_tolerance", 1e-6));
    if (status != HOBMSIM_OK) throw status_error(status);
  }
  return system;
}

std::vector<std::string> torques_header(int dof) {
  std::vector<std::string> header{"t_s"};
  for (int j = 1; j <= dof; ++j) header.push_back("tau_lm_" + std::to_string(j) + "_Nm");
  for (int j = 1; j <= dof; ++j) header.push_back("tau_total_" + std::to_string(j) + "_Nm");
  header.insert(header.end(), {"f_hobm_x_N", "f_hobm_y_N", "f_hobm_z_N"});
  return header;
}

void print_peak_summary(std::ostream& os, const std::vector<double>& peak_lm,
                        const std::vector<double>& peak_total) {
  for (size_t j = 0; j < peak_lm.size(); ++j) {
    os << "joint_" << (j + 1) << " peak_lm_Nm=" << fmt(peak_lm[j])
       << " peak_total_Nm=" << fmt(peak_total[j]) << " ratio="
       << (peak_lm[j] > 0.0 ? fmt(peak_total[j] / peak_lm[j]) : "inf") << '\n';
  }
}

int cmd_torques(const TorquesOptions& opt) {
  const json config = load_config(opt.config_path);
  SweepSetup setup = sweep_from_config(config);
  if (opt.dt_set) setup.dt = opt.dt;
  if (opt.payload_set) setup.payload = opt.payload;
  if (!(setup.dt > 0.0)) throw config_error("dt must be positive");

  const int dof = hobmsim_model_dof(setup.lwr.get());
  if (static_cast<int>(setup.fixed.size()) != dof - 1)
    throw config_error("fixed joint count does not match the robot");

  Output out(opt.output_path);
  write_row(out.table(), torques_header(dof));
  std::vector<double> peak_lm(dof, 0.0), peak_total(dof, 0.0);

  if (opt.no_hobm) {
    // Robot alone: identical effort columns, no balancer force.
    const double total = hobmsim_profile_total_time(setup.profile.get());
    const auto count = static_cast<size_t>(std::floor(total / setup.dt + 1e-9)) + 1;
    std::vector<double> q(dof), qd(dof, 0.0), qdd(dof, 0.0), tau(dof);
    for (size_t k = 0; k < count; ++k) {
      const double t = static_cast<double>(k) * setup.dt;
      double pos = 0, vel = 0, acc = 0;
      hobmsim_status status = hobmsim_profile_eval(setup.profile.get(), t, &pos, &vel, &acc);
      if (status != HOBMSIM_OK) throw status_error(status);
      q[0] = pos;
      qd[0] = vel;
      qdd[0] = acc;
      for (int j = 1; j < dof; ++j) q[j] = setup.fixed[j - 1];
      status = hobmsim_inverse_dynamics(setup.lwr.get(), q.data(), qd.data(), qdd.data(), dof,
                                        nullptr, tau.data());
      if (status != HOBMSIM_OK) throw status_error(status);

      std::vector<std::string> cells{fmt(t)};
      for (int j = 0; j < dof; ++j) cells.push_back(fmt(tau[j]));
      for (int j = 0; j < dof; ++j) cells.push_back(fmt(tau[j]));
      cells.insert(cells.end(), {"0", "0", "0"});
      write_row(out.table(), cells);
      for (int j = 0; j < dof; ++j) {
        peak_lm[j] = std::max(peak_lm[j], std::abs(tau[j]));
        peak_total[j] = peak_lm[j];
      }
    }
    print_peak_summary(out.summary(), peak_lm, peak_total);
    return 0;
  }

  SystemHandle system = system_from_config(config, setup);

  ReportHandle report(hobmsim_check_path(system.get(), setup.profile.get(), setup.fixed.data(),
                                         dof - 1, setup.dt));
  if (!report) throw last_error(2);
  if (!hobmsim_path_feasible(report.get())) {
    const size_t n = hobmsim_path_violation_count(report.get());
    std::cerr << "path infeasible: " << n << " violation(s)\n";
    for (size_t i = 0; i < n; ++i) {
      double t = 0, measure = 0;
      int kind = 0;
      hobmsim_path_violation(report.get(), i, &t, &kind, &measure);
      const char* label = kind == HOBMSIM_VIOLATION_LWR_SINGULAR      ? "robot-singular"
                          : kind == HOBMSIM_VIOLATION_HOBM_SINGULAR   ? "balancer-singular"
                                                                      : "balancer-unreachable";
      std::cerr << "  t=" << fmt(t) << ' ' << label << " measure=" << fmt(measure) << '\n';
    }
    return 4;
  }

  SeriesHandle series(hobmsim_simulate_coupled(system.get(), setup.profile.get(),
                                               setup.fixed.data(), dof - 1, setup.dt));
  if (!series) throw last_error(4);

  const size_t n = hobmsim_coupled_size(series.get());
  std::vector<double> tau_lm(dof), tau_total(dof);
  double f[3];
  for (size_t k = 0; k < n; ++k) {
    double t = 0;
    const hobmsim_status status = hobmsim_coupled_sample(series.get(), k, &t, nullptr, nullptr,
                                                         tau_lm.data(), tau_total.data(), f);
    if (status != HOBMSIM_OK) throw status_error(status);
    std::vector<std::string> cells{fmt(t)};
    for (int j = 0; j < dof; ++j) cells.push_back(fmt(tau_lm[j]));
    for (int j = 0; j < dof; ++j) cells.push_back(fmt(tau_total[j]));
    for (double component : f) cells.push_back(fmt(component));
    write_row(out.table(), cells);
    for (int j = 0; j < dof; ++j) {
      peak_lm[j] = std::max(peak_lm[j], std::abs(tau_lm[j]));
      peak_total[j] = std::max(peak_total[j], std::abs(tau_total[j]));
    }
  }
  print_peak_summary(out.summary(), peak_lm, peak_total);
  return 0;
}

/* -------------------------------------------------------------- ringdown */

struct RingdownOptions {
  std::string config_path;
  std::string output_path;
  double band_deg = 0.5;
};

hobmsim_ringdown_params ringdown_params_from_config(const json& section) {
  hobmsim_ringdown_params params;
  hobmsim_ringdown_defaults(&params);
  if (section.is_null()) return params;
  if (!section.is_object()) throw config_error("ringdown section must be an object");

  params.cable_length = section.value("cable_m", params.cable_length);
  params.payload_mass = section.value("payload_kg", params.payload_mass);
  if (section.contains("viscous_Nms")) {
    const auto v = number_array(section, "viscous_Nms", 2);
    params.viscous[0] = v[0];
    params.viscous[1] = v[1];
  }
  if (section.contains("coulomb_Nm")) {
    const auto v = number_array(section, "coulomb_Nm", 2);
    params.coulomb[0] = v[0];
    params.coulomb[1] = v[1];
  }
  if (section.contains("phi0_deg")) {
    const auto v = number_array(section, "phi0_deg", 2);
    params.initial_phi[0] = deg2rad(v[0]);
    params.initial_phi[1] = deg2rad(v[1]);
  }
  if (section.contains("phid0_degps")) {
    const auto v = number_array(section, "phid0_degps", 2);
    params.initial_phid[0] = deg2rad(v[0]);
    params.initial_phid[1] = deg2rad(v[1]);
  }
  if (section.contains("anchor_xy_m")) {
    const auto v = number_array(section, "anchor_xy_m", 2);
    params.has_anchor = 1;
    params.anchor_xy[0] = v[0];
    params.anchor_xy[1] = v[1];
  }
  params.dt = section.value("dt_s", params.dt);
  params.duration = section.value("duration_s", params.duration);
  params.smooth_sign_eps = section.value("smooth_sign_eps_radps", params.smooth_sign_eps);
  return params;
}

int cmd_ringdown(const RingdownOptions& opt) {
  const json config = load_config(opt.config_path);
  const json section = config.value("ringdown", json());
  ModelHandle arm = model_from_json(section.is_object() ? section.value("arm", json()) : json(),
                                    "hobm-table1-arm");
  const hobmsim_ringdown_params params = ringdown_params_from_config(section);

  RingdownHandle series(hobmsim_simulate_ringdown(arm.get(), &params));
  if (!series) throw last_error(2);

  Output out(opt.output_path);
  write_row(out.table(), {"t_s", "phi_1_deg", "phi_2_deg", "phid_1_degps", "phid_2_degps",
                          "f_x_N", "f_y_N", "f_z_N", "energy_J"});
  const size_t n = hobmsim_ringdown_size(series.get());
  for (size_t k = 0; k < n; ++k) {
    double t = 0, phi[2], phid[2], force[3], energy = 0;
    const hobmsim_status status =
        hobmsim_ringdown_sample(series.get(), k, &t, phi, phid, force, &energy);
    if (status != HOBMSIM_OK) throw status_error(status);
    write_row(out.table(),
              {fmt(t), fmt(rad2deg(phi[0])), fmt(rad2deg(phi[1])), fmt(rad2deg(phid[0])),
               fmt(rad2deg(phid[1])), fmt(force[0]), fmt(force[1]), fmt(force[2]), fmt(energy)});
  }

  double settling = 0, peak = 0;
  hobmsim_status status =
      hobmsim_ringdown_settling_time(series.get(), deg2rad(opt.band_deg), &settling);
  if (status != HOBMSIM_OK) throw status_error(status);
  status = hobmsim_ringdown_peak_force(series.get(), &peak);
  if (status != HOBMSIM_OK) throw status_error(status);
  out.summary() << "settling_time_s=" << fmt(settling) << " peak_force_N=" << fmt(peak) << '\n';
  return 0;
}

/* ------------------------------------------------------------------- doe */

struct DoeOptions {
  std::string config_path;
  std::string output_path;
  std::string input_path;
  double force = 0.0;
  bool force_set = false;
  bool no_response = false;
};

struct Factor {
  std::string name;
  double low = 0.0;
  double high = 0.0;
};

struct DoeSetup {
  std::vector<Factor> factors;
  int axial_kind = HOBMSIM_AXIAL_ROTATABLE;
  int centers = 6;
  int accel_index = 2;
  double force_limit = 120.0;
  int grid_a = 11;
  int grid_b = 11;
  double brake_time = 0.5;
};

DoeSetup doe_from_config(const json& config) {
  DoeSetup setup;
  double lows[3], highs[3];
  hobmsim_study_default_factors(lows, highs);
  for (int i = 0; i < 3; ++i)
    setup.factors.push_back({hobmsim_study_factor_name(i), lows[i], highs[i]});

  const json section = config.value("doe", json::object());
  if (section.contains("factors")) {
    const json& factors = section.at("factors");
    if (!factors.is_array() || factors.empty())
      throw config_error("doe.factors must be a non-empty array");
    setup.factors.clear();
    for (const json& f : factors) {
      Factor factor;
      factor.name = f.at("name").get<std::string>();
      factor.low = f.at("low").get<double>();
      factor.high = f.at("high").get<double>();
      setup.factors.push_back(factor);
    }
  }
  const std::string axial = section.value("axial", "rotatable");
  if (axial == "rotatable")
    setup.axial_kind = HOBMSIM_AXIAL_ROTATABLE;
  else if (axial == "face-centered")
    setup.axial_kind = HOBMSIM_AXIAL_FACE_CENTERED;
  else
    throw config_error("doe.axial must be \"rotatable\" or \"face-centered\"");
  setup.centers = section.value("centers", 6);
  setup.accel_index = section.value("accel_factor", 2);
  setup.force_limit = section.value("force_limit_N", 120.0);
  if (section.contains("grid")) {
    const auto grid = number_array(section, "grid", 2);
    setup.grid_a = static_cast<int>(grid[0]);
    setup.grid_b = static_cast<int>(grid[1]);
    if (setup.grid_a < 1 || setup.grid_b < 1) throw config_error("doe.grid entries must be >= 1");
  }
  setup.brake_time = section.value("brake_time_s", 0.5);
  return setup;
}

DesignHandle design_from_setup(const DoeSetup& setup) {
  const int k = static_cast<int>(setup.factors.size());
  std::vector<double> lows(k), highs(k);
  for (int i = 0; i < k; ++i) {
    lows[i] = setup.factors[i].low;
    highs[i] = setup.factors[i].high;
  }
  DesignHandle design(
      hobmsim_ccd_create(k, lows.data(), highs.data(), setup.axial_kind, setup.centers));
  if (!design) throw last_error(2);
  return design;
}

StudyHandle study_from_config(const json& config, const DoeSetup& setup) {
  const json section = config.value("ringdown", json());
  ModelHandle arm = model_from_json(section.is_object() ? section.value("arm", json()) : json(),
                                    "hobm-table1-arm");
  const hobmsim_ringdown_params params = ringdown_params_from_config(section);
  StudyHandle study(hobmsim_study_create(arm.get(), &params, setup.brake_time));
  if (!study) throw last_error(2);
  return study;
}

struct StudyContext {
  const hobmsim_study* study;
  hobmsim_status failed = HOBMSIM_OK;
  std::string message;
};

int study_responder(void* context, const double*, const double* physical, int k, double* out) {
  auto* ctx = static_cast<StudyContext*>(context);
  if (k != 3) {
    ctx->failed = HOBMSIM_ERR_DIMENSION;
    ctx->message = "the ringdown study expects exactly 3 factors";
    return 1;
  }
  const hobmsim_status status = hobmsim_study_eval(ctx->study, physical, out);
  if (status != HOBMSIM_OK) {
    ctx->failed = status;
    ctx->message = hobmsim_last_error();
    return 1;
  }
  return 0;
}

std::vector<double> evaluate_study(const DesignHandle& design, const StudyHandle& study) {
  std::vector<double> responses(hobmsim_design_n_points(design.get()));
  StudyContext ctx{study.get(), HOBMSIM_OK, ""};
  const hobmsim_status status =
      hobmsim_run_experiments(design.get(), study_responder, &ctx, responses.data());
  if (status != HOBMSIM_OK) {
    if (ctx.failed != HOBMSIM_OK) throw CliError{exit_for(ctx.failed), ctx.message};
    throw status_error(status);
  }
  return responses;
}

int cmd_doe_run(const DoeOptions& opt) {
  const json config = load_config(opt.config_path);
  const DoeSetup setup = doe_from_config(config);
  DesignHandle design = design_from_setup(setup);
  const int k = static_cast<int>(setup.factors.size());
  const int n = hobmsim_design_n_points(design.get());

  std::vector<double> responses;
  if (!opt.no_response) {
    if (k != 3) throw config_error("study responses need exactly 3 factors; use --no-response");
    StudyHandle study = study_from_config(config, setup);
    responses = evaluate_study(design, study);
  }

  Output out(opt.output_path);
  std::vector<std::string> header{"point"};
  for (int i = 1; i <= k; ++i) header.push_back("coded_" + std::to_string(i));
  for (const Factor& f : setup.factors) header.push_back(f.name);
  if (!responses.empty()) header.push_back("peak_force_N");
  write_row(out.table(), header);

  std::vector<double> coded(k), physical(k);
  for (int i = 0; i < n; ++i) {
    const hobmsim_status status =
        hobmsim_design_point(design.get(), i, coded.data(), physical.data());
    if (status != HOBMSIM_OK) throw status_error(status);
    std::vector<std::string> cells{std::to_string(i)};
    for (double c : coded) cells.push_back(fmt(c));
    for (double p : physical) cells.push_back(fmt(p));
    if (!responses.empty()) cells.push_back(fmt(responses[i]));
    write_row(out.table(), cells);
  }
  out.summary() << "points=" << n << " factors=" << k
                << " axial_distance=" << fmt(hobmsim_design_axial_distance(design.get())) << '\n';
  return 0;
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open input file: " + path);
  CsvTable table;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::string cell;
    if (table.header.empty()) {
      while (std::getline(ss, cell, ',')) table.header.push_back(cell);
      continue;
    }
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) {
      double value = 0.0;
      if (!parse_number(cell, value))
        throw config_error("non-numeric cell in " + path + ": " + cell);
      row.push_back(value);
    }
    if (row.size() != table.header.size())
      throw config_error("ragged row in " + path);
    table.rows.push_back(std::move(row));
  }
  if (table.header.empty() || table.rows.empty())
    throw config_error("no data rows in " + path);
  return table;
}

/// Fits the quadratic surface from a CSV holding coded_1..coded_k columns and
/// the response in the last column; the fitted-region radius is the largest
/// coded magnitude seen.
SurfaceHandle fit_from_csv(const std::string& path, const DoeSetup& setup) {
  const CsvTable table = read_csv(path);
  const int k = static_cast<int>(setup.factors.size());
  std::vector<int> coded_cols(k, -1);
  for (int i = 0; i < k; ++i) {
    const std::string name = "coded_" + std::to_string(i + 1);
    for (size_t c = 0; c < table.header.size(); ++c)
      if (table.header[c] == name) coded_cols[i] = static_cast<int>(c);
    if (coded_cols[i] < 0) throw config_error("input is missing column " + name);
  }
  const int response_col = static_cast<int>(table.header.size()) - 1;

  const int n = static_cast<int>(table.rows.size());
  std::vector<double> coded(static_cast<size_t>(n) * k), responses(n), lows(k), highs(k);
  double radius = 0.0;
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < k; ++c) {
      const double value = table.rows[r][coded_cols[c]];
      coded[static_cast<size_t>(r) * k + c] = value;
      radius = std::max(radius, std::abs(value));
    }
    responses[r] = table.rows[r][response_col];
  }
  for (int i = 0; i < k; ++i) {
    lows[i] = setup.factors[i].low;
    highs[i] = setup.factors[i].high;
  }
  SurfaceHandle surface(hobmsim_fit_quadratic_raw(k, lows.data(), highs.data(), coded.data(), n,
                                                  responses.data(), radius));
  if (!surface) throw last_error(5);
  return surface;
}

void write_surface(Output& out, const SurfaceHandle& surface, const DoeSetup& setup, int n_points) {
  const int k = hobmsim_surface_n_factors(surface.get());
  double intercept = 0, r2 = 0, resid = 0;
  std::vector<double> linear(k), interaction(k * (k - 1) / 2), quadratic(k);
  hobmsim_surface_coeffs(surface.get(), &intercept, linear.data(), interaction.data(),
                         quadratic.data());
  hobmsim_surface_stats(surface.get(), &r2, &resid);

  for (const Factor& f : setup.factors)
    out.table() << "# factor " << f.name << " low " << fmt(f.low) << " high " << fmt(f.high)
                << '\n';
  out.table() << "# r_squared " << fmt(r2) << '\n';
  out.table() << "# max_residual " << fmt(resid) << '\n';
  out.table() << "# n_points " << n_points << '\n';
  write_row(out.table(), {"term", "coefficient"});
  write_row(out.table(), {"intercept", fmt(intercept)});
  for (int i = 0; i < k; ++i) write_row(out.table(), {setup.factors[i].name, fmt(linear[i])});
  int pair = 0;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j)
      write_row(out.table(),
                {setup.factors[i].name + "*" + setup.factors[j].name, fmt(interaction[pair++])});
  for (int i = 0; i < k; ++i)
    write_row(out.table(), {setup.factors[i].name + "^2", fmt(quadratic[i])});

  out.summary() << "r_squared=" << fmt(r2) << " max_residual=" << fmt(resid)
                << " n_points=" << n_points << '\n';
}

int cmd_doe_fit(const DoeOptions& opt) {
  if (opt.input_path.empty()) throw config_error("doe fit needs --input");
  const json config = load_config(opt.config_path);
  const DoeSetup setup = doe_from_config(config);
  SurfaceHandle surface = fit_from_csv(opt.input_path, setup);
  const CsvTable table = read_csv(opt.input_path);
  Output out(opt.output_path);
  write_surface(out, surface, setup, static_cast<int>(table.rows.size()));
  return 0;
}

int cmd_doe_limit(const DoeOptions& opt) {
  const json config = load_config(opt.config_path);
  DoeSetup setup = doe_from_config(config);
  if (opt.force_set) setup.force_limit = opt.force;
  if (setup.factors.size() != 3) throw config_error("doe limit needs exactly 3 factors");
  if (setup.accel_index < 0 || setup.accel_index > 2)
    throw config_error("doe.accel_factor must be 0, 1, or 2");

  SurfaceHandle surface;
  int n_points = 0;
  if (!opt.input_path.empty()) {
    surface = fit_from_csv(opt.input_path, setup);
    n_points = static_cast<int>(read_csv(opt.input_path).rows.size());
  } else {
    DesignHandle design = design_from_setup(setup);
    StudyHandle study = study_from_config(config, setup);
    const std::vector<double> responses = evaluate_study(design, study);
    surface = SurfaceHandle(hobmsim_fit_quadratic(design.get(), responses.data()));
    if (!surface) throw last_error(5);
    n_points = hobmsim_design_n_points(design.get());
  }

  // grid factors: the two non-acceleration factors in factor order
  std::vector<int> grid_factors;
  for (int i = 0; i < 3; ++i)
    if (i != setup.accel_index) grid_factors.push_back(i);
  const Factor& fa = setup.factors[grid_factors[0]];
  const Factor& fb = setup.factors[grid_factors[1]];
  const Factor& accel = setup.factors[setup.accel_index];

  auto linspace = [](double low, double high, int n) {
    std::vector<double> values(n);
    for (int i = 0; i < n; ++i)
      values[i] = n == 1 ? low : low + (high - low) * static_cast<double>(i) / (n - 1);
    return values;
  };
  const std::vector<double> grid_a = linspace(fa.low, fa.high, setup.grid_a);
  const std::vector<double> grid_b = linspace(fb.low, fb.high, setup.grid_b);

  std::vector<double> values(static_cast<size_t>(setup.grid_a) * setup.grid_b);
  std::vector<int> statuses(values.size());
  const hobmsim_status status = hobmsim_limit_surface(
      surface.get(), setup.accel_index, setup.force_limit, grid_a.data(), setup.grid_a,
      grid_b.data(), setup.grid_b, values.data(), statuses.data());
  if (status != HOBMSIM_OK) throw status_error(status);

  Output out(opt.output_path);
  write_row(out.table(), {fa.name, fb.name, "max_" + accel.name, "status"});
  int counts[3] = {0, 0, 0};
  for (int ia = 0; ia < setup.grid_a; ++ia) {
    for (int ib = 0; ib < setup.grid_b; ++ib) {
      const size_t cell = static_cast<size_t>(ia) * setup.grid_b + ib;
      const char* word = statuses[cell] == HOBMSIM_LIMIT_LIMITED     ? "limited"
                         : statuses[cell] == HOBMSIM_LIMIT_UNBOUNDED ? "unbounded"
                                                                     : "infeasible";
      ++counts[statuses[cell]];
      write_row(out.table(), {fmt(grid_a[ia]), fmt(grid_b[ib]), fmt(values[cell]), word});
    }
  }
  out.summary() << "force_limit_N=" << fmt(setup.force_limit) << " n_points=" << n_points
                << " limited=" << counts[0] << " unbounded=" << counts[1]
                << " infeasible=" << counts[2] << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"balanced-manipulator simulation front end"};
  app.require_subcommand(1);

  FkOptions fk_opt;
  CLI::App* fk = app.add_subcommand("fk", "end-effector pose at a joint configuration");
  fk->add_option("--preset", fk_opt.preset, "compiled-in model name")
      ->capture_default_str();
  fk->add_option("--config", fk_opt.config_path, "JSON config file");
  fk->add_option("--chain", fk_opt.chain, "config model section: lwr or hobm")
      ->capture_default_str();
  fk->add_option("--q", fk_opt.q_text,
                 "comma-separated joint values (degrees for revolute, meters for prismatic)")
      ->required();
  fk->add_option("--csv", fk_opt.csv_path, "also write every link frame to this CSV file");

  TorquesOptions torques_opt;
  CLI::App* torques =
      app.add_subcommand("torques", "joint efforts along the sweep, with and without the balancer");
  torques->add_option("--config", torques_opt.config_path, "JSON config file");
  torques->add_option("--output", torques_opt.output_path, "CSV output path (default stdout)");
  CLI::Option* torques_dt = torques->add_option("--dt", torques_opt.dt, "sample step, seconds");
  CLI::Option* torques_payload =
      torques->add_option("--payload", torques_opt.payload, "payload mass, kg");
  torques->add_flag("--no-hobm", torques_opt.no_hobm, "robot alone; balancer columns zeroed");

  RingdownOptions ringdown_opt;
  CLI::App* ringdown = app.add_subcommand("ringdown", "payload oscillation after a stop");
  ringdown->add_option("--config", ringdown_opt.config_path, "JSON config file");
  ringdown->add_option("--output", ringdown_opt.output_path, "CSV output path (default stdout)");
  ringdown->add_option("--band", ringdown_opt.band_deg, "settling band, degrees")
      ->capture_default_str();

  DoeOptions doe_opt;
  CLI::App* doe = app.add_subcommand("doe", "central composite study of the ringdown peak force");
  doe->require_subcommand(1);
  CLI::App* doe_run = doe->add_subcommand("run", "emit the design and evaluated responses");
  CLI::App* doe_fit = doe->add_subcommand("fit", "fit the quadratic surface to a response CSV");
  CLI::App* doe_limit =
      doe->add_subcommand("limit", "max acceleration grid under a peak-force limit");
  CLI::Option* force_opt = nullptr;
  for (CLI::App* sub : {doe_run, doe_fit, doe_limit}) {
    sub->add_option("--config", doe_opt.config_path, "JSON config file");
    sub->add_option("--output", doe_opt.output_path, "output path (default stdout)");
  }
  doe_run->add_flag("--no-response", doe_opt.no_response, "design points only, skip evaluation");
  doe_fit->add_option("--input", doe_opt.input_path, "response CSV to fit")->required();
  doe_limit->add_option("--input", doe_opt.input_path,
                        "response CSV to fit (default: run the study)");
  force_opt = doe_limit->add_option("--force", doe_opt.force, "peak-force limit, N");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  torques_opt.dt_set = torques_dt->count() > 0;
  torques_opt.payload_set = torques_payload->count() > 0;
  doe_opt.force_set = force_opt->count() > 0;

  try {
    if (app.got_subcommand(fk)) return cmd_fk(fk_opt);
    if (app.got_subcommand(torques)) return cmd_torques(torques_opt);
    if (app.got_subcommand(ringdown)) return cmd_ringdown(ringdown_opt);
    if (doe->got_subcommand(doe_run)) return cmd_doe_run(doe_opt);
    if (doe->got_subcommand(doe_fit)) return cmd_doe_fit(doe_opt);
    if (doe->got_subcommand(doe_limit)) return cmd_doe_limit(doe_opt);
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << '\n';
    return e.code;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
