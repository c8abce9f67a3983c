#include "hobmsim.h"

#include "hobm/coupling.hpp"
#include "hobm/doe.hpp"
#include "hobm/dynamics.hpp"
#include "hobm/kinematics.hpp"
#include "hobm/oscillation.hpp"
#include "hobm/presets.hpp"
#include "hobm/study.hpp"
#include "hobm/trajectory.hpp"
#include "hobm/types.hpp"

#include <cstring>
#include <new>
#include <string>
#include <utility>
#include <vector>

using namespace hobm;

extern "C" {

struct hobmsim_model {
  RobotModel impl;
};

struct hobmsim_profile {
  TrapezoidalProfile impl;
};

struct hobmsim_system {
  CoupledSystem impl;
};

struct hobmsim_coupled_series {
  std::vector<CoupledSample> impl;
};

struct hobmsim_path_report {
  PathReport impl;
};

struct hobmsim_ringdown_series {
  std::vector<RingdownSample> impl;
};

struct hobmsim_design {
  CCDesign impl;
};

struct hobmsim_surface {
  QuadraticModel impl;
};

struct hobmsim_study {
  RingdownStudy impl;
};

}  // extern "C"

namespace {

thread_local std::string t_last_error = "no error";

hobmsim_status fail(hobmsim_status status, const std::string& message) {
  t_last_error = message;
  return status;
}

hobmsim_status map_exception() {
  try {
    throw;
  } catch (const DimensionError& e) {
    return fail(HOBMSIM_ERR_DIMENSION, e.what());
  } catch (const SingularityError& e) {
    return fail(HOBMSIM_ERR_SINGULAR, e.what());
  } catch (const UnreachableError& e) {
    return fail(HOBMSIM_ERR_UNREACHABLE, e.what());
  } catch (const NumericError& e) {
    return fail(HOBMSIM_ERR_NUMERIC, e.what());
  } catch (const std::exception& e) {
    return fail(HOBMSIM_ERR_INVALID, e.what());
  } catch (...) {
    return fail(HOBMSIM_ERR_INVALID, "unknown failure");
  }
}

// Runs the body, translating exceptions into status codes.
template <typename Fn>
hobmsim_status guarded(Fn&& body) {
  try {
    return body();
  } catch (...) {
    return map_exception();
  }
}

// Allocating variant: returns the new object or NULL with the error set.
template <typename Out, typename Fn>
Out* guarded_new(Fn&& make) {
  try {
    return new Out{make()};
  } catch (...) {
    map_exception();
    return nullptr;
  }
}

RigidTransform pose_from_rows(const double* rotation9, const double* translation3) {
  RigidTransform pose;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) pose.rotation(r, c) = rotation9[3 * r + c];
  pose.translation = Eigen::Map<const Eigen::Vector3d>(translation3);
  if (!pose.is_valid()) throw Error("pose rotation is not orthonormal");
  return pose;
}

void pose_to_rows(const RigidTransform& pose, double* rotation9, double* translation3) {
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) rotation9[3 * r + c] = pose.rotation(r, c);
  Eigen::Map<Eigen::Vector3d>{translation3} = pose.translation;
}

RingdownConfig config_from_params(const RobotModel& arm, const hobmsim_ringdown_params& p) {
  RingdownConfig cfg;
  cfg.arm = arm;
  cfg.cable_length = p.cable_length;
  cfg.payload_mass = p.payload_mass;
  cfg.viscous = Eigen::Map<const Eigen::Vector2d>(p.viscous);
  cfg.coulomb = Eigen::Map<const Eigen::Vector2d>(p.coulomb);
  cfg.initial_phi = Eigen::Map<const Eigen::Vector2d>(p.initial_phi);
  cfg.initial_phid = Eigen::Map<const Eigen::Vector2d>(p.initial_phid);
  if (p.has_anchor) cfg.anchor_xy = Eigen::Map<const Eigen::Vector2d>(p.anchor_xy);
  cfg.dt = p.dt;
  cfg.duration = p.duration;
  if (p.smooth_sign_eps > 0.0) cfg.smooth_sign_eps = p.smooth_sign_eps;
  return cfg;
}

bool require(bool condition, const char* message) {
  if (!condition) t_last_error = message;
  return condition;
}

constexpr hobmsim_status kNull = HOBMSIM_ERR_NULL;

}  // namespace

extern "C" {

const char* hobmsim_last_error(void) { return t_last_error.c_str(); }

const char* hobmsim_version(void) { return "1.0.0"; }

/* ---------------------------------------------------------------- models */

hobmsim_model* hobmsim_model_preset(const char* name) {
  if (!require(name != nullptr, "preset name is NULL")) return nullptr;
  return guarded_new<hobmsim_model>([&] { return make_preset(name); });
}

hobmsim_model* hobmsim_model_create(int dof, const double* dh_rows, const int* joint_types,
                                    const double* masses, const double* coms,
                                    const double* inertias, const double* gravity) {
  if (!require(dh_rows && joint_types && masses && coms && inertias,
               "model arrays must not be NULL"))
    return nullptr;
  return guarded_new<hobmsim_model>([&] {
    if (dof < 1) throw Error("model needs at least one joint");
    RobotModel model;
    for (int i = 0; i < dof; ++i) {
      DHRow row;
      row.theta_offset = dh_rows[4 * i + 0];
      row.a = dh_rows[4 * i + 1];
      row.d = dh_rows[4 * i + 2];
      row.alpha = dh_rows[4 * i + 3];
      if (joint_types[i] != HOBMSIM_JOINT_REVOLUTE && joint_types[i] != HOBMSIM_JOINT_PRISMATIC)
        throw Error("joint type must be HOBMSIM_JOINT_REVOLUTE or HOBMSIM_JOINT_PRISMATIC");
      row.joint_type =
          joint_types[i] == HOBMSIM_JOINT_REVOLUTE ? JointType::revolute : JointType::prismatic;
      model.chain.rows.push_back(row);

      LinkInertia link;
      link.mass = masses[i];
      link.com = Eigen::Map<const Eigen::Vector3d>(coms + 3 * i);
      for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) link.inertia(r, c) = inertias[9 * i + 3 * r + c];
      model.links.push_back(link);
    }
    if (gravity) model.gravity = Eigen::Map<const Eigen::Vector3d>(gravity);
    validate_model(model);
    return model;
  });
}

hobmsim_status hobmsim_model_set_base(hobmsim_model* model, const double* rotation9,
                                      const double* translation3) {
  if (!model || !rotation9 || !translation3) return fail(kNull, "NULL argument");
  return guarded([&] {
    model->impl.chain.base_pose = pose_from_rows(rotation9, translation3);
    return HOBMSIM_OK;
  });
}

int hobmsim_model_dof(const hobmsim_model* model) { return model ? model->impl.dof() : 0; }

int hobmsim_model_joint_type(const hobmsim_model* model, int index) {
  if (!model || index < 0 || index >= model->impl.dof()) return -1;
  return model->impl.chain.rows[index].joint_type == JointType::revolute
             ? HOBMSIM_JOINT_REVOLUTE
             : HOBMSIM_JOINT_PRISMATIC;
}

void hobmsim_model_free(hobmsim_model* model) { delete model; }

/* ------------------------------------------------------------ kinematics */

hobmsim_status hobmsim_fk(const hobmsim_model* model, const double* q, int dof, double* poses) {
  if (!model || !q || !poses) return fail(kNull, "NULL argument");
  return guarded([&] {
    const Eigen::Map<const Eigen::VectorXd> joints(q, dof);
    const auto frames = forward_kinematics(model->impl.chain, joints);
    for (size_t i = 0; i < frames.size(); ++i)
      pose_to_rows(frames[i], poses + 12 * i, poses + 12 * i + 9);
    return HOBMSIM_OK;
  });
}

hobmsim_status hobmsim_jacobian(const hobmsim_model* model, const double* q, int dof,
                                double* jacobian) {
  if (!model || !q || !jacobian) return fail(kNull, "NULL argument");
  return guarded([&] {
    const Eigen::Map<const Eigen::VectorXd> joints(q, dof);
    const Eigen::MatrixXd jac = geometric_jacobian(model->impl.chain, joints);
    for (int r = 0; r < 6; ++r)
      for (int c = 0; c < jac.cols(); ++c) jacobian[r * jac.cols() + c] = jac(r, c);
    return HOBMSIM_OK;
  });
}

hobmsim_status hobmsim_singularity_measure(const hobmsim_model* model, const double* q, int dof,
                                           double* measure) {
  if (!model || !q || !measure) return fail(kNull, "NULL argument");
  return guarded([&] {
    const Eigen::Map<const Eigen::VectorXd> joints(q, dof);
    *measure = singularity_measure(geometric_jacobian(model->impl.chain, joints));
    return HOBMSIM_OK;
  });
}

hobmsim_status hobmsim_inverse_dynamics(const hobmsim_model* model, const double* q,
                                        const double* qd, const double* qdd, int dof,
                                        const double* ee_wrench, double* tau) {
  if (!model || !q || !qd || !qdd || !tau) return fail(kNull, "NULL argument");
  return guarded([&] {
    JointState state;
    state.q = Eigen::Map<const Eigen::VectorXd>(q, dof);
    state.qd = Eigen::Map<const Eigen::VectorXd>(qd, dof);
    state.qdd = Eigen::Map<const Eigen::VectorXd>(qdd, dof);
    Wrench wrench = Wrench::zero();
    if (ee_wrench) {
      wrench.force = Eigen::Map<const Eigen::Vector3d>(ee_wrench);
      wrench.moment = Eigen::Map<const Eigen::Vector3d>(ee_wrench + 3);
    }
    Eigen::Map<Eigen::VectorXd>(tau, dof) = inverse_dynamics(model->impl, state, wrench);
    return HOBMSIM_OK;
  });
}

/* ------------------------------------------------------------ trajectory */

hobmsim_profile* hobmsim_profile_create(double initial_position, double final_position,
                                        double ramp_time, double total_time) {
  return guarded_new<hobmsim_profile>([&] {
    return TrapezoidalProfile(initial_position, final_position, ramp_time, total_time);
  });
}

hobmsim_status hobmsim_profile_eval(const hobmsim_profile* profile, double t, double* position,
                                    double* velocity, double* acceleration) {
  if (!profile) return fail(kNull, "NULL profile");
  if (position) *position = profile->impl.position(t);
  if (velocity) *velocity = profile->impl.velocity(t);
  if (acceleration) *acceleration = profile->impl.acceleration(t);
  return HOBMSIM_OK;
}

double hobmsim_profile_total_time(const hobmsim_profile* profile) {
  return profile ? profile->impl.total_time() : 0.0;
}

void hobmsim_profile_free(hobmsim_profile* profile) { delete profile; }

/* ---------------------------------------------------------- coupled runs */

hobmsim_system* hobmsim_system_create(const hobmsim_model* lwr, const hobmsim_model* hobm,
                                      double payload_mass) {
  if (!require(lwr && hobm, "NULL model")) return nullptr;
  return guarded_new<hobmsim_system>([&] {
    CoupledSystem system;
    system.lwr = lwr->impl;
    system.hobm = hobm->impl;
    system.payload_mass = payload_mass;
    return system;
  });
}

hobmsim_system* hobmsim_system_default(double payload_mass) {
  return guarded_new<hobmsim_system>([&] { return default_coupled_system(payload_mass); });
}

hobmsim_status hobmsim_system_set_base_offset(hobmsim_system* system, const double* rotation9,
                                              const double* translation3) {
  if (!system || !rotation9 || !translation3) return fail(kNull, "NULL argument");
  return guarded([&] {
    system->impl.hobm_base_offset = pose_from_rows(rotation9, translation3);
    return HOBMSIM_OK;
  });
}

void hobmsim_default_base_offset(double* rotation9, double* translation3) {
  if (!rotation9 || !translation3) return;
  pose_to_rows(default_hobm_base_offset(), rotation9, translation3);
}

hobmsim_status hobmsim_system_set_options(hobmsim_system* system, int elbow_positive,
                                          double singularity_tolerance) {
  if (!system) return fail(kNull, "NULL system");
  if (!(singularity_tolerance > 0.0))
    return fail(HOBMSIM_ERR_INVALID, "singularity tolerance must be positive");
  system->impl.elbow_positive = elbow_positive != 0;
  system->impl.singularity_tolerance = singularity_tolerance;
  return HOBMSIM_OK;
}

void hobmsim_system_free(hobmsim_system* system) { delete system; }

hobmsim_coupled_series* hobmsim_simulate_coupled(const hobmsim_system* system,
                                                 const hobmsim_profile* profile,
                                                 const double* fixed_joints, int n_fixed,
                                                 double dt) {
  if (!require(system && profile && fixed_joints, "NULL argument")) return nullptr;
  return guarded_new<hobmsim_coupled_series>([&] {
    const Eigen::Map<const Eigen::VectorXd> fixed(fixed_joints, n_fixed);
    return simulate_coupled(system->impl, profile->impl, fixed, dt);
  });
}

size_t hobmsim_coupled_size(const hobmsim_coupled_series* series) {
  return series ? series->impl.size() : 0;
}

int hobmsim_coupled_dof(const hobmsim_coupled_series* series) {
  if (!series || series->impl.empty()) return 0;
  return static_cast<int>(series->impl.front().tau_lm.size());
}

hobmsim_status hobmsim_coupled_sample(const hobmsim_coupled_series* series, size_t index,
                                      double* t, double* theta, double* phi, double* tau_lm,
                                      double* tau_total, double* f_hobm3) {
  if (!series) return fail(kNull, "NULL series");
  if (index >= series->impl.size()) return fail(HOBMSIM_ERR_INVALID, "sample index out of range");
  const CoupledSample& s = series->impl[index];
  const auto dof = s.tau_lm.size();
  if (t) *t = s.t;
  if (theta) Eigen::Map<Eigen::VectorXd>(theta, dof) = s.theta.q;
  if (phi) Eigen::Map<Eigen::Vector3d>{phi} = s.phi.q;
  if (tau_lm) Eigen::Map<Eigen::VectorXd>(tau_lm, dof) = s.tau_lm;
  if (tau_total) Eigen::Map<Eigen::VectorXd>(tau_total, dof) = s.tau_total;
  if (f_hobm3) Eigen::Map<Eigen::Vector3d>{f_hobm3} = s.f_hobm.force;
  return HOBMSIM_OK;
}

void hobmsim_coupled_free(hobmsim_coupled_series* series) { delete series; }

hobmsim_path_report* hobmsim_check_path(const hobmsim_system* system,
                                        const hobmsim_profile* profile,
                                        const double* fixed_joints, int n_fixed, double dt) {
  if (!require(system && profile && fixed_joints, "NULL argument")) return nullptr;
  return guarded_new<hobmsim_path_report>([&] {
    const Eigen::Map<const Eigen::VectorXd> fixed(fixed_joints, n_fixed);
    return check_path_feasible(system->impl, profile->impl, fixed, dt);
  });
}

int hobmsim_path_feasible(const hobmsim_path_report* report) {
  return report && report->impl.feasible ? 1 : 0;
}

size_t hobmsim_path_violation_count(const hobmsim_path_report* report) {
  return report ? report->impl.violations.size() : 0;
}

hobmsim_status hobmsim_path_violation(const hobmsim_path_report* report, size_t index, double* t,
                                      int* kind, double* measure) {
  if (!report) return fail(kNull, "NULL report");
  if (index >= report->impl.violations.size())
    return fail(HOBMSIM_ERR_INVALID, "violation index out of range");
  const PathReport::Violation& v = report->impl.violations[index];
  if (t) *t = v.t;
  if (kind) {
    switch (v.kind) {
      case PathReport::ViolationKind::lwr_singular: *kind = HOBMSIM_VIOLATION_LWR_SINGULAR; break;
      case PathReport::ViolationKind::hobm_singular:
        *kind = HOBMSIM_VIOLATION_HOBM_SINGULAR;
        break;
      case PathReport::ViolationKind::hobm_unreachable:
        *kind = HOBMSIM_VIOLATION_HOBM_UNREACHABLE;
        break;
    }
  }
  if (measure) *measure = v.measure;
  return HOBMSIM_OK;
}

void hobmsim_path_report_free(hobmsim_path_report* report) { delete report; }

/* -------------------------------------------------------------- ringdown */

void hobmsim_ringdown_defaults(hobmsim_ringdown_params* params) {
  if (!params) return;
  std::memset(params, 0, sizeof(*params));
  const RingdownConfig reference = RingdownStudy::reference().base;
  params->cable_length = reference.cable_length;
  params->payload_mass = reference.payload_mass;
  params->viscous[0] = reference.viscous[0];
  params->viscous[1] = reference.viscous[1];
  params->coulomb[0] = reference.coulomb[0];
  params->coulomb[1] = reference.coulomb[1];
  params->initial_phi[0] = reference.initial_phi[0];
  params->initial_phi[1] = reference.initial_phi[1];
  params->dt = reference.dt;
  params->duration = reference.duration;
  params->smooth_sign_eps = reference.smooth_sign_eps;
}

hobmsim_ringdown_series* hobmsim_simulate_ringdown(const hobmsim_model* arm,
                                                   const hobmsim_ringdown_params* params) {
  if (!require(arm && params, "NULL argument")) return nullptr;
  return guarded_new<hobmsim_ringdown_series>(
      [&] { return simulate_ringdown(config_from_params(arm->impl, *params)); });
}

size_t hobmsim_ringdown_size(const hobmsim_ringdown_series* series) {
  return series ? series->impl.size() : 0;
}

hobmsim_status hobmsim_ringdown_sample(const hobmsim_ringdown_series* series, size_t index,
                                       double* t, double* phi2, double* phid2, double* force3,
                                       double* energy) {
  if (!series) return fail(kNull, "NULL series");
  if (index >= series->impl.size()) return fail(HOBMSIM_ERR_INVALID, "sample index out of range");
  const RingdownSample& s = series->impl[index];
  if (t) *t = s.t;
  if (phi2) Eigen::Map<Eigen::Vector2d>{phi2} = s.phi;
  if (phid2) Eigen::Map<Eigen::Vector2d>{phid2} = s.phid;
  if (force3) Eigen::Map<Eigen::Vector3d>{force3} = s.tip_force.force;
  if (energy) *energy = s.mech_energy;
  return HOBMSIM_OK;
}

hobmsim_status hobmsim_ringdown_settling_time(const hobmsim_ringdown_series* series, double band,
                                              double* out) {
  if (!series || !out) return fail(kNull, "NULL argument");
  return guarded([&] {
    *out = settling_time(series->impl, band);
    return HOBMSIM_OK;
  });
}

hobmsim_status hobmsim_ringdown_peak_force(const hobmsim_ringdown_series* series, double* out) {
  if (!series || !out) return fail(kNull, "NULL argument");
  return guarded([&] {
    *out = peak_force(series->impl);
    return HOBMSIM_OK;
  });
}

void hobmsim_ringdown_free(hobmsim_ringdown_series* series) { delete series; }

/* ------------------------------------------------------- designed studies */

hobmsim_design* hobmsim_ccd_create(int k, const double* lows, const double* highs,
                                   int axial_kind, int n_center) {
  if (!require(lows && highs, "NULL factor bounds")) return nullptr;
  return guarded_new<hobmsim_design>([&] {
    if (k < 1) throw Error("design needs at least one factor");
    if (axial_kind != HOBMSIM_AXIAL_ROTATABLE && axial_kind != HOBMSIM_AXIAL_FACE_CENTERED)
      throw Error("axial_kind must be HOBMSIM_AXIAL_ROTATABLE or HOBMSIM_AXIAL_FACE_CENTERED");
    std::vector<FactorSpec> factors(k);
    for (int i = 0; i < k; ++i)
      factors[i] = {"f" + std::to_string(i), lows[i], highs[i]};
    const AxialKind kind =
        axial_kind == HOBMSIM_AXIAL_ROTATABLE ? AxialKind::rotatable : AxialKind::face_centered;
    return ccd_generate(factors, kind, n_center);
  });
}

int hobmsim_design_n_points(const hobmsim_design* design) {
  return design ? design->impl.n_points() : 0;
}

int hobmsim_design_n_factors(const hobmsim_design* design) {
  return design ? design->impl.n_factors() : 0;
}

double hobmsim_design_axial_distance(const hobmsim_design* design) {
  return design ? design->impl.axial_distance : 0.0;
}

hobmsim_status hobmsim_design_point(const hobmsim_design* design, int index, double* coded,
                                    double* physical) {
  if (!design) return fail(kNull, "NULL design");
  if (index < 0 || index >= design->impl.n_points())
    return fail(HOBMSIM_ERR_INVALID, "design point index out of range");
  const Eigen::VectorXd point = design->impl.points.row(index).transpose();
  if (coded) Eigen::Map<Eigen::VectorXd>(coded, point.size()) = point;
  if (physical)
    Eigen::Map<Eigen::VectorXd>(physical, point.size()) = design->impl.decode(point);
  return HOBMSIM_OK;
}

void hobmsim_design_free(hobmsim_design* design) { delete design; }

hobmsim_status hobmsim_run_experiments(const hobmsim_design* design, hobmsim_responder_fn fn,
                                       void* context, double* responses) {
  if (!design || !fn || !responses) return fail(kNull, "NULL argument");
  return guarded([&] {
    const Responder responder = [&](const Eigen::VectorXd& coded,
                                    const Eigen::VectorXd& physical) {
      double value = 0.0;
      if (fn(context, coded.data(), physical.data(), static_cast<int>(coded.size()), &value))
        throw Error("experiment callback reported a failure");
      return value;
    };
    Eigen::Map<Eigen::VectorXd>(responses, design->impl.n_points()) =
        run_experiments(design->impl, responder);
    return HOBMSIM_OK;
  });
}

hobmsim_surface* hobmsim_fit_quadratic(const hobmsim_design* design, const double* responses) {
  if (!require(design && responses, "NULL argument")) return nullptr;
  return guarded_new<hobmsim_surface>([&] {
    const Eigen::Map<const Eigen::VectorXd> y(responses, design->impl.n_points());
    return fit_quadratic(design->impl, y);
  });
}

hobmsim_surface* hobmsim_fit_quadratic_raw(int k, const double* lows, const double* highs,
                                           const double* coded_points, int n_points,
                                           const double* responses, double axial_distance) {
  if (!require(lows && highs && coded_points && responses, "NULL argument")) return nullptr;
  return guarded_new<hobmsim_surface>([&] {
    if (k < 1) throw Error("fit needs at least one factor");
    if (n_points < 1) throw Error("fit needs at least one point");
    std::vector<FactorSpec> factors(k);
    for (int i = 0; i < k; ++i)
      factors[i] = {"f" + std::to_string(i), lows[i], highs[i]};
    Eigen::MatrixXd points(n_points, k);
    for (int r = 0; r < n_points; ++r)
      for (int c = 0; c < k; ++c) points(r, c) = coded_points[r * k + c];
    const Eigen::Map<const Eigen::VectorXd> y(responses, n_points);
    return fit_quadratic(factors, points, y, axial_distance);
  });
}

int hobmsim_surface_n_factors(const hobmsim_surface* surface) {
  return surface ? surface->impl.n_factors() : 0;
}

hobmsim_status hobmsim_surface_coeffs(const hobmsim_surface* surface, double* intercept,
                                      double* linear, double* interaction, double* quadratic) {
  if (!surface) return fail(kNull, "NULL surface");
  const QuadraticModel& m = surface->impl;
  if (intercept) *intercept = m.intercept;
  if (linear) Eigen::Map<Eigen::VectorXd>(linear, m.linear.size()) = m.linear;
  if (interaction)
    Eigen::Map<Eigen::VectorXd>(interaction, m.interaction.size()) = m.interaction;
  if (quadratic) Eigen::Map<Eigen::VectorXd>(quadratic, m.quadratic.size()) = m.quadratic;
  return HOBMSIM_OK;
}

hobmsim_status hobmsim_surface_stats(const hobmsim_surface* surface, double* r_squared,
                                     double* max_residual) {
  if (!surface) return fail(kNull, "NULL surface");
  if (r_squared) *r_squared = surface->impl.r_squared;
  if (max_residual) *max_residual = surface->impl.max_residual;
  return HOBMSIM_OK;
}

hobmsim_status hobmsim_surface_predict(const hobmsim_surface* surface, const double* physical,
                                       double* value, int* extrapolated) {
  if (!surface || !physical) return fail(kNull, "NULL argument");
  return guarded([&] {
    const Eigen::Map<const Eigen::VectorXd> point(physical, surface->impl.n_factors());
    const QuadraticModel::Prediction p = surface->impl.predict(point);
    if (value) *value = p.value;
    if (extrapolated) *extrapolated = p.extrapolated ? 1 : 0;
    return HOBMSIM_OK;
  });
}

void hobmsim_surface_free(hobmsim_surface* surface) { delete surface; }

hobmsim_status hobmsim_limit_surface(const hobmsim_surface* surface, int accel_index,
                                     double effort_limit, const double* grid_a, int na,
                                     const double* grid_b, int nb, double* values,
                                     int* statuses) {
  if (!surface || !grid_a || !grid_b || !values || !statuses)
    return fail(kNull, "NULL argument");
  return guarded([&] {
    const Eigen::Map<const Eigen::VectorXd> a(grid_a, na);
    const Eigen::Map<const Eigen::VectorXd> b(grid_b, nb);
    const auto grid =
        acceleration_limit_surface(surface->impl, accel_index, effort_limit, a, b);
    for (int ia = 0; ia < na; ++ia) {
      for (int ib = 0; ib < nb; ++ib) {
        const LimitCell& cell = grid[ia][ib];
        values[ia * nb + ib] = cell.value;
        switch (cell.status) {
          case LimitStatus::limited: statuses[ia * nb + ib] = HOBMSIM_LIMIT_LIMITED; break;
          case LimitStatus::unbounded: statuses[ia * nb + ib] = HOBMSIM_LIMIT_UNBOUNDED; break;
          case LimitStatus::infeasible: statuses[ia * nb + ib] = HOBMSIM_LIMIT_INFEASIBLE; break;
        }
      }
    }
    return HOBMSIM_OK;
  });
}

/* ----------------------------------------------------- ringdown response */

hobmsim_study* hobmsim_study_create(const hobmsim_model* arm,
                                    const hobmsim_ringdown_params* params, double brake_time) {
  if (!require(arm && params, "NULL argument")) return nullptr;
  return guarded_new<hobmsim_study>([&] {
    if (!(brake_time > 0.0)) throw Error("brake_time must be positive");
    RingdownStudy study;
    study.base = config_from_params(arm->impl, *params);
    study.brake_time = brake_time;
    return study;
  });
}

hobmsim_study* hobmsim_study_reference(void) {
  return guarded_new<hobmsim_study>([] { return RingdownStudy::reference(); });
}

hobmsim_status hobmsim_study_eval(const hobmsim_study* study, const double* physical3,
                                  double* peak) {
  if (!study || !physical3 || !peak) return fail(kNull, "NULL argument");
  return guarded([&] {
    *peak = study->impl(Eigen::Map<const Eigen::Vector3d>(physical3));
    return HOBMSIM_OK;
  });
}

void hobmsim_study_default_factors(double* lows3, double* highs3) {
  if (!lows3 || !highs3) return;
  const std::vector<FactorSpec> factors = default_study_factors();
  for (int i = 0; i < 3; ++i) {
    lows3[i] = factors[i].low;
    highs3[i] = factors[i].high;
  }
}

const char* hobmsim_study_factor_name(int index) {
  static const std::vector<FactorSpec> factors = default_study_factors();
  if (index < 0 || index >= static_cast<int>(factors.size())) return "";
  return factors[index].name.c_str();
}

void hobmsim_study_free(hobmsim_study* study) { delete study; }

}  // extern "C"
