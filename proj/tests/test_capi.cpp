#include "hobmsim.h"

#include "hobm/coupling.hpp"
#include "hobm/dynamics.hpp"
#include "hobm/kinematics.hpp"
#include "hobm/presets.hpp"
#include "hobm/trajectory.hpp"

#include "support/random_states.hpp"

#include "doctest.h"

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

namespace {

constexpr double kPi = 3.14159265358979323846;

struct ModelGuard {
  hobmsim_model* ptr;
  explicit ModelGuard(hobmsim_model* p) : ptr(p) {}
  ~ModelGuard() { hobmsim_model_free(ptr); }
  ModelGuard(const ModelGuard&) = delete;
  ModelGuard& operator=(const ModelGuard&) = delete;
};

int quadratic_responder(void*, const double* coded, const double*, int k, double* out) {
  if (k != 3) return 1;
  *out = 50.0 + 10.0 * coded[0] + 6.0 * coded[1] + 30.0 * coded[2] +
         4.0 * coded[0] * coded[2] + 3.0 * coded[1] * coded[2] +
         2.0 * coded[1] * coded[1] + 5.0 * coded[2] * coded[2];
  return 0;
}

int failing_responder(void*, const double*, const double*, int, double*) { return 1; }

}  // namespace

TEST_SUITE("capi") {

TEST_CASE("version and error strings are always available") {
  CHECK(hobmsim_version() != nullptr);
  CHECK(hobmsim_last_error() != nullptr);
}

TEST_CASE("presets load by name") {
  hobmsim_model* lwr = hobmsim_model_preset("lwr-table2");
  REQUIRE(lwr != nullptr);
  CHECK(hobmsim_model_dof(lwr) == 6);
  hobmsim_model_free(lwr);

  hobmsim_model* arm = hobmsim_model_preset("hobm-table1-arm");
  REQUIRE(arm != nullptr);
  CHECK(hobmsim_model_dof(arm) == 2);
  hobmsim_model_free(arm);

  CHECK(hobmsim_model_preset("no-such-model") == nullptr);
  CHECK(std::strlen(hobmsim_last_error()) > 0);
  CHECK(hobmsim_model_preset(nullptr) == nullptr);
}

TEST_CASE("forward kinematics matches the library") {
  ModelGuard lwr(hobmsim_model_preset("lwr-table2"));
  REQUIRE(lwr.ptr != nullptr);

  std::vector<double> q(6, 0.0);
  std::vector<double> poses(6 * 12);
  REQUIRE(hobmsim_fk(lwr.ptr, q.data(), 6, poses.data()) == HOBMSIM_OK);

  // frozen zero-pose grip position of the preset
  const double* ee = poses.data() + 5 * 12;
  CHECK(ee[9] == doctest::Approx(-1.184).epsilon(1e-12));
  CHECK(ee[10] == doctest::Approx(-0.256141).epsilon(1e-12));
  CHECK(ee[11] == doctest::Approx(0.0116).epsilon(1e-12));

  // arbitrary configuration against the C++ core
  testutil::StateSampler sampler(77);
  const hobm::RobotModel core = hobm::lwr_table2();
  for (int trial = 0; trial < 5; ++trial) {
    const Eigen::VectorXd joints = sampler.positions(core.chain);
    REQUIRE(hobmsim_fk(lwr.ptr, joints.data(), 6, poses.data()) == HOBMSIM_OK);
    const auto frames = hobm::forward_kinematics(core.chain, joints);
    for (int i = 0; i < 6; ++i) {
      const double* row = poses.data() + 12 * i;
      for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c)
          CHECK(row[3 * r + c] == doctest::Approx(frames[i].rotation(r, c)).epsilon(1e-14));
        CHECK(row[9 + r] == doctest::Approx(frames[i].translation[r]).epsilon(1e-14));
      }
    }
  }

  // dimension mismatch surfaces as a status, not an abort
  CHECK(hobmsim_fk(lwr.ptr, q.data(), 3, poses.data()) == HOBMSIM_ERR_DIMENSION);
  CHECK(hobmsim_fk(nullptr, q.data(), 6, poses.data()) == HOBMSIM_ERR_NULL);
}

TEST_CASE("jacobian, singularity measure, and dynamics round-trip the core") {
  ModelGuard lwr(hobmsim_model_preset("lwr-table2"));
  REQUIRE(lwr.ptr != nullptr);
  const hobm::RobotModel core = hobm::lwr_table2();
  testutil::StateSampler sampler(78);
  const hobm::JointState state = sampler.state(core.chain);

  std::vector<double> jac(6 * 6);
  REQUIRE(hobmsim_jacobian(lwr.ptr, state.q.data(), 6, jac.data()) == HOBMSIM_OK);
  const Eigen::MatrixXd expected = hobm::geometric_jacobian(core.chain, state.q);
  for (int r = 0; r < 6; ++r)
    for (int c = 0; c < 6; ++c)
      CHECK(jac[r * 6 + c] == doctest::Approx(expected(r, c)).epsilon(1e-14));

  double measure = -1.0;
  REQUIRE(hobmsim_singularity_measure(lwr.ptr, state.q.data(), 6, &measure) == HOBMSIM_OK);
  CHECK(measure == doctest::Approx(hobm::singularity_measure(expected)).epsilon(1e-14));

  const hobm::Wrench wrench = sampler.wrench();
  double w6[6];
  Eigen::Map<Eigen::Vector3d>{w6} = wrench.force;
  Eigen::Map<Eigen::Vector3d>{w6 + 3} = wrench.moment;
  std::vector<double> tau(6);
  REQUIRE(hobmsim_inverse_dynamics(lwr.ptr, state.q.data(), state.qd.data(), state.qdd.data(),
                                   6, w6, tau.data()) == HOBMSIM_OK);
  const Eigen::VectorXd expected_tau = hobm::inverse_dynamics(core, state, wrench);
  for (int i = 0; i < 6; ++i)
    CHECK(tau[i] == doctest::Approx(expected_tau[i]).epsilon(1e-12));
}

TEST_CASE("models build from raw arrays") {
  // planar 2R, unit point masses at the link tips
  const double dh[8] = {0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0};
  const int types[2] = {HOBMSIM_JOINT_REVOLUTE, HOBMSIM_JOINT_REVOLUTE};
  const double masses[2] = {1.0, 1.0};
  const double coms[6] = {0, 0, 0, 0, 0, 0};
  const double inertias[18] = {0};
  hobmsim_model* arm = hobmsim_model_create(2, dh, types, masses, coms, inertias, nullptr);
  REQUIRE(arm != nullptr);
  CHECK(hobmsim_model_dof(arm) == 2);

  const double q[2] = {0.0, kPi / 2.0};
  double poses[24];
  REQUIRE(hobmsim_fk(arm, q, 2, poses) == HOBMSIM_OK);
  CHECK(poses[12 + 9] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(poses[12 + 10] == doctest::Approx(1.0).epsilon(1e-14));

  // re-basing moves the tip
  const double rot[9] = {1, 0, 0, 0, 1, 0, 0, 0, 1};
  const double shift[3] = {5.0, 0.0, 0.0};
  REQUIRE(hobmsim_model_set_base(arm, rot, shift) == HOBMSIM_OK);
  REQUIRE(hobmsim_fk(arm, q, 2, poses) == HOBMSIM_OK);
  CHECK(poses[12 + 9] == doctest::Approx(6.0).epsilon(1e-14));
  hobmsim_model_free(arm);

  // invalid inertial data is rejected
  const double bad_mass[2] = {-1.0, 1.0};
  CHECK(hobmsim_model_create(2, dh, types, bad_mass, coms, inertias, nullptr) == nullptr);

  // non-orthonormal base rotation is rejected
  hobmsim_model* again = hobmsim_model_create(2, dh, types, masses, coms, inertias, nullptr);
  REQUIRE(again != nullptr);
  const double skew[9] = {2, 0, 0, 0, 1, 0, 0, 0, 1};
  CHECK(hobmsim_model_set_base(again, skew, shift) == HOBMSIM_ERR_INVALID);
  hobmsim_model_free(again);
}

TEST_CASE("profiles evaluate like the core") {
  hobmsim_profile* sweep =
      hobmsim_profile_create(-40.0 * kPi / 180.0, 40.0 * kPi / 180.0, 0.2, 2.0);
  REQUIRE(sweep != nullptr);
  CHECK(hobmsim_profile_total_time(sweep) == 2.0);

  const hobm::TrapezoidalProfile core = hobm::reference_sweep();
  for (double t : {0.0, 0.1, 0.2, 1.0, 1.9, 2.0}) {
    double pos = 0, vel = 0, acc = 0;
    REQUIRE(hobmsim_profile_eval(sweep, t, &pos, &vel, &acc) == HOBMSIM_OK);
    CHECK(pos == doctest::Approx(core.position(t)).epsilon(1e-15));
    CHECK(vel == doctest::Approx(core.velocity(t)).epsilon(1e-15));
    CHECK(acc == doctest::Approx(core.acceleration(t)).epsilon(1e-15));
  }
  hobmsim_profile_free(sweep);

  CHECK(hobmsim_profile_create(0.0, 1.0, 0.0, 2.0) == nullptr);
  CHECK(hobmsim_profile_create(0.0, 1.0, 1.5, 2.0) == nullptr);
}

TEST_CASE("coupled sweep through the shared boundary") {
  hobmsim_system* system = hobmsim_system_default(50.0);
  REQUIRE(system != nullptr);
  hobmsim_profile* sweep =
      hobmsim_profile_create(-40.0 * kPi / 180.0, 40.0 * kPi / 180.0, 0.2, 2.0);
  REQUIRE(sweep != nullptr);
  const Eigen::VectorXd fixed = hobm::reference_fixed_joints();

  hobmsim_coupled_series* series =
      hobmsim_simulate_coupled(system, sweep, fixed.data(), 5, 0.01);
  REQUIRE(series != nullptr);
  CHECK(hobmsim_coupled_size(series) == 201);
  CHECK(hobmsim_coupled_dof(series) == 6);

  double t = 0, theta[6], phi[3], tau_lm[6], tau_total[6], f[3];
  REQUIRE(hobmsim_coupled_sample(series, 100, &t, theta, phi, tau_lm, tau_total, f) ==
          HOBMSIM_OK);
  CHECK(t == doctest::Approx(1.0).epsilon(1e-12));

  // the reflected effort difference reconstructs from the grip force
  std::vector<double> jac(36);
  ModelGuard lwr(hobmsim_model_preset("lwr-table2"));
  REQUIRE(hobmsim_jacobian(lwr.ptr, theta, 6, jac.data()) == HOBMSIM_OK);
  for (int j = 0; j < 6; ++j) {
    double reflected = 0.0;
    for (int r = 0; r < 3; ++r) reflected += jac[r * 6 + j] * f[r];
    CHECK(tau_total[j] - tau_lm[j] == doctest::Approx(reflected).epsilon(1e-9));
  }
  CHECK(hobmsim_coupled_sample(series, 9999, &t, nullptr, nullptr, nullptr, nullptr, nullptr) ==
        HOBMSIM_ERR_INVALID);
  hobmsim_coupled_free(series);

  // feasibility scan agrees with a clean run
  hobmsim_path_report* report = hobmsim_check_path(system, sweep, fixed.data(), 5, 0.01);
  REQUIRE(report != nullptr);
  CHECK(hobmsim_path_feasible(report) == 1);
  CHECK(hobmsim_path_violation_count(report) == 0);
  hobmsim_path_report_free(report);

  // an out-of-reach mounting makes the sweep fail with a timed report
  const double rot[9] = {1, 0, 0, 0, 1, 0, 0, 0, 1};
  const double far[3] = {6.0, 0.0, 0.85};
  REQUIRE(hobmsim_system_set_base_offset(system, rot, far) == HOBMSIM_OK);
  CHECK(hobmsim_simulate_coupled(system, sweep, fixed.data(), 5, 0.01) == nullptr);
  CHECK(std::string(hobmsim_last_error()).find("t=") != std::string::npos);
  report = hobmsim_check_path(system, sweep, fixed.data(), 5, 0.01);
  REQUIRE(report != nullptr);
  CHECK(hobmsim_path_feasible(report) == 0);
  CHECK(hobmsim_path_violation_count(report) > 0);
  int kind = -1;
  double measure = -1.0;
  REQUIRE(hobmsim_path_violation(report, 0, &t, &kind, &measure) == HOBMSIM_OK);
  CHECK(kind == HOBMSIM_VIOLATION_HOBM_UNREACHABLE);
  CHECK(measure > 2.9);
  hobmsim_path_report_free(report);

  hobmsim_profile_free(sweep);
  hobmsim_system_free(system);
}

TEST_CASE("ringdown through the shared boundary") {
  ModelGuard arm(hobmsim_model_preset("hobm-table1-arm"));
  REQUIRE(arm.ptr != nullptr);

  hobmsim_ringdown_params params;
  hobmsim_ringdown_defaults(&params);
  CHECK(params.cable_length == 2.0);
  CHECK(params.payload_mass == 50.0);
  CHECK(params.duration == 10.0);

  // released at rest at the anchor: nothing moves, zero force throughout
  params.duration = 1.0;
  hobmsim_ringdown_series* still = hobmsim_simulate_ringdown(arm.ptr, &params);
  REQUIRE(still != nullptr);
  CHECK(hobmsim_ringdown_size(still) == 1001);
  double peak = -1.0;
  REQUIRE(hobmsim_ringdown_peak_force(still, &peak) == HOBMSIM_OK);
  CHECK(peak == 0.0);
  double settling = -1.0;
  REQUIRE(hobmsim_ringdown_settling_time(still, 0.01, &settling) == HOBMSIM_OK);
  CHECK(settling == 0.0);
  hobmsim_ringdown_free(still);

  // displaced anchor rings with finite samples
  params.has_anchor = 1;
  params.anchor_xy[0] = 0.5;
  params.anchor_xy[1] = 2.5;
  params.duration = 2.0;
  hobmsim_ringdown_series* rung = hobmsim_simulate_ringdown(arm.ptr, &params);
  REQUIRE(rung != nullptr);
  double t = -1.0, phi[2], phid[2], force[3], energy = -1.0;
  REQUIRE(hobmsim_ringdown_sample(rung, 500, &t, phi, phid, force, &energy) == HOBMSIM_OK);
  CHECK(t == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::isfinite(phi[0]));
  CHECK(std::isfinite(phid[1]));
  CHECK(force[2] == 0.0);
  CHECK(energy > 0.0);
  REQUIRE(hobmsim_ringdown_peak_force(rung, &peak) == HOBMSIM_OK);
  CHECK(peak > 0.0);
  hobmsim_ringdown_free(rung);

  params.dt = 0.0;
  CHECK(hobmsim_simulate_ringdown(arm.ptr, &params) == nullptr);
}

TEST_CASE("designed experiments through the shared boundary") {
  const double lows[3] = {0.0, 10.0, 0.5};
  const double highs[3] = {5.0, 100.0, 5.0};
  hobmsim_design* design = hobmsim_ccd_create(3, lows, highs, HOBMSIM_AXIAL_ROTATABLE, 6);
  REQUIRE(design != nullptr);
  CHECK(hobmsim_design_n_points(design) == 20);
  CHECK(hobmsim_design_n_factors(design) == 3);
  CHECK(hobmsim_design_axial_distance(design) ==
        doctest::Approx(std::pow(2.0, 0.75)).epsilon(1e-14));

  double coded[3], physical[3];
  REQUIRE(hobmsim_design_point(design, 0, coded, physical) == HOBMSIM_OK);
  CHECK(coded[0] == -1.0);
  CHECK(physical[0] == 0.0);
  CHECK(physical[1] == 10.0);
  CHECK(physical[2] == 0.5);
  CHECK(hobmsim_design_point(design, 99, coded, physical) == HOBMSIM_ERR_INVALID);

  std::vector<double> responses(20);
  REQUIRE(hobmsim_run_experiments(design, quadratic_responder, nullptr, responses.data()) ==
          HOBMSIM_OK);
  std::vector<double> scratch(20);
  CHECK(hobmsim_run_experiments(design, failing_responder, nullptr, scratch.data()) ==
        HOBMSIM_ERR_INVALID);

  hobmsim_surface* surface = hobmsim_fit_quadratic(design, responses.data());
  REQUIRE(surface != nullptr);
  CHECK(hobmsim_surface_n_factors(surface) == 3);
  double intercept = 0, linear[3], interaction[3], quadratic[3];
  REQUIRE(hobmsim_surface_coeffs(surface, &intercept, linear, interaction, quadratic) ==
          HOBMSIM_OK);
  CHECK(intercept == doctest::Approx(50.0).epsilon(1e-9));
  CHECK(linear[2] == doctest::Approx(30.0).epsilon(1e-9));
  CHECK(interaction[1] == doctest::Approx(4.0).epsilon(1e-9));  // pair (0,2)
  CHECK(quadratic[2] == doctest::Approx(5.0).epsilon(1e-9));
  double r2 = 0, resid = 1;
  REQUIRE(hobmsim_surface_stats(surface, &r2, &resid) == HOBMSIM_OK);
  CHECK(r2 >= 1.0 - 1e-10);
  CHECK(resid < 1e-8);

  // prediction and extrapolation flag
  const double mid[3] = {2.5, 55.0, 2.75};
  double value = 0;
  int extrapolated = -1;
  REQUIRE(hobmsim_surface_predict(surface, mid, &value, &extrapolated) == HOBMSIM_OK);
  CHECK(value == doctest::Approx(50.0).epsilon(1e-9));
  CHECK(extrapolated == 0);
  const double outside[3] = {2.5, 55.0, 25.0};
  REQUIRE(hobmsim_surface_predict(surface, outside, &value, &extrapolated) == HOBMSIM_OK);
  CHECK(extrapolated == 1);

  // closed-form acceleration limit at the payload midpoint
  const double grid_a[1] = {2.5};
  const double grid_b[1] = {55.0};
  double cell = 0;
  int status = -1;
  REQUIRE(hobmsim_limit_surface(surface, 2, 80.0, grid_a, 1, grid_b, 1, &cell, &status) ==
          HOBMSIM_OK);
  CHECK(status == HOBMSIM_LIMIT_LIMITED);
  CHECK(cell == doctest::Approx(2.75 + 2.25 * (std::sqrt(15.0) - 3.0)).epsilon(1e-8));
  REQUIRE(hobmsim_limit_surface(surface, 2, 120.0, grid_a, 1, grid_b, 1, &cell, &status) ==
          HOBMSIM_OK);
  CHECK(status == HOBMSIM_LIMIT_UNBOUNDED);
  CHECK(cell == 5.0);

  hobmsim_surface_free(surface);
  hobmsim_design_free(design);

  // rank-deficient raw fits are refused
  std::vector<double> same(12 * 3, 1.0);
  std::vector<double> y(12, 0.0);
  CHECK(hobmsim_fit_quadratic_raw(3, lows, highs, same.data(), 12, y.data(), 1.0) == nullptr);
}

TEST_CASE("ringdown study factors and evaluation") {
  double lows[3], highs[3];
  hobmsim_study_default_factors(lows, highs);
  CHECK(lows[0] == 0.0);
  CHECK(highs[0] == 5.0);
  CHECK(lows[1] == 10.0);
  CHECK(highs[1] == 100.0);
  CHECK(lows[2] == 0.5);
  CHECK(highs[2] == 5.0);
  CHECK(std::strlen(hobmsim_study_factor_name(0)) > 0);
  CHECK(std::strlen(hobmsim_study_factor_name(7)) == 0);

  hobmsim_study* study = hobmsim_study_reference();
  REQUIRE(study != nullptr);
  const double point[3] = {2.5, 55.0, 2.75};
  double peak = 0.0;
  REQUIRE(hobmsim_study_eval(study, point, &peak) == HOBMSIM_OK);
  CHECK(peak > 0.0);
  CHECK(std::isfinite(peak));
  hobmsim_study_free(study);
}

TEST_CASE("default base offset getter matches the default system") {
  double rot[9], trans[3];
  hobmsim_default_base_offset(rot, trans);
  const hobm::RigidTransform expected = hobm::default_hobm_base_offset();
  for (int r = 0; r < 3; ++r) {
    CHECK(trans[r] == expected.translation[r]);
    for (int c = 0; c < 3; ++c) CHECK(rot[3 * r + c] == expected.rotation(r, c));
  }
}

TEST_CASE("free functions ignore NULL") {
  hobmsim_model_free(nullptr);
  hobmsim_profile_free(nullptr);
  hobmsim_system_free(nullptr);
  hobmsim_coupled_free(nullptr);
  hobmsim_path_report_free(nullptr);
  hobmsim_ringdown_free(nullptr);
  hobmsim_design_free(nullptr);
  hobmsim_surface_free(nullptr);
  hobmsim_study_free(nullptr);
  CHECK(hobmsim_coupled_size(nullptr) == 0);
  CHECK(hobmsim_model_dof(nullptr) == 0);
}

}  // TEST_SUITE
