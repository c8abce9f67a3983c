#include "hobm/dynamics.hpp"
#include "hobm/kinematics.hpp"
#include "hobm/presets.hpp"

#include "oracles/lagrangian.hpp"
#include "support/random_states.hpp"

#include "doctest.h"

#include <cmath>
#include <limits>

using namespace hobm;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Horizontal bar on a horizontal hinge: gravity torque m g l at the hinge.
RobotModel hinged_bar() {
  RobotModel m;
  m.chain.base_pose = RigidTransform::rot_x(-kPi / 2.0);
  m.chain.rows = {{0.0, 0.5, 0.0, 0.0, JointType::revolute}};
  LinkInertia link;
  link.mass = 2.0;
  link.com = Eigen::Vector3d::Zero();  // at the frame origin, 0.5 m out
  m.links = {link};
  return m;
}

}  // namespace

TEST_SUITE("dynamics") {

TEST_CASE("hinged bar holds m g l against gravity") {
  const RobotModel bar = hinged_bar();
  const Eigen::VectorXd tau = gravity_vector(bar, Eigen::VectorXd::Zero(1));
  CHECK(std::abs(tau[0]) == doctest::Approx(2.0 * 9.81 * 0.5).epsilon(1e-12));
}

TEST_CASE("oracle self-check: analytic mass matrix matches FD kinetic energy") {
  testutil::StateSampler sampler(404);
  for (const char* name : {"lwr-table2", "hobm-table1"}) {
    const RobotModel model = make_preset(name);
    for (int trial = 0; trial < 5; ++trial) {
      const JointState s = sampler.state(model.chain);
      const double quadratic = 0.5 * s.qd.dot(oracle::mass_matrix(model, s.q) * s.qd);
      const double fd = oracle::kinetic_energy_fd(model, s.q, s.qd);
      CHECK(quadratic == doctest::Approx(fd).epsilon(1e-6));
    }
  }
}

TEST_CASE("inverse dynamics agrees with the Lagrangian oracle") {
  testutil::StateSampler sampler(505);
  for (const char* name : {"lwr-table2", "hobm-table1"}) {
    const RobotModel model = make_preset(name);
    for (int trial = 0; trial < 20; ++trial) {
      const JointState s = sampler.state(model.chain);
      const Wrench w = sampler.wrench();
      const Eigen::VectorXd recursive = inverse_dynamics(model, s, w);
      const Eigen::VectorXd reference = oracle::inverse_dynamics(model, s.q, s.qd, s.qdd, w);
      CHECK((recursive - reference).cwiseAbs().maxCoeff() < 1e-6);
    }
  }
}

TEST_CASE("decomposition closure: tau = M qdd + bias") {
  testutil::StateSampler sampler(606);
  for (const char* name : {"lwr-table2", "hobm-table1"}) {
    const RobotModel model = make_preset(name);
    for (int trial = 0; trial < 10; ++trial) {
      const JointState s = sampler.state(model.chain);
      const Eigen::VectorXd direct = inverse_dynamics(model, s);
      const Eigen::VectorXd split =
          mass_matrix(model, s.q) * s.qdd + bias_forces(model, s.q, s.qd);
      CHECK((direct - split).cwiseAbs().maxCoeff() < 1e-9);
    }
  }
}

TEST_CASE("mass matrix is symmetric positive definite") {
  testutil::StateSampler sampler(707);
  for (const char* name : {"lwr-table2", "hobm-table1"}) {
    const RobotModel model = make_preset(name);
    for (int trial = 0; trial < 10; ++trial) {
      const Eigen::VectorXd q = sampler.positions(model.chain);
      const Eigen::MatrixXd m = mass_matrix(model, q);
      CHECK((m - m.transpose()).cwiseAbs().maxCoeff() < 1e-9);
      CHECK(Eigen::LLT<Eigen::MatrixXd>(m).info() == Eigen::Success);
    }
  }
}

TEST_CASE("gravity vector is the zero-rate bias") {
  testutil::StateSampler sampler(808);
  const RobotModel model = lwr_table2();
  const Eigen::VectorXd q = sampler.positions(model.chain);
  const Eigen::VectorXd g = gravity_vector(model, q);
  CHECK((g - bias_forces(model, q, Eigen::VectorXd::Zero(6))).cwiseAbs().maxCoeff() == 0.0);
  CHECK((g - oracle::gravity(model, q)).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("end-effector wrench enters linearly") {
  testutil::StateSampler sampler(909);
  const RobotModel model = lwr_table2();
  const JointState s = sampler.state(model.chain);
  const Wrench wa = sampler.wrench();
  const Wrench wb = sampler.wrench();
  Wrench sum;
  sum.force = wa.force + wb.force;
  sum.moment = wa.moment + wb.moment;

  const Eigen::VectorXd free = inverse_dynamics(model, s);
  const Eigen::VectorXd ta = inverse_dynamics(model, s, wa) - free;
  const Eigen::VectorXd tb = inverse_dynamics(model, s, wb) - free;
  const Eigen::VectorXd tsum = inverse_dynamics(model, s, sum) - free;
  CHECK((tsum - ta - tb).cwiseAbs().maxCoeff() < 1e-9);

  // and the increment equals J^T w
  Vector6d w6;
  w6 << wa.force, wa.moment;
  const Eigen::VectorXd reflected = geometric_jacobian(model.chain, s.q).transpose() * w6;
  CHECK((ta - reflected).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("power balance along a free motion") {
  // With gravity off and no wrench, actuator power must equal the kinetic
  // energy rate along any smooth trajectory.
  RobotModel model = lwr_table2();
  model.gravity.setZero();
  const double h = 1e-5;
  Eigen::VectorXd amp(6), phase(6);
  amp << 0.9, -0.7, 0.5, 1.1, -0.4, 0.8;
  phase << 0.1, 0.4, -0.3, 0.9, 0.0, -0.6;

  for (double t : {0.3, 0.9, 1.7}) {
    const auto eval_q = [&](double tt) {
      return Eigen::VectorXd{amp.array() * (tt + phase.array()).sin()};
    };
    JointState s;
    s.q = eval_q(t);
    s.qd = amp.array() * (t + phase.array()).cos();
    s.qdd = -amp.array() * (t + phase.array()).sin();
    const Eigen::VectorXd tau = inverse_dynamics(model, s);
    const double power = s.qd.dot(tau);

    const auto energy = [&](double tt) {
      JointState st;
      st.q = eval_q(tt);
      st.qd = amp.array() * (tt + phase.array()).cos();
      return 0.5 * st.qd.dot(mass_matrix(model, st.q) * st.qd);
    };
    const double de = (energy(t + h) - energy(t - h)) / (2.0 * h);
    CHECK(power == doctest::Approx(de).epsilon(1e-3));
  }
}

TEST_CASE("point kinematics matches jacobian products") {
  testutil::StateSampler sampler(111);
  const RobotModel model = lwr_table2();
  const JointState s = sampler.state(model.chain);
  const PointKinematics pk = ee_point_kinematics(model.chain, s);

  const Eigen::MatrixXd jac = geometric_jacobian(model.chain, s.q);
  const Vector6d twist = jac * s.qd;
  CHECK((pk.velocity - twist.head<3>()).norm() < 1e-10);
  CHECK((pk.angular_velocity - twist.tail<3>()).norm() < 1e-10);

  const Vector6d accel = jac * s.qdd + jacobian_dot(model.chain, s.q, s.qd) * s.qd;
  CHECK((pk.acceleration - accel.head<3>()).norm() < 1e-9);
  CHECK((pk.angular_acceleration - accel.tail<3>()).norm() < 1e-9);

  CHECK((pk.position - forward_kinematics(model.chain, s.q).back().translation).norm() == 0.0);
}

TEST_CASE("state validation") {
  const RobotModel model = lwr_table2();
  JointState s = JointState::zero(6);
  s.qd = Eigen::VectorXd::Zero(5);
  CHECK_THROWS_AS(inverse_dynamics(model, s), DimensionError);
  s = JointState::zero(6);
  s.q[2] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(inverse_dynamics(model, s), NumericError);
}

TEST_CASE("preset inertia tensors satisfy the triangle inequalities") {
  for (const char* name : {"lwr-table2", "hobm-table1"}) {
    const RobotModel model = make_preset(name);
    validate_model(model);
    for (const LinkInertia& link : model.links) {
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(link.inertia);
      const Eigen::Vector3d p = eig.eigenvalues();
      CHECK(p[0] + p[1] >= p[2] - 1e-12);
      CHECK(p[0] + p[2] >= p[1] - 1e-12);
      CHECK(p[1] + p[2] >= p[0] - 1e-12);
    }
  }
}

}  // TEST_SUITE
