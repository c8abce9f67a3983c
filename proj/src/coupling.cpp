#include "hobm/coupling.hpp"

#include "hobm/dynamics.hpp"
#include "hobm/kinematics.hpp"

#include <algorithm>
#include <cmath>

namespace hobm {

namespace {

void require_canonical_hobm(const RobotModel& hobm, const char* what) {
  const auto& rows = hobm.chain.rows;
  const bool shape_ok = rows.size() == 3 && rows[0].joint_type == JointType::revolute &&
                        rows[1].joint_type == JointType::revolute &&
                        rows[2].joint_type == JointType::prismatic && rows[0].alpha == 0.0 &&
                        rows[1].alpha == 0.0 && rows[0].a != 0.0 && rows[1].a != 0.0;
  if (!shape_ok)
    throw Error(std::string(what) +
                ": balancer must be two planar revolute rows plus a prismatic row");
}

Eigen::Matrix3d positional_block(const RobotModel& hobm, const Eigen::Vector3d& phi) {
  if (hobm.dof() != 3) throw DimensionError("balancer chain must have 3 dof");
  return geometric_jacobian(hobm.chain, phi).topRows<3>();
}

Eigen::Matrix3d checked_positional_block(const RobotModel& hobm, const Eigen::Vector3d& phi,
                                         double tolerance) {
  const Eigen::Matrix3d jac = positional_block(hobm, phi);
  const double measure = std::abs(jac.determinant());
  if (measure < tolerance) throw SingularityError(RobotTag::hobm, measure);
  return jac;
}

}  // namespace

RobotModel hobm_in_world(const CoupledSystem& system) {
  RobotModel placed = system.hobm;
  placed.chain.base_pose = system.hobm_base_offset * system.hobm.chain.base_pose;
  return placed;
}

Vector6d payload_twist(const RobotModel& lwr, const Eigen::VectorXd& theta,
                       const Eigen::VectorXd& thetad) {
  if (thetad.size() != theta.size())
    throw DimensionError("payload_twist: theta and thetad sizes differ");
  return geometric_jacobian(lwr.chain, theta) * thetad;
}

Eigen::Vector3d hobm_follow(const RobotModel& hobm, const Eigen::Vector3d& payload_position,
                            bool elbow_positive, double tolerance) {
  require_canonical_hobm(hobm, "hobm_follow");
  const auto& rows = hobm.chain.rows;
  const double l1 = rows[0].a;
  const double l2 = rows[1].a;

  const Eigen::Vector3d local = hobm.chain.base_pose.inverse() * payload_position;
  const double radius = std::hypot(local.x(), local.y());

  double c2 = (radius * radius - l1 * l1 - l2 * l2) / (2.0 * l1 * l2);
  if (std::abs(c2) > 1.0 + 1e-9) throw UnreachableError(radius);
  c2 = std::clamp(c2, -1.0, 1.0);
  const double s2 = (elbow_positive ? 1.0 : -1.0) * std::sqrt(1.0 - c2 * c2);

  const double measure = std::abs(l1 * l2 * s2);
  if (measure < tolerance) throw SingularityError(RobotTag::hobm, measure);

  const double phi2 = std::atan2(s2, c2);
  const double phi1 =
      std::atan2(local.y(), local.x()) - std::atan2(l2 * s2, l1 + l2 * c2);

  Eigen::Vector3d q;
  q << phi1 - rows[0].theta_offset, phi2 - rows[1].theta_offset, local.z() - rows[2].d;
  return q;
}

Eigen::Vector3d hobm_joint_rates(const RobotModel& hobm, const Eigen::Vector3d& phi,
                                 const Eigen::Vector3d& payload_velocity, double tolerance) {
  const Eigen::Matrix3d jac = checked_positional_block(hobm, phi, tolerance);
  return jac.partialPivLu().solve(payload_velocity);
}

Eigen::Vector3d hobm_joint_accels(const RobotModel& hobm, const Eigen::Vector3d& phi,
                                  const Eigen::Vector3d& phid,
                                  const Eigen::Vector3d& payload_acceleration,
                                  double tolerance) {
  const Eigen::Matrix3d jac = checked_positional_block(hobm, phi, tolerance);
  const Eigen::Matrix3d jdot = jacobian_dot(hobm.chain, phi, phid).topRows<3>();
  return jac.partialPivLu().solve(payload_acceleration - jdot * phid);
}

Eigen::Vector3d hobm_inertial_load(const RobotModel& hobm, const Eigen::Vector3d& phi,
                                   const Eigen::Vector3d& phid, const Eigen::Vector3d& phidd,
                                   double payload_mass) {
  if (hobm.dof() != 3) throw DimensionError("balancer chain must have 3 dof");
  JointState moving;
  moving.q = phi;
  moving.qd = phid;
  moving.qdd = phidd;
  const PointKinematics tip = ee_point_kinematics(hobm.chain, moving);

  // Tip wrench on the payload side: the balancer carries the payload weight
  // plus its inertial reaction. The same static weight is subtracted again at
  // the rest state, leaving only the motion-induced extra effort.
  Wrench moving_wrench;
  moving_wrench.force = payload_mass * (tip.acceleration - hobm.gravity);
  const Eigen::VectorXd tau_moving = inverse_dynamics(hobm, moving, moving_wrench);

  JointState rest = JointState::zero(3);
  rest.q = phi;
  Wrench rest_wrench;
  rest_wrench.force = payload_mass * -hobm.gravity;
  const Eigen::VectorXd tau_rest = inverse_dynamics(hobm, rest, rest_wrench);

  return tau_moving - tau_rest;
}

Wrench payload_wrench(const RobotModel& hobm, const Eigen::Vector3d& phi,
                      const Eigen::Vector3d& tau_hobm, double tolerance) {
  const Eigen::Matrix3d jac = checked_positional_block(hobm, phi, tolerance);
  Wrench w;
  w.force = jac.transpose().partialPivLu().solve(tau_hobm);
  return w;
}

CoupledSample coupled_torques(const CoupledSystem& system, const Eigen::VectorXd& theta,
                              const Eigen::VectorXd& thetad, const Eigen::VectorXd& thetadd) {
  if (system.lwr.dof() != 6) throw DimensionError("coupled system expects a 6-dof robot");
  JointState state;
  state.q = theta;
  state.qd = thetad;
  state.qdd = thetadd;

  const Eigen::MatrixXd jac_lm = geometric_jacobian(system.lwr.chain, theta);
  const double measure_lm = std::abs(jac_lm.determinant());
  if (measure_lm < system.singularity_tolerance)
    throw SingularityError(RobotTag::lwr, measure_lm);

  const RobotModel balancer = hobm_in_world(system);
  const PointKinematics grip = ee_point_kinematics(system.lwr.chain, state);

  const Eigen::Vector3d phi = hobm_follow(balancer, grip.position, system.elbow_positive,
                                          system.singularity_tolerance);
  const Eigen::Vector3d phid =
      hobm_joint_rates(balancer, phi, grip.velocity, system.singularity_tolerance);
  const Eigen::Vector3d phidd = hobm_joint_accels(balancer, phi, phid, grip.acceleration,
                                                  system.singularity_tolerance);

  const Eigen::Vector3d tau_hobm =
      hobm_inertial_load(balancer, phi, phid, phidd, system.payload_mass);

  CoupledSample sample;
  sample.theta = state;
  sample.phi.q = phi;
  sample.phi.qd = phid;
  sample.phi.qdd = phidd;
  sample.f_hobm = payload_wrench(balancer, phi, tau_hobm, system.singularity_tolerance);
  sample.tau_lm = inverse_dynamics(system.lwr, state);

  Vector6d reflected;
  reflected << sample.f_hobm.force, sample.f_hobm.moment;
  sample.tau_total = sample.tau_lm + jac_lm.transpose() * reflected;
  return sample;
}

namespace {

Eigen::VectorXd assemble_joints(double joint1, const Eigen::VectorXd& fixed) {
  Eigen::VectorXd q(fixed.size() + 1);
  q[0] = joint1;
  q.tail(fixed.size()) = fixed;
  return q;
}

}  // namespace

std::vector<CoupledSample> simulate_coupled(const CoupledSystem& system,
                                            const TrapezoidalProfile& profile,
                                            const Eigen::VectorXd& fixed_joints, double dt) {
  if (system.lwr.dof() != 6) throw DimensionError("coupled system expects a 6-dof robot");
  if (fixed_joints.size() != system.lwr.dof() - 1)
    throw DimensionError("fixed_joints must cover every robot joint but the first");
  if (!(dt > 0.0)) throw Error("simulate_coupled: dt must be positive");

  const Eigen::VectorXd zeros = Eigen::VectorXd::Zero(fixed_joints.size());
  std::vector<CoupledSample> series;
  for (double t : profile.sample_times(dt)) {
    const Eigen::VectorXd q = assemble_joints(profile.position(t), fixed_joints);
    const Eigen::VectorXd qd = assemble_joints(profile.velocity(t), zeros);
    const Eigen::VectorXd qdd = assemble_joints(profile.acceleration(t), zeros);
    try {
      CoupledSample sample = coupled_torques(system, q, qd, qdd);
      sample.t = t;
      series.push_back(std::move(sample));
    } catch (const SingularityError& e) {
      throw SingularityError(e.robot(), e.measure(), t);
    } catch (const UnreachableError& e) {
      throw UnreachableError(e.planar_radius(), t);
    }
  }
  return series;
}

PathReport check_path_feasible(const CoupledSystem& system, const TrapezoidalProfile& profile,
                               const Eigen::VectorXd& fixed_joints, double dt) {
  if (system.lwr.dof() != 6) throw DimensionError("coupled system expects a 6-dof robot");
  if (fixed_joints.size() != system.lwr.dof() - 1)
    throw DimensionError("fixed_joints must cover every robot joint but the first");
  if (!(dt > 0.0)) throw Error("check_path_feasible: dt must be positive");

  const RobotModel balancer = hobm_in_world(system);
  PathReport report;
  for (double t : profile.sample_times(dt)) {
    const Eigen::VectorXd q = assemble_joints(profile.position(t), fixed_joints);

    const Eigen::MatrixXd jac_lm = geometric_jacobian(system.lwr.chain, q);
    const double measure_lm = std::abs(jac_lm.determinant());
    if (measure_lm < system.singularity_tolerance)
      report.violations.push_back({t, PathReport::ViolationKind::lwr_singular, measure_lm});

    const Eigen::Vector3d grip = forward_kinematics(system.lwr.chain, q).back().translation;
    try {
      hobm_follow(balancer, grip, system.elbow_positive, system.singularity_tolerance);
    } catch (const SingularityError& e) {
      report.violations.push_back({t, PathReport::ViolationKind::hobm_singular, e.measure()});
    } catch (const UnreachableError& e) {
      report.violations.push_back(
          {t, PathReport::ViolationKind::hobm_unreachable, e.planar_radius()});
    }
  }
  report.feasible = report.violations.empty();
  return report;
}

}  // namespace hobm
