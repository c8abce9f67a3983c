#pragma once

#include "hobm/types.hpp"

namespace hobm {

/// Joint efforts that realize the given joint-space motion while the
/// end-effector exerts `ee_wrench` on the environment (world frame, referenced
/// at the end-effector origin). Recursive Newton-Euler in world coordinates;
/// gravity enters as a base acceleration of -gravity. N·m (revolute), N
/// (prismatic).
Eigen::VectorXd inverse_dynamics(const RobotModel& model, const JointState& state,
                                 const Wrench& ee_wrench = Wrench::zero());

/// Joint-space mass matrix M(q), symmetric positive definite for models with
/// physically consistent inertias. Assembled column-by-column from the
/// inverse dynamics with gravity off.
Eigen::MatrixXd mass_matrix(const RobotModel& model, const Eigen::VectorXd& q);

/// Coriolis/centrifugal plus gravity efforts: inverse dynamics at qdd = 0.
Eigen::VectorXd bias_forces(const RobotModel& model, const Eigen::VectorXd& q,
                            const Eigen::VectorXd& qd);

/// Gravity efforts alone: inverse dynamics at qd = qdd = 0.
Eigen::VectorXd gravity_vector(const RobotModel& model, const Eigen::VectorXd& q);

/// Motion state of the end-effector frame (world coordinates, gravity-free):
/// position, linear velocity/acceleration of the origin, angular
/// velocity/acceleration of the frame.
struct PointKinematics {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  Eigen::Vector3d velocity = Eigen::Vector3d::Zero();
  Eigen::Vector3d acceleration = Eigen::Vector3d::Zero();
  Eigen::Vector3d angular_velocity = Eigen::Vector3d::Zero();
  Eigen::Vector3d angular_acceleration = Eigen::Vector3d::Zero();
};

PointKinematics ee_point_kinematics(const KinematicChain& chain,
                                    const JointState& state);

}  // namespace hobm
