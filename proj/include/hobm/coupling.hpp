#pragma once

#include "hobm/trajectory.hpp"
#include "hobm/types.hpp"

namespace hobm {

/// Lightweight robot rigidly carrying a payload that also hangs from a
/// hand-operated balanced manipulator (2R + vertical prismatic). The balancer
/// follows the payload kinematically; its reaction loads the robot.
struct CoupledSystem {
  RobotModel lwr;   ///< 6-dof serial robot, base at chain.base_pose
  RobotModel hobm;  ///< 2R + prismatic balancer, base pose see hobm_base_offset
  double payload_mass = 0.0;            ///< kg, point mass at the shared grip
  RigidTransform hobm_base_offset;      ///< balancer base in the world frame
  double singularity_tolerance = 1e-6;  ///< on |det| of the task Jacobians
  bool elbow_positive = true;           ///< balancer elbow branch, fixed per run
};

/// Balancer model with hobm_base_offset composed onto its chain base.
RobotModel hobm_in_world(const CoupledSystem& system);

/// End-effector twist [v; omega] for joint rates thetad.
Vector6d payload_twist(const RobotModel& lwr, const Eigen::VectorXd& theta,
                       const Eigen::VectorXd& thetad);

/// Closed-form inverse kinematics of the 2R + prismatic balancer for a world
/// payload position. Requires the canonical chain (two revolute rows with
/// alpha = 0, then one prismatic row). Throws UnreachableError outside the
/// planar annulus and SingularityError at its boundary (|det J| below
/// tolerance).
Eigen::Vector3d hobm_follow(const RobotModel& hobm,
                            const Eigen::Vector3d& payload_position,
                            bool elbow_positive = true, double tolerance = 1e-6);

/// Joint rates from the payload linear velocity via the 3x3 positional
/// Jacobian. Throws SingularityError below tolerance.
Eigen::Vector3d hobm_joint_rates(const RobotModel& hobm, const Eigen::Vector3d& phi,
                                 const Eigen::Vector3d& payload_velocity,
                                 double tolerance = 1e-6);

/// Joint accelerations from the payload linear acceleration:
/// phidd = J⁻¹ (a - Jdot · phid) with the analytic Jacobian derivative.
Eigen::Vector3d hobm_joint_accels(const RobotModel& hobm, const Eigen::Vector3d& phi,
                                  const Eigen::Vector3d& phid,
                                  const Eigen::Vector3d& payload_acceleration,
                                  double tolerance = 1e-6);

/// Extra joint efforts the balancer needs beyond static balance when its tip
/// follows the commanded motion with the payload attached: full inverse
/// dynamics (payload inertial wrench included) minus the static hold at the
/// same configuration. Exactly zero at rest.
Eigen::Vector3d hobm_inertial_load(const RobotModel& hobm, const Eigen::Vector3d& phi,
                                   const Eigen::Vector3d& phid,
                                   const Eigen::Vector3d& phidd, double payload_mass);

/// Force the balancer tip applies to the payload, solved from Jᵀ F = tau on
/// the 3x3 positional Jacobian. Moment is zero (ideal spherical grip).
Wrench payload_wrench(const RobotModel& hobm, const Eigen::Vector3d& phi,
                      const Eigen::Vector3d& tau_hobm, double tolerance = 1e-6);

/// One time sample of the coupled simulation.
struct CoupledSample {
  double t = 0.0;
  JointState theta;      ///< robot joints
  JointState phi;        ///< balancer joints
  Wrench f_hobm;         ///< balancer grip force on the payload, world frame
  Eigen::VectorXd tau_lm;     ///< robot efforts, balancer massless
  Eigen::VectorXd tau_total;  ///< robot efforts with the reflected grip force
};

/// Robot efforts with and without the balancer reaction at one motion state.
/// Pipeline: robot FK -> balancer IK follow -> balancer rates/accels ->
/// balancer inertial load -> grip force -> reflected efforts
/// tau_total = tau_lm + Jᵀ [f_hobm; 0].
CoupledSample coupled_torques(const CoupledSystem& system,
                              const Eigen::VectorXd& theta,
                              const Eigen::VectorXd& thetad,
                              const Eigen::VectorXd& thetadd);

/// Sweep joint 1 of the robot along the profile, remaining joints fixed.
/// fixed_joints has dof-1 entries. Samples at t = k·dt. Errors raised during
/// the sweep carry the sample time.
std::vector<CoupledSample> simulate_coupled(const CoupledSystem& system,
                                            const TrapezoidalProfile& profile,
                                            const Eigen::VectorXd& fixed_joints,
                                            double dt);

/// Feasibility scan of the same sweep: collects singularity/reachability
/// violations instead of throwing.
struct PathReport {
  enum class ViolationKind { lwr_singular, hobm_singular, hobm_unreachable };
  struct Violation {
    double t = 0.0;
    ViolationKind kind = ViolationKind::lwr_singular;
    /// |det| of the offending Jacobian block; for hobm_unreachable the planar
    /// distance from the balancer base instead.
    double measure = 0.0;
  };
  bool feasible = true;
  std::vector<Violation> violations;
};

PathReport check_path_feasible(const CoupledSystem& system,
                               const TrapezoidalProfile& profile,
                               const Eigen::VectorXd& fixed_joints, double dt);

}  // namespace hobm
