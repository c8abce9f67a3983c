#pragma once

#include <Eigen/Dense>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hobm {

using Vector6d = Eigen::Matrix<double, 6, 1>;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Input vector/matrix sizes do not match the chain/model.
class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& what) : Error(what) {}
};

enum class RobotTag { lwr, hobm };

/// A task Jacobian fell below the singularity tolerance.
class SingularityError : public Error {
 public:
  SingularityError(RobotTag robot, double measure, std::optional<double> time = {});
  RobotTag robot() const { return robot_; }
  double measure() const { return measure_; }
  std::optional<double> time() const { return time_; }

 private:
  RobotTag robot_;
  double measure_;
  std::optional<double> time_;
};

/// Target payload position outside the balancer's reachable annulus.
class UnreachableError : public Error {
 public:
  explicit UnreachableError(double planar_radius, std::optional<double> time = {});
  double planar_radius() const { return planar_radius_; }
  std::optional<double> time() const { return time_; }

 private:
  double planar_radius_;
  std::optional<double> time_;
};

/// Numerical failure: non-finite state, rank-deficient solve, blow-up.
class NumericError : public Error {
 public:
  explicit NumericError(const std::string& what) : Error(what) {}
};

// ---------------------------------------------------------------------------
// Geometry
// ---------------------------------------------------------------------------

/// Proper rigid transform: orthonormal rotation (det +1) plus translation.
struct RigidTransform {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();

  static RigidTransform identity() { return {}; }
  static RigidTransform from_translation(const Eigen::Vector3d& t);
  static RigidTransform rot_z(double angle);
  static RigidTransform rot_x(double angle);

  RigidTransform operator*(const RigidTransform& rhs) const;
  Eigen::Vector3d operator*(const Eigen::Vector3d& p) const;
  RigidTransform inverse() const;

  /// rotationᵀ·rotation = I and det = +1 within tol.
  bool is_valid(double tol = 1e-12) const;
};

// ---------------------------------------------------------------------------
// Chain description
// ---------------------------------------------------------------------------

enum class JointType { revolute, prismatic };

/// One Denavit-Hartenberg row, classic (proximal) convention:
///   T = Rot_z(theta) · Trans_z(d) · Trans_x(a) · Rot_x(alpha).
/// The joint variable adds to theta_offset (revolute) or d (prismatic).
struct DHRow {
  double theta_offset = 0.0;  ///< rad
  double a = 0.0;             ///< m (may be negative)
  double d = 0.0;             ///< m
  double alpha = 0.0;         ///< rad
  JointType joint_type = JointType::revolute;
};

struct KinematicChain {
  std::vector<DHRow> rows;
  RigidTransform base_pose;  ///< world pose of link frame 0

  int dof() const { return static_cast<int>(rows.size()); }
};

/// Joint positions/rates/accelerations; units rad (revolute) or m (prismatic).
struct JointState {
  Eigen::VectorXd q;
  Eigen::VectorXd qd;
  Eigen::VectorXd qdd;

  static JointState zero(int dof);
};

/// Force/moment pair in the world frame, referenced at a stated point.
struct Wrench {
  Eigen::Vector3d force = Eigen::Vector3d::Zero();
  Eigen::Vector3d moment = Eigen::Vector3d::Zero();

  static Wrench zero() { return {}; }
};

// ---------------------------------------------------------------------------
// Inertial description
// ---------------------------------------------------------------------------

/// Mass properties of one link, expressed in that link's DH frame.
/// com is the center-of-mass position; inertia is taken about the COM.
struct LinkInertia {
  double mass = 0.0;                                       ///< kg
  Eigen::Vector3d com = Eigen::Vector3d::Zero();           ///< m
  Eigen::Matrix3d inertia = Eigen::Matrix3d::Zero();       ///< kg·m²
};

struct RobotModel {
  KinematicChain chain;
  std::vector<LinkInertia> links;  ///< one per chain row
  Eigen::Vector3d gravity{0.0, 0.0, -9.81};  ///< m/s², world frame

  int dof() const { return chain.dof(); }
};

/// Throws Error on violated invariants (link count, mass sign, inertia
/// symmetry/positive-semidefiniteness).
void validate_model(const RobotModel& model);

}  // namespace hobm
