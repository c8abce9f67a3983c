#include "hobm/kinematics.hpp"

#include <cmath>

namespace hobm {

// ---------------------------------------------------------------------------
// RigidTransform
// ---------------------------------------------------------------------------

RigidTransform RigidTransform::from_translation(const Eigen::Vector3d& t) {
  RigidTransform out;
  out.translation = t;
  return out;
}

RigidTransform RigidTransform::rot_z(double angle) {
  RigidTransform out;
  out.rotation = Eigen::AngleAxisd(angle, Eigen::Vector3d::UnitZ()).toRotationMatrix();
  return out;
}

RigidTransform RigidTransform::rot_x(double angle) {
  RigidTransform out;
  out.rotation = Eigen::AngleAxisd(angle, Eigen::Vector3d::UnitX()).toRotationMatrix();
  return out;
}

RigidTransform RigidTransform::operator*(const RigidTransform& rhs) const {
  RigidTransform out;
  out.rotation = rotation * rhs.rotation;
  out.translation = rotation * rhs.translation + translation;
  return out;
}

Eigen::Vector3d RigidTransform::operator*(const Eigen::Vector3d& p) const {
  return rotation * p + translation;
}

RigidTransform RigidTransform::inverse() const {
  RigidTransform out;
  out.rotation = rotation.transpose();
  out.translation = -(rotation.transpose() * translation);
  return out;
}

bool RigidTransform::is_valid(double tol) const {
  const Eigen::Matrix3d err = rotation.transpose() * rotation - Eigen::Matrix3d::Identity();
  return err.cwiseAbs().maxCoeff() <= tol && std::abs(rotation.determinant() - 1.0) <= tol &&
         translation.allFinite();
}

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

namespace {

std::string robot_name(RobotTag robot) {
  return robot == RobotTag::lwr ? "lwr" : "hobm";
}

std::string with_time_suffix(std::string msg, const std::optional<double>& time) {
  if (time) msg += " at t=" + std::to_string(*time) + " s";
  return msg;
}

}  // namespace

SingularityError::SingularityError(RobotTag robot, double measure, std::optional<double> time)
    : Error(with_time_suffix(robot_name(robot) + " task Jacobian singular, |det|=" +
                                 std::to_string(measure),
                             time)),
      robot_(robot),
      measure_(measure),
      time_(time) {}

UnreachableError::UnreachableError(double planar_radius, std::optional<double> time)
    : Error(with_time_suffix(
          "payload outside balancer annulus, planar radius " + std::to_string(planar_radius) + " m",
          time)),
      planar_radius_(planar_radius),
      time_(time) {}

// ---------------------------------------------------------------------------
// Model plumbing
// ---------------------------------------------------------------------------

JointState JointState::zero(int dof) {
  JointState s;
  s.q = Eigen::VectorXd::Zero(dof);
  s.qd = Eigen::VectorXd::Zero(dof);
  s.qdd = Eigen::VectorXd::Zero(dof);
  return s;
}

void validate_model(const RobotModel& model) {
  if (model.links.size() != model.chain.rows.size())
    throw Error("model has " + std::to_string(model.links.size()) + " links for " +
                std::to_string(model.chain.rows.size()) + " chain rows");
  if (!model.chain.base_pose.is_valid(1e-9)) throw Error("base pose is not a rigid transform");
  if (!model.gravity.allFinite()) throw Error("gravity vector is not finite");
  for (size_t i = 0; i < model.links.size(); ++i) {
    const LinkInertia& link = model.links[i];
    const std::string tag = "link " + std::to_string(i + 1);
    if (!(link.mass >= 0.0)) throw Error(tag + ": negative or non-finite mass");
    if (!link.com.allFinite()) throw Error(tag + ": non-finite center of mass");
    if (!link.inertia.allFinite()) throw Error(tag + ": non-finite inertia tensor");
    if ((link.inertia - link.inertia.transpose()).cwiseAbs().maxCoeff() > 1e-9)
      throw Error(tag + ": inertia tensor not symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(link.inertia);
    if (eig.eigenvalues().minCoeff() < -1e-9) throw Error(tag + ": inertia tensor not PSD");
  }
}

// ---------------------------------------------------------------------------
// Chain kinematics
// ---------------------------------------------------------------------------

RigidTransform link_transform(const DHRow& row, double q) {
  const double theta =
      row.joint_type == JointType::revolute ? row.theta_offset + q : row.theta_offset;
  const double d = row.joint_type == JointType::prismatic ? row.d + q : row.d;
  const double ct = std::cos(theta), st = std::sin(theta);
  const double ca = std::cos(row.alpha), sa = std::sin(row.alpha);
  RigidTransform t;
  t.rotation << ct, -st * ca, st * sa,  //
      st, ct * ca, -ct * sa,            //
      0.0, sa, ca;
  t.translation << row.a * ct, row.a * st, d;
  return t;
}

namespace {

void check_dof(const KinematicChain& chain, const Eigen::VectorXd& q, const char* what) {
  if (q.size() != chain.dof())
    throw DimensionError(std::string(what) + ": got " + std::to_string(q.size()) +
                         " joint values for a " + std::to_string(chain.dof()) + "-dof chain");
}

}  // namespace

std::vector<RigidTransform> forward_kinematics(const KinematicChain& chain,
                                               const Eigen::VectorXd& q) {
  check_dof(chain, q, "forward_kinematics");
  std::vector<RigidTransform> frames;
  frames.reserve(chain.rows.size());
  RigidTransform t = chain.base_pose;
  for (int i = 0; i < chain.dof(); ++i) {
    t = t * link_transform(chain.rows[i], q[i]);
    frames.push_back(t);
  }
  return frames;
}

Eigen::MatrixXd geometric_jacobian(const KinematicChain& chain, const Eigen::VectorXd& q) {
  check_dof(chain, q, "geometric_jacobian");
  const int n = chain.dof();
  if (n == 0) throw DimensionError("geometric_jacobian: empty chain");
  const std::vector<RigidTransform> frames = forward_kinematics(chain, q);
  const Eigen::Vector3d p_ee = frames.back().translation;

  Eigen::MatrixXd jac(6, n);
  const RigidTransform* prev = &chain.base_pose;
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector3d z = prev->rotation.col(2);
    if (chain.rows[i].joint_type == JointType::revolute) {
      jac.col(i).head<3>() = z.cross(p_ee - prev->translation);
      jac.col(i).tail<3>() = z;
    } else {
      jac.col(i).head<3>() = z;
      jac.col(i).tail<3>().setZero();
    }
    prev = &frames[i];
  }
  return jac;
}

Eigen::MatrixXd jacobian_dot(const KinematicChain& chain, const Eigen::VectorXd& q,
                             const Eigen::VectorXd& qd) {
  check_dof(chain, q, "jacobian_dot");
  check_dof(chain, qd, "jacobian_dot");
  const int n = chain.dof();
  if (n == 0) throw DimensionError("jacobian_dot: empty chain");
  const std::vector<RigidTransform> frames = forward_kinematics(chain, q);

  // Frame velocity recursion (world coordinates), index 0 = base.
  std::vector<Eigen::Vector3d> omega(n + 1), vel(n + 1), origin(n + 1), axis(n);
  omega[0].setZero();
  vel[0].setZero();
  origin[0] = chain.base_pose.translation;
  const RigidTransform* prev = &chain.base_pose;
  for (int i = 0; i < n; ++i) {
    axis[i] = prev->rotation.col(2);
    origin[i + 1] = frames[i].translation;
    const Eigen::Vector3d r = origin[i + 1] - origin[i];
    if (chain.rows[i].joint_type == JointType::revolute) {
      omega[i + 1] = omega[i] + axis[i] * qd[i];
      vel[i + 1] = vel[i] + omega[i + 1].cross(r);
    } else {
      omega[i + 1] = omega[i];
      vel[i + 1] = vel[i] + omega[i + 1].cross(r) + axis[i] * qd[i];
    }
    prev = &frames[i];
  }

  const Eigen::Vector3d p_ee = origin[n];
  const Eigen::Vector3d v_ee = vel[n];
  Eigen::MatrixXd jdot(6, n);
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector3d zdot = omega[i].cross(axis[i]);
    if (chain.rows[i].joint_type == JointType::revolute) {
      jdot.col(i).head<3>() = zdot.cross(p_ee - origin[i]) + axis[i].cross(v_ee - vel[i]);
      jdot.col(i).tail<3>() = zdot;
    } else {
      jdot.col(i).head<3>() = zdot;
      jdot.col(i).tail<3>().setZero();
    }
  }
  return jdot;
}

double singularity_measure(const Eigen::MatrixXd& jacobian) {
  if (jacobian.rows() == jacobian.cols()) return std::abs(jacobian.determinant());
  if (jacobian.rows() == 6 && (jacobian.cols() == 2 || jacobian.cols() == 3)) {
    const auto n = jacobian.cols();
    return std::abs(jacobian.topLeftCorner(n, n).determinant());
  }
  throw DimensionError("singularity_measure: need a square block or a 6 x {2,3} Jacobian");
}

}  // namespace hobm
