#include "hobm/dynamics.hpp"

#include "hobm/kinematics.hpp"

#include <cmath>

namespace hobm {

namespace {

void check_state(const RobotModel& model, const JointState& state) {
  const int n = model.dof();
  if (state.q.size() != n || state.qd.size() != n || state.qdd.size() != n)
    throw DimensionError("joint state size does not match the " + std::to_string(n) +
                         "-dof model");
  if (!state.q.allFinite() || !state.qd.allFinite() || !state.qdd.allFinite())
    throw NumericError("joint state is not finite");
}

// World-frame quantities per link frame, index 0 = base, 1..n = link frames.
struct OutwardPass {
  std::vector<Eigen::Matrix3d> rot;
  std::vector<Eigen::Vector3d> origin, axis;  // axis[i] drives joint i+1
  std::vector<Eigen::Vector3d> omega, alpha, vel, acc;
};

// Propagates frame motion outward. base_acc = -gravity folds gravity into
// every link acceleration; base_acc = 0 gives the gravity-free motion state.
OutwardPass outward_pass(const KinematicChain& chain, const JointState& state,
                         const Eigen::Vector3d& base_acc) {
  const int n = chain.dof();
  OutwardPass out;
  out.rot.resize(n + 1);
  out.origin.resize(n + 1);
  out.axis.resize(n);
  out.omega.assign(n + 1, Eigen::Vector3d::Zero());
  out.alpha.assign(n + 1, Eigen::Vector3d::Zero());
  out.vel.assign(n + 1, Eigen::Vector3d::Zero());
  out.acc.assign(n + 1, Eigen::Vector3d::Zero());

  out.rot[0] = chain.base_pose.rotation;
  out.origin[0] = chain.base_pose.translation;
  out.acc[0] = base_acc;

  RigidTransform t = chain.base_pose;
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector3d z = t.rotation.col(2);
    out.axis[i] = z;
    t = t * link_transform(chain.rows[i], state.q[i]);
    out.rot[i + 1] = t.rotation;
    out.origin[i + 1] = t.translation;
    const Eigen::Vector3d r = out.origin[i + 1] - out.origin[i];

    if (chain.rows[i].joint_type == JointType::revolute) {
      out.omega[i + 1] = out.omega[i] + z * state.qd[i];
      out.alpha[i + 1] = out.alpha[i] + z * state.qdd[i] + out.omega[i].cross(z * state.qd[i]);
      out.vel[i + 1] = out.vel[i] + out.omega[i + 1].cross(r);
      out.acc[i + 1] = out.acc[i] + out.alpha[i + 1].cross(r) +
                       out.omega[i + 1].cross(out.omega[i + 1].cross(r));
    } else {
      out.omega[i + 1] = out.omega[i];
      out.alpha[i + 1] = out.alpha[i];
      out.vel[i + 1] = out.vel[i] + out.omega[i + 1].cross(r) + z * state.qd[i];
      out.acc[i + 1] = out.acc[i] + out.alpha[i + 1].cross(r) +
                       out.omega[i + 1].cross(out.omega[i + 1].cross(r)) +
                       2.0 * out.omega[i + 1].cross(z * state.qd[i]) + z * state.qdd[i];
    }
  }
  return out;
}

Eigen::VectorXd rne(const RobotModel& model, const JointState& state, const Wrench& ee_wrench,
                    const Eigen::Vector3d& base_acc) {
  const int n = model.dof();
  const OutwardPass k = outward_pass(model.chain, state, base_acc);

  // Inward force/moment recursion. f/nm: load link i+1 exerts on link i's
  // outboard joint, referenced at that joint's origin; seeded with the
  // end-effector wrench on the environment.
  Eigen::VectorXd tau(n);
  Eigen::Vector3d f = ee_wrench.force;
  Eigen::Vector3d nm = ee_wrench.moment;
  Eigen::Vector3d joint_next = k.origin[n];
  for (int i = n; i >= 1; --i) {
    const LinkInertia& link = model.links[i - 1];
    const Eigen::Vector3d com = k.origin[i] + k.rot[i] * link.com;
    const Eigen::Vector3d rc = com - k.origin[i];
    const Eigen::Vector3d a_com =
        k.acc[i] + k.alpha[i].cross(rc) + k.omega[i].cross(k.omega[i].cross(rc));
    const Eigen::Matrix3d inertia_w = k.rot[i] * link.inertia * k.rot[i].transpose();

    const Eigen::Vector3d f_net = link.mass * a_com;
    const Eigen::Vector3d n_net = inertia_w * k.alpha[i] + k.omega[i].cross(inertia_w * k.omega[i]);

    const Eigen::Vector3d f_joint = f_net + f;
    const Eigen::Vector3d n_joint =
        n_net + nm + (joint_next - com).cross(f) - (k.origin[i - 1] - com).cross(f_joint);

    tau[i - 1] = model.chain.rows[i - 1].joint_type == JointType::revolute
                     ? k.axis[i - 1].dot(n_joint)
                     : k.axis[i - 1].dot(f_joint);
    f = f_joint;
    nm = n_joint;
    joint_next = k.origin[i - 1];
  }
  return tau;
}

}  // namespace

Eigen::VectorXd inverse_dynamics(const RobotModel& model, const JointState& state,
                                 const Wrench& ee_wrench) {
  check_state(model, state);
  if (model.links.size() != model.chain.rows.size())
    throw DimensionError("model link count does not match chain");
  return rne(model, state, ee_wrench, -model.gravity);
}

Eigen::MatrixXd mass_matrix(const RobotModel& model, const Eigen::VectorXd& q) {
  const int n = model.dof();
  JointState s = JointState::zero(n);
  s.q = q;
  check_state(model, s);
  Eigen::MatrixXd m(n, n);
  for (int j = 0; j < n; ++j) {
    s.qdd.setZero();
    s.qdd[j] = 1.0;
    m.col(j) = rne(model, s, Wrench::zero(), Eigen::Vector3d::Zero());
  }
  return m;
}

Eigen::VectorXd bias_forces(const RobotModel& model, const Eigen::VectorXd& q,
                            const Eigen::VectorXd& qd) {
  JointState s = JointState::zero(model.dof());
  s.q = q;
  s.qd = qd;
  check_state(model, s);
  return rne(model, s, Wrench::zero(), -model.gravity);
}

Eigen::VectorXd gravity_vector(const RobotModel& model, const Eigen::VectorXd& q) {
  JointState s = JointState::zero(model.dof());
  s.q = q;
  check_state(model, s);
  return rne(model, s, Wrench::zero(), -model.gravity);
}

PointKinematics ee_point_kinematics(const KinematicChain& chain, const JointState& state) {
  const int n = chain.dof();
  if (state.q.size() != n || state.qd.size() != n || state.qdd.size() != n)
    throw DimensionError("joint state size does not match the " + std::to_string(n) +
                         "-dof chain");
  if (n == 0) throw DimensionError("ee_point_kinematics: empty chain");
  const OutwardPass k = outward_pass(chain, state, Eigen::Vector3d::Zero());
  PointKinematics out;
  out.position = k.origin[n];
  out.velocity = k.vel[n];
  out.acceleration = k.acc[n];
  out.angular_velocity = k.omega[n];
  out.angular_acceleration = k.alpha[n];
  return out;
}

}  // namespace hobm
