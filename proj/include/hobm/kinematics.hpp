#pragma once

#include "hobm/types.hpp"

namespace hobm {

/// Transform from link frame i-1 to link frame i for one DH row.
/// Classic (proximal) convention: Rot_z(theta) · Trans_z(d) · Trans_x(a) ·
/// Rot_x(alpha), with the joint variable q added to theta (revolute) or to d
/// (prismatic). The stored row fields are the constant offsets.
RigidTransform link_transform(const DHRow& row, double q);

/// World pose of every link frame, index i = frame of row i (dof entries).
/// Element k is base_pose composed with rows 0..k.
std::vector<RigidTransform> forward_kinematics(const KinematicChain& chain,
                                               const Eigen::VectorXd& q);

/// Geometric Jacobian, 6 x dof, world frame, referenced at the end-effector
/// origin. Rows 0-2 linear, rows 3-5 angular. Column i uses the axis of frame
/// i-1: revolute [z x (p_ee - p_i-1); z], prismatic [z; 0].
Eigen::MatrixXd geometric_jacobian(const KinematicChain& chain,
                                   const Eigen::VectorXd& q);

/// Time derivative of the geometric Jacobian along (q, qd), computed
/// analytically from the frame velocity recursion (no finite differences).
Eigen::MatrixXd jacobian_dot(const KinematicChain& chain,
                             const Eigen::VectorXd& q,
                             const Eigen::VectorXd& qd);

/// |det| of the task block: the full matrix when square, the top dof x dof
/// (positional) block for a 6 x dof Jacobian with dof in {2, 3}. Other shapes
/// throw DimensionError; callers extract their own block first.
double singularity_measure(const Eigen::MatrixXd& jacobian);

}  // namespace hobm
