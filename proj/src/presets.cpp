#include "hobm/presets.hpp"

#include <cmath>

namespace hobm {

namespace {

constexpr double kPi = 3.14159265358979323846;

double deg(double value) { return value * kPi / 180.0; }

// Catalog mass properties are given in the link's proximal frame: origin at
// the previous joint, z along that joint's axis, x along the link. Convert to
// the link's DH frame (origin at the next joint, rotated by alpha about x).
LinkInertia link_from_proximal(const DHRow& row, double mass, const Eigen::Vector3d& com,
                               const Eigen::Matrix3d& inertia) {
  const Eigen::Matrix3d rx =
      Eigen::AngleAxisd(-row.alpha, Eigen::Vector3d::UnitX()).toRotationMatrix();
  LinkInertia link;
  link.mass = mass;
  link.com = rx * (com - Eigen::Vector3d(row.a, 0.0, row.d));
  link.inertia = rx * inertia * rx.transpose();
  return link;
}

Eigen::Matrix3d diag(double x, double y, double z) {
  return Eigen::Vector3d(x, y, z).asDiagonal();
}

}  // namespace

RobotModel lwr_table2() {
  RobotModel m;
  m.chain.rows = {
      {0.0, 0.0, 0.1273, kPi / 2.0, JointType::revolute},
      {0.0, -0.612, 0.0, 0.0, JointType::revolute},
      {0.0, -0.572, 0.0, 0.0, JointType::revolute},
      {0.0, 0.0, 0.163941, kPi / 2.0, JointType::revolute},
      {0.0, 0.0, 0.1157, -kPi / 2.0, JointType::revolute},
      {0.0, 0.0, 0.0922, 0.0, JointType::revolute},
  };
  const double masses[6] = {1.35, 3.82, 2.04, 0.32, 0.32, 0.07};
  const Eigen::Vector3d coms[6] = {
      {0.0, 0.0116, 0.0786}, {0.0, 0.251, 0.0844},  {0.0, 0.258, 0.0566},
      {0.0, 0.009, 0.0463},  {0.0, 0.010, 0.0464},  {0.0, 0.0, 0.0126},
  };
  const Eigen::Matrix3d inertias[6] = {
      diag(4.62e-3, 5.40e-3, 4.88e-3), diag(1.20e-1, 8.08e-1, 6.96e-1),
      diag(8.03e-3, 2.96e-1, 2.90e-1), diag(5.35e-4, 4.79e-4, 4.07e-4),
      diag(5.37e-4, 4.82e-4, 4.06e-4), diag(5.72e-5, 5.95e-5, 6.57e-5),
  };
  m.links.reserve(6);
  for (int i = 0; i < 6; ++i)
    m.links.push_back(link_from_proximal(m.chain.rows[i], masses[i], coms[i], inertias[i]));
  return m;
}

RobotModel hobm_table1() {
  RobotModel m;
  m.chain.rows = {
      {0.0, 1.4, 0.0, 0.0, JointType::revolute},
      {0.0, 1.5, 0.0, 0.0, JointType::revolute},
      {0.0, 0.0, 0.0, 0.0, JointType::prismatic},
  };
  m.links.push_back(
      link_from_proximal(m.chain.rows[0], 30.97, {0.57, 0.0, 0.0}, diag(9.28, 9.28, 9.28)));
  m.links.push_back(
      link_from_proximal(m.chain.rows[1], 23.56, {0.74, 0.0, 0.0}, diag(5.21, 5.21, 5.21)));
  // Lifting tube, 0.6 m long, sliding through the elbow carriage; its center
  // of mass rides 0.3 m above the tip frame.
  LinkInertia tube;
  tube.mass = 2.13;
  tube.com = {0.0, 0.0, 0.3};
  tube.inertia = diag(0.06, 0.06, 0.06);
  m.links.push_back(tube);
  return m;
}

RobotModel hobm_table1_arm() {
  RobotModel full = hobm_table1();
  RobotModel m;
  m.chain.rows = {full.chain.rows[0], full.chain.rows[1]};
  m.links = {full.links[0], full.links[1]};
  m.gravity = full.gravity;
  return m;
}

RobotModel make_preset(const std::string& name) {
  if (name == "lwr-table2") return lwr_table2();
  if (name == "hobm-table1") return hobm_table1();
  if (name == "hobm-table1-arm") return hobm_table1_arm();
  throw Error("unknown preset '" + name + "'; available: lwr-table2, hobm-table1, hobm-table1-arm");
}

std::vector<std::string> preset_names() {
  return {"lwr-table2", "hobm-table1", "hobm-table1-arm"};
}

TrapezoidalProfile reference_sweep() {
  return TrapezoidalProfile(deg(-40.0), deg(40.0), 0.2, 2.0);
}

Eigen::VectorXd reference_fixed_joints() {
  Eigen::VectorXd fixed(5);
  fixed << deg(-45.0), deg(90.0), deg(-225.0), deg(90.0), deg(0.0);
  return fixed;
}

RigidTransform default_hobm_base_offset() {
  // On the bisector of the reference sweep, 2.2 m from the robot base: the
  // grip stays 1.44-1.69 m from the balancer column, mid-annulus for the
  // 1.4 m + 1.5 m arm. Column height puts the arm plane 0.58 m above the
  // grip, within the 0.6 m lifting tube.
  RigidTransform t;
  t.translation = {-2.15, -0.47, 0.85};
  return t;
}

CoupledSystem default_coupled_system(double payload_mass) {
  CoupledSystem sys;
  sys.lwr = lwr_table2();
  sys.hobm = hobm_table1();
  sys.payload_mass = payload_mass;
  sys.hobm_base_offset = default_hobm_base_offset();
  return sys;
}

}  // namespace hobm
