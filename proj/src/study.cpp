#include "hobm/study.hpp"

#include "hobm/kinematics.hpp"
#include "hobm/presets.hpp"

#include <algorithm>
#include <cmath>

namespace hobm {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double RingdownStudy::operator()(const Eigen::VectorXd& physical) const {
  if (physical.size() != 3)
    throw DimensionError("ringdown study expects [friction, mass, deceleration]");

  RingdownConfig cfg = base;
  const double coulomb = std::max(physical[0], friction_floor);
  cfg.coulomb = {coulomb, coulomb};
  cfg.payload_mass = std::max(physical[1], mass_floor);

  const double speed = physical[2] * brake_time;
  const Eigen::MatrixXd jac_xy =
      geometric_jacobian(cfg.arm.chain, cfg.initial_phi).topRows<2>();
  const double measure = std::abs(jac_xy.determinant());
  if (measure < 1e-6) throw SingularityError(RobotTag::hobm, measure);

  const Eigen::Vector2d tip =
      forward_kinematics(cfg.arm.chain, cfg.initial_phi).back().translation.head<2>();
  const Eigen::Vector2d radial = tip - cfg.arm.chain.base_pose.translation.head<2>();
  const Eigen::Vector2d tangent =
      Eigen::Vector2d(-radial.y(), radial.x()).normalized();
  cfg.initial_phid = jac_xy.partialPivLu().solve(speed * tangent);
  cfg.anchor_xy = tip;

  return peak_force(simulate_ringdown(cfg));
}

Responder RingdownStudy::responder() const {
  return [study = *this](const Eigen::VectorXd&, const Eigen::VectorXd& physical) {
    return study(physical);
  };
}

RingdownStudy RingdownStudy::reference() {
  RingdownStudy study;
  study.base.arm = hobm_table1_arm();
  study.base.cable_length = 2.0;
  study.base.viscous = {0.5, 0.5};
  study.base.initial_phi = {30.0 * kPi / 180.0, 60.0 * kPi / 180.0};
  study.base.dt = 1e-3;
  study.base.duration = 10.0;
  return study;
}

std::vector<FactorSpec> default_study_factors() {
  return {{"coulomb_Nm", 0.0, 5.0}, {"payload_kg", 10.0, 100.0}, {"decel_mps2", 0.5, 5.0}};
}

}  // namespace hobm
