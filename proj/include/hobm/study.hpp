#pragma once

#include "hobm/doe.hpp"
#include "hobm/oscillation.hpp"

namespace hobm {

/// Maps a design point (Coulomb friction per joint, payload mass, pre-stop
/// deceleration) onto a ringdown simulation and reports the peak cable force.
/// The deceleration acts over brake_time, so the payload is released moving
/// tangentially at speed deceleration * brake_time; the joint rates follow
/// from the positional Jacobian at the release pose. Friction and mass are
/// clamped to their physical floors because rotatable axial points can decode
/// below the factor range.
struct RingdownStudy {
  RingdownConfig base;
  double brake_time = 0.5;     ///< s
  double friction_floor = 0.0; ///< N·m
  double mass_floor = 0.1;     ///< kg

  /// physical = [coulomb N·m, payload kg, deceleration m/s²].
  double operator()(const Eigen::VectorXd& physical) const;

  /// Adapter for run_experiments; ignores the coded coordinates.
  Responder responder() const;

  /// Study over the catalog balancer arm: release pose (30, 60) deg, 2 m
  /// cable, 0.5 N·m·s/rad viscous drag, 10 s at dt = 1 ms.
  static RingdownStudy reference();
};

/// Factor ranges of the reference study, in RingdownStudy order.
std::vector<FactorSpec> default_study_factors();

}  // namespace hobm
