#pragma once

#include "hobm/types.hpp"

#include <optional>
#include <vector>

namespace hobm {

/// Free ringdown of the balancer's two rotating links after the robot stops,
/// with the payload hanging on a cable of length cable_length. The pendulum
/// restoring force is linearized to a planar spring of stiffness
/// k = payload_mass * |gravity| / cable_length anchored at the payload's rest
/// point. Joint friction is viscous plus Coulomb; the Coulomb sign is smoothed
/// as tanh(phid / smooth_sign_eps).
struct RingdownConfig {
  RobotModel arm;       ///< 2-dof planar arm (vertical joint axes)
  double cable_length = 2.0;    ///< m
  double payload_mass = 50.0;   ///< kg
  Eigen::Vector2d viscous{0.0, 0.0};   ///< N·m·s/rad per joint
  Eigen::Vector2d coulomb{0.0, 0.0};   ///< N·m per joint
  Eigen::Vector2d initial_phi{0.0, 0.0};    ///< rad
  Eigen::Vector2d initial_phid{0.0, 0.0};   ///< rad/s
  /// Spring anchor in the horizontal plane; defaults to the tip position at
  /// initial_phi (release from rest geometry).
  std::optional<Eigen::Vector2d> anchor_xy;
  double dt = 1e-3;        ///< s, classical fixed-step RK4
  double duration = 10.0;  ///< s
  double smooth_sign_eps = 1e-3;  ///< rad/s
};

struct RingdownSample {
  double t = 0.0;
  Eigen::Vector2d phi = Eigen::Vector2d::Zero();
  Eigen::Vector2d phid = Eigen::Vector2d::Zero();
  /// Spring force on the payload, world frame (z component zero).
  Wrench tip_force;
  /// Kinetic plus spring potential energy, J.
  double mech_energy = 0.0;
};

/// Integrates the ringdown with fixed-step RK4; samples at t = k·dt including
/// both endpoints. Throws NumericError if the state leaves finite range.
std::vector<RingdownSample> simulate_ringdown(const RingdownConfig& config);

/// First time after which every joint angle stays within `band` (rad) of its
/// final sampled value; 0 if the whole series qualifies. Throws on empty
/// input.
double settling_time(const std::vector<RingdownSample>& series, double band);

/// Largest spring force magnitude over the series. Throws on empty input.
double peak_force(const std::vector<RingdownSample>& series);

/// Joint friction effort mapped to the tip for a motion direction: the wrench
/// the environment must supply to keep the tip moving quasi-statically against
/// Coulomb friction, F = J⁻ᵀ (coulomb ∘ sign(phid_direction)) on the task
/// block of the positional Jacobian. Moment is zero.
Wrench drag_wrench(const RobotModel& hobm, const Eigen::VectorXd& phi,
                   const Eigen::VectorXd& phid_direction,
                   const Eigen::VectorXd& coulomb, double tolerance = 1e-6);

}  // namespace hobm
