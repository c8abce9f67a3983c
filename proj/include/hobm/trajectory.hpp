#pragma once

#include <cstddef>
#include <vector>

namespace hobm {

/// Symmetric trapezoidal velocity profile for a single joint: constant
/// acceleration over [0, ramp_time], constant cruise rate over
/// [ramp_time, total_time - ramp_time], constant deceleration to rest.
/// cruise_rate = (final - initial) / (total_time - ramp_time),
/// ramp_accel = cruise_rate / ramp_time.
class TrapezoidalProfile {
 public:
  /// Requires 0 < ramp_time and 2 * ramp_time <= total_time; throws Error.
  TrapezoidalProfile(double initial_position, double final_position,
                     double ramp_time, double total_time);

  double position(double t) const;
  /// Piecewise linear, continuous; zero at both endpoints.
  double velocity(double t) const;
  /// Piecewise constant; left-continuous at the segment boundaries.
  double acceleration(double t) const;

  double initial_position() const { return initial_; }
  double final_position() const { return final_; }
  double ramp_time() const { return ramp_time_; }
  double total_time() const { return total_time_; }
  double cruise_rate() const { return cruise_rate_; }
  double ramp_accel() const { return ramp_accel_; }

  /// t_k = k * dt for k = 0..floor(total_time / dt); the last sample may fall
  /// short of total_time when dt does not divide it.
  std::vector<double> sample_times(double dt) const;

 private:
  double initial_;
  double final_;
  double ramp_time_;
  double total_time_;
  double cruise_rate_;
  double ramp_accel_;
};

}  // namespace hobm
