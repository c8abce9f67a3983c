#include "hobm/trajectory.hpp"

#include "hobm/types.hpp"

#include <cmath>

namespace hobm {

TrapezoidalProfile::TrapezoidalProfile(double initial_position, double final_position,
                                       double ramp_time, double total_time)
    : initial_(initial_position),
      final_(final_position),
      ramp_time_(ramp_time),
      total_time_(total_time) {
  if (!(ramp_time > 0.0)) throw Error("trapezoidal profile: ramp_time must be positive");
  if (!(total_time >= 2.0 * ramp_time))
    throw Error("trapezoidal profile: total_time must be at least twice ramp_time");
  cruise_rate_ = (final_ - initial_) / (total_time_ - ramp_time_);
  ramp_accel_ = cruise_rate_ / ramp_time_;
}

double TrapezoidalProfile::position(double t) const {
  if (t <= 0.0) return initial_;
  if (t >= total_time_) return final_;
  if (t <= ramp_time_) return initial_ + 0.5 * ramp_accel_ * t * t;
  if (t <= total_time_ - ramp_time_) return initial_ + (t - 0.5 * ramp_time_) * cruise_rate_;
  const double rem = total_time_ - t;
  return final_ - 0.5 * ramp_accel_ * rem * rem;
}

double TrapezoidalProfile::velocity(double t) const {
  if (t <= 0.0 || t >= total_time_) return 0.0;
  if (t <= ramp_time_) return ramp_accel_ * t;
  if (t <= total_time_ - ramp_time_) return cruise_rate_;
  return ramp_accel_ * (total_time_ - t);
}

double TrapezoidalProfile::acceleration(double t) const {
  if (t < 0.0 || t > total_time_) return 0.0;
  if (t <= ramp_time_) return ramp_accel_;
  if (t <= total_time_ - ramp_time_) return 0.0;
  return -ramp_accel_;
}

std::vector<double> TrapezoidalProfile::sample_times(double dt) const {
  if (!(dt > 0.0)) throw Error("trapezoidal profile: dt must be positive");
  const auto count = static_cast<std::size_t>(std::floor(total_time_ / dt + 1e-9)) + 1;
  std::vector<double> times(count);
  for (std::size_t k = 0; k < count; ++k) times[k] = static_cast<double>(k) * dt;
  return times;
}

}  // namespace hobm
