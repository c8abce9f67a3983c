#include "hobm/oscillation.hpp"

#include "hobm/dynamics.hpp"
#include "hobm/kinematics.hpp"

#include <cmath>

namespace hobm {

namespace {

Eigen::Vector2d tip_xy(const KinematicChain& chain, const Eigen::Vector2d& phi) {
  return forward_kinematics(chain, phi).back().translation.head<2>();
}

struct RingdownDynamics {
  const RingdownConfig& cfg;
  RobotModel arm_free;  // gravity zeroed: the swing happens in the horizontal plane
  Eigen::Vector2d anchor;
  double stiffness;

  explicit RingdownDynamics(const RingdownConfig& config) : cfg(config), arm_free(config.arm) {
    if (config.arm.dof() != 2) throw DimensionError("ringdown arm must have 2 dof");
    if (!(config.dt > 0.0)) throw Error("ringdown: dt must be positive");
    if (!(config.duration >= config.dt)) throw Error("ringdown: duration shorter than one step");
    if (!(config.cable_length > 0.0)) throw Error("ringdown: cable_length must be positive");
    if (!(config.payload_mass > 0.0)) throw Error("ringdown: payload_mass must be positive");
    if (config.viscous.minCoeff() < 0.0 || config.coulomb.minCoeff() < 0.0)
      throw Error("ringdown: friction coefficients must be non-negative");
    arm_free.gravity.setZero();
    stiffness = config.payload_mass * config.arm.gravity.norm() / config.cable_length;
    anchor = config.anchor_xy.value_or(tip_xy(config.arm.chain, config.initial_phi));
  }

  Eigen::Vector2d spring_force(const Eigen::Vector2d& phi) const {
    return -stiffness * (tip_xy(cfg.arm.chain, phi) - anchor);
  }

  Eigen::Vector2d accel(const Eigen::Vector2d& phi, const Eigen::Vector2d& phid) const {
    const Eigen::MatrixXd jac_xy = geometric_jacobian(cfg.arm.chain, phi).topRows<2>();
    const Eigen::Vector2d coriolis = bias_forces(arm_free, phi, phid);
    const Eigen::Vector2d friction =
        cfg.viscous.cwiseProduct(phid) +
        cfg.coulomb.cwiseProduct((phid / cfg.smooth_sign_eps).array().tanh().matrix());
    const Eigen::Vector2d effort = jac_xy.transpose() * spring_force(phi) - coriolis - friction;
    return mass_matrix(arm_free, phi).ldlt().solve(effort);
  }

  RingdownSample sample_at(double t, const Eigen::Vector2d& phi,
                           const Eigen::Vector2d& phid) const {
    RingdownSample s;
    s.t = t;
    s.phi = phi;
    s.phid = phid;
    const Eigen::Vector2d stretch = tip_xy(cfg.arm.chain, phi) - anchor;
    s.tip_force.force << -stiffness * stretch.x(), -stiffness * stretch.y(), 0.0;
    s.mech_energy = 0.5 * phid.dot(mass_matrix(arm_free, phi) * phid) +
                    0.5 * stiffness * stretch.squaredNorm();
    return s;
  }
};

}  // namespace

std::vector<RingdownSample> simulate_ringdown(const RingdownConfig& config) {
  const RingdownDynamics dyn(config);

  const auto steps = static_cast<std::size_t>(std::floor(config.duration / config.dt + 1e-9));
  std::vector<RingdownSample> series;
  series.reserve(steps + 1);

  Eigen::Vector2d phi = config.initial_phi;
  Eigen::Vector2d phid = config.initial_phid;
  series.push_back(dyn.sample_at(0.0, phi, phid));

  const double dt = config.dt;
  for (std::size_t k = 1; k <= steps; ++k) {
    const Eigen::Vector2d k1_v = dyn.accel(phi, phid);
    const Eigen::Vector2d k1_x = phid;
    const Eigen::Vector2d k2_v = dyn.accel(phi + 0.5 * dt * k1_x, phid + 0.5 * dt * k1_v);
    const Eigen::Vector2d k2_x = phid + 0.5 * dt * k1_v;
    const Eigen::Vector2d k3_v = dyn.accel(phi + 0.5 * dt * k2_x, phid + 0.5 * dt * k2_v);
    const Eigen::Vector2d k3_x = phid + 0.5 * dt * k2_v;
    const Eigen::Vector2d k4_v = dyn.accel(phi + dt * k3_x, phid + dt * k3_v);
    const Eigen::Vector2d k4_x = phid + dt * k3_v;

    phi += dt / 6.0 * (k1_x + 2.0 * k2_x + 2.0 * k3_x + k4_x);
    phid += dt / 6.0 * (k1_v + 2.0 * k2_v + 2.0 * k3_v + k4_v);
    if (!phi.allFinite() || !phid.allFinite())
      throw NumericError("ringdown state diverged at t=" + std::to_string(k * dt) + " s");
    series.push_back(dyn.sample_at(static_cast<double>(k) * dt, phi, phid));
  }
  return series;
}

double settling_time(const std::vector<RingdownSample>& series, double band) {
  if (series.empty()) throw Error("settling_time: empty series");
  if (!(band > 0.0)) throw Error("settling_time: band must be positive");
  const Eigen::Vector2d final_phi = series.back().phi;
  double settled = series.front().t;
  for (std::size_t i = series.size(); i-- > 0;) {
    if (((series[i].phi - final_phi).cwiseAbs().maxCoeff()) > band) {
      settled = i + 1 < series.size() ? series[i + 1].t : series.back().t;
      break;
    }
  }
  return settled;
}

double peak_force(const std::vector<RingdownSample>& series) {
  if (series.empty()) throw Error("peak_force: empty series");
  double peak = 0.0;
  for (const RingdownSample& s : series) peak = std::max(peak, s.tip_force.force.norm());
  return peak;
}

Wrench drag_wrench(const RobotModel& hobm, const Eigen::VectorXd& phi,
                   const Eigen::VectorXd& phid_direction, const Eigen::VectorXd& coulomb,
                   double tolerance) {
  const int n = hobm.dof();
  if (phi.size() != n || phid_direction.size() != n || coulomb.size() != n)
    throw DimensionError("drag_wrench: inputs must match the chain dof");
  if (n != 2 && n != 3) throw DimensionError("drag_wrench: supported for 2- or 3-dof balancers");

  const Eigen::MatrixXd task = geometric_jacobian(hobm.chain, phi).topRows(n);
  const double measure = std::abs(task.determinant());
  if (measure < tolerance) throw SingularityError(RobotTag::hobm, measure);

  Eigen::VectorXd friction(n);
  for (int i = 0; i < n; ++i) {
    const double sign = phid_direction[i] > 0.0 ? 1.0 : (phid_direction[i] < 0.0 ? -1.0 : 0.0);
    friction[i] = coulomb[i] * sign;
  }
  const Eigen::VectorXd force = task.transpose().partialPivLu().solve(friction);

  Wrench w;
  w.force.setZero();
  w.force.head(n) = force;
  return w;
}

}  // namespace hobm
