#pragma once

#include "hobm/coupling.hpp"
#include "hobm/trajectory.hpp"
#include "hobm/types.hpp"

#include <string>
#include <vector>

namespace hobm {

/// 6-dof lightweight robot (UR10-class geometry and inertias).
RobotModel lwr_table2();

/// 2R + vertical prismatic balanced manipulator, links 1.4 m / 1.5 m plus the
/// 0.6 m lifting tube.
RobotModel hobm_table1();

/// The two rotating links of the balancer only (planar arm used by the
/// ringdown study).
RobotModel hobm_table1_arm();

/// Lookup by name: "lwr-table2", "hobm-table1", "hobm-table1-arm".
/// Throws Error for unknown names.
RobotModel make_preset(const std::string& name);
std::vector<std::string> preset_names();

/// Reference sweep of robot joint 1: -40 deg to +40 deg, 0.2 s ramps, 2 s
/// total.
TrapezoidalProfile reference_sweep();

/// Fixed values of robot joints 2..6 during the reference sweep (rad).
Eigen::VectorXd reference_fixed_joints();

/// Default balancer base placement: keeps the reference-sweep payload path
/// mid-annulus for the balancer.
RigidTransform default_hobm_base_offset();

/// Both presets coupled through a 50 kg payload with the default base offset.
CoupledSystem default_coupled_system(double payload_mass = 50.0);

}  // namespace hobm
