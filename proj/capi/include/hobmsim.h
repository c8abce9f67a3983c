#ifndef HOBMSIM_H
#define HOBMSIM_H

/* C binding of the balanced-manipulator simulation library.
 *
 * Conventions:
 *   - every fallible call returns a hobmsim_status; HOBMSIM_OK is 0
 *   - hobmsim_last_error() describes the most recent failure in the calling
 *     thread
 *   - angles are radians, lengths meters, masses kilograms, forces newtons
 *   - matrices are passed as flat row-major arrays; rigid poses as 9 rotation
 *     entries (row-major) plus a 3-vector translation
 *   - objects returned as pointers are owned by the caller and released with
 *     the matching _free function; _free accepts NULL
 */

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hobmsim_status {
  HOBMSIM_OK = 0,
  HOBMSIM_ERR_INVALID = 1,     /* bad argument or configuration value */
  HOBMSIM_ERR_DIMENSION = 2,   /* array size does not match the model */
  HOBMSIM_ERR_SINGULAR = 3,    /* task Jacobian below the tolerance */
  HOBMSIM_ERR_UNREACHABLE = 4, /* target outside the balancer annulus */
  HOBMSIM_ERR_NUMERIC = 5,     /* divergence or rank deficiency */
  HOBMSIM_ERR_NULL = 6         /* required pointer was NULL */
} hobmsim_status;

/** @brief Message for the last failure in this thread; never NULL. */
const char* hobmsim_last_error(void);

/** @brief Library version string, e.g. "1.0.0". */
const char* hobmsim_version(void);

/* ---------------------------------------------------------------- models */

typedef struct hobmsim_model hobmsim_model;

#define HOBMSIM_JOINT_REVOLUTE 0
#define HOBMSIM_JOINT_PRISMATIC 1

/** @brief Builds a model from a compiled-in preset.
 *  Names: "lwr-table2" (6-axis robot), "hobm-table1" (2R + prismatic
 *  balancer), "hobm-table1-arm" (the balancer's two rotating links only).
 *  Returns NULL and sets the error message on an unknown name. */
hobmsim_model* hobmsim_model_preset(const char* name);

/** @brief Builds a model from scratch.
 *  dh_rows: dof x 4 (theta_offset, a, d, alpha), joint_types: dof entries of
 *  HOBMSIM_JOINT_*, masses: dof, coms: dof x 3, inertias: dof x 9 row-major
 *  about each link COM, gravity: world 3-vector (NULL keeps (0,0,-9.81)).
 *  Returns NULL on invalid inertial data. */
hobmsim_model* hobmsim_model_create(int dof, const double* dh_rows, const int* joint_types,
                                    const double* masses, const double* coms,
                                    const double* inertias, const double* gravity);

/** @brief Re-bases the model: world pose of link frame 0. */
hobmsim_status hobmsim_model_set_base(hobmsim_model* model, const double* rotation9,
                                      const double* translation3);

int hobmsim_model_dof(const hobmsim_model* model);

/** @brief HOBMSIM_JOINT_* of joint `index`, or -1 when out of range. */
int hobmsim_model_joint_type(const hobmsim_model* model, int index);

void hobmsim_model_free(hobmsim_model* model);

/* ------------------------------------------------------------ kinematics */

/** @brief World pose of every link frame at configuration q (dof values).
 *  poses: dof x 12, each row 9 rotation entries then the translation. */
hobmsim_status hobmsim_fk(const hobmsim_model* model, const double* q, int dof, double* poses);

/** @brief World-frame geometric Jacobian at the end effector.
 *  jacobian: 6 x dof row-major, rows = linear xyz then angular xyz. */
hobmsim_status hobmsim_jacobian(const hobmsim_model* model, const double* q, int dof,
                                double* jacobian);

/** @brief |det| of the task block of the Jacobian (6x6 for a 6-dof arm,
 *  positional 2x2 / 3x3 for the balancer chains). */
hobmsim_status hobmsim_singularity_measure(const hobmsim_model* model, const double* q, int dof,
                                           double* measure);

/** @brief Joint efforts for a motion state, by recursive Newton-Euler.
 *  ee_wrench: force+moment (6) the end effector exerts on the environment,
 *  NULL for none. tau: dof outputs. */
hobmsim_status hobmsim_inverse_dynamics(const hobmsim_model* model, const double* q,
                                        const double* qd, const double* qdd, int dof,
                                        const double* ee_wrench, double* tau);

/* ------------------------------------------------------------ trajectory */

typedef struct hobmsim_profile hobmsim_profile;

/** @brief Trapezoidal-rate profile: ramp up over ramp_time, cruise, ramp down
 *  over ramp_time, arriving at total_time. Returns NULL on invalid timing. */
hobmsim_profile* hobmsim_profile_create(double initial_position, double final_position,
                                        double ramp_time, double total_time);

hobmsim_status hobmsim_profile_eval(const hobmsim_profile* profile, double t, double* position,
                                    double* velocity, double* acceleration);

double hobmsim_profile_total_time(const hobmsim_profile* profile);

void hobmsim_profile_free(hobmsim_profile* profile);

/* ---------------------------------------------------------- coupled runs */

typedef struct hobmsim_system hobmsim_system;
typedef struct hobmsim_coupled_series hobmsim_coupled_series;
typedef struct hobmsim_path_report hobmsim_path_report;

/** @brief Couples a robot and a balancer grasping one payload. The models are
 *  copied. payload_mass in kg. The balancer base starts at the world origin;
 *  see hobmsim_system_set_base_offset. */
hobmsim_system* hobmsim_system_create(const hobmsim_model* lwr, const hobmsim_model* hobm,
                                      double payload_mass);

/** @brief The catalog pairing: preset robot + preset balancer at the default
 *  mounting offset, carrying payload_mass. */
hobmsim_system* hobmsim_system_default(double payload_mass);

/** @brief World pose of the balancer base. */
hobmsim_status hobmsim_system_set_base_offset(hobmsim_system* system, const double* rotation9,
                                              const double* translation3);

/** @brief Default balancer mounting pose used by hobmsim_system_default. */
void hobmsim_default_base_offset(double* rotation9, double* translation3);

/** @brief elbow_positive: +1 or 0; tolerance on |det| of task Jacobians. */
hobmsim_status hobmsim_system_set_options(hobmsim_system* system, int elbow_positive,
                                          double singularity_tolerance);

void hobmsim_system_free(hobmsim_system* system);

/** @brief Sweeps robot joint 1 along the profile with the remaining dof-1
 *  joints held at fixed_joints, sampling every dt seconds. Returns NULL on
 *  any failure (singular/unreachable samples carry the time in the error
 *  message). */
hobmsim_coupled_series* hobmsim_simulate_coupled(const hobmsim_system* system,
                                                 const hobmsim_profile* profile,
                                                 const double* fixed_joints, int n_fixed,
                                                 double dt);

size_t hobmsim_coupled_size(const hobmsim_coupled_series* series);

int hobmsim_coupled_dof(const hobmsim_coupled_series* series);

/** @brief One sample: robot efforts without (tau_lm) and with (tau_total) the
 *  balancer reaction, and the balancer grip force on the payload (world xyz).
 *  Any output pointer may be NULL. theta/phi: joint positions (dof and 3). */
hobmsim_status hobmsim_coupled_sample(const hobmsim_coupled_series* series, size_t index,
                                      double* t, double* theta, double* phi, double* tau_lm,
                                      double* tau_total, double* f_hobm3);

void hobmsim_coupled_free(hobmsim_coupled_series* series);

/** @brief Scans the same sweep for singular or unreachable samples without
 *  aborting. Always returns a report unless the inputs are invalid. */
hobmsim_path_report* hobmsim_check_path(const hobmsim_system* system,
                                        const hobmsim_profile* profile,
                                        const double* fixed_joints, int n_fixed, double dt);

/** @brief 1 when the whole sweep stays regular and reachable. */
int hobmsim_path_feasible(const hobmsim_path_report* report);

size_t hobmsim_path_violation_count(const hobmsim_path_report* report);

#define HOBMSIM_VIOLATION_LWR_SINGULAR 0
#define HOBMSIM_VIOLATION_HOBM_SINGULAR 1
#define HOBMSIM_VIOLATION_HOBM_UNREACHABLE 2

/** @brief kind: HOBMSIM_VIOLATION_*; measure: |det| of the offending Jacobian
 *  block, or the planar grip distance for unreachable samples. */
hobmsim_status hobmsim_path_violation(const hobmsim_path_report* report, size_t index,
                                      double* t, int* kind, double* measure);

void hobmsim_path_report_free(hobmsim_path_report* report);

/* -------------------------------------------------------------- ringdown */

/** @brief Free decay of the balancer's two rotating links after a stop, with
 *  the payload hanging on a cable (pendulum restoring force linearized to a
 *  planar spring of stiffness payload_mass * g / cable_length). */
typedef struct hobmsim_ringdown_params {
  double cable_length;    /* m, > 0 */
  double payload_mass;    /* kg, > 0 */
  double viscous[2];      /* N.m.s/rad per joint, >= 0 */
  double coulomb[2];      /* N.m per joint, >= 0 */
  double initial_phi[2];  /* rad */
  double initial_phid[2]; /* rad/s */
  int has_anchor;         /* 0: anchor at the tip of initial_phi */
  double anchor_xy[2];    /* m, used when has_anchor != 0 */
  double dt;              /* s, fixed RK4 step, > 0 */
  double duration;        /* s, >= dt */
  double smooth_sign_eps; /* rad/s, Coulomb sign smoothing, <= 0 for default */
} hobmsim_ringdown_params;

/** @brief Fills params with the catalog scenario: 2 m cable, 50 kg payload,
 *  0.5 N.m.s/rad viscous drag, release pose (30, 60) deg, 10 s at 1 ms. */
void hobmsim_ringdown_defaults(hobmsim_ringdown_params* params);

typedef struct hobmsim_ringdown_series hobmsim_ringdown_series;

/** @brief Integrates the ringdown of a 2-dof arm model. */
hobmsim_ringdown_series* hobmsim_simulate_ringdown(const hobmsim_model* arm,
                                                   const hobmsim_ringdown_params* params);

size_t hobmsim_ringdown_size(const hobmsim_ringdown_series* series);

/** @brief One sample; outputs may be NULL. force3 is the spring force on the
 *  payload (world frame, z = 0); energy the kinetic + spring potential sum. */
hobmsim_status hobmsim_ringdown_sample(const hobmsim_ringdown_series* series, size_t index,
                                       double* t, double* phi2, double* phid2, double* force3,
                                       double* energy);

/** @brief First time after which both joints stay within band rad of their
 *  final values. */
hobmsim_status hobmsim_ringdown_settling_time(const hobmsim_ringdown_series* series, double band,
                                              double* settling_time);

/** @brief Largest spring force magnitude over the run. */
hobmsim_status hobmsim_ringdown_peak_force(const hobmsim_ringdown_series* series,
                                           double* peak_force);

void hobmsim_ringdown_free(hobmsim_ringdown_series* series);

/* ------------------------------------------------------- designed studies */

typedef struct hobmsim_design hobmsim_design;
typedef struct hobmsim_surface hobmsim_surface;

#define HOBMSIM_AXIAL_ROTATABLE 0
#define HOBMSIM_AXIAL_FACE_CENTERED 1

/** @brief Central composite design over k factors with physical ranges
 *  [lows[i], highs[i]]. Point order: 2^k factorial corners (first factor
 *  fastest), axial pairs per factor, then n_center center points. */
hobmsim_design* hobmsim_ccd_create(int k, const double* lows, const double* highs,
                                   int axial_kind, int n_center);

int hobmsim_design_n_points(const hobmsim_design* design);

int hobmsim_design_n_factors(const hobmsim_design* design);

double hobmsim_design_axial_distance(const hobmsim_design* design);

/** @brief Point index -> coded (k values) and decoded physical coordinates;
 *  either output may be NULL. */
hobmsim_status hobmsim_design_point(const hobmsim_design* design, int index, double* coded,
                                    double* physical);

void hobmsim_design_free(hobmsim_design* design);

/** @brief Experiment callback: fill *response for one design point; return 0
 *  on success, nonzero to abort the run. */
typedef int (*hobmsim_responder_fn)(void* context, const double* coded, const double* physical,
                                    int k, double* response);

/** @brief Evaluates the responder at every design point in order.
 *  responses: n_points outputs. */
hobmsim_status hobmsim_run_experiments(const hobmsim_design* design, hobmsim_responder_fn fn,
                                       void* context, double* responses);

/** @brief Full quadratic response surface fitted to the design by least
 *  squares. Returns NULL on rank deficiency. */
hobmsim_surface* hobmsim_fit_quadratic(const hobmsim_design* design, const double* responses);

/** @brief Same fit from raw coded points (n x k row-major) with an explicit
 *  coding map and fitted-region radius. */
hobmsim_surface* hobmsim_fit_quadratic_raw(int k, const double* lows, const double* highs,
                                           const double* coded_points, int n_points,
                                           const double* responses, double axial_distance);

int hobmsim_surface_n_factors(const hobmsim_surface* surface);

/** @brief Coefficients over coded factors. linear: k, interaction: k(k-1)/2
 *  in pair order (0,1), (0,2), ..., quadratic: k. Outputs may be NULL. */
hobmsim_status hobmsim_surface_coeffs(const hobmsim_surface* surface, double* intercept,
                                      double* linear, double* interaction, double* quadratic);

hobmsim_status hobmsim_surface_stats(const hobmsim_surface* surface, double* r_squared,
                                     double* max_residual);

/** @brief Evaluates the surface at a physical point; *extrapolated set to 1
 *  when the point lies outside the fitted star region. */
hobmsim_status hobmsim_surface_predict(const hobmsim_surface* surface, const double* physical,
                                       double* value, int* extrapolated);

void hobmsim_surface_free(hobmsim_surface* surface);

#define HOBMSIM_LIMIT_LIMITED 0
#define HOBMSIM_LIMIT_UNBOUNDED 1
#define HOBMSIM_LIMIT_INFEASIBLE 2

/** @brief For a 3-factor surface, the largest admissible value of factor
 *  accel_index keeping the response at or below effort_limit, over the grid
 *  of the other two factors (physical values, factor order). values and
 *  statuses: na x nb row-major; statuses entries are HOBMSIM_LIMIT_*. */
hobmsim_status hobmsim_limit_surface(const hobmsim_surface* surface, int accel_index,
                                     double effort_limit, const double* grid_a, int na,
                                     const double* grid_b, int nb, double* values,
                                     int* statuses);

/* ----------------------------------------------------- ringdown response */

typedef struct hobmsim_study hobmsim_study;

/** @brief Maps (Coulomb friction N.m, payload kg, pre-stop deceleration
 *  m/s^2) to the ringdown's peak cable force: the payload is released moving
 *  tangentially at deceleration * brake_time with the spring anchored at the
 *  release tip. The arm model is copied; params provide the remaining
 *  ringdown settings (initial_phid and anchor fields are ignored). */
hobmsim_study* hobmsim_study_create(const hobmsim_model* arm,
                                    const hobmsim_ringdown_params* params, double brake_time);

/** @brief The catalog study: preset balancer arm with the default scenario. */
hobmsim_study* hobmsim_study_reference(void);

/** @brief Peak cable force for physical3 = [coulomb, payload, deceleration].
 *  Friction and mass are clamped to physical floors (0 N.m, 0.1 kg) because
 *  rotatable axial points decode below the factor range. */
hobmsim_status hobmsim_study_eval(const hobmsim_study* study, const double* physical3,
                                  double* peak_force);

/** @brief Factor ranges of the catalog study, in hobmsim_study_eval order. */
void hobmsim_study_default_factors(double* lows3, double* highs3);

/** @brief Factor name for hobmsim_study_default_factors index 0..2. */
const char* hobmsim_study_factor_name(int index);

void hobmsim_study_free(hobmsim_study* study);

#ifdef __cplusplus
}
#endif

#endif /* HOBMSIM_H */
