#pragma once

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <vector>

namespace hobm {

/// One design factor with its physical range; coded -1/+1 map to low/high.
struct FactorSpec {
  std::string name;
  double low = 0.0;
  double high = 1.0;
};

enum class AxialKind { rotatable, face_centered };

/// Central composite design in coded units. Point order: 2^k factorial
/// corners (first factor fastest, low before high), then axial pairs
/// (-axial, +axial) per factor in factor order, then n_center center points.
struct CCDesign {
  std::vector<FactorSpec> factors;
  double axial_distance = 1.0;
  int n_center = 0;
  Eigen::MatrixXd points;  ///< n_points x k, coded

  int n_factors() const { return static_cast<int>(factors.size()); }
  int n_points() const { return static_cast<int>(points.rows()); }

  /// Coded -> physical: mid + coded * half_range per factor.
  Eigen::VectorXd decode(const Eigen::VectorXd& coded) const;
  /// Physical -> coded.
  Eigen::VectorXd encode(const Eigen::VectorXd& physical) const;
};

/// Rotatable axial distance = (2^k)^(1/4); face-centered = 1.
CCDesign ccd_generate(const std::vector<FactorSpec>& factors, AxialKind axial,
                      int n_center);

/// Evaluates the responder at every design point, in order. The responder
/// receives the coded point and its decoded physical counterpart and must
/// return a finite scalar (NumericError otherwise).
using Responder =
    std::function<double(const Eigen::VectorXd& coded, const Eigen::VectorXd& physical)>;

Eigen::VectorXd run_experiments(const CCDesign& design, const Responder& responder);

/// Full quadratic surface fitted to coded points by least squares.
/// Basis order: 1, k linear terms, k(k-1)/2 pairwise interactions
/// ((0,1), (0,2), ..., (1,2), ...), k pure quadratics.
struct QuadraticModel {
  std::vector<FactorSpec> factors;  ///< coding map for physical evaluation
  double axial_distance = 1.0;      ///< radius of the fitted region, coded
  double intercept = 0.0;
  Eigen::VectorXd linear;       ///< k
  Eigen::VectorXd interaction;  ///< k(k-1)/2
  Eigen::VectorXd quadratic;    ///< k
  double r_squared = 1.0;
  double max_residual = 0.0;

  int n_factors() const { return static_cast<int>(factors.size()); }
  double evaluate_coded(const Eigen::VectorXd& coded) const;

  struct Prediction {
    double value = 0.0;
    /// Set when any coded coordinate lies outside [-axial_distance,
    /// axial_distance] (beyond the fitted star region).
    bool extrapolated = false;
  };
  Prediction predict(const Eigen::VectorXd& physical) const;
};

/// Fits the full quadratic to the design responses. Throws DimensionError on
/// size mismatch and NumericError when the basis matrix is rank deficient.
QuadraticModel fit_quadratic(const CCDesign& design, const Eigen::VectorXd& responses);

/// Same fit from raw coded points (n x k) with an explicit coding map.
QuadraticModel fit_quadratic(const std::vector<FactorSpec>& factors,
                             const Eigen::MatrixXd& coded_points,
                             const Eigen::VectorXd& responses,
                             double axial_distance);

enum class LimitStatus { limited, unbounded, infeasible };

struct LimitCell {
  /// Largest admissible acceleration factor value (physical units). Equals
  /// the factor's low bound for infeasible cells and its high bound for
  /// unbounded ones.
  double value = 0.0;
  LimitStatus status = LimitStatus::limited;
};

/// For a 3-factor model, solve predict(...) = effort_limit for the
/// acceleration factor over each grid cell of the other two factors (physical
/// values). A cell is:
///   - infeasible when the response already exceeds effort_limit at the
///     acceleration lower bound,
///   - unbounded when the response stays at or below effort_limit across the
///     whole acceleration range,
///   - limited otherwise, with value the smallest acceleration at which the
///     response crosses effort_limit (closed-form quadratic roots).
/// Result is indexed [grid_a index][grid_b index], where grid_a and grid_b
/// follow factor order with the acceleration factor removed.
std::vector<std::vector<LimitCell>> acceleration_limit_surface(
    const QuadraticModel& model, int accel_index, double effort_limit,
    const Eigen::VectorXd& grid_a, const Eigen::VectorXd& grid_b);

}  // namespace hobm
