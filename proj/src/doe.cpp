#include "hobm/doe.hpp"

#include "hobm/types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace hobm {

namespace {

void check_factor_count(const std::vector<FactorSpec>& factors) {
  if (factors.empty()) throw Error("design needs at least one factor");
  for (const FactorSpec& f : factors)
    if (!(f.low < f.high))
      throw Error("factor '" + f.name + "': low bound must be below high bound");
}

int interaction_count(int k) { return k * (k - 1) / 2; }

}  // namespace

Eigen::VectorXd CCDesign::decode(const Eigen::VectorXd& coded) const {
  if (coded.size() != n_factors()) throw DimensionError("decode: wrong coordinate count");
  Eigen::VectorXd physical(coded.size());
  for (int i = 0; i < coded.size(); ++i) {
    const double mid = 0.5 * (factors[i].high + factors[i].low);
    const double half = 0.5 * (factors[i].high - factors[i].low);
    physical[i] = mid + coded[i] * half;
  }
  return physical;
}

Eigen::VectorXd CCDesign::encode(const Eigen::VectorXd& physical) const {
  if (physical.size() != n_factors()) throw DimensionError("encode: wrong coordinate count");
  Eigen::VectorXd coded(physical.size());
  for (int i = 0; i < physical.size(); ++i) {
    const double mid = 0.5 * (factors[i].high + factors[i].low);
    const double half = 0.5 * (factors[i].high - factors[i].low);
    coded[i] = (physical[i] - mid) / half;
  }
  return coded;
}

CCDesign ccd_generate(const std::vector<FactorSpec>& factors, AxialKind axial, int n_center) {
  check_factor_count(factors);
  if (n_center < 0) throw Error("n_center must be non-negative");
  const int k = static_cast<int>(factors.size());

  CCDesign design;
  design.factors = factors;
  design.n_center = n_center;
  design.axial_distance =
      axial == AxialKind::rotatable ? std::pow(2.0, static_cast<double>(k) / 4.0) : 1.0;

  const int n_factorial = 1 << k;
  const int n_points = n_factorial + 2 * k + n_center;
  design.points = Eigen::MatrixXd::Zero(n_points, k);

  for (int b = 0; b < n_factorial; ++b)
    for (int j = 0; j < k; ++j) design.points(b, j) = ((b >> j) & 1) ? 1.0 : -1.0;

  for (int j = 0; j < k; ++j) {
    design.points(n_factorial + 2 * j, j) = -design.axial_distance;
    design.points(n_factorial + 2 * j + 1, j) = design.axial_distance;
  }
  return design;
}

Eigen::VectorXd run_experiments(const CCDesign& design, const Responder& responder) {
  if (!responder) throw Error("run_experiments: empty responder");
  Eigen::VectorXd responses(design.n_points());
  for (int i = 0; i < design.n_points(); ++i) {
    const Eigen::VectorXd coded = design.points.row(i).transpose();
    const double y = responder(coded, design.decode(coded));
    if (!std::isfinite(y))
      throw NumericError("responder returned a non-finite value at design point " +
                         std::to_string(i));
    responses[i] = y;
  }
  return responses;
}

double QuadraticModel::evaluate_coded(const Eigen::VectorXd& coded) const {
  const int k = n_factors();
  if (coded.size() != k) throw DimensionError("evaluate_coded: wrong coordinate count");
  double value = intercept + linear.dot(coded);
  int m = 0;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) value += interaction[m++] * coded[i] * coded[j];
  for (int i = 0; i < k; ++i) value += quadratic[i] * coded[i] * coded[i];
  return value;
}

QuadraticModel::Prediction QuadraticModel::predict(const Eigen::VectorXd& physical) const {
  const int k = n_factors();
  if (physical.size() != k) throw DimensionError("predict: wrong coordinate count");
  Eigen::VectorXd coded(k);
  for (int i = 0; i < k; ++i) {
    const double mid = 0.5 * (factors[i].high + factors[i].low);
    const double half = 0.5 * (factors[i].high - factors[i].low);
    coded[i] = (physical[i] - mid) / half;
  }
  Prediction p;
  p.value = evaluate_coded(coded);
  p.extrapolated = (coded.cwiseAbs().array() > axial_distance + 1e-9).any();
  return p;
}

QuadraticModel fit_quadratic(const std::vector<FactorSpec>& factors,
                             const Eigen::MatrixXd& coded_points,
                             const Eigen::VectorXd& responses, double axial_distance) {
  check_factor_count(factors);
  const int k = static_cast<int>(factors.size());
  const auto n = coded_points.rows();
  if (coded_points.cols() != k)
    throw DimensionError("fit_quadratic: point columns do not match factor count");
  if (responses.size() != n)
    throw DimensionError("fit_quadratic: one response per design point required");

  const int n_basis = 1 + k + interaction_count(k) + k;
  if (n < n_basis)
    throw NumericError("fit_quadratic: " + std::to_string(n) + " points cannot determine " +
                       std::to_string(n_basis) + " coefficients");

  Eigen::MatrixXd basis(n, n_basis);
  for (Eigen::Index r = 0; r < n; ++r) {
    const Eigen::VectorXd x = coded_points.row(r).transpose();
    int c = 0;
    basis(r, c++) = 1.0;
    for (int i = 0; i < k; ++i) basis(r, c++) = x[i];
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j) basis(r, c++) = x[i] * x[j];
    for (int i = 0; i < k; ++i) basis(r, c++) = x[i] * x[i];
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(basis);
  if (qr.rank() < n_basis)
    throw NumericError("fit_quadratic: design does not span the quadratic basis (rank " +
                       std::to_string(qr.rank()) + " of " + std::to_string(n_basis) + ")");
  const Eigen::VectorXd coeff = qr.solve(responses);

  QuadraticModel model;
  model.factors = factors;
  model.axial_distance = axial_distance;
  model.intercept = coeff[0];
  model.linear = coeff.segment(1, k);
  model.interaction = coeff.segment(1 + k, interaction_count(k));
  model.quadratic = coeff.tail(k);

  const Eigen::VectorXd fitted = basis * coeff;
  const Eigen::VectorXd residual = responses - fitted;
  model.max_residual = residual.size() > 0 ? residual.cwiseAbs().maxCoeff() : 0.0;
  const double ss_res = residual.squaredNorm();
  const double ss_tot = (responses.array() - responses.mean()).square().sum();
  model.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return model;
}

QuadraticModel fit_quadratic(const CCDesign& design, const Eigen::VectorXd& responses) {
  return fit_quadratic(design.factors, design.points, responses, design.axial_distance);
}

namespace {

// gamma(u) = response(u) - limit along the coded acceleration axis; u in
// [-1, 1] spans the factor's physical range.
struct AxisQuadratic {
  double a, b, c;  // gamma(u) = a u^2 + b u + c

  double operator()(double u) const { return (a * u + b) * u + c; }
};

// Smallest u in (-1, 1] where gamma crosses from <= 0 to > 0, given
// gamma(-1) <= 0; +infinity when it never does.
double first_crossing(const AxisQuadratic& g) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  const double scale = std::max({1.0, std::abs(g.a), std::abs(g.b), std::abs(g.c)});
  const double tiny = 1e-13 * scale;

  if (std::abs(g.a) <= tiny) {
    if (g.b <= tiny) return kInf;  // non-increasing, stays at or below zero
    return std::max(-g.c / g.b, -1.0);
  }

  const double disc = g.b * g.b - 4.0 * g.a * g.c;
  if (disc <= 0.0) {
    // No sign change: an upward curve above zero contradicts gamma(-1) <= 0
    // (touching case), a downward curve stays below.
    return g.a > 0.0 ? -1.0 : kInf;
  }
  const double sq = std::sqrt(disc);
  const double q = -0.5 * (g.b + std::copysign(sq, g.b));
  double r1 = q / g.a;
  double r2 = std::abs(q) > 0.0 ? g.c / q : r1;
  if (r1 > r2) std::swap(r1, r2);

  if (g.a > 0.0) return std::max(r2, -1.0);  // below zero on [r1, r2] which holds -1
  // Downward: above zero strictly inside (r1, r2); -1 sits at or left of r1,
  // or right of r2 where the curve stays below.
  if (-1.0 >= r2) return kInf;
  return std::max(r1, -1.0);
}

}  // namespace

std::vector<std::vector<LimitCell>> acceleration_limit_surface(const QuadraticModel& model,
                                                               int accel_index,
                                                               double effort_limit,
                                                               const Eigen::VectorXd& grid_a,
                                                               const Eigen::VectorXd& grid_b) {
  const int k = model.n_factors();
  if (k != 3) throw DimensionError("acceleration_limit_surface: needs a 3-factor model");
  if (accel_index < 0 || accel_index >= k)
    throw DimensionError("acceleration_limit_surface: acceleration factor index out of range");
  if (grid_a.size() == 0 || grid_b.size() == 0)
    throw DimensionError("acceleration_limit_surface: empty grid");

  std::vector<int> others;
  for (int i = 0; i < k; ++i)
    if (i != accel_index) others.push_back(i);

  const FactorSpec& accel = model.factors[accel_index];
  const double mid = 0.5 * (accel.high + accel.low);
  const double half = 0.5 * (accel.high - accel.low);

  auto encode_one = [&](const FactorSpec& f, double physical) {
    return (physical - 0.5 * (f.high + f.low)) / (0.5 * (f.high - f.low));
  };

  std::vector<std::vector<LimitCell>> grid(grid_a.size());
  Eigen::VectorXd coded(k);
  for (Eigen::Index ia = 0; ia < grid_a.size(); ++ia) {
    grid[ia].resize(grid_b.size());
    for (Eigen::Index ib = 0; ib < grid_b.size(); ++ib) {
      coded[others[0]] = encode_one(model.factors[others[0]], grid_a[ia]);
      coded[others[1]] = encode_one(model.factors[others[1]], grid_b[ib]);

      auto gamma_at = [&](double u) {
        coded[accel_index] = u;
        return model.evaluate_coded(coded) - effort_limit;
      };
      AxisQuadratic g{};
      g.c = gamma_at(0.0);
      const double hi = gamma_at(1.0), lo = gamma_at(-1.0);
      g.a = 0.5 * (hi + lo) - g.c;
      g.b = 0.5 * (hi - lo);

      LimitCell& cell = grid[ia][ib];
      if (lo > 0.0) {
        cell = {accel.low, LimitStatus::infeasible};
        continue;
      }
      const double u = first_crossing(g);
      if (u >= 1.0) {
        cell = {accel.high, LimitStatus::unbounded};
      } else {
        cell = {mid + u * half, LimitStatus::limited};
      }
    }
  }
  return grid;
}

}  // namespace hobm
