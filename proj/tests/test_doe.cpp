#include "hobm/doe.hpp"

#include "hobm/study.hpp"
#include "hobm/types.hpp"

#include "doctest.h"

#include <cmath>
#include <vector>

using namespace hobm;

namespace {

std::vector<FactorSpec> three_factors() {
  return {{"coulomb_Nm", 0.0, 5.0}, {"payload_kg", 10.0, 100.0}, {"decel_mps2", 0.5, 5.0}};
}

// Exact quadratic used for recovery tests; one distinctive value per slot.
double synthetic_surface(const Eigen::VectorXd& u) {
  return 3.0 + 2.0 * u[0] - 1.5 * u[1] + 0.5 * u[2] + 0.8 * u[0] * u[1] -
         0.3 * u[0] * u[2] + 0.1 * u[1] * u[2] + 1.2 * u[0] * u[0] -
         0.7 * u[1] * u[1] + 0.4 * u[2] * u[2];
}

// Surface for the limit tests: no payload effect at its midpoint, so the
// acceleration axis has closed-form crossings there.
double limit_surface_response(const Eigen::VectorXd& u) {
  return 50.0 + 10.0 * u[0] + 6.0 * u[1] + 30.0 * u[2] + 4.0 * u[0] * u[2] +
         3.0 * u[1] * u[2] + 2.0 * u[1] * u[1] + 5.0 * u[2] * u[2];
}

QuadraticModel limit_test_model() {
  const CCDesign design = ccd_generate(three_factors(), AxialKind::rotatable, 3);
  const Eigen::VectorXd responses =
      run_experiments(design, [](const Eigen::VectorXd& coded, const Eigen::VectorXd&) {
        return limit_surface_response(coded);
      });
  return fit_quadratic(design, responses);
}

Eigen::VectorXd scalar_grid(double v) { return Eigen::VectorXd::Constant(1, v); }

}  // namespace

TEST_SUITE("doe") {

TEST_CASE("central composite designs have the canonical shape") {
  for (int k : {2, 3, 4}) {
    std::vector<FactorSpec> factors;
    for (int i = 0; i < k; ++i) factors.push_back({"f" + std::to_string(i), 0.0, 1.0});

    const CCDesign rot = ccd_generate(factors, AxialKind::rotatable, 5);
    CHECK(rot.n_points() == (1 << k) + 2 * k + 5);
    CHECK(rot.axial_distance ==
          doctest::Approx(std::pow(2.0, k / 4.0)).epsilon(1e-14));

    const CCDesign face = ccd_generate(factors, AxialKind::face_centered, 0);
    CHECK(face.axial_distance == 1.0);
    CHECK(face.n_points() == (1 << k) + 2 * k);
  }
  // rotatable distance is exact where representable
  CHECK(ccd_generate(three_factors(), AxialKind::rotatable, 0).axial_distance ==
        doctest::Approx(std::pow(2.0, 0.75)).epsilon(1e-15));
}

TEST_CASE("design points follow the documented order") {
  const CCDesign d = ccd_generate(three_factors(), AxialKind::rotatable, 2);
  const double alpha = d.axial_distance;
  REQUIRE(d.n_points() == 16);

  // factorial corners, first factor fastest
  CHECK(d.points.row(0) == Eigen::RowVector3d(-1, -1, -1));
  CHECK(d.points.row(1) == Eigen::RowVector3d(1, -1, -1));
  CHECK(d.points.row(2) == Eigen::RowVector3d(-1, 1, -1));
  CHECK(d.points.row(4) == Eigen::RowVector3d(-1, -1, 1));
  CHECK(d.points.row(7) == Eigen::RowVector3d(1, 1, 1));

  // axial pairs per factor, low before high
  CHECK(d.points.row(8) == Eigen::RowVector3d(-alpha, 0, 0));
  CHECK(d.points.row(9) == Eigen::RowVector3d(alpha, 0, 0));
  CHECK(d.points.row(11) == Eigen::RowVector3d(0, alpha, 0));
  CHECK(d.points.row(13) == Eigen::RowVector3d(0, 0, alpha));

  // center points
  CHECK(d.points.row(14).cwiseAbs().maxCoeff() == 0.0);
  CHECK(d.points.row(15).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("linear columns are balanced and mutually orthogonal") {
  const CCDesign d = ccd_generate(three_factors(), AxialKind::rotatable, 4);
  for (int i = 0; i < 3; ++i) {
    // the +-axial pair cancels up to one rounding of the irrational distance
    CHECK(std::abs(d.points.col(i).sum()) < 1e-13);
    for (int j = i + 1; j < 3; ++j)
      CHECK(d.points.col(i).dot(d.points.col(j)) == 0.0);
  }
}

TEST_CASE("decode and encode are inverse affine maps") {
  const CCDesign d = ccd_generate(three_factors(), AxialKind::rotatable, 1);

  Eigen::Vector3d coded(-1.0, 0.0, 1.0);
  const Eigen::VectorXd physical = d.decode(coded);
  CHECK(physical[0] == 0.0);
  CHECK(physical[1] == 55.0);
  CHECK(physical[2] == 5.0);
  CHECK((d.encode(physical) - coded).cwiseAbs().maxCoeff() < 1e-14);

  // rotatable axial points decode beyond the physical range by design
  Eigen::Vector3d star(0.0, -d.axial_distance, 0.0);
  CHECK(d.decode(star)[1] < 10.0);

  CHECK_THROWS_AS(d.decode(Eigen::Vector2d(0.0, 0.0)), DimensionError);
  CHECK_THROWS_AS(d.encode(Eigen::Vector2d(0.0, 0.0)), DimensionError);
}

TEST_CASE("design generation validates its inputs") {
  CHECK_THROWS_AS(ccd_generate({}, AxialKind::rotatable, 1), Error);
  CHECK_THROWS_AS(ccd_generate({{"bad", 2.0, 1.0}}, AxialKind::rotatable, 1), Error);
  CHECK_THROWS_AS(ccd_generate({{"f", 0.0, 1.0}}, AxialKind::rotatable, -1), Error);
}

TEST_CASE("run_experiments visits the points in order with decoded values") {
  const CCDesign d = ccd_generate(three_factors(), AxialKind::face_centered, 2);
  std::vector<Eigen::VectorXd> seen_coded;
  const Eigen::VectorXd responses = run_experiments(
      d, [&](const Eigen::VectorXd& coded, const Eigen::VectorXd& physical) {
        seen_coded.push_back(coded);
        if ((d.decode(coded) - physical).cwiseAbs().maxCoeff() > 0.0) return 1e9;
        return static_cast<double>(seen_coded.size());
      });
  REQUIRE(static_cast<int>(seen_coded.size()) == d.n_points());
  for (int i = 0; i < d.n_points(); ++i) {
    CHECK((seen_coded[i].transpose() - d.points.row(i)).cwiseAbs().maxCoeff() == 0.0);
    CHECK(responses[i] == i + 1.0);
  }

  CHECK_THROWS_AS(run_experiments(d, Responder{}), Error);
  CHECK_THROWS_AS(
      run_experiments(d, [](const Eigen::VectorXd&, const Eigen::VectorXd&) {
        return std::nan("");
      }),
      NumericError);
}

TEST_CASE("quadratic fit recovers a synthetic surface exactly") {
  const CCDesign d = ccd_generate(three_factors(), AxialKind::rotatable, 3);
  const Eigen::VectorXd responses =
      run_experiments(d, [](const Eigen::VectorXd& coded, const Eigen::VectorXd&) {
        return synthetic_surface(coded);
      });
  const QuadraticModel m = fit_quadratic(d, responses);

  CHECK(m.intercept == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(m.linear[0] == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(m.linear[1] == doctest::Approx(-1.5).epsilon(1e-10));
  CHECK(m.linear[2] == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(m.interaction[0] == doctest::Approx(0.8).epsilon(1e-10));   // (0,1)
  CHECK(m.interaction[1] == doctest::Approx(-0.3).epsilon(1e-10));  // (0,2)
  CHECK(m.interaction[2] == doctest::Approx(0.1).epsilon(1e-10));   // (1,2)
  CHECK(m.quadratic[0] == doctest::Approx(1.2).epsilon(1e-10));
  CHECK(m.quadratic[1] == doctest::Approx(-0.7).epsilon(1e-10));
  CHECK(m.quadratic[2] == doctest::Approx(0.4).epsilon(1e-10));
  CHECK(m.r_squared >= 1.0 - 1e-10);
  CHECK(m.max_residual < 1e-8);

  Eigen::Vector3d probe(0.3, -0.8, 1.1);
  CHECK(m.evaluate_coded(probe) ==
        doctest::Approx(synthetic_surface(probe)).epsilon(1e-10));
}

TEST_CASE("a constant response fits with unit r_squared") {
  const CCDesign d = ccd_generate(three_factors(), AxialKind::rotatable, 3);
  const QuadraticModel m =
      fit_quadratic(d, Eigen::VectorXd::Constant(d.n_points(), 7.0));
  CHECK(m.intercept == doctest::Approx(7.0).epsilon(1e-12));
  CHECK(m.linear.cwiseAbs().maxCoeff() < 1e-9);
  CHECK(m.quadratic.cwiseAbs().maxCoeff() < 1e-9);
  CHECK(m.r_squared == 1.0);
}

TEST_CASE("prediction flags extrapolation beyond the star region") {
  const CCDesign d = ccd_generate(three_factors(), AxialKind::rotatable, 3);
  const Eigen::VectorXd responses =
      run_experiments(d, [](const Eigen::VectorXd& coded, const Eigen::VectorXd&) {
        return synthetic_surface(coded);
      });
  const QuadraticModel m = fit_quadratic(d, responses);
  const double alpha = d.axial_distance;

  const auto inside = m.predict(d.decode(Eigen::Vector3d(0.5, -0.5, 0.0)));
  CHECK_FALSE(inside.extrapolated);
  CHECK(inside.value ==
        doctest::Approx(synthetic_surface(Eigen::Vector3d(0.5, -0.5, 0.0))).epsilon(1e-8));

  const auto at_star = m.predict(d.decode(Eigen::Vector3d(alpha, 0.0, 0.0)));
  CHECK_FALSE(at_star.extrapolated);

  const auto beyond = m.predict(d.decode(Eigen::Vector3d(alpha + 0.1, 0.0, 0.0)));
  CHECK(beyond.extrapolated);

  CHECK_THROWS_AS(m.predict(Eigen::Vector2d(0.0, 0.0)), DimensionError);
}

TEST_CASE("degenerate designs are rejected") {
  const auto factors = three_factors();
  const CCDesign d = ccd_generate(factors, AxialKind::rotatable, 3);

  // too few points
  CHECK_THROWS_AS(fit_quadratic(factors, Eigen::MatrixXd::Random(5, 3),
                                Eigen::VectorXd::Zero(5), 1.0),
                  NumericError);
  // enough rows, but all identical: rank deficient
  Eigen::MatrixXd repeated = Eigen::MatrixXd::Ones(12, 3);
  CHECK_THROWS_AS(fit_quadratic(factors, repeated, Eigen::VectorXd::Zero(12), 1.0),
                  NumericError);
  // response count mismatch
  CHECK_THROWS_AS(fit_quadratic(d, Eigen::VectorXd::Zero(d.n_points() - 1)),
                  DimensionError);
  // column count mismatch
  CHECK_THROWS_AS(fit_quadratic(factors, Eigen::MatrixXd::Zero(12, 2),
                                Eigen::VectorXd::Zero(12), 1.0),
                  DimensionError);
}

TEST_CASE("limit surface finds the closed-form crossing") {
  const QuadraticModel m = limit_test_model();

  // at payload midpoint the acceleration axis reduces to
  // gamma(u) = 5u^2 + 30u + (50 - limit), plus 10u0 and 4u0*u terms
  const auto grid = acceleration_limit_surface(m, 2, 80.0, scalar_grid(2.5), scalar_grid(55.0));
  REQUIRE(grid.size() == 1);
  REQUIRE(grid[0].size() == 1);
  CHECK(grid[0][0].status == LimitStatus::limited);
  const double u_star = -3.0 + std::sqrt(15.0);  // root of 5u^2 + 30u - 30
  CHECK(grid[0][0].value == doctest::Approx(2.75 + 2.25 * u_star).epsilon(1e-8));
}

TEST_CASE("limit surface classifies unbounded and infeasible cells") {
  const QuadraticModel m = limit_test_model();

  const auto open = acceleration_limit_surface(m, 2, 120.0, scalar_grid(2.5), scalar_grid(55.0));
  CHECK(open[0][0].status == LimitStatus::unbounded);
  CHECK(open[0][0].value == 5.0);  // the factor's high bound

  Eigen::VectorXd coulomb_grid(2);
  coulomb_grid << 0.0, 2.5;
  const auto tight = acceleration_limit_surface(m, 2, 20.0, coulomb_grid, scalar_grid(55.0));
  REQUIRE(tight.size() == 2);
  // coulomb 0 (coded -1): gamma(-1) = -1, crossing at (-26 + sqrt(276)) / 10
  CHECK(tight[0][0].status == LimitStatus::limited);
  const double u_low = (-26.0 + std::sqrt(276.0)) / 10.0;
  CHECK(tight[0][0].value == doctest::Approx(2.75 + 2.25 * u_low).epsilon(1e-8));
  // coulomb 2.5 (coded 0): gamma(-1) = 5 > 0, infeasible at the low bound
  CHECK(tight[1][0].status == LimitStatus::infeasible);
  CHECK(tight[1][0].value == 0.5);
}

TEST_CASE("tightening the effort limit never relaxes a cell") {
  const QuadraticModel m = limit_test_model();
  Eigen::VectorXd grid_a = Eigen::VectorXd::LinSpaced(5, 0.0, 5.0);
  Eigen::VectorXd grid_b = Eigen::VectorXd::LinSpaced(3, 10.0, 100.0);

  std::vector<std::vector<LimitCell>> previous;
  for (double limit : {140.0, 100.0, 60.0, 20.0}) {
    const auto grid = acceleration_limit_surface(m, 2, limit, grid_a, grid_b);
    for (const auto& row : grid)
      for (const LimitCell& cell : row) {
        CHECK(std::isfinite(cell.value));
        CHECK(cell.value >= 0.5);
        CHECK(cell.value <= 5.0);
      }
    if (!previous.empty()) {
      for (size_t ia = 0; ia < grid.size(); ++ia)
        for (size_t ib = 0; ib < grid[ia].size(); ++ib)
          CHECK(grid[ia][ib].value <= previous[ia][ib].value + 1e-12);
    }
    previous = grid;
  }
}

TEST_CASE("limit surface validates its inputs") {
  const QuadraticModel m = limit_test_model();
  CHECK_THROWS_AS(acceleration_limit_surface(m, 3, 80.0, scalar_grid(1.0), scalar_grid(55.0)),
                  DimensionError);
  CHECK_THROWS_AS(acceleration_limit_surface(m, 2, 80.0, Eigen::VectorXd(), scalar_grid(55.0)),
                  DimensionError);

  QuadraticModel two = m;
  two.factors = {m.factors[0], m.factors[1]};
  CHECK_THROWS_AS(acceleration_limit_surface(two, 0, 80.0, scalar_grid(1.0), scalar_grid(55.0)),
                  DimensionError);
}

TEST_CASE("the balancer ringdown study yields a usable surface") {
  RingdownStudy study = RingdownStudy::reference();
  study.base.duration = 4.0;  // the force peak arrives within the first swing
  const CCDesign d = ccd_generate(default_study_factors(), AxialKind::rotatable, 1);
  REQUIRE(d.n_points() == 15);

  const Eigen::VectorXd peaks = run_experiments(d, study.responder());
  for (int i = 0; i < peaks.size(); ++i) {
    CHECK(std::isfinite(peaks[i]));
    CHECK(peaks[i] > 0.0);
  }

  const QuadraticModel m = fit_quadratic(d, peaks);
  CHECK(m.r_squared > 0.5);
  const auto center = m.predict(d.decode(Eigen::Vector3d::Zero()));
  CHECK_FALSE(center.extrapolated);
  CHECK(center.value > 0.0);

  // harder braking never eases the peak force at the center of the region
  const double gentle = study(Eigen::Vector3d(2.5, 55.0, 1.0));
  const double hard = study(Eigen::Vector3d(2.5, 55.0, 4.0));
  CHECK(hard > gentle);
}

}  // TEST_SUITE
