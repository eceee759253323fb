#include <doctest.h>

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "heislab/errors.hpp"
#include "heislab/regression.hpp"

using namespace heislab;

TEST_CASE("exact line") {
  const std::vector<double> x{0, 1, 2, 3, 4}, y{1, 3, 5, 7, 9};
  const LineFit f = fit_line(x, y);
  CHECK(f.slope == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(f.intercept == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(f.residual_rms <= 1e-15);
  CHECK(f.half_width <= 1e-14);
  CHECK(f.points == 5);
}

TEST_CASE("two points give no interval") {
  const std::vector<double> x{1, 2}, y{5, 3};
  const LineFit f = fit_line(x, y);
  CHECK(f.slope == -2.0);
  CHECK(f.half_width == 0.0);
}

TEST_CASE("noisy line against a design-matrix solve") {
  const std::vector<double> x{0, 1, 2, 3}, y{0.0, 1.1, 1.9, 3.2};
  const LineFit f = fit_line(x, y);

  Eigen::MatrixXd X(4, 2);
  Eigen::VectorXd Y(4);
  for (int i = 0; i < 4; ++i) {
    X(i, 0) = x[i];
    X(i, 1) = 1.0;
    Y(i) = y[i];
  }
  const Eigen::Vector2d beta = X.colPivHouseholderQr().solve(Y);
  const double sse = (X * beta - Y).squaredNorm();
  const Eigen::Matrix2d cov = (X.transpose() * X).inverse() * (sse / 2.0);
  CHECK(f.slope == doctest::Approx(beta(0)).epsilon(1e-12));
  CHECK(f.intercept == doctest::Approx(beta(1)).epsilon(1e-12));
  CHECK(f.slope_stderr == doctest::Approx(std::sqrt(cov(0, 0))).epsilon(1e-10));
  // Two-sided 95% Student-t quantile with 2 degrees of freedom.
  CHECK(f.half_width == doctest::Approx(4.302652729911275 * std::sqrt(cov(0, 0))).epsilon(1e-10));
}

TEST_CASE("fit errors") {
  const std::vector<double> one{1.0}, two{1.0, 1.0}, three{1.0, 2.0, 3.0};
  CHECK_THROWS_AS(fit_line(one, one), InvalidArgument);
  CHECK_THROWS_AS(fit_line(two, two), InvalidArgument);
  CHECK_THROWS_AS(fit_line(two, three), InvalidArgument);
}
