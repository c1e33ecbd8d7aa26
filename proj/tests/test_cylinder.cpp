#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "shrinkerlab/cylinder.hpp"
#include "shrinkerlab/errors.hpp"
#include "shrinkerlab/field.hpp"
#include "shrinkerlab/graphgeom.hpp"

using namespace shrinkerlab;
using namespace shrinkerlab::testing;

TEST_CASE("grid positions and weight") {
  const CylinderGrid g = round_grid();
  CHECK(g.M() == 256);
  CHECK(g.J() == 257);
  for (int i = 0; i < g.M(); i += 41)
    for (int j = 0; j < g.J(); j += 51)
      CHECK(g.xsq(i, j) ==
            doctest::Approx(2.0 + g.y[j] * g.y[j]).epsilon(1e-14));
  CHECK_THROWS_AS(build_grid(round_profile_curve(64), 12.0, 256, 3), BadField);
  CHECK_THROWS_AS(build_grid(round_profile_curve(64), 12.0, 257, 5), BadField);
}

TEST_CASE("short grids are accepted with a visible tail") {
  const CylinderGrid g4 = build_grid(round_profile_curve(64), 4.0, 65, 3);
  const CylinderGrid g12 = build_grid(round_profile_curve(64), 12.0, 193, 3);
  CHECK(g4.tail_bound > 1e3 * g12.tail_bound);
  CHECK(g4.tail_bound < 1.0);
}

TEST_CASE("gaussian area of the base cylinder") {
  const CylinderGrid g = round_grid();
  const double expect = std::sqrt(2.0 * M_PI / std::exp(1.0));
  CHECK(gaussian_area(g) == doctest::Approx(expect).epsilon(1e-10));
  CHECK(round_cylinder_area(std::sqrt(2.0)) ==
        doctest::Approx(expect).epsilon(1e-15));
}

TEST_CASE("axial gaussian moments to degree eight") {
  const CylinderGrid g = round_grid();
  const double mass = gaussian_area(g);
  // variance-2 moments: E y^{2m} = (2m-1)!! 2^m
  const double expect[5] = {1.0, 2.0, 12.0, 120.0, 1680.0};
  for (int m = 0; m <= 4; ++m) {
    Grid2D f(g.M(), g.J());
    for (int j = 0; j < g.J(); ++j)
      f.col(j).setConstant(std::pow(g.y[j], 2 * m));
    const double val = g.integrate_rho(f) / mass;
    CHECK(std::abs(val - expect[m]) / expect[m] <= 1e-10);
  }
}

TEST_CASE("drift laplacian closed forms") {
  const CylinderGrid g = round_grid(128, 129);
  Grid2D f(g.M(), g.J());

  // (L + 1)(y^2 - 2) = 0
  for (int j = 0; j < g.J(); ++j) f.col(j).setConstant(g.y[j] * g.y[j] - 2.0);
  CHECK((drift_laplacian(g, f) + f).abs().maxCoeff() <= 1e-10);

  // L y = -y/2
  for (int j = 0; j < g.J(); ++j) f.col(j).setConstant(g.y[j]);
  Grid2D expect(g.M(), g.J());
  for (int j = 0; j < g.J(); ++j) expect.col(j).setConstant(-0.5 * g.y[j]);
  CHECK((drift_laplacian(g, f) - expect).abs().maxCoeff() <= 1e-11);

  // L 1 = 0
  f.setConstant(1.0);
  CHECK(drift_laplacian(g, f).abs().maxCoeff() <= 1e-12);

  // L N_1 = -N_1/2 on the circle (profile direction)
  for (int i = 0; i < g.M(); ++i)
    f.row(i).setConstant(g.profile.normal(i, 0));
  CHECK((drift_laplacian(g, f) + 0.5 * f).abs().maxCoeff() <= 1e-7);
}

TEST_CASE("integration by parts against the drift laplacian") {
  const CylinderGrid g = round_grid();
  const double mass = gaussian_area(g);
  Grid2D f(g.M(), g.J());
  for (int j = 0; j < g.J(); ++j) f.col(j).setConstant(g.y[j] * g.y[j] - 2.0);

  const double grad_term = g.integrate_rho(grad_sq(g, f, 1)) / mass;
  const double ibp_term = -g.integrate_rho(f * drift_laplacian(g, f)) / mass;
  const double f_sq = g.integrate_rho(f.square()) / mass;
  CHECK(std::abs(grad_term - ibp_term) <= 1e-8);
  CHECK(std::abs(grad_term - 8.0) <= 1e-8);
  CHECK(std::abs(f_sq - 8.0) <= 1e-8);

  // compactly supported field
  const NormalField b = random_smooth_field(g, 7, 8.0, false);
  const double lhs = g.integrate_rho(grad_sq(g, b.u, 1));
  const double rhs = -g.integrate_rho(b.u * drift_laplacian(g, b.u));
  CHECK(std::abs(lhs - rhs) <= 1e-7 * std::max(1.0, std::abs(lhs)));
}

TEST_CASE("weighted norms") {
  const CylinderGrid g = round_grid(128, 129);
  Grid2D one = Grid2D::Constant(g.M(), g.J(), 1.0);
  const auto n = weighted_norm(g, one, 0, 2);
  CHECK(n.value * n.value == doctest::Approx(gaussian_area(g)).epsilon(1e-12));

  Grid2D zero = Grid2D::Zero(g.M(), g.J());
  CHECK(weighted_norm(g, zero, 2, 1).value == 0.0);

  CHECK_THROWS_AS(weighted_norm(g, one, 4, 2), UnsupportedNorm);
  CHECK_THROWS_AS(weighted_norm(g, one, 1, 4), UnsupportedNorm);

  // monotone under region growth
  Grid2D f(g.M(), g.J());
  for (int j = 0; j < g.J(); ++j) f.col(j).setConstant(g.y[j]);
  const double b5 = weighted_norm(g, f, 1, 2, NormRegion::in_ball(5)).value;
  const double b9 = weighted_norm(g, f, 1, 2, NormRegion::in_ball(9)).value;
  const double be = weighted_norm(g, f, 1, 2).value;
  CHECK(b5 <= b9);
  CHECK(b9 <= be);
}

TEST_CASE("graph area matches the closed-form radius integral") {
  const CylinderGrid g = round_grid(512, 513);
  GraphThresholds thr{0.2, 0.1};
  for (double c : {-0.1, 0.05, 0.1}) {
    NormalField U = zero_field(g);
    U.u.setConstant(c);
    const GeometryState st = evaluate_geometry(g, U, thr);
    const double expect = round_cylinder_area(std::sqrt(2.0) + c);
    CHECK(std::abs(gaussian_area(g, st) - expect) <= 1e-8);
  }
}

TEST_CASE("wild graphs are rejected") {
  const CylinderGrid g = round_grid(64, 65);
  NormalField U = zero_field(g);
  U.u.setConstant(3.0);  // |U|_C2 = 3 against the default 0.05 threshold
  CHECK_THROWS_AS(evaluate_geometry(g, U), GraphRegularityExceeded);
}
