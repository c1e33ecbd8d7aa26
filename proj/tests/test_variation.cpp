#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "shrinkerlab/errors.hpp"
#include "shrinkerlab/variation.hpp"

using namespace shrinkerlab;
using namespace shrinkerlab::testing;

namespace {

const GraphThresholds kThr{1.0, 0.1};

// entire smooth trial fields: low sigma modes times cubic axial polynomials.
// Cubic y-dependence is differentiated exactly by the stencils, so the
// comparison against the s-difference oracle is limited only by the profile
// direction resolution.
NormalField trial_field(const CylinderGrid& g, std::uint64_t seed, bool with_z,
                        double amp = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  NormalField f = zero_field(g, with_z);
  auto fill = [&](Grid2D& comp) {
    const double L = g.profile.length;
    for (int m = 0; m <= 2; ++m) {
      const double ph = M_PI * unif(rng);
      for (int n = 0; n <= 3; ++n) {
        const double a = amp * unif(rng) / (1.0 + m * m + n * n);
        for (int i = 0; i < g.M(); ++i) {
          const double cs = std::cos(2.0 * M_PI * m * i * g.dsig / L + ph);
          for (int j = 0; j < g.J(); ++j)
            comp(i, j) += a * cs * std::pow(g.y[j] / 6.0, n);
        }
      }
    }
  };
  fill(f.u);
  if (with_z) fill(f.uz);
  const double c2 = field_cm_norm(g, f, 2);
  f.u /= c2;
  if (with_z) f.uz /= c2;
  return f;
}

NormalField k1_field(const CylinderGrid& g) {
  NormalField f = zero_field(g);
  for (int i = 0; i < g.M(); ++i)
    for (int j = 0; j < g.J(); ++j)
      f.u(i, j) = (g.y[j] * g.y[j] - 2.0) * g.profile.kappa[i];
  return f;
}

}  // namespace

TEST_CASE("fd machinery is exact on the polynomials it should kill") {
  auto cubic = [](double s) { return 1.0 + 2.0 * s + 3.0 * s * s + 4.0 * s * s * s; };
  const auto d1 = fd_derivative(cubic, 1, 1e-2);
  CHECK(d1.value == doctest::Approx(2.0).epsilon(1e-12));
  const auto d2 = fd_derivative(cubic, 2, 1e-2);
  CHECK(d2.value == doctest::Approx(6.0).epsilon(1e-10));
}

TEST_CASE("analytic first variations match the finite-difference oracle: round") {
  const CylinderGrid g = round_grid(384, 385);
  for (std::uint64_t seed : {101, 202}) {
    const NormalField V = trial_field(g, seed, false);
    const VariationGaps rep = compare_first_variations(g, V, 4e-3, kThr);
    CHECK(rep.metric <= 1e-6);
    CHECK(rep.second_ff <= 1e-6);
    CHECK(rep.abs_h <= 1e-6);
    CHECK(rep.normal_dir <= 1e-6);
    CHECK(rep.grad_abs_h <= 1e-6);
    CHECK(rep.grad_A <= 1e-6);
    // the tau-variation oracle floor: third-derivative stencil roundoff of
    // the graph evaluation divided by the s-step
    CHECK(rep.grad_tau <= 1e-5);
    CHECK(rep.pi_s <= 1e-6);
  }
}

TEST_CASE("analytic first variations match the finite-difference oracle: AL, R^4") {
  // the Abresch-Langer harmonics set the grid-error floor, so the profile
  // direction is refined well past the defaults
  ProfileSpec spec = al_spec(2, 3, 1536);
  const CylinderGrid g = build_grid(solve_abresch_langer(spec), 12.0, 257, 4);
  const NormalField V = trial_field(g, 303, true);
  const VariationGaps rep = compare_first_variations(g, V, 4e-3, kThr);
  CHECK(rep.metric <= 1e-6);
  CHECK(rep.second_ff <= 1e-6);
  CHECK(rep.abs_h <= 1e-6);
  CHECK(rep.normal_dir <= 1e-6);
  CHECK(rep.grad_abs_h <= 1e-6);
  CHECK(rep.grad_A <= 1e-6);
  CHECK(rep.grad_tau <= 1e-5);
  CHECK(rep.pi_s <= 1e-6);
}

TEST_CASE("mean curvature variation closed forms on profile-normal fields") {
  const CylinderGrid g = round_grid(128, 129);
  NormalField V = zero_field(g);
  for (int j = 0; j < g.J(); ++j)
    V.u.col(j).setConstant(std::exp(-g.y[j] * g.y[j] / 8.0));
  const FirstVariationSet fv = analytic_first_variations(g, V);
  // round: |H|_s = -Lap u - u/2
  const Grid2D lap = d_periodic(V.u, 2, g.dsig) + d_bounded(V.u, 2, g.dy);
  CHECK((fv.absH_s + lap + 0.5 * V.u).abs().maxCoeff() <= 1e-12);
}

TEST_CASE("gradtau variation of the K1 field on the round cylinder") {
  const CylinderGrid g = round_grid(256, 257);
  const NormalField jp = k1_field(g);
  const FirstVariationSet fv = analytic_first_variations(g, jp);
  // single nonzero component pair: (nabla_s tau)_{sy} = y N, all others vanish
  double off = 0;
  for (int i = 0; i < g.M(); i += 13)
    for (int j = 0; j < g.J(); j += 11) {
      const double y = g.y[j];
      const Eigen::Vector2d n(g.profile.normal(i / 1, 0),
                              g.profile.normal(i, 1));
      CHECK(fv.gradtau_s[0][1][0](i, j) == doctest::Approx(y * n[0]).epsilon(1e-6));
      CHECK(fv.gradtau_s[0][1][1](i, j) == doctest::Approx(y * n[1]).epsilon(1e-6));
      off = std::max(off, std::abs(fv.gradtau_s[1][0][0](i, j)));
      off = std::max(off, std::abs(fv.gradtau_s[1][2][0](i, j)));
      off = std::max(off, std::abs(fv.gradtau_s[0][0][0](i, j)));
    }
  CHECK(off <= 1e-8);
  // |(nabla tau)_s|^2 = 2 y^2
  Grid2D expect(g.M(), g.J());
  for (int j = 0; j < g.J(); ++j) expect.col(j).setConstant(2.0 * g.y[j] * g.y[j]);
  CHECK((fv.gradtau_s_sq - expect).abs().maxCoeff() <= 1e-6);
}

TEST_CASE("second variation constant on the round cylinder equals 2") {
  const CylinderGrid g = round_grid(256, 257);
  const NormalField jp = k1_field(g);
  const double num = second_variation_T_L1(g, jp);
  const double den = inner_rho(g, jp, jp);
  CHECK(num / den == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("second variation ratio on AL(2,3) against the 1-d reference") {
  ProfileSpec spec = al_spec(2, 3, 512);
  const CylinderGrid g = build_grid(solve_abresch_langer(spec), 12.0, 257, 3);
  const NormalField jp = k1_field(g);
  const double ratio = second_variation_T_L1(g, jp) / inner_rho(g, jp, jp);
  // frozen from the independent profile integration:
  // [I(1) + 2 I(kd^2/k^2)] / I(k^2) with I the rho_2-weighted curve integral,
  // from 2|(grad tau)_s|^2 = f'^2 + 4 (kappa'/kappa)^2 f''^2 on K1 fields
  CHECK(ratio == doctest::Approx(6.274481078).epsilon(1e-5));
  const double b2 = compute_B2(g.profile);
  CHECK(ratio >= 4.0 * b2 * 0.99);
}

TEST_CASE("analytic second variation agrees with the direct graph measurement") {
  const CylinderGrid g = round_grid(192, 193);
  const GraphThresholds wide{1e9, 0.05};  // the K1 field is large at the ends
  const NormalField jp = k1_field(g);
  const FirstVariationSet fv = analytic_first_variations(g, jp);
  const double analytic = g.integrate_rho(2.0 * fv.gradtau_s_sq);
  auto f = [&](double s) { return integral_gradtau_sq(g, jp.scaled(s), wide); };
  const auto d2 = fd_derivative(f, 2, 2e-3);
  CHECK(std::abs(d2.value - analytic) / analytic <= 1e-4);

  // pointwise (|grad tau|^2)_ss = 2 |(grad tau)_s|^2 away from the far ends,
  // where s * |U| stays small for the probing steps
  const double h = 1e-3;
  GeometryState sp = evaluate_geometry(g, jp.scaled(h), wide);
  GeometryState s0 = evaluate_geometry(g, zero_field(g), wide);
  GeometryState sm = evaluate_geometry(g, jp.scaled(-h), wide);
  const Grid2D fd2 =
      (sp.gradtau_sq - 2.0 * s0.gradtau_sq + sm.gradtau_sq) / (h * h);
  double gap = 0, scale = 0;
  for (int i = 0; i < g.M(); ++i)
    for (int j = 0; j < g.J(); ++j)
      if (std::abs(g.y[j]) <= 6.0) {
        gap = std::max(gap,
                       std::abs(fd2(i, j) - 2.0 * fv.gradtau_s_sq(i, j)));
        scale = std::max(scale, 2.0 * fv.gradtau_s_sq(i, j));
      }
  CHECK(gap / scale <= 1e-3);
}

TEST_CASE("first variation of the tau energy vanishes") {
  const CylinderGrid g = round_grid(128, 129);
  for (std::uint64_t seed : {5, 6, 7}) {
    const NormalField V = trial_field(g, seed, false, 0.5);
    auto f = [&](double s) { return integral_gradtau_sq(g, V.scaled(s), kThr); };
    const auto d1 = fd_derivative(f, 1, 1e-2);
    const auto d2 = fd_derivative(f, 2, 1e-2);
    const double rel = 2.0 * std::abs(d1.value) / (std::abs(d2.value) * d1.step);
    CHECK(rel <= 1e-7);
  }
}

TEST_CASE("span guard of the second variation") {
  const CylinderGrid g = round_grid(96, 97);
  const NormalField V = trial_field(g, 99, false);
  CHECK_THROWS_AS(second_variation_T_L1(g, V), BadField);
}

TEST_CASE("P variations on the R^4 Abresch-Langer cylinder") {
  ProfileSpec spec = al_spec(2, 3, 256);
  const CylinderGrid g = build_grid(solve_abresch_langer(spec), 12.0, 129, 4);

  SUBCASE("first variation vanishes for arbitrary normal fields") {
    const NormalField V = trial_field(g, 41, true, 0.5);
    const auto pv = p_variation_checks(g, V, 1e-2, kThr);
    const double rel =
        2.0 * std::abs(pv.first.value) / (std::abs(pv.second.value) * pv.first.step);
    CHECK(rel <= 1e-6);
    CHECK(pv.second.value > 0);  // h-components excite P at second order
  }

  SUBCASE("second variation vanishes on kernel basis fields") {
    const GraphThresholds wide{1e9, 0.05};
    // profile-normal basis field: the graph keeps codimension one
    NormalField V1 = zero_field(g, true);
    for (int i = 0; i < g.M(); ++i)
      for (int j = 0; j < g.J(); ++j)
        V1.u(i, j) = 0.05 * (g.y[j] * g.y[j] - 2.0) * g.profile.kappa[i];
    const auto pv1 = p_variation_checks(g, V1, 1e-2, wide);
    CHECK(std::abs(pv1.second.value) <= 1e-6 * pv1.second_scale);
    // rotation into the trivial direction: the image stays in a hyperplane
    NormalField V2 = zero_field(g, true);
    for (int j = 0; j < g.J(); ++j) V2.uz.col(j).setConstant(g.y[j]);
    const auto pv2 = p_variation_checks(g, V2, 1e-2, wide);
    CHECK(std::abs(pv2.second.value) <= 1e-6 * pv2.second_scale);
    CHECK(std::abs(pv2.first.value) <= 1e-8 * pv2.second_scale);
  }
}

TEST_CASE("requires an R^4 cylinder for P variations") {
  const CylinderGrid g = round_grid(64, 65);
  const NormalField V = trial_field(g, 1, false);
  CHECK_THROWS_AS(p_variation_checks(g, V), BadField);
}
