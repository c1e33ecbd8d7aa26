#include "shrinkerlab/harness.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <thread>

#include "shrinkerlab/errors.hpp"
#include "shrinkerlab/parallel.hpp"

namespace shrinkerlab {

int max_threads() {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw <= 0) hw = 1;
  if (const char* env = std::getenv("SHRINKER_LAB_THREADS")) {
    const int cap = std::atoi(env);
    if (cap > 0) hw = std::min(hw, cap);
  }
  return hw;
}

void parallel_for(int n, const std::function<void(int)>& fn) {
  const int nt = std::min(n, max_threads());
  if (nt <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr err;
  std::mutex err_mu;
  std::vector<std::thread> pool;
  for (int t = 0; t < nt; ++t)
    pool.emplace_back([&] {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lk(err_mu);
          if (!err) err = std::current_exception();
          return;
        }
      }
    });
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

double LojasiewiczExponents::delta(double R, int n) {
  return std::pow(R, n) * std::exp(-R * R / 4.0);
}

double InequalityReport::stability_factor() const {
  double lo = std::numeric_limits<double>::infinity(), hi = 0;
  for (const auto& pt : sweep) {
    if (pt.ratio > 0 && std::isfinite(pt.ratio)) {
      lo = std::min(lo, pt.ratio);
      hi = std::max(hi, pt.ratio);
    }
  }
  if (!(hi > 0) || !std::isfinite(lo)) return std::numeric_limits<double>::quiet_NaN();
  return hi / lo;
}

double fit_loglog_slope(const std::vector<std::pair<double, double>>& pts) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (const auto& [e, v] : pts) {
    if (!(v > 0) || !(e > 0)) continue;
    const double x = std::log(e), y = std::log(v);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 2) return std::numeric_limits<double>::quiet_NaN();
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

NormalField family_shape(const CylinderGrid& grid, const KernelBasis& basis,
                         FamilyKind kind, std::uint64_t seed,
                         double support_radius) {
  const bool with_z = grid.ambient_dim == 4;
  // support_radius >= Y marks grid-truncated fields: the Gaussian tail at the
  // axial ends is below quadrature tolerance, so no cutoff is applied
  const bool cut = support_radius < grid.Y;
  const Grid2D chi =
      cut ? cutoff_profile(grid, support_radius) : Grid2D();

  auto basis_combo = [&](bool use_k0, bool use_k1) {
    NormalField acc = zero_field(grid, with_z);
    acc.support_radius = support_radius;
    int n = 0;
    auto add = [&](const NormalField& f, double w) {
      NormalField c = f;
      if (cut) {
        c.u *= chi;
        if (c.has_z()) c.uz *= chi;
      }
      c.support_radius = support_radius;
      acc = acc + w * c;
      ++n;
    };
    if (use_k0)
      for (const auto& f : basis.k0_fields)
        add(f, 1.0 / std::sqrt(static_cast<double>(basis.k0_fields.size())));
    if (use_k1)
      for (const auto& f : basis.k1_fields) add(f, 1.0);
    if (n == 0) throw BadField("empty basis combination");
    return acc;
  };

  NormalField shape;
  switch (kind) {
    case FamilyKind::PureK0:
      shape = basis_combo(true, false);
      break;
    case FamilyKind::PureK1:
      shape = basis_combo(false, true);
      break;
    case FamilyKind::PureH: {
      NormalField raw = random_smooth_field(grid, seed, support_radius, with_z, cut);
      DecompositionResult d = project_decompose(grid, raw, basis);
      shape = d.h;
      break;
    }
    case FamilyKind::Mixed: {
      NormalField raw = random_smooth_field(grid, seed + 1, support_radius, with_z, cut);
      DecompositionResult d = project_decompose(grid, raw, basis);
      shape = 0.5 * basis_combo(true, false) + 0.3 * basis_combo(false, true) +
              1.0 * d.h;
      break;
    }
  }
  // natural scale with a regularity cap: unit weighted L^2 norm, then C^2
  // norm at most 4 so the default ladder stays inside the graph thresholds
  const double l2 = l2_rho(grid, shape);
  if (!(l2 > 0)) throw BadField("degenerate family shape");
  shape = (1.0 / l2) * shape;
  const double c2 = field_cm_norm(grid, shape, 2);
  if (c2 > 4.0) shape = (4.0 / c2) * shape;
  return shape;
}

std::shared_ptr<HarnessContext> make_context(const ExperimentConfig& cfg) {
  auto ctx = std::make_shared<HarnessContext>();
  ctx->cfg = cfg;
  ctx->grid = build_grid(make_profile(cfg.profile), cfg.Y, cfg.axial,
                         cfg.ambient_dim);
  ctx->basis = build_kernel_basis(ctx->grid);
  ctx->shape = family_shape(ctx->grid, ctx->basis, cfg.family, cfg.seed,
                            cfg.support_radius);
  switch (cfg.family) {
    case FamilyKind::PureK0: ctx->family_name = "pure-K0"; break;
    case FamilyKind::PureK1: ctx->family_name = "pure-K1"; break;
    case FamilyKind::PureH: ctx->family_name = "pure-orthogonal"; break;
    case FamilyKind::Mixed: ctx->family_name = "mixed"; break;
  }
  // baseline through the same graph quadrature path, so the discretization
  // bias cancels in area and phi differences
  {
    GeometryState st0 = evaluate_geometry(
        ctx->grid, zero_field(ctx->grid, cfg.ambient_dim == 4), cfg.thresholds);
    ctx->base_area = gaussian_area(ctx->grid, st0);
    for (int c = 0; c < 4; ++c) ctx->base_phi[c] = st0.phi[c];
  }
  return ctx;
}

namespace {

FamilyPoint measure_point_impl(const HarnessContext& ctx, double eps) {
  const CylinderGrid& grid = ctx.grid;
  FamilyPoint fp;
  fp.eps = eps;
  const NormalField U = eps * ctx.shape;
  fp.u_l2 = l2_rho(grid, U);
  fp.u_c2 = field_cm_norm(grid, U, 2);
  fp.u_c3 = field_cm_norm(grid, U, 3);

  DecompositionResult dec = project_decompose(grid, U, ctx.basis);
  fp.u0_l2 = dec.u0_l2;
  fp.jp_l2 = dec.jprime_l2;
  fp.h_l2 = dec.h_l2;
  fp.h_w22 = dec.h_w22;

  GeometryState st = evaluate_geometry(grid, U, ctx.cfg.thresholds);
  Grid2D phi[4];
  for (int c = 0; c < 4; ++c) phi[c] = st.phi[c] - ctx.base_phi[c];
  Grid2D m0, m1, m2;
  normal_field_magnitudes(st, phi, m0, m1, m2);
  fp.phi_l1 = grid.integrate_rho(m0);
  fp.phi_l2 = std::sqrt(grid.integrate_rho(m0.square()));
  fp.phi_w12 = std::sqrt(grid.integrate_rho((m0 + m1).square()));
  fp.phi_w21 = grid.integrate_rho(m0 + m1 + m2);
  fp.phi_l1_ball = grid.integrate_rho_ball(m0, ctx.cfg.R);
  fp.phi_l2_ball = std::sqrt(grid.integrate_rho_ball(m0.square(), ctx.cfg.R));
  fp.gradtau_l1 = grid.integrate_rho(st.gradtau_sq);
  fp.p_l1 = grid.integrate_rho(st.P.abs());
  const Grid2D um2 = field_pointwise_m(grid, U, 2);
  fp.x6_u23 = grid.integrate_rho(grid.bracket_x().pow(6) * um2.pow(3));
  fp.area = gaussian_area(grid, st);
  return fp;
}

}  // namespace

const FamilyPoint& measure_point(const HarnessContext& ctx, double eps) {
  {
    std::lock_guard<std::mutex> lk(ctx.cache_mu);
    auto it = ctx.point_cache.find(eps);
    if (it != ctx.point_cache.end()) return it->second;
  }
  FamilyPoint fp = measure_point_impl(ctx, eps);
  std::lock_guard<std::mutex> lk(ctx.cache_mu);
  return ctx.point_cache.emplace(eps, std::move(fp)).first->second;
}

namespace {

void prime_cache(const HarnessContext& ctx) {
  const auto& ladder = ctx.cfg.eps_ladder;
  parallel_for(static_cast<int>(ladder.size()),
               [&](int i) { measure_point(ctx, ladder[i]); });
}

void finish_report(InequalityReport& rep, const HarnessContext& ctx) {
  rep.tail_bound = ctx.grid.tail_bound;
  if (!rep.sweep.empty()) {
    const SweepPoint& finest = rep.sweep.back();
    rep.lhs = finest.lhs;
    rep.rhs_terms = finest.terms;
    double worst = 0;
    for (const auto& pt : rep.sweep)
      if (std::isfinite(pt.ratio)) worst = std::max(worst, pt.ratio);
    rep.implied_constant = worst;
  }
  rep.extra["stability_factor"] = rep.stability_factor();
  rep.extra["family_c2_at_max_eps"] =
      ctx.cfg.eps_ladder.empty() ? 0.0
                                 : measure_point(ctx, ctx.cfg.eps_ladder.front()).u_c2;
}

void add_slope(InequalityReport& rep, const std::string& key,
               const std::vector<std::pair<double, double>>& pts) {
  rep.slopes[key] = fit_loglog_slope(pts);
}

}  // namespace

InequalityReport check_ord1(const HarnessContext& ctx) {
  prime_cache(ctx);
  InequalityReport rep;
  rep.name = "ord1";
  rep.flags.push_back("family=" + ctx.family_name);
  const double ke = ctx.cfg.kappa_exponent;
  std::vector<std::pair<double, double>> lhs_pts, phi_pts;
  for (double eps : ctx.cfg.eps_ladder) {
    const FamilyPoint& fp = measure_point(ctx, eps);
    SweepPoint pt;
    pt.eps = eps;
    pt.lhs = fp.h_w22 * fp.h_w22;
    pt.terms["phi_l2_sq"] = fp.phi_l2 * fp.phi_l2;
    pt.terms["u_l2_pow4"] = std::pow(fp.u_l2, 4);
    pt.rhs_total = pt.terms["phi_l2_sq"] + pt.terms["u_l2_pow4"];
    pt.ratio = pt.lhs / pt.rhs_total;
    // second estimate of the proposition
    const double lhs2 = fp.x6_u23;
    const double rhs2 = std::pow(fp.phi_l2, 6.0 / (3.0 + ke)) +
                        std::pow(fp.u_l2, 3);
    pt.terms["x6_lhs"] = lhs2;
    pt.terms["x6_rhs"] = rhs2;
    pt.terms["x6_ratio"] = lhs2 / rhs2;
    rep.sweep.push_back(pt);
    lhs_pts.push_back({eps, pt.lhs});
    phi_pts.push_back({eps, fp.phi_l2});
  }
  add_slope(rep, "h_w22_sq", lhs_pts);
  add_slope(rep, "phi_l2", phi_pts);
  finish_report(rep, ctx);
  return rep;
}

InequalityReport check_entire_tau_phi(const HarnessContext& ctx) {
  prime_cache(ctx);
  InequalityReport rep;
  rep.name = "entire_tau_phi";
  rep.flags.push_back("family=" + ctx.family_name);
  const double ke = ctx.cfg.kappa_exponent;
  std::vector<std::pair<double, double>> tau_pts;
  for (double eps : ctx.cfg.eps_ladder) {
    const FamilyPoint& fp = measure_point(ctx, eps);
    SweepPoint pt;
    pt.eps = eps;
    pt.lhs = fp.u_l2 * fp.u_l2;
    pt.terms["u0_l2_sq"] = fp.u0_l2 * fp.u0_l2;
    pt.terms["gradtau_l1"] = fp.gradtau_l1;
    pt.terms["phi_pow"] = std::pow(fp.phi_l2, 6.0 / (3.0 + ke));
    pt.rhs_total = pt.terms["u0_l2_sq"] + pt.terms["gradtau_l1"] + pt.terms["phi_pow"];
    pt.ratio = pt.lhs / pt.rhs_total;
    rep.sweep.push_back(pt);
    tau_pts.push_back({eps, fp.gradtau_l1});
  }
  add_slope(rep, "gradtau_l1", tau_pts);
  finish_report(rep, ctx);
  return rep;
}

InequalityReport check_dtauP(const HarnessContext& ctx) {
  prime_cache(ctx);
  InequalityReport rep;
  rep.name = "dtauP";
  rep.flags.push_back("family=" + ctx.family_name);
  std::vector<std::pair<double, double>> tau_pts, p_pts;
  for (double eps : ctx.cfg.eps_ladder) {
    const FamilyPoint& fp = measure_point(ctx, eps);
    SweepPoint pt;
    pt.eps = eps;
    pt.lhs = fp.gradtau_l1;
    pt.terms["p_l1"] = fp.p_l1;
    pt.terms["phi_w21"] = fp.phi_w21;
    pt.terms["phi_w12_sq"] = fp.phi_w12 * fp.phi_w12;
    pt.terms["u_c3"] = fp.u_c3;
    pt.rhs_total = pt.terms["p_l1"] + pt.terms["phi_w21"] + pt.terms["phi_w12_sq"];
    pt.ratio = pt.lhs / pt.rhs_total;
    rep.sweep.push_back(pt);
    tau_pts.push_back({eps, fp.gradtau_l1});
    p_pts.push_back({eps, fp.p_l1});
  }
  add_slope(rep, "gradtau_l1", tau_pts);
  add_slope(rep, "p_l1", p_pts);
  finish_report(rep, ctx);
  return rep;
}

InequalityReport check_Pest(const HarnessContext& ctx) {
  prime_cache(ctx);
  InequalityReport rep;
  rep.name = "Pest";
  rep.flags.push_back("family=" + ctx.family_name);
  const double ke = ctx.cfg.kappa_exponent;
  std::vector<std::pair<double, double>> p_pts;
  for (double eps : ctx.cfg.eps_ladder) {
    const FamilyPoint& fp = measure_point(ctx, eps);
    SweepPoint pt;
    pt.eps = eps;
    pt.lhs = fp.p_l1;
    pt.terms["u_cube_phi_pow"] =
        std::pow(fp.u_l2, 3) + std::pow(fp.phi_l2, 6.0 / (3.0 + ke));
    pt.terms["u_phi"] = fp.u_l2 * fp.phi_l2;
    pt.terms["phi_w12_sq"] = fp.phi_w12 * fp.phi_w12;
    pt.rhs_total = pt.terms["u_cube_phi_pow"] + pt.terms["u_phi"] + pt.terms["phi_w12_sq"];
    pt.ratio = pt.lhs / pt.rhs_total;
    rep.sweep.push_back(pt);
    p_pts.push_back({eps, fp.p_l1});
  }
  add_slope(rep, "p_l1", p_pts);
  finish_report(rep, ctx);
  return rep;
}

InequalityReport check_entire_est(const HarnessContext& ctx) {
  prime_cache(ctx);
  InequalityReport rep;
  rep.name = "entire_est";
  rep.flags.push_back("family=" + ctx.family_name);
  const double ke = ctx.cfg.kappa_exponent;
  for (double eps : ctx.cfg.eps_ladder) {
    const FamilyPoint& fp = measure_point(ctx, eps);
    SweepPoint pt;
    pt.eps = eps;
    pt.lhs = fp.u_l2 * fp.u_l2;
    pt.terms["u0_l2_sq"] = fp.u0_l2 * fp.u0_l2;
    pt.terms["phi_w21"] = fp.phi_w21;
    pt.terms["phi_w12_sq"] = fp.phi_w12 * fp.phi_w12;
    pt.terms["phi_pow"] = std::pow(fp.phi_l2, 6.0 / (3.0 + ke));
    pt.terms["u_c3"] = fp.u_c3;
    pt.rhs_total = pt.terms["u0_l2_sq"] + pt.terms["phi_w21"] +
                   pt.terms["phi_w12_sq"] + pt.terms["phi_pow"];
    pt.ratio = pt.lhs / pt.rhs_total;
    rep.sweep.push_back(pt);
  }
  finish_report(rep, ctx);
  return rep;
}

namespace {

double support_extent(const CylinderGrid& grid, const NormalField& V) {
  double worst = 0;
  for (int i = 0; i < grid.M(); ++i)
    for (int j = 0; j < grid.J(); ++j) {
      const double mag =
          std::abs(V.u(i, j)) + (V.has_z() ? std::abs(V.uz(i, j)) : 0.0);
      if (mag > 0) worst = std::max(worst, grid.xsq(i, j));
    }
  return std::sqrt(worst);
}

}  // namespace

InequalityReport check_lojasiewicz_first(
    const HarnessContext& ctx, const NormalField& V,
    const std::optional<NormalField>& parent) {
  const CylinderGrid& grid = ctx.grid;
  const double R = ctx.cfg.R;
  const auto expo = LojasiewiczExponents::make(ctx.cfg.l, 2);
  if (support_extent(grid, V) > R - 5.0)
    throw BadField("field support violates B_{R-5}");

  InequalityReport rep;
  rep.name = "lojasiewicz_first";
  rep.extra["a_l"] = expo.a_l;
  rep.extra["delta_Rm5"] = LojasiewiczExponents::delta(R - 5.0, 2);

  for (double eps : ctx.cfg.eps_ladder) {
    const NormalField Ve = eps * V;
    GeometryState st = evaluate_geometry(grid, Ve, ctx.cfg.thresholds);
    Grid2D phi[4];
    for (int c = 0; c < 4; ++c) phi[c] = st.phi[c] - ctx.base_phi[c];
    Grid2D m0, m1, m2;
    normal_field_magnitudes(st, phi, m0, m1, m2);
    SweepPoint pt;
    pt.eps = eps;
    pt.lhs = inner_rho(grid, Ve, Ve);
    const double phi_l1 = grid.integrate_rho_ball(m0, R);
    const double phi_l2 = std::sqrt(grid.integrate_rho_ball(m0.square(), R));
    pt.terms["phi_l1_pow"] = std::pow(phi_l1, expo.a_l);
    pt.terms["phi_l2_pow"] = std::pow(phi_l2, 2.0 * expo.a_l);
    pt.terms["delta_pow"] =
        std::pow(LojasiewiczExponents::delta(R - 5.0, 2), expo.a_l);
    pt.rhs_total =
        pt.terms["phi_l1_pow"] + pt.terms["phi_l2_pow"] + pt.terms["delta_pow"];
    pt.ratio = pt.lhs / pt.rhs_total;
    // hypothesis bookkeeping (recorded, not enforced)
    pt.terms["hyp_u_l2sq_ball"] = grid.integrate_rho_ball(
        V.has_z() ? (Ve.u.square() + Ve.uz.square()).eval() : Ve.u.square().eval(), R);
    pt.terms["hyp_bound"] = std::exp(-R * R / 8.0);
    const char* dominant = pt.terms["delta_pow"] >
                                   pt.terms["phi_l1_pow"] + pt.terms["phi_l2_pow"]
                               ? "delta"
                               : "phi";
    pt.terms["delta_dominates"] = (dominant[0] == 'd') ? 1.0 : 0.0;
    rep.sweep.push_back(pt);
  }

  if (parent) {
    // cutoff estimate: |phi_V|_{L^s}^s <= |phi_parent|_{L^s(B_R)}^s + C(s) delta_{R-5}
    GeometryState sv = evaluate_geometry(grid, V, ctx.cfg.thresholds);
    GeometryState sw = evaluate_geometry(grid, *parent, ctx.cfg.thresholds);
    Grid2D phiv[4], phiw[4];
    for (int c = 0; c < 4; ++c) {
      phiv[c] = sv.phi[c] - ctx.base_phi[c];
      phiw[c] = sw.phi[c] - ctx.base_phi[c];
    }
    Grid2D mv0, mv1, mv2, mw0, mw1, mw2;
    normal_field_magnitudes(sv, phiv, mv0, mv1, mv2);
    normal_field_magnitudes(sw, phiw, mw0, mw1, mw2);
    const double delta = LojasiewiczExponents::delta(R - 5.0, 2);
    for (int s = 1; s <= 2; ++s) {
      const double lhs = grid.integrate_rho(mv0.pow(s));
      const double rhs_phi = grid.integrate_rho_ball(mw0.pow(s), R);
      rep.extra["cutoff_lhs_s" + std::to_string(s)] = lhs;
      rep.extra["cutoff_rhs_s" + std::to_string(s)] = rhs_phi;
      rep.extra["cutoff_C_s" + std::to_string(s)] =
          std::max(0.0, lhs - rhs_phi) / delta;
    }
  }
  finish_report(rep, ctx);
  return rep;
}

InequalityReport check_lojasiewicz_gradient(const HarnessContext& ctx,
                                            const NormalField& V) {
  const CylinderGrid& grid = ctx.grid;
  const double R = ctx.cfg.R;
  const auto expo = LojasiewiczExponents::make(ctx.cfg.l, 2);
  if (!(expo.a_l > 2.0 / 3.0))
    throw BadField("lojasiewicz_gradient requires a_l > 2/3 (l > 10)");

  InequalityReport rep;
  rep.name = "lojasiewicz_gradient";
  rep.extra["a_l"] = expo.a_l;
  rep.extra["delta_Rm6"] = LojasiewiczExponents::delta(R - 6.0, 2);

  for (double eps : ctx.cfg.eps_ladder) {
    const NormalField Ve = eps * V;
    GeometryState st = evaluate_geometry(grid, Ve, ctx.cfg.thresholds);
    Grid2D phi[4];
    for (int c = 0; c < 4; ++c) phi[c] = st.phi[c] - ctx.base_phi[c];
    Grid2D m0, m1, m2;
    normal_field_magnitudes(st, phi, m0, m1, m2);
    const double phi_l2 = std::sqrt(grid.integrate_rho(m0.square()));
    const double v_l2 = l2_rho(grid, Ve);
    SweepPoint pt;
    pt.eps = eps;
    pt.lhs = std::abs(gaussian_area(grid, st) - ctx.base_area);
    pt.terms["phi_pow_3a2"] = std::pow(phi_l2, 1.5 * expo.a_l);
    pt.terms["delta"] = LojasiewiczExponents::delta(R - 6.0, 2);
    pt.rhs_total = pt.terms["phi_pow_3a2"] + pt.terms["delta"];
    pt.ratio = pt.lhs / pt.rhs_total;
    // the intermediate bound of the proof
    pt.terms["mid_phi_32"] = std::pow(phi_l2, 1.5);
    pt.terms["mid_v_cube"] = std::pow(v_l2, 3);
    pt.terms["mid_ratio"] = pt.lhs / (pt.terms["mid_phi_32"] + pt.terms["mid_v_cube"]);
    rep.sweep.push_back(pt);
  }
  finish_report(rep, ctx);
  return rep;
}

InequalityReport interpolation_check(const CylinderGrid& grid, const Grid2D& u,
                                     int m, int j, int p, double r) {
  if (j > m) throw BadField("interpolation check needs j <= m");
  if (m > 4) throw BadField("interpolation check supports m <= 4");
  const int n = 2;
  const double a = static_cast<double>(m - j) / (m + n);

  auto sup_ball = [&](const Grid2D& f) {
    double worst = 0;
    for (int i = 0; i < grid.M(); ++i)
      for (int jj = 0; jj < grid.J(); ++jj)
        if (grid.xsq(i, jj) <= r * r)
          worst = std::max(worst, std::abs(f(i, jj)));
    return worst;
  };
  const double u_l1 = grid.integrate_ball(u.abs(), r);
  const double dj_inf = sup_ball(grad_sq(grid, u, j).sqrt());
  const double dm_inf = sup_ball(grad_sq(grid, u, m).sqrt());

  InequalityReport rep;
  rep.name = "interpolation";
  rep.lhs = std::pow(r, j) * dj_inf;
  rep.rhs_terms["vol_term"] = std::pow(r, -n) * u_l1;
  rep.rhs_terms["interp_term"] =
      std::pow(r, j) * std::pow(u_l1, a) * std::pow(dm_inf, 1.0 - a);
  const double rhs = rep.rhs_terms["vol_term"] + rep.rhs_terms["interp_term"];
  rep.implied_constant = rhs > 0 ? rep.lhs / rhs : 0.0;
  rep.extra["a_mjn"] = a;
  rep.extra["m"] = m;
  rep.extra["j"] = j;
  rep.tail_bound = grid.tail_bound;

  // weighted corollary on grid functions
  if (p >= 1 && p <= 3 && j <= 3) {
    const double R = grid.Y;  // the grid half-width is the natural ball here
    const double lhs_w =
        weighted_norm(grid, u, j, p, NormRegion::in_ball(R - 1.0)).value;
    const double rhs_w =
        std::pow(weighted_norm(grid, u, 0, p, NormRegion::in_ball(R)).value, a);
    rep.extra["weighted_lhs"] = lhs_w;
    rep.extra["weighted_rhs_pow"] = rhs_w;
    rep.extra["weighted_C"] = rhs_w > 0 ? lhs_w / rhs_w : 0.0;
  }
  return rep;
}

InequalityReport interpolation_sweep(const CylinderGrid& grid, int m, int j,
                                     int p, double r,
                                     const std::vector<double>& omegas) {
  InequalityReport rep;
  rep.name = "interpolation_sweep";
  std::vector<InequalityReport> subs(omegas.size());
  parallel_for(static_cast<int>(omegas.size()), [&](int i) {
    const double w = omegas[i];
    Grid2D u(grid.M(), grid.J());
    for (int ii = 0; ii < grid.M(); ++ii)
      for (int jj = 0; jj < grid.J(); ++jj)
        u(ii, jj) = std::sin(w * grid.y[jj]) *
                    smooth_cutoff(grid.y[jj], 0.75 * grid.Y);
    subs[i] = interpolation_check(grid, u, m, j, p, r);
  });
  for (size_t i = 0; i < omegas.size(); ++i) {
    SweepPoint pt;
    pt.eps = omegas[i];
    pt.lhs = subs[i].lhs;
    pt.terms = subs[i].rhs_terms;
    pt.rhs_total = subs[i].rhs_terms.at("vol_term") +
                   subs[i].rhs_terms.at("interp_term");
    pt.ratio = subs[i].implied_constant;
    rep.sweep.push_back(pt);
  }
  rep.extra["a_mjn"] = subs.empty() ? 0.0 : subs[0].extra["a_mjn"];
  double worst = 0;
  for (const auto& pt : rep.sweep) worst = std::max(worst, pt.ratio);
  rep.implied_constant = worst;
  rep.tail_bound = grid.tail_bound;
  return rep;
}

ConstantReport constant_report_round(int k, const CylinderGrid* grid) {
  if (k < 1) throw NoSuchCurve("round constants need k >= 1");
  ConstantReport rep;
  for (int kk = 1; kk <= 3; ++kk)
    rep.round_target[kk] = 2.0 / (kk * kk * kk);
  rep.cylinder = "S^" + std::to_string(k) + "_sqrt(2k) x R";
  if (k == 1 && grid) {
    NormalField jp;
    jp.support_radius = grid->Y;
    jp.u.resize(grid->M(), grid->J());
    for (int i = 0; i < grid->M(); ++i)
      for (int j = 0; j < grid->J(); ++j)
        jp.u(i, j) = (grid->y[j] * grid->y[j] - 2.0) * grid->profile.kappa[i];
    const double num = second_variation_T_L1(*grid, jp);
    const double den = inner_rho(*grid, jp, jp);
    rep.measured = num / den;
  }
  return rep;
}

ConstantReport constant_report_curve(const CylinderGrid& grid) {
  ConstantReport rep;
  rep.b2 = compute_B2(grid.profile);
  rep.al_target = 4.0 * rep.b2;
  rep.cylinder = "AL x R";
  NormalField jp;
  jp.support_radius = grid.Y;
  jp.u.resize(grid.M(), grid.J());
  for (int i = 0; i < grid.M(); ++i)
    for (int j = 0; j < grid.J(); ++j)
      jp.u(i, j) = (grid.y[j] * grid.y[j] - 2.0) * grid.profile.kappa[i];
  const double num = second_variation_T_L1(grid, jp);
  const double den = inner_rho(grid, jp, jp);
  rep.measured = num / den;
  return rep;
}

}  // namespace shrinkerlab
