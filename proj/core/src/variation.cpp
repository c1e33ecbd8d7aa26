#include "shrinkerlab/variation.hpp"

#include <cmath>

#include "shrinkerlab/errors.hpp"

namespace shrinkerlab {

namespace {

// profile data broadcast over the grid, with the sigma-derivatives of kappa
// taken from the shrinker ODE first integral rather than stencils:
//   kappa'  = kappa <x,T>/2
//   kappa'' = (<x,T>/2) kappa' + kappa/2 - kappa^3   (<x,T>' = 1 - 2 kappa^2)
struct ProfileData {
  Grid2D kap, kapd, w1;
  Grid2D N1, N2, T1, T2;
};

ProfileData profile_data(const CylinderGrid& grid) {
  const ProfileCurve& pr = grid.profile;
  const int M = grid.M(), J = grid.J();
  ProfileData pd;
  pd.kap.resize(M, J);
  pd.kapd.resize(M, J);
  pd.w1.resize(M, J);
  pd.N1.resize(M, J);
  pd.N2.resize(M, J);
  pd.T1.resize(M, J);
  pd.T2.resize(M, J);
  const Eigen::ArrayXd xt = pr.x_dot_t();
  for (int i = 0; i < M; ++i) {
    const double k = pr.kappa[i];
    pd.kap.row(i).setConstant(k);
    pd.w1.row(i).setConstant(xt[i]);
    pd.kapd.row(i).setConstant(0.5 * k * xt[i]);
    pd.N1.row(i).setConstant(pr.normal(i, 0));
    pd.N2.row(i).setConstant(pr.normal(i, 1));
    pd.T1.row(i).setConstant(pr.tangent(i, 0));
    pd.T2.row(i).setConstant(pr.tangent(i, 1));
  }
  return pd;
}

struct ComponentDerivs {
  Grid2D d1[2];   // s, y
  Grid2D d2[3];   // ss, sy, yy
  Grid2D d3[4];   // by number of axial indices: sss, ssy, syy, yyy
};

ComponentDerivs component_derivs(const CylinderGrid& grid, const Grid2D& f) {
  ComponentDerivs cd;
  cd.d1[0] = d_periodic(f, 1, grid.dsig);
  cd.d1[1] = d_bounded(f, 1, grid.dy);
  cd.d2[0] = d_periodic(f, 2, grid.dsig);
  cd.d2[1] = d_bounded(cd.d1[0], 1, grid.dy);
  cd.d2[2] = d_bounded(f, 2, grid.dy);
  cd.d3[0] = d_periodic(f, 3, grid.dsig);
  cd.d3[1] = d_bounded(cd.d2[0], 1, grid.dy);
  cd.d3[2] = d_periodic(cd.d2[2], 1, grid.dsig);
  cd.d3[3] = d_bounded(f, 3, grid.dy);
  return cd;
}

// third derivative with `na` axial indices among (i,j,l); flat base, so the
// covariant third derivative is totally symmetric
inline const Grid2D& third(const ComponentDerivs& cd, int slot, int l) {
  const int na = slot + l;  // number of y-indices
  return cd.d3[na];
}

}  // namespace

FirstVariationSet analytic_first_variations(const CylinderGrid& grid,
                                            const NormalField& V) {
  const int M = grid.M(), J = grid.J();
  const ProfileData pd = profile_data(grid);
  const ComponentDerivs v = component_derivs(grid, V.u);
  const bool has_z = V.has_z();
  ComponentDerivs w;
  if (has_z) w = component_derivs(grid, V.uz);

  const Grid2D& kap = pd.kap;
  const Grid2D& kapd = pd.kapd;
  const Grid2D zero = Grid2D::Zero(M, J);

  FirstVariationSet fv;

  // (g_ij)_s = -2 A^V_ij with A^V_ss = -kappa v
  fv.g_s[0] = 2.0 * kap * V.u;
  fv.g_s[1] = zero;
  fv.g_s[2] = zero;
  for (int s = 0; s < 3; ++s) fv.ginv_s[s] = -fv.g_s[s];

  const Grid2D lap_v = v.d2[0] + v.d2[2];
  fv.absH_s = -(lap_v + kap.square() * V.u);

  // (A_ij)_s = -X_l <nabla-perp_l V, A_ij> + (nabla^2 V)_ij - A^V_il A_jl
  auto set_vec = [&](Grid2D* out, const Grid2D& c0, const Grid2D& c1,
                     const Grid2D& c2, const Grid2D& c3) {
    out[0] = c0;
    out[1] = c1;
    out[2] = c2;
    out[3] = c3;
  };
  const Grid2D a_ss_n = v.d2[0] - kap.square() * V.u;
  set_vec(fv.A_s[0], kap * v.d1[0] * pd.T1 + a_ss_n * pd.N1,
          kap * v.d1[0] * pd.T2 + a_ss_n * pd.N2, kap * v.d1[1],
          has_z ? w.d2[0] : zero);
  set_vec(fv.A_s[1], v.d2[1] * pd.N1, v.d2[1] * pd.N2, zero,
          has_z ? w.d2[1] : zero);
  set_vec(fv.A_s[2], v.d2[2] * pd.N1, v.d2[2] * pd.N2, zero,
          has_z ? w.d2[2] : zero);

  // H_s = -(g^{ij})_s A_ij - g^{ij} (A_ij)_s
  for (int c = 0; c < 4; ++c) {
    Grid2D base_A = (c == 0) ? (-kap * pd.N1).eval()
                  : (c == 1) ? (-kap * pd.N2).eval()
                             : zero;
    fv.H_s[c] = -(fv.ginv_s[0] * base_A) - (fv.A_s[0][c] + fv.A_s[2][c]);
  }
  const Grid2D Nb[4] = {pd.N1, pd.N2, zero, zero};
  for (int c = 0; c < 4; ++c)
    fv.N_s[c] = (fv.H_s[c] - fv.absH_s * Nb[c]) / kap;

  // nabla_l |H|_s = -nabla_l Lap v - 2 kappa kappa' v delta_{l,s} - kappa^2 v_l
  fv.gradabsH_s[0] =
      -(v.d3[0] + v.d3[2]) - 2.0 * kap * kapd * V.u - kap.square() * v.d1[0];
  fv.gradabsH_s[1] = -(v.d3[1] + v.d3[3]) - kap.square() * v.d1[1];

  // five-term Pi d_l (A_ij)_s; on the cylinder the first four terms live in
  // the (ss) slot along N
  for (int l = 0; l < 2; ++l)
    for (int s = 0; s < 3; ++s) {
      Grid2D nc = third(v, s, l);
      if (s == 0) {
        nc -= kap.square() * v.d1[l];  // <A_im, nabla_l V> A_jm
        if (l == 0)
          nc -= kap.square() * v.d1[0] + 2.0 * kap * kapd * V.u;
        // A_ml <nabla_m V, A_ij> and the two nabla-perp A terms
      }
      const Grid2D zc = has_z ? third(w, s, l).eval() : zero;
      set_vec(fv.gradA_s[l][s], nc * pd.N1, nc * pd.N2, zero, zc);
    }

  // normal part of (A_ij)_s and of (A_s - |H|_s tau)
  Grid2D piA_n[3], piA_z[3];
  for (int s = 0; s < 3; ++s) {
    piA_n[s] = v.d2[s];
    piA_z[s] = has_z ? w.d2[s] : zero;
  }
  piA_n[0] -= kap.square() * V.u;

  // connection variation (Gamma^s_{ab})_s from A^V_ss = -kappa v
  const Grid2D kv = kap * V.u;
  const Grid2D kv_s = d_periodic(kv, 1, grid.dsig);
  const Grid2D kv_y = d_bounded(kv, 1, grid.dy);

  for (int l = 0; l < 2; ++l)
    for (int s = 0; s < 3; ++s) {
      Grid2D nc = zero, zc = zero;
      // Pi_s(nabla_l tau_ij) = (1/|H|) <A_ij, A_lm> nabla-perp_m V
      if (s == 0 && l == 0) {
        nc += kap * v.d1[0];
        if (has_z) zc += kap * w.d1[0];
      }
      // -(nabla_l |H| / |H|^2) Pi(A_s - |H|_s tau)
      if (l == 0) {
        const Grid2D coef = kapd / kap.square();
        nc -= coef * (piA_n[s] + (s == 0 ? 1.0 : 0.0) * fv.absH_s);
        zc -= coef * piA_z[s];
      }
      // nabla-perp_l (A_ij)_s / |H|
      nc += (fv.gradA_s[l][s][0] * pd.N1 + fv.gradA_s[l][s][1] * pd.N2) / kap;
      zc += fv.gradA_s[l][s][3] / kap;
      // -(nabla_l |H|_s / |H|) tau_ij, with tau_ss = -N
      if (s == 0) nc += fv.gradabsH_s[l] / kap;
      // -(Gamma^d_{li})_s tau_dj - (Gamma^d_{lj})_s tau_id
      if (s == 0) nc += 2.0 * (l == 0 ? kv_s : kv_y);
      if (s == 1 && l == 0) nc += kv_y;
      set_vec(fv.gradtau_s[l][s], nc * pd.N1, nc * pd.N2, zero, zc);
    }

  fv.gradtau_s_sq = zero;
  const double mult[3] = {1.0, 2.0, 1.0};
  for (int l = 0; l < 2; ++l)
    for (int s = 0; s < 3; ++s) {
      Grid2D sq = zero;
      for (int c = 0; c < 4; ++c) sq += fv.gradtau_s[l][s][c].square();
      fv.gradtau_s_sq += mult[s] * sq;
    }
  return fv;
}

void apply_Pi_s(const CylinderGrid& grid, const NormalField& V,
                const Eigen::Vector4d& W, Grid2D out[4]) {
  const ProfileData pd = profile_data(grid);
  const Grid2D v_s = d_periodic(V.u, 1, grid.dsig);
  const Grid2D v_y = d_bounded(V.u, 1, grid.dy);
  Grid2D w_s, w_y;
  const bool has_z = V.has_z();
  if (has_z) {
    w_s = d_periodic(V.uz, 1, grid.dsig);
    w_y = d_bounded(V.uz, 1, grid.dy);
  } else {
    w_s = Grid2D::Zero(grid.M(), grid.J());
    w_y = w_s;
  }
  // nabla-perp_a V in components along (N, dz)
  // W^T = <W,T> d_s + W_2 d_y; Pi_s(W) = -Pi(nabla_{W^T} V) - X_i <nabla-perp_i V, W>
  const Grid2D WdotT = W[0] * pd.T1 + W[1] * pd.T2;
  const Grid2D WdotN = W[0] * pd.N1 + W[1] * pd.N2;
  const Grid2D dsV_dot_W = v_s * WdotN + (has_z ? (w_s * W[3]).eval() : Grid2D::Zero(grid.M(), grid.J()));
  const Grid2D dyV_dot_W = v_y * WdotN + (has_z ? (w_y * W[3]).eval() : Grid2D::Zero(grid.M(), grid.J()));
  // -[<W,T>(v_s N + w_s dz) + W_ax (v_y N + w_y dz)] - [T (dsV.W) + e_ax (dyV.W)]
  out[0] = -(WdotT * v_s + W[2] * v_y) * pd.N1 - dsV_dot_W * pd.T1;
  out[1] = -(WdotT * v_s + W[2] * v_y) * pd.N2 - dsV_dot_W * pd.T2;
  out[2] = -dyV_dot_W;
  out[3] = -(WdotT * w_s + W[2] * w_y);
}

DerivativeEstimate fd_derivative(const std::function<double(double)>& f,
                                 int order, double step) {
  DerivativeEstimate d;
  d.order = order;
  d.step = step;
  const double h = step;
  if (order == 1) {
    const double fp = f(h), fm = f(-h);
    const double fp2 = f(h / 2), fm2 = f(-h / 2);
    const double D1 = (fp - fm) / (2 * h);
    const double D2 = (fp2 - fm2) / h;
    d.value = (4.0 * D2 - D1) / 3.0;
    d.richardson_error = std::abs(d.value - D2);
    const double scale = std::max({std::abs(fp), std::abs(fm), 1e-300});
    d.roundoff_floor = 4.0 * 2.2e-16 * scale / h;
    d.fd_scheme = "centered-o2 + richardson, h=" + std::to_string(h);
  } else if (order == 2) {
    const double f0 = f(0.0);
    const double fp = f(h), fm = f(-h);
    const double fp2 = f(h / 2), fm2 = f(-h / 2);
    const double D1 = (fp - 2 * f0 + fm) / (h * h);
    const double D2 = (fp2 - 2 * f0 + fm2) / (h * h / 4);
    d.value = (4.0 * D2 - D1) / 3.0;
    d.richardson_error = std::abs(d.value - D2);
    const double scale = std::max({std::abs(fp), std::abs(fm), std::abs(f0), 1e-300});
    d.roundoff_floor = 16.0 * 2.2e-16 * scale / (h * h);
    d.fd_scheme = "centered-o2 second + richardson, h=" + std::to_string(h);
  } else {
    throw BadField("fd_derivative supports order 1 or 2");
  }
  return d;
}

namespace {

std::vector<Grid2D> snapshot(const CylinderGrid& grid, const NormalField& U,
                             double s, GraphQuantity q,
                             const GraphThresholds& thr) {
  GeometryState st = evaluate_geometry(grid, U.scaled(s), thr);
  std::vector<Grid2D> out;
  switch (q) {
    case GraphQuantity::Metric:
      for (int i = 0; i < 3; ++i) out.push_back(st.g[i]);
      break;
    case GraphQuantity::SecondFF:
      for (int sl = 0; sl < 3; ++sl)
        for (int c = 0; c < 4; ++c) out.push_back(st.A[sl][c]);
      break;
    case GraphQuantity::AbsH:
      out.push_back(st.absH);
      break;
    case GraphQuantity::NormalDir:
      for (int c = 0; c < 4; ++c) out.push_back(st.Nvec[c]);
      break;
    case GraphQuantity::GradTau:
      for (int l = 0; l < 2; ++l)
        for (int sl = 0; sl < 3; ++sl)
          for (int c = 0; c < 4; ++c) out.push_back(st.gradtau[l][sl][c]);
      break;
  }
  return out;
}

}  // namespace

namespace {

NumericVariation combine_snapshots(const std::vector<Grid2D>& sp,
                                   const std::vector<Grid2D>& sm,
                                   const std::vector<Grid2D>& sp2,
                                   const std::vector<Grid2D>& sm2, double h) {
  NumericVariation nv;
  nv.step = h;
  nv.richardson_error = 0;
  for (size_t i = 0; i < sp.size(); ++i) {
    Grid2D D1 = (sp[i] - sm[i]) / (2 * h);
    Grid2D D2 = (sp2[i] - sm2[i]) / h;
    Grid2D extrap = (4.0 * D2 - D1) / 3.0;
    nv.richardson_error =
        std::max(nv.richardson_error, (extrap - D2).abs().maxCoeff());
    nv.value.push_back(std::move(extrap));
  }
  return nv;
}

}  // namespace

NumericVariation numeric_first_variation(const CylinderGrid& grid,
                                         const NormalField& U, GraphQuantity q,
                                         double step,
                                         const GraphThresholds& thr) {
  const double h = step;
  return combine_snapshots(snapshot(grid, U, h, q, thr),
                           snapshot(grid, U, -h, q, thr),
                           snapshot(grid, U, h / 2, q, thr),
                           snapshot(grid, U, -h / 2, q, thr), h);
}

FirstVariationOracle numeric_first_variations(const CylinderGrid& grid,
                                              const NormalField& U, double step,
                                              const GraphThresholds& thr) {
  const double h = step;
  const GraphQuantity qs[5] = {GraphQuantity::Metric, GraphQuantity::SecondFF,
                               GraphQuantity::AbsH, GraphQuantity::NormalDir,
                               GraphQuantity::GradTau};
  std::vector<Grid2D> snaps[4][5];
  const double ss[4] = {h, -h, h / 2, -h / 2};
  for (int k = 0; k < 4; ++k) {
    GeometryState st = evaluate_geometry(grid, U.scaled(ss[k]), thr);
    for (int iq = 0; iq < 5; ++iq) {
      std::vector<Grid2D>& out = snaps[k][iq];
      switch (qs[iq]) {
        case GraphQuantity::Metric:
          for (int i = 0; i < 3; ++i) out.push_back(st.g[i]);
          break;
        case GraphQuantity::SecondFF:
          for (int sl = 0; sl < 3; ++sl)
            for (int c = 0; c < 4; ++c) out.push_back(st.A[sl][c]);
          break;
        case GraphQuantity::AbsH:
          out.push_back(st.absH);
          break;
        case GraphQuantity::NormalDir:
          for (int c = 0; c < 4; ++c) out.push_back(st.Nvec[c]);
          break;
        case GraphQuantity::GradTau:
          for (int l = 0; l < 2; ++l)
            for (int sl = 0; sl < 3; ++sl)
              for (int c = 0; c < 4; ++c) out.push_back(st.gradtau[l][sl][c]);
          break;
      }
    }
  }
  FirstVariationOracle orc;
  NumericVariation* outs[5] = {&orc.metric, &orc.second_ff, &orc.abs_h,
                               &orc.normal_dir, &orc.grad_tau};
  for (int iq = 0; iq < 5; ++iq)
    *outs[iq] = combine_snapshots(snaps[0][iq], snaps[1][iq], snaps[2][iq],
                                  snaps[3][iq], h);
  return orc;
}

double integral_gradtau_sq(const CylinderGrid& grid, const NormalField& U,
                           const GraphThresholds& thr) {
  GeometryState st = evaluate_geometry(grid, U, thr);
  return grid.integrate_rho(st.gradtau_sq);
}

double integral_abs_p(const CylinderGrid& grid, const NormalField& U,
                      const GraphThresholds& thr) {
  GeometryState st = evaluate_geometry(grid, U, thr);
  return grid.integrate_rho(st.P.abs());
}

double graph_area(const CylinderGrid& grid, const NormalField& U,
                  const GraphThresholds& thr) {
  GeometryState st = evaluate_geometry(grid, U, thr);
  return gaussian_area(grid, st);
}

double second_variation_T_L1(const CylinderGrid& grid,
                             const NormalField& Jprime,
                             double span_tolerance) {
  // K1 span guard against the cutoff copy matching the field's support
  NormalField k1;
  k1.support_radius = Jprime.support_radius;
  k1.u.resize(grid.M(), grid.J());
  for (int i = 0; i < grid.M(); ++i)
    for (int j = 0; j < grid.J(); ++j)
      k1.u(i, j) = (grid.y[j] * grid.y[j] - 2.0) * grid.profile.kappa[i];
  if (Jprime.support_radius < grid.Y)
    k1.u *= cutoff_profile(grid, Jprime.support_radius);
  const double c = inner_rho(grid, Jprime, k1) / inner_rho(grid, k1, k1);
  NormalField resid = Jprime + (-c) * k1;
  const double rn = l2_rho(grid, resid) / std::max(l2_rho(grid, Jprime), 1e-300);
  if (rn > span_tolerance)
    throw BadField("second_variation_T_L1 requires a K1-span field; residual " +
                   std::to_string(rn));
  const FirstVariationSet fv = analytic_first_variations(grid, Jprime);
  return grid.integrate_rho(2.0 * fv.gradtau_s_sq);
}

VariationGaps compare_first_variations(const CylinderGrid& grid,
                                       const NormalField& V, double step,
                                       const GraphThresholds& thr) {
  const FirstVariationSet fv = analytic_first_variations(grid, V);
  const FirstVariationOracle orc = numeric_first_variations(grid, V, step, thr);
  VariationGaps rep;
  rep.richardson = std::max({orc.metric.richardson_error,
                             orc.second_ff.richardson_error,
                             orc.abs_h.richardson_error,
                             orc.normal_dir.richardson_error,
                             orc.grad_tau.richardson_error});

  auto scale_of = [](const std::vector<Grid2D>& comps) {
    double s = 0;
    for (const auto& c : comps) s = std::max(s, c.abs().maxCoeff());
    return std::max(s, 1e-12);
  };
  auto max_gap = [](const std::vector<Grid2D>& a, const std::vector<Grid2D>& b) {
    double g = 0;
    for (size_t i = 0; i < a.size(); ++i)
      g = std::max(g, (a[i] - b[i]).abs().maxCoeff());
    return g;
  };

  {
    std::vector<Grid2D> an = {fv.g_s[0], fv.g_s[1], fv.g_s[2]};
    rep.metric = max_gap(an, orc.metric.value) / scale_of(an);
  }
  {
    std::vector<Grid2D> an;
    for (int s = 0; s < 3; ++s)
      for (int c = 0; c < 4; ++c) an.push_back(fv.A_s[s][c]);
    rep.second_ff = max_gap(an, orc.second_ff.value) / scale_of(an);
  }
  {
    std::vector<Grid2D> an = {fv.absH_s};
    rep.abs_h = max_gap(an, orc.abs_h.value) / scale_of(an);
  }
  {
    std::vector<Grid2D> an;
    for (int c = 0; c < 4; ++c) an.push_back(fv.N_s[c]);
    rep.normal_dir = max_gap(an, orc.normal_dir.value) / scale_of(an);
  }
  {
    std::vector<Grid2D> an = {fv.gradabsH_s[0], fv.gradabsH_s[1]};
    std::vector<Grid2D> num = {d_periodic(orc.abs_h.value[0], 1, grid.dsig),
                               d_bounded(orc.abs_h.value[0], 1, grid.dy)};
    rep.grad_abs_h = max_gap(an, num) / scale_of(an);
  }
  {
    const GeometryState base =
        evaluate_geometry(grid, zero_field(grid, V.has_z()), thr);
    std::vector<Grid2D> num, an;
    for (int l = 0; l < 2; ++l)
      for (int s = 0; s < 3; ++s) {
        Grid2D d[4];
        for (int c = 0; c < 4; ++c) {
          const Grid2D& As = orc.second_ff.value[s * 4 + c];
          d[c] = (l == 0) ? d_periodic(As, 1, grid.dsig)
                          : d_bounded(As, 1, grid.dy);
        }
        for (int c = 0; c < 4; ++c) {
          Grid2D proj = Grid2D::Zero(grid.M(), grid.J());
          for (int e = 0; e < 4; ++e) proj += base.Pi[c][e] * d[e];
          num.push_back(std::move(proj));
          an.push_back(fv.gradA_s[l][s][c]);
        }
      }
    rep.grad_A = max_gap(an, num) / scale_of(an);
  }
  {
    std::vector<Grid2D> an;
    for (int l = 0; l < 2; ++l)
      for (int s = 0; s < 3; ++s)
        for (int c = 0; c < 4; ++c) an.push_back(fv.gradtau_s[l][s][c]);
    rep.grad_tau = max_gap(an, orc.grad_tau.value) / scale_of(an);
  }
  {
    const Eigen::Vector4d W(0.3, -0.7, 0.55,
                            grid.ambient_dim == 4 ? 0.4 : 0.0);
    Grid2D an[4];
    apply_Pi_s(grid, V, W, an);
    GeometryState stp = evaluate_geometry(grid, V.scaled(step), thr);
    GeometryState stm = evaluate_geometry(grid, V.scaled(-step), thr);
    GeometryState stp2 = evaluate_geometry(grid, V.scaled(step / 2), thr);
    GeometryState stm2 = evaluate_geometry(grid, V.scaled(-step / 2), thr);
    double gap = 0, scale = 0;
    for (int c = 0; c < 4; ++c) {
      Grid2D pp = Grid2D::Zero(grid.M(), grid.J()), pm = pp, pp2 = pp, pm2 = pp;
      for (int e = 0; e < 4; ++e) {
        pp += stp.Pi[c][e] * W[e];
        pm += stm.Pi[c][e] * W[e];
        pp2 += stp2.Pi[c][e] * W[e];
        pm2 += stm2.Pi[c][e] * W[e];
      }
      Grid2D D1 = (pp - pm) / (2 * step);
      Grid2D D2 = (pp2 - pm2) / step;
      Grid2D num = (4.0 * D2 - D1) / 3.0;
      gap = std::max(gap, (num - an[c]).abs().maxCoeff());
      scale = std::max(scale, an[c].abs().maxCoeff());
    }
    rep.pi_s = gap / std::max(scale, 1e-12);
  }
  return rep;
}

PVariationChecks p_variation_checks(const CylinderGrid& grid,
                                    const NormalField& V, double step,
                                    const GraphThresholds& thr) {
  if (grid.ambient_dim != 4)
    throw BadField("p_variation_checks requires an R^4 cylinder");
  auto functional = [&](double s) {
    GeometryState st = evaluate_geometry(grid, V.scaled(s), thr);
    return grid.integrate_rho(st.P.abs());
  };
  PVariationChecks out;
  out.first = fd_derivative(functional, 1, step);
  out.second = fd_derivative(functional, 2, step);
  const double w22 = sobolev_rho(grid, V, 2, 2);
  out.second_scale = w22 * w22;
  return out;
}

}  // namespace shrinkerlab
