#include "shrinkerlab/graphgeom.hpp"

#include <cmath>
#include <fstream>

#include "shrinkerlab/errors.hpp"

namespace shrinkerlab {

namespace {

inline int slot(int a, int b) { return a + b; }  // (0,0)->0 (0,1)/(1,0)->1 (1,1)->2

Grid2D deriv(const CylinderGrid& grid, const Grid2D& f, int c, int m = 1) {
  return c == 0 ? d_periodic(f, m, grid.dsig) : d_bounded(f, m, grid.dy);
}

}  // namespace

GeometryState evaluate_geometry(const CylinderGrid& grid, const NormalField& U,
                                const GraphThresholds& thr) {
  const double c2 = field_cm_norm(grid, U, 2);
  if (c2 > thr.eps2)
    throw GraphRegularityExceeded("|U|_C2 = " + std::to_string(c2) +
                                  " exceeds threshold " +
                                  std::to_string(thr.eps2));

  GeometryState st;
  st.grid = &grid;
  st.ambient_dim = grid.ambient_dim;
  const int M = grid.M(), J = grid.J();

  // immersion
  for (int c = 0; c < 4; ++c) st.X[c] = grid.pos[c];
  for (int i = 0; i < M; ++i) {
    st.X[0].row(i) += grid.profile.normal(i, 0) * U.u.row(i);
    st.X[1].row(i) += grid.profile.normal(i, 1) * U.u.row(i);
  }
  if (U.has_z()) st.X[3] += U.uz;

  // tangents and second derivatives
  Grid2D Hess[3][4];
  for (int c = 0; c < 4; ++c) {
    st.E[0][c] = d_periodic(st.X[c], 1, grid.dsig);
    st.E[1][c] = d_bounded(st.X[c], 1, grid.dy);
    Hess[0][c] = d_periodic(st.X[c], 2, grid.dsig);
    Hess[2][c] = d_bounded(st.X[c], 2, grid.dy);
    Hess[1][c] = d_bounded(st.E[0][c], 1, grid.dy);
  }

  // metric
  auto dot4 = [&](const Grid2D* a, const Grid2D* b) {
    return (a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3]).eval();
  };
  st.g[0] = dot4(st.E[0], st.E[0]);
  st.g[1] = dot4(st.E[0], st.E[1]);
  st.g[2] = dot4(st.E[1], st.E[1]);
  st.detg = st.g[0] * st.g[2] - st.g[1].square();
  if ((st.g[0].minCoeff() <= 0) || (st.detg.minCoeff() <= 1e-12))
    throw DegenerateMetric("graph pullback metric lost positivity");
  st.sqrtdetg = st.detg.sqrt();
  st.ginv[0] = st.g[2] / st.detg;
  st.ginv[1] = -st.g[1] / st.detg;
  st.ginv[2] = st.g[0] / st.detg;

  // normal projector Pi = I - E_a g^{ab} E_b^T
  for (int c = 0; c < 4; ++c)
    for (int d = 0; d < 4; ++d) {
      Grid2D t = Grid2D::Zero(M, J);
      t += st.ginv[0] * st.E[0][c] * st.E[0][d];
      t += st.ginv[1] * (st.E[0][c] * st.E[1][d] + st.E[1][c] * st.E[0][d]);
      t += st.ginv[2] * st.E[1][c] * st.E[1][d];
      st.Pi[c][d] = -t;
      if (c == d) st.Pi[c][d] += 1.0;
    }

  auto project = [&](const Grid2D* v, Grid2D* out) {
    for (int c = 0; c < 4; ++c)
      out[c] = st.Pi[c][0] * v[0] + st.Pi[c][1] * v[1] + st.Pi[c][2] * v[2] +
               st.Pi[c][3] * v[3];
  };

  // second fundamental form, mean curvature, principal normal
  for (int s = 0; s < 3; ++s) project(Hess[s], st.A[s]);
  for (int c = 0; c < 4; ++c)
    st.H[c] = -(st.ginv[0] * st.A[0][c] + 2.0 * st.ginv[1] * st.A[1][c] +
                st.ginv[2] * st.A[2][c]);
  st.absH = (st.H[0].square() + st.H[1].square() + st.H[2].square() +
             st.H[3].square())
                .sqrt();
  const double h_floor = thr.min_h_factor * grid.profile.kappa.minCoeff();
  if (st.absH.minCoeff() < h_floor)
    throw MeanCurvatureVanishes("min |H| = " +
                                std::to_string(st.absH.minCoeff()) +
                                " below floor " + std::to_string(h_floor));
  for (int c = 0; c < 4; ++c) st.Nvec[c] = st.H[c] / st.absH;

  // shrinker quantity and tau
  Grid2D xp[4];
  project(st.X, xp);
  for (int c = 0; c < 4; ++c) st.phi[c] = 0.5 * xp[c] - st.H[c];
  for (int s = 0; s < 3; ++s)
    for (int c = 0; c < 4; ++c) st.tau[s][c] = st.A[s][c] / st.absH;

  // Christoffels from first derivatives of the metric
  Grid2D dg[2][3];
  for (int s = 0; s < 3; ++s) {
    dg[0][s] = d_periodic(st.g[s], 1, grid.dsig);
    dg[1][s] = d_bounded(st.g[s], 1, grid.dy);
  }
  // Gamma_{e,ab} = (d_a g_eb + d_b g_ea - d_e g_ab)/2, then raise with ginv
  for (int d = 0; d < 2; ++d)
    for (int a = 0; a < 2; ++a)
      for (int b = a; b < 2; ++b) {
        Grid2D low0 = 0.5 * (dg[a][slot(0, b)] + dg[b][slot(0, a)] -
                             dg[0][slot(a, b)]);
        Grid2D low1 = 0.5 * (dg[a][slot(1, b)] + dg[b][slot(1, a)] -
                             dg[1][slot(a, b)]);
        st.Gamma[d][slot(a, b)] =
            st.ginv[slot(d, 0)] * low0 + st.ginv[slot(d, 1)] * low1;
      }

  // covariant derivative of tau in the normal bundle
  for (int c = 0; c < 2; ++c)
    for (int a = 0; a < 2; ++a)
      for (int b = a; b < 2; ++b) {
        Grid2D dtau[4], proj[4];
        for (int k = 0; k < 4; ++k)
          dtau[k] = deriv(grid, st.tau[slot(a, b)][k], c);
        project(dtau, proj);
        for (int k = 0; k < 4; ++k) {
          Grid2D corr = Grid2D::Zero(M, J);
          for (int d = 0; d < 2; ++d) {
            corr += st.Gamma[d][slot(c, a)] * st.tau[slot(d, b)][k];
            corr += st.Gamma[d][slot(c, b)] * st.tau[slot(a, d)][k];
          }
          st.gradtau[c][slot(a, b)][k] = proj[k] - corr;
        }
      }

  // |nabla tau|^2 with all three indices contracted by ginv
  st.gradtau_sq = Grid2D::Zero(M, J);
  for (int c = 0; c < 2; ++c)
    for (int cc = 0; cc < 2; ++cc)
      for (int a = 0; a < 2; ++a)
        for (int aa = 0; aa < 2; ++aa)
          for (int b = 0; b < 2; ++b)
            for (int bb = 0; bb < 2; ++bb) {
              Grid2D dot = Grid2D::Zero(M, J);
              for (int k = 0; k < 4; ++k)
                dot += st.gradtau[c][slot(a, b)][k] *
                       st.gradtau[cc][slot(aa, bb)][k];
              st.gradtau_sq += st.ginv[slot(c, cc)] * st.ginv[slot(a, aa)] *
                               st.ginv[slot(b, bb)] * dot;
            }

  // |A|^2 and the real 2-tensor A^2
  st.absA_sq = Grid2D::Zero(M, J);
  for (int a = 0; a < 2; ++a)
    for (int aa = 0; aa < 2; ++aa)
      for (int b = 0; b < 2; ++b)
        for (int bb = 0; bb < 2; ++bb) {
          Grid2D dot = Grid2D::Zero(M, J);
          for (int k = 0; k < 4; ++k)
            dot += st.A[slot(a, b)][k] * st.A[slot(aa, bb)][k];
          st.absA_sq += st.ginv[slot(a, aa)] * st.ginv[slot(b, bb)] * dot;
        }
  for (int i2 = 0; i2 < 2; ++i2)
    for (int j2 = i2; j2 < 2; ++j2) {
      Grid2D acc = Grid2D::Zero(M, J);
      for (int m = 0; m < 2; ++m)
        for (int n = 0; n < 2; ++n) {
          Grid2D dot = Grid2D::Zero(M, J);
          for (int k = 0; k < 4; ++k)
            dot += st.A[slot(i2, m)][k] * st.A[slot(n, j2)][k];
          acc += st.ginv[slot(m, n)] * dot;
        }
      st.A2[slot(i2, j2)] = acc;
    }

  st.rho_graph =
      (1.0 / (4.0 * M_PI)) *
      (-(st.X[0].square() + st.X[1].square() + st.X[2].square() +
         st.X[3].square()) /
       4.0)
          .exp();

  st.P = compute_P(st);
  return st;
}

Grid2D compute_P(const GeometryState& st) {
  const int M = st.M(), J = st.J();
  Grid2D P(M, J);
  for (int i = 0; i < M; ++i)
    for (int j = 0; j < J; ++j) {
      // orthonormal tangent frame: S = L^{-T} from g = L L^T
      const double g00 = st.g[0](i, j), g01 = st.g[1](i, j),
                   g11 = st.g[2](i, j);
      const double l00 = std::sqrt(g00);
      const double l10 = g01 / l00;
      const double l11 = std::sqrt(g11 - l10 * l10);
      // S (upper triangular): columns express e-hat_a in the E basis
      const double S00 = 1.0 / l00, S01 = -l10 / (l00 * l11), S11 = 1.0 / l11;

      double Ah[2][2][4];  // A in the orthonormal frame
      for (int k = 0; k < 4; ++k) {
        const double a00 = st.A[0][k](i, j), a01 = st.A[1][k](i, j),
                     a11 = st.A[2][k](i, j);
        // Ah_ab = S_ca S_db A_cd
        Ah[0][0][k] = S00 * S00 * a00;
        Ah[0][1][k] = S00 * (S01 * a00 + S11 * a01);
        Ah[1][0][k] = Ah[0][1][k];
        Ah[1][1][k] =
            S01 * S01 * a00 + 2.0 * S01 * S11 * a01 + S11 * S11 * a11;
      }
      double Nk[4], Xk[4];
      for (int k = 0; k < 4; ++k) {
        Nk[k] = st.Nvec[k](i, j);
        Xk[k] = st.X[k](i, j);
      }
      auto vdot = [](const double* a, const double* b) {
        return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
      };

      double absA2 = 0, absAN2 = 0;
      double AN[2][2];
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          absA2 += vdot(Ah[a][b], Ah[a][b]);
          AN[a][b] = vdot(Ah[a][b], Nk);
          absAN2 += AN[a][b] * AN[a][b];
        }
      double A2sq = 0;
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          double t = 0;
          for (int m = 0; m < 2; ++m) t += vdot(Ah[a][m], Ah[m][b]);
          A2sq += t * t;
        }
      double s4a = 0, s4b = 0;
      for (int i2 = 0; i2 < 2; ++i2)
        for (int j2 = 0; j2 < 2; ++j2)
          for (int l = 0; l < 2; ++l)
            for (int m = 0; m < 2; ++m) {
              s4a += vdot(Ah[j2][l], Ah[i2][m]) * vdot(Ah[l][m], Ah[i2][j2]);
              const double t = vdot(Ah[i2][j2], Ah[m][l]);
              s4b += t * t;
            }

      // tangential position in the orthonormal frame
      double xE[2];  // <x, E_a>
      xE[0] = st.E[0][0](i, j) * Xk[0] + st.E[0][1](i, j) * Xk[1] +
              st.E[0][2](i, j) * Xk[2] + st.E[0][3](i, j) * Xk[3];
      xE[1] = st.E[1][0](i, j) * Xk[0] + st.E[1][1](i, j) * Xk[1] +
              st.E[1][2](i, j) * Xk[2] + st.E[1][3](i, j) * Xk[3];
      double xh[2];  // <x, e-hat_a>
      xh[0] = S00 * xE[0];
      xh[1] = S01 * xE[0] + S11 * xE[1];

      double AxT2 = 0, ANxT2 = 0;
      for (int a = 0; a < 2; ++a) {
        double v[4] = {0, 0, 0, 0};
        for (int b = 0; b < 2; ++b)
          for (int k = 0; k < 4; ++k) v[k] += Ah[a][b][k] * xh[b];
        AxT2 += vdot(v, v);
        const double an = vdot(v, Nk);
        ANxT2 += an * an;
      }

      const double h = st.absH(i, j);
      P(i, j) = absA2 * absAN2 - 2.0 * A2sq + 2.0 * s4a - s4b +
                absA2 / (4.0 * h * h) * (ANxT2 - AxT2);
    }
  return P;
}

WeightedNormResult grad_tau_norm(const GeometryState& st, NormRegion region) {
  const CylinderGrid& grid = *st.grid;
  WeightedNormResult r;
  r.k = 0;
  r.p = 1;
  r.value = region.ball
                ? grid.integrate_rho_ball(st.gradtau_sq, *region.ball)
                : grid.integrate_rho(st.gradtau_sq);
  r.region = region.ball ? ("ball:" + std::to_string(*region.ball)) : "entire";
  r.tail_bound = grid.tail_bound;
  return r;
}

double gaussian_area(const CylinderGrid& grid, const GeometryState& st) {
  return grid.integrate(st.rho_graph * st.sqrtdetg);
}

NormalDerivs normal_derivatives(const GeometryState& st, const Grid2D F[4],
                                bool second) {
  const CylinderGrid& grid = *st.grid;
  NormalDerivs nd;
  auto project = [&](const Grid2D* v, Grid2D* out) {
    for (int c = 0; c < 4; ++c)
      out[c] = st.Pi[c][0] * v[0] + st.Pi[c][1] * v[1] + st.Pi[c][2] * v[2] +
               st.Pi[c][3] * v[3];
  };
  for (int a = 0; a < 2; ++a) {
    Grid2D d[4];
    for (int k = 0; k < 4; ++k) d[k] = deriv(grid, F[k], a);
    project(d, nd.d1[a]);
  }
  if (second) {
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        Grid2D d[4], proj[4];
        for (int k = 0; k < 4; ++k) d[k] = deriv(grid, nd.d1[b][k], a);
        project(d, proj);
        for (int k = 0; k < 4; ++k) {
          Grid2D corr = Grid2D::Zero(st.M(), st.J());
          for (int dd = 0; dd < 2; ++dd)
            corr += st.Gamma[dd][slot(a, b)] * nd.d1[dd][k];
          nd.d2[a][b][k] = proj[k] - corr;
        }
      }
  }
  return nd;
}

void normal_field_magnitudes(const GeometryState& st, const Grid2D F[4],
                             Grid2D& m0, Grid2D& m1, Grid2D& m2) {
  const int M = st.M(), J = st.J();
  NormalDerivs nd = normal_derivatives(st, F, true);
  m0 = (F[0].square() + F[1].square() + F[2].square() + F[3].square()).sqrt();
  m1 = Grid2D::Zero(M, J);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      Grid2D dot = Grid2D::Zero(M, J);
      for (int k = 0; k < 4; ++k) dot += nd.d1[a][k] * nd.d1[b][k];
      m1 += st.ginv[slot(a, b)] * dot;
    }
  m1 = m1.max(0.0).sqrt();
  m2 = Grid2D::Zero(M, J);
  for (int a = 0; a < 2; ++a)
    for (int aa = 0; aa < 2; ++aa)
      for (int b = 0; b < 2; ++b)
        for (int bb = 0; bb < 2; ++bb) {
          Grid2D dot = Grid2D::Zero(M, J);
          for (int k = 0; k < 4; ++k) dot += nd.d2[a][b][k] * nd.d2[aa][bb][k];
          m2 += st.ginv[slot(a, aa)] * st.ginv[slot(b, bb)] * dot;
        }
  m2 = m2.max(0.0).sqrt();
}

void write_geometry_csv(const std::string& path, const GeometryState& st) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open " + path + " for writing");
  os << "i,j,g_ss,g_sy,g_yy,absA_sq,absH,phi_0,phi_1,phi_2,phi_3,P,"
        "gradtau_sq\n";
  char buf[320];
  for (int i = 0; i < st.M(); ++i)
    for (int j = 0; j < st.J(); ++j) {
      std::snprintf(buf, sizeof(buf),
                    "%d,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,"
                    "%.17g,%.17g,%.17g\n",
                    i, j, st.g[0](i, j), st.g[1](i, j), st.g[2](i, j),
                    st.absA_sq(i, j), st.absH(i, j), st.phi[0](i, j),
                    st.phi[1](i, j), st.phi[2](i, j), st.phi[3](i, j),
                    st.P(i, j), st.gradtau_sq(i, j));
      os << buf;
    }
}

}  // namespace shrinkerlab
