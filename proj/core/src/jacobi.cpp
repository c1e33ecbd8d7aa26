#include "shrinkerlab/jacobi.hpp"

#include <cmath>

#include "shrinkerlab/errors.hpp"

namespace shrinkerlab {

namespace {

NormalField profile_field(const CylinderGrid& grid,
                          const std::function<double(int, double)>& f) {
  NormalField out;
  out.support_radius = grid.Y;
  out.u.resize(grid.M(), grid.J());
  for (int i = 0; i < grid.M(); ++i)
    for (int j = 0; j < grid.J(); ++j) out.u(i, j) = f(i, grid.y[j]);
  return out;
}

NormalField z_field(const CylinderGrid& grid,
                    const std::function<double(int, double)>& f) {
  NormalField out;
  out.support_radius = grid.Y;
  out.u = Grid2D::Zero(grid.M(), grid.J());
  out.uz.resize(grid.M(), grid.J());
  for (int i = 0; i < grid.M(); ++i)
    for (int j = 0; j < grid.J(); ++j) out.uz(i, j) = f(i, grid.y[j]);
  return out;
}

NormalField apply_cut(const CylinderGrid& grid, const NormalField& f,
                      double radius) {
  NormalField out = f;
  if (radius >= grid.Y) return out;
  const Grid2D chi = cutoff_profile(grid, radius);
  out.u *= chi;
  if (out.has_z()) out.uz *= chi;
  out.support_radius = radius;
  return out;
}

}  // namespace

KernelBasis build_kernel_basis(const CylinderGrid& grid) {
  const ProfileCurve& pr = grid.profile;
  KernelBasis basis;

  auto push_k0 = [&](NormalField f, const std::string& label) {
    const double n = l2_rho(grid, f);
    if (n < 1e-8) return;  // tangential on this profile, prunes to zero
    basis.k0_fields.push_back(std::move(f));
    basis.k0_labels.push_back(label);
  };

  // (1) in-plane rotation: (x1 d2 - x2 d1)^perp = (x1 N2 - x2 N1) N
  push_k0(profile_field(grid,
                        [&](int i, double) {
                          return pr.x(i, 0) * pr.normal(i, 1) -
                                 pr.x(i, 1) * pr.normal(i, 0);
                        }),
          "rot_x1x2");
  // (2) profile/axis rotations: y N_i N
  push_k0(profile_field(grid, [&](int i, double y) { return y * pr.normal(i, 0); }),
          "rot_x1y");
  push_k0(profile_field(grid, [&](int i, double y) { return y * pr.normal(i, 1); }),
          "rot_x2y");
  // (3) rotations into the trivial direction
  if (grid.ambient_dim == 4) {
    push_k0(z_field(grid, [&](int i, double) { return pr.x(i, 0); }), "rot_x1z");
    push_k0(z_field(grid, [&](int i, double) { return pr.x(i, 1); }), "rot_x2z");
    push_k0(z_field(grid, [&](int, double y) { return y; }), "rot_yz");
  }
  // K1: (y^2 - 2) H
  basis.k1_fields.push_back(profile_field(
      grid, [&](int i, double y) { return (y * y - 2.0) * pr.kappa[i]; }));
  basis.k1_labels.push_back("k1_y2");

  const int n = basis.size();
  basis.gram.resize(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      basis.gram(i, j) = basis.gram(j, i) =
          inner_rho(grid, basis.field(i), basis.field(j));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(basis.gram);
  const double lmin = es.eigenvalues().minCoeff();
  const double lmax = es.eigenvalues().maxCoeff();
  basis.gram_condition = lmax / std::max(lmin, 1e-300);
  if (!(lmin > 0) || basis.gram_condition > 1e8)
    throw IllConditionedGram("kernel Gram condition " +
                             std::to_string(basis.gram_condition));
  return basis;
}

NormalField jacobi_operator(const CylinderGrid& grid, const NormalField& U) {
  const Grid2D ksq = grid.kappa().square();
  NormalField out;
  out.support_radius = U.support_radius;
  out.u = drift_laplacian(grid, U.u) + (0.5 + ksq) * U.u;
  if (U.has_z()) out.uz = drift_laplacian(grid, U.uz) + 0.5 * U.uz;
  return out;
}

double kernel_residual(const CylinderGrid& grid, const NormalField& J) {
  const NormalField LJ = jacobi_operator(grid, J);
  return l2_rho(grid, LJ) / l2_rho(grid, J);
}

DecompositionResult project_decompose(const CylinderGrid& grid,
                                      const NormalField& U,
                                      const KernelBasis& basis) {
  const int n = basis.size();
  const int n0 = static_cast<int>(basis.k0_fields.size());
  std::vector<NormalField> cut;
  cut.reserve(n);
  double tail = 0;
  for (int i = 0; i < n; ++i) {
    cut.push_back(apply_cut(grid, basis.field(i), U.support_radius));
    // Gaussian mass of the discarded part, bounded by the weight decay
    NormalField diff = basis.field(i) + (-1.0) * cut.back();
    tail = std::max(tail, l2_rho(grid, diff));
  }
  Eigen::MatrixXd G(n, n);
  Eigen::VectorXd b(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j)
      G(i, j) = G(j, i) = inner_rho(grid, cut[i], cut[j]);
    b[i] = inner_rho(grid, U, cut[i]);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
  if (!(es.eigenvalues().minCoeff() > 0) ||
      es.eigenvalues().maxCoeff() / es.eigenvalues().minCoeff() > 1e8)
    throw IllConditionedGram("cutoff Gram is ill-conditioned");
  Eigen::VectorXd c = G.ldlt().solve(b);

  DecompositionResult res;
  res.coefficients = c;
  res.tail_correction = tail;
  const bool with_z = U.has_z() || grid.ambient_dim == 4;
  res.U0 = zero_field(grid, with_z);
  res.Jprime = zero_field(grid, with_z);
  res.U0.support_radius = res.Jprime.support_radius = U.support_radius;
  for (int i = 0; i < n; ++i) {
    NormalField scaled = c[i] * cut[i];
    if (i < n0)
      res.U0 = res.U0 + scaled;
    else
      res.Jprime = res.Jprime + scaled;
  }
  res.h = U + (-1.0) * (res.U0 + res.Jprime);
  res.h.support_radius = U.support_radius;

  res.u0_l2 = l2_rho(grid, res.U0);
  res.jprime_l2 = l2_rho(grid, res.Jprime);
  res.h_l2 = l2_rho(grid, res.h);
  res.u0_w22 = sobolev_rho(grid, res.U0, 2, 2);
  res.jprime_w22 = sobolev_rho(grid, res.Jprime, 2, 2);
  res.h_w22 = sobolev_rho(grid, res.h, 2, 2);

  const double scale = std::max({res.u0_l2, res.jprime_l2, res.h_l2, 1e-300});
  res.orthogonality =
      std::max({std::abs(inner_rho(grid, res.U0, res.Jprime)),
                std::abs(inner_rho(grid, res.U0, res.h)),
                std::abs(inner_rho(grid, res.Jprime, res.h))}) /
      (scale * scale);
  return res;
}

GrowthConstants kernel_growth_constants(const CylinderGrid& grid,
                                        const NormalField& J) {
  GrowthConstants gc;
  gc.r0 = grid.profile.diameter() + 1.0;
  Grid2D mag = J.u.square();
  if (J.has_z()) mag += J.uz.square();
  const double l2_ball =
      std::sqrt(grid.integrate_rho_ball(mag, gc.r0));  // ||J||_{L^2(B_r0)}
  const Grid2D bx = grid.bracket_x();
  gc.c_growth = (mag.sqrt() / bx.square()).maxCoeff() / l2_ball;

  Grid2D g1 = grad_sq(grid, J.u, 1);
  Grid2D g2 = grad_sq(grid, J.u, 2);
  if (J.has_z()) {
    g1 += grad_sq(grid, J.uz, 1);
    g2 += grad_sq(grid, J.uz, 2);
  }
  gc.c_grad = ((g1.sqrt() + g2.sqrt()) / bx.square()).maxCoeff() / l2_ball;

  // mixed second derivatives with one axial slot: |grad^2 J(., y)|
  Grid2D m2y = Grid2D::Zero(grid.M(), grid.J());
  {
    const Grid2D uy = d_bounded(J.u, 1, grid.dy);
    const Grid2D usy = d_periodic(uy, 1, grid.dsig);
    const Grid2D uyy = d_bounded(J.u, 2, grid.dy);
    m2y += usy.square() + uyy.square();
    if (J.has_z()) {
      const Grid2D zy = d_bounded(J.uz, 1, grid.dy);
      m2y += d_periodic(zy, 1, grid.dsig).square() +
             d_bounded(J.uz, 2, grid.dy).square();
    }
  }
  gc.c_mixed = (m2y.sqrt() / bx).maxCoeff() / l2_ball;
  return gc;
}

}  // namespace shrinkerlab
