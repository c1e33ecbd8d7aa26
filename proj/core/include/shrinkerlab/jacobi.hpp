#pragma once

#include <string>
#include <vector>

#include "shrinkerlab/field.hpp"

namespace shrinkerlab {

// Explicit spanning fields of the Jacobi kernel K = ker L on the cylinder:
//   K0 (rotation-generated):  (x1 N2 - x2 N1) N,  y N_i(sigma) N,
//                             and for dim 4:  x_i(sigma) dz,  y dz;
//   K1:                       (y^2 - 2) H = (y^2 - 2) kappa(sigma) N.
// Fields that vanish identically are pruned (the in-plane rotation field is
// tangential on round profiles). No eigensolver is involved: the spanning
// sets are complete on these cylinders.
struct KernelBasis {
  std::vector<NormalField> k0_fields;
  std::vector<NormalField> k1_fields;
  std::vector<std::string> k0_labels;
  std::vector<std::string> k1_labels;
  Eigen::MatrixXd gram;  // of the concatenated (uncut) basis
  double gram_condition = 0;

  int size() const {
    return static_cast<int>(k0_fields.size() + k1_fields.size());
  }
  const NormalField& field(int i) const {
    const int n0 = static_cast<int>(k0_fields.size());
    return i < n0 ? k0_fields[i] : k1_fields[i - n0];
  }
  const std::string& label(int i) const {
    const int n0 = static_cast<int>(k0_fields.size());
    return i < n0 ? k0_labels[i] : k1_labels[i - n0];
  }
};

KernelBasis build_kernel_basis(const CylinderGrid& grid);

// L U = (drift-Laplacian + 1/2 + <., A_kl> A_kl) U, component-wise on the
// base cylinder where the normal frame {N, dz} is parallel:
//   (L U)_N = L u + u/2 + kappa^2 u,   (L U)_z = L u_z + u_z / 2.
NormalField jacobi_operator(const CylinderGrid& grid, const NormalField& U);

// ||L J||_{L^2_rho} / ||J||_{L^2_rho}
double kernel_residual(const CylinderGrid& grid, const NormalField& J);

struct DecompositionResult {
  NormalField U0;      // pi_{K0} U
  NormalField Jprime;  // pi_{K1} U
  NormalField h;       // U - U0 - Jprime
  Eigen::VectorXd coefficients;
  double u0_l2 = 0, jprime_l2 = 0, h_l2 = 0;
  double u0_w22 = 0, jprime_w22 = 0, h_w22 = 0;
  double orthogonality = 0;    // max |<a,b>_rho| over distinct parts, scaled
  double tail_correction = 0;  // Gaussian mass of the basis beyond the cutoff
};

// Gram projection against cutoff copies of the basis matching the field's
// support radius; U = U0 + Jprime + h holds exactly by construction.
DecompositionResult project_decompose(const CylinderGrid& grid,
                                      const NormalField& U,
                                      const KernelBasis& basis);

// measured constants of the kernel growth bounds, with r0 = diam + 1:
//   c_growth  = max |J| / <x>^2  divided by ||J||_{L^2(B_r0)}
//   c_mixed   = max |grad^2 J(.,y)| / <x> divided by ||J||_{L^2(B_r0)}
struct GrowthConstants {
  double c_growth = 0;
  double c_grad = 0;   // same bound for |grad J| + |grad^2 J|
  double c_mixed = 0;
  double r0 = 0;
};
GrowthConstants kernel_growth_constants(const CylinderGrid& grid,
                                        const NormalField& J);

}  // namespace shrinkerlab
