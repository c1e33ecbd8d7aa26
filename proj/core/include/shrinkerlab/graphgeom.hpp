#pragma once

#include "shrinkerlab/cylinder.hpp"
#include "shrinkerlab/field.hpp"

namespace shrinkerlab {

struct GraphThresholds {
  double eps2 = 0.05;        // C^2 graph-regularity bound on U
  double min_h_factor = 0.1; // |H| floor as a fraction of min profile kappa
};

// Pointwise geometry of the normal graph over a cylinder, by fourth-order
// finite differences of the immersion X_U = X + u N + u_z dz. Ambient vectors
// are stored as four component grids with unused components identically zero.
// Index slots for symmetric 2-tensors: 0 = (s,s), 1 = (s,y), 2 = (y,y).
struct GeometryState {
  const CylinderGrid* grid = nullptr;
  int ambient_dim = 3;

  Grid2D X[4];       // graph positions
  Grid2D E[2][4];    // tangent vectors d_a X
  Grid2D g[3], ginv[3], detg, sqrtdetg;
  Grid2D Pi[4][4];   // normal projector (symmetric, stored fully)
  Grid2D A[3][4];    // second fundamental form, normal-bundle valued
  Grid2D H[4], absH, Nvec[4];
  Grid2D phi[4];     // x^perp/2 - H
  Grid2D tau[3][4];  // A / |H|
  Grid2D Gamma[2][3];        // Christoffels Gamma^d_{ab}: [d][slot ab]
  Grid2D gradtau[2][3][4];   // (nabla^perp_c tau)_{ab}: [c][slot ab][component]
  Grid2D gradtau_sq;         // |nabla^perp tau|^2, all indices metric-contracted
  Grid2D A2[3];      // (A^2)_ij = <A_im, A_mj> (real, metric-contracted)
  Grid2D absA_sq;    // |A|^2
  Grid2D P;          // Colding-Minicozzi inhomogeneous term (zero in codim one)
  Grid2D rho_graph;  // Gaussian weight at the graph positions

  int M() const { return static_cast<int>(X[0].rows()); }
  int J() const { return static_cast<int>(X[0].cols()); }
};

GeometryState evaluate_geometry(const CylinderGrid& grid, const NormalField& U,
                                const GraphThresholds& thr = {});

// re-assembles P from the state tensors (the stored state.P uses the same path)
Grid2D compute_P(const GeometryState& st);

// || |nabla^perp tau|^2_U ||_{L^1} against the base weight
WeightedNormResult grad_tau_norm(const GeometryState& st,
                                 NormRegion region = NormRegion::entire());

// F(Gamma_U): quadrature of rho(X_U) against the graph area element
double gaussian_area(const CylinderGrid& grid, const GeometryState& st);

// covariant derivatives of an ambient-vector field along the graph
struct NormalDerivs {
  Grid2D d1[2][4];     // (nabla^perp_a F)
  Grid2D d2[2][2][4];  // (nabla^perp nabla^perp F)(a,b)
};
NormalDerivs normal_derivatives(const GeometryState& st, const Grid2D F[4],
                                bool second = true);

// |F|, |nabla F|, |nabla^2 F| pointwise (g-contracted) for a normal field F
void normal_field_magnitudes(const GeometryState& st, const Grid2D F[4],
                             Grid2D& m0, Grid2D& m1, Grid2D& m2);

// per-node CSV dump (indices, metric, |A|^2, |H|, phi components, P)
void write_geometry_csv(const std::string& path, const GeometryState& st);

}  // namespace shrinkerlab
