#pragma once

#include <functional>
#include <string>
#include <vector>

#include "shrinkerlab/graphgeom.hpp"

namespace shrinkerlab {

// First variations along s -> Gamma_{sV} at s = 0 on the base cylinder,
// where |H| = kappa > 0, A_ss = -kappa N, tau_ss = -N and nabla-perp tau = 0.
// All tensors are stored as ambient 4-vectors per node; slots as in
// graphgeom.hpp (0 = ss, 1 = sy, 2 = yy; derivative index 0 = s, 1 = y).
struct FirstVariationSet {
  Grid2D g_s[3];            // (g_ij)_s = -2 A^V_ij
  Grid2D ginv_s[3];
  Grid2D A_s[3][4];         // full vectors, tangential part included
  Grid2D absH_s;            // -<N, Lap-perp V + A^V_ij A_ij>
  Grid2D H_s[4];
  Grid2D N_s[4];
  Grid2D gradabsH_s[2];     // gradient of |H|_s
  Grid2D gradA_s[2][3][4];  // Pi d_l (A_ij)_s, the five-term expansion
  Grid2D gradtau_s[2][3][4];
  Grid2D gradtau_s_sq;      // |(nabla-perp tau)_s|^2, base metric contraction
};

// (nabla-perp tau)_s is assembled from the two variation pieces
//   Pi_s(nabla tau) = (1/|H|) <A_ij, A_lm> nabla-perp_m V
//   Pi(nabla tau_s) = -(nabla|H|/|H|^2) Pi(A_s - |H|_s tau)
//                     + nabla-perp A_s / |H| - (nabla |H|_s / |H|) tau
// plus the variation of the Levi-Civita connection acting on the nonzero
// base tau: -(Gamma^d_{li})_s tau_dj - (Gamma^d_{lj})_s tau_id with
// (Gamma^d_{li})_s = -(grad_l A^V_di + grad_i A^V_dl - grad_d A^V_li).
// The connection term is required for agreement with the direct finite-
// difference variation of the graph tensor; dropping it moves the nonzero
// components into the wrong slots and doubles the measured norm.
FirstVariationSet analytic_first_variations(const CylinderGrid& grid,
                                            const NormalField& V);

// Pi_s applied to a constant ambient vector W (for oracle comparisons)
void apply_Pi_s(const CylinderGrid& grid, const NormalField& V,
                const Eigen::Vector4d& W, Grid2D out[4]);

struct DerivativeEstimate {
  double value = 0;
  int order = 1;
  double step = 0;
  double richardson_error = 0;
  double roundoff_floor = 0;
  std::string fd_scheme;
};

// centered difference with one Richardson level on a scalar function of s
DerivativeEstimate fd_derivative(const std::function<double(double)>& f,
                                 int order, double step);

enum class GraphQuantity { Metric, SecondFF, AbsH, NormalDir, GradTau };

struct NumericVariation {
  std::vector<Grid2D> value;  // derivative per component at s = 0
  double richardson_error = 0;
  double step = 0;
};

// (d/ds) of the named graph tensor by centered differences over geometry
// evaluations at s U; component layout matches the analytic counterparts.
NumericVariation numeric_first_variation(const CylinderGrid& grid,
                                         const NormalField& U, GraphQuantity q,
                                         double step,
                                         const GraphThresholds& thr = {});

// all five tensors from one shared set of geometry evaluations
struct FirstVariationOracle {
  NumericVariation metric, second_ff, abs_h, normal_dir, grad_tau;
};
FirstVariationOracle numeric_first_variations(const CylinderGrid& grid,
                                              const NormalField& U, double step,
                                              const GraphThresholds& thr = {});

// scalar functionals of the graph used by the sweeps and the FD oracles
double integral_gradtau_sq(const CylinderGrid& grid, const NormalField& U,
                           const GraphThresholds& thr = {});
double integral_abs_p(const CylinderGrid& grid, const NormalField& U,
                      const GraphThresholds& thr = {});
double graph_area(const CylinderGrid& grid, const NormalField& U,
                  const GraphThresholds& thr = {});

// || D^2 T (J', J') ||_{L^1} = int 2 |(nabla-perp tau)_s|^2 rho for J' in K1;
// fields outside span(K1) are rejected.
double second_variation_T_L1(const CylinderGrid& grid,
                             const NormalField& Jprime,
                             double span_tolerance = 1e-6);

struct PVariationChecks {
  DerivativeEstimate first;
  DerivativeEstimate second;
  double second_scale = 0;  // ||V||_{W^{2,2}}^2 reference scale
};

// numeric first/second s-derivatives of int |P_{sV}| rho on an R^4 cylinder
PVariationChecks p_variation_checks(const CylinderGrid& grid,
                                    const NormalField& V, double step = 1e-2,
                                    const GraphThresholds& thr = {});

// sup-norm gaps between the analytic variation formulas and the
// finite-difference oracle, each normalized by the respective tensor scale
struct VariationGaps {
  double metric = 0, second_ff = 0, abs_h = 0, normal_dir = 0;
  double grad_abs_h = 0, grad_A = 0, grad_tau = 0, pi_s = 0;
  double richardson = 0;
};
VariationGaps compare_first_variations(const CylinderGrid& grid,
                                       const NormalField& V, double step,
                                       const GraphThresholds& thr = {});

}  // namespace shrinkerlab
