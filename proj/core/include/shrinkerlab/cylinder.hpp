#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>

#include "shrinkerlab/fdstencil.hpp"
#include "shrinkerlab/profile.hpp"

namespace shrinkerlab {

// Product discretization of Gamma = profile x R inside R^N (N = 3 or 4).
// Grid functions are stored rows = profile node (periodic), cols = axial node.
// The surface metric of the base in (sigma, y) coordinates is the identity,
// so covariant derivatives of grid functions reduce to the stencils of
// fdstencil.hpp. The Gaussian weight is rho_2 = (4 pi)^-1 exp(-|x|^2/4).
struct CylinderGrid {
  ProfileCurve profile;
  int ambient_dim = 3;
  double Y = 12.0;
  Eigen::ArrayXd y;    // axial nodes, odd count, uniform on [-Y, Y]
  Grid2D pos[4];       // node positions, unused components identically zero
  Grid2D rho;          // Gaussian weight at the base nodes
  Grid2D xsq;          // |x|^2
  Eigen::ArrayXd wy;   // axial trapezoid weights
  double dsig = 0, dy = 0;
  double tail_bound = 0;  // Gaussian mass of the base beyond |y| > Y

  int M() const { return static_cast<int>(pos[0].rows()); }
  int J() const { return static_cast<int>(pos[0].cols()); }

  // quadrature of f against the base area element (and optionally a ball
  // restriction |x| <= r in the ambient space)
  double integrate(const Grid2D& f) const;
  double integrate_ball(const Grid2D& f, double r) const;
  double integrate_rho(const Grid2D& f) const { return integrate(f * rho); }
  double integrate_rho_ball(const Grid2D& f, double r) const {
    return integrate_ball(f * rho, r);
  }

  Grid2D dsigma(const Grid2D& f, int m = 1) const { return d_periodic(f, m, dsig); }
  Grid2D dyy(const Grid2D& f, int m = 1) const { return d_bounded(f, m, dy); }

  // <x,T> broadcast over the grid (the profile-tangential position component)
  Grid2D x_dot_t() const;
  Grid2D kappa() const;       // profile curvature broadcast over the grid
  Grid2D kappa_dot() const;   // d kappa / d sigma, exact from the first integral
  Grid2D bracket_x() const;   // <x> = sqrt(1 + |x|^2)
};

CylinderGrid build_grid(const ProfileCurve& profile, double Y, int axial_count,
                        int ambient_dim);

struct NormRegion {
  std::optional<double> ball;  // absent = entire cylinder
  static NormRegion entire() { return {}; }
  static NormRegion in_ball(double r) { return {r}; }
};

struct WeightedNormResult {
  double value = 0;
  int k = 0;
  int p = 2;
  std::string region = "entire";
  double tail_bound = 0;
};

// ( int sum_{j<=k} |grad^j f|^p rho )^{1/p} for grid functions, k <= 3,
// p in {1,2,3}.
WeightedNormResult weighted_norm(const CylinderGrid& grid, const Grid2D& f,
                                 int k, int p,
                                 NormRegion region = NormRegion::entire());

// F(Gamma) for the base cylinder; the graph version lives in graphgeom.hpp.
double gaussian_area(const CylinderGrid& grid);

// closed form for a round cylinder of radius r over the circle factor:
// (4 pi)^-1 * 2 pi r * e^{-r^2/4} * 2 sqrt(pi) = sqrt(pi) r e^{-r^2/4}
double round_cylinder_area(double r);

// L f = Laplace f - (1/2)<x^T, grad f>; on the base this is
// f_ss + f_yy - (1/2)(<x,T> f_s + y f_y).
Grid2D drift_laplacian(const CylinderGrid& grid, const Grid2D& f);

// |grad^j f|^2 with the flat base metric (mixed partials with multiplicity)
Grid2D grad_sq(const CylinderGrid& grid, const Grid2D& f, int j);

// text snapshot of the grid (positions, weights) in the curve-file style
void write_grid_snapshot(const std::string& path, const CylinderGrid& grid);

}  // namespace shrinkerlab
