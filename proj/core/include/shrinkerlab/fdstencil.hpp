#pragma once

#include <Eigen/Dense>

namespace shrinkerlab {

using Grid2D = Eigen::ArrayXXd;  // rows = profile index (periodic), cols = axial index

// Finite-difference weights for the m-th derivative at point z from nodes xs
// (Fornberg's recursion). Exact for polynomials up to degree xs.size()-1.
Eigen::VectorXd fd_weights(double z, const Eigen::VectorXd& xs, int m);

// m-th derivative along the periodic (row) direction, node spacing h.
// Centered windows of 5 points (m <= 2) or 7 points (m = 3, 4): fourth order.
Grid2D d_periodic(const Grid2D& f, int m, double h);

// m-th derivative along the bounded (column) direction, node spacing h.
// Interior windows as above; near the ends the window slides and gains one
// point so the one-sided formulas keep at least fourth-order accuracy.
Grid2D d_bounded(const Grid2D& f, int m, double h);

// Periodic first derivative of a closed-curve sample by the spectral
// differentiation matrix (even node count). Used when fourth order is not
// enough, e.g. reconstructing frames from imported curve files.
Eigen::ArrayXd d_spectral_periodic(const Eigen::ArrayXd& f, double period);

}  // namespace shrinkerlab
