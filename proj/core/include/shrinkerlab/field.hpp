#pragma once

#include <cstdint>
#include <functional>

#include "shrinkerlab/cylinder.hpp"

namespace shrinkerlab {

// Normal vector field U = u N + u_z dz on a cylinder grid. N(sigma) is the
// profile outward normal; dz is the trivial ambient direction (dim 4 only).
// Compactly supported fields vanish for |y| >= support_radius, with the
// smooth transition of width 1 ending at support_radius.
struct NormalField {
  Grid2D u;
  Grid2D uz;  // size 0 when absent
  double support_radius = 0;  // grid half-width Y for entire fields

  bool has_z() const { return uz.size() > 0; }
  NormalField scaled(double s) const;
};

NormalField operator+(const NormalField& a, const NormalField& b);
NormalField operator*(double s, const NormalField& f);

// exp(-1/t)-type smoothstep: 1 for |y| <= radius-1, 0 for |y| >= radius
double smooth_cutoff(double y, double radius);
Grid2D cutoff_profile(const CylinderGrid& grid, double radius);

NormalField make_field(const CylinderGrid& grid,
                       const std::function<double(double, double, double)>& fu,
                       double support_radius, bool apply_cutoff = true);
NormalField make_field_z(
    const CylinderGrid& grid,
    const std::function<double(double, double, double)>& fu,
    const std::function<double(double, double, double)>& fz,
    double support_radius, bool apply_cutoff = true);

NormalField zero_field(const CylinderGrid& grid, bool with_z = false);

// deterministic smooth field: low sigma-modes times cubic axial polynomials
// with Gaussian envelope; compactly supported copies multiply the cutoff
NormalField random_smooth_field(const CylinderGrid& grid, std::uint64_t seed,
                                double support_radius, bool with_z,
                                bool apply_cutoff = true);

// pointwise |U|_m = sum_{j<=m} |grad^j U| (component-wise covariant
// derivatives; the base normal bundle is parallel along the cylinder)
Grid2D field_pointwise_m(const CylinderGrid& grid, const NormalField& U, int m);
double field_cm_norm(const CylinderGrid& grid, const NormalField& U, int m);

double inner_rho(const CylinderGrid& grid, const NormalField& a,
                 const NormalField& b);
double l2_rho(const CylinderGrid& grid, const NormalField& a);

// ( int |U|_m^q rho )^{1/q} with |U|_m as above (the Sobolev convention used
// by the inequality harness)
double sobolev_rho(const CylinderGrid& grid, const NormalField& U, int m, int q);

void write_field_snapshot(const std::string& path, const CylinderGrid& grid,
                          const NormalField& U);

}  // namespace shrinkerlab
