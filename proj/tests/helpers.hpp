#pragma once

#include <cmath>

#include "shrinkerlab/graphgeom.hpp"
#include "shrinkerlab/profile.hpp"

namespace shrinkerlab::testing {

inline CylinderGrid round_grid(int nodes = 256, int axial = 257,
                               double Y = 12.0, int dim = 3) {
  return build_grid(round_profile_curve(nodes), Y, axial, dim);
}

inline ProfileSpec al_spec(int p, int q, int nodes = 256, double tol = 1e-8,
                           double step = 2e-4) {
  ProfileSpec s;
  s.kind = ProfileSpec::Kind::AbreschLanger;
  s.p = p;
  s.q = q;
  s.nodes = nodes;
  s.tolerance = tol;
  s.step = step;
  return s;
}

// Exact geometry of the revolution graph r(y) over the radius-sqrt(2) round
// cylinder: an independent one-dimensional oracle for the grid machinery.
// Profile parameter is the base arclength s (theta = s / sqrt(2)).
struct RevolutionOracle {
  std::function<double(double)> r, r1, r2, r3;
  double R0 = std::sqrt(2.0);

  double W(double y) const { return std::sqrt(1.0 + r1(y) * r1(y)); }
  double g_ss(double y) const { return r(y) * r(y) / (R0 * R0); }
  double g_yy(double y) const { return 1.0 + r1(y) * r1(y); }
  double mean_h(double y) const {
    return 1.0 / (r(y) * W(y)) - r2(y) / std::pow(W(y), 3);
  }
  double phi_scalar(double y) const {
    return (r(y) - r1(y) * y) / (2.0 * W(y)) - mean_h(y);
  }
  double t_ss(double y) const {
    return (-r(y) / (R0 * R0 * W(y))) / mean_h(y);
  }
  double t_yy(double y) const { return (r2(y) / W(y)) / mean_h(y); }

  double grad_tau_sq(double y) const {
    const double rr = r(y), d1 = r1(y), d2 = r2(y), d3 = r3(y);
    const double w = W(y), h = mean_h(y);
    // d/dy of t_ss and t_yy
    const double a_ss = -rr / (R0 * R0 * w);
    const double da_ss = -d1 / (R0 * R0 * w) + rr * d1 * d2 / (R0 * R0 * w * w * w);
    const double a_yy = d2 / w;
    const double da_yy = d3 / w - d2 * d1 * d2 / (w * w * w);
    const double dh = -d1 / (rr * rr * w) - d1 * d2 / (rr * w * w * w) -
                      d3 / (w * w * w) + 3.0 * d2 * d2 * d1 / std::pow(w, 5);
    const double dt_ss = da_ss / h - a_ss * dh / (h * h);
    const double dt_yy = da_yy / h - a_yy * dh / (h * h);
    const double G_s_sy = d1 / rr;                       // Gamma^s_{sy}
    const double G_y_ss = -rr * d1 / (R0 * R0 * w * w);  // Gamma^y_{ss}
    const double G_y_yy = d1 * d2 / (w * w);             // Gamma^y_{yy}
    const double T_y_ss = dt_ss - 2.0 * G_s_sy * t_ss(y);
    const double T_s_sy = -G_y_ss * t_yy(y) - G_s_sy * t_ss(y);
    const double T_y_yy = dt_yy - 2.0 * G_y_yy * t_yy(y);
    const double gss = 1.0 / g_ss(y), gyy = 1.0 / g_yy(y);
    return gyy * gss * gss * T_y_ss * T_y_ss +
           2.0 * gss * gss * gyy * T_s_sy * T_s_sy +
           gyy * gyy * gyy * T_y_yy * T_y_yy;
  }
};

inline double rel_gap(double a, double b, double scale) {
  return std::abs(a - b) / scale;
}

}  // namespace shrinkerlab::testing
