#include "shrinkerlab/field.hpp"

#include <cmath>
#include <fstream>
#include <random>

#include "shrinkerlab/errors.hpp"

namespace shrinkerlab {

NormalField NormalField::scaled(double s) const {
  NormalField out = *this;
  out.u *= s;
  if (has_z()) out.uz *= s;
  return out;
}

NormalField operator+(const NormalField& a, const NormalField& b) {
  NormalField out;
  out.u = a.u + b.u;
  if (a.has_z() && b.has_z())
    out.uz = a.uz + b.uz;
  else if (a.has_z())
    out.uz = a.uz;
  else if (b.has_z())
    out.uz = b.uz;
  out.support_radius = std::max(a.support_radius, b.support_radius);
  return out;
}

NormalField operator*(double s, const NormalField& f) { return f.scaled(s); }

namespace {
inline double bump_side(double t) { return t > 0 ? std::exp(-1.0 / t) : 0.0; }
}  // namespace

double smooth_cutoff(double y, double radius) {
  const double a = std::abs(y);
  if (a <= radius - 1.0) return 1.0;
  if (a >= radius) return 0.0;
  const double t = radius - a;  // in (0,1)
  const double g0 = bump_side(t);
  const double g1 = bump_side(1.0 - t);
  return g0 / (g0 + g1);
}

Grid2D cutoff_profile(const CylinderGrid& grid, double radius) {
  Grid2D out(grid.M(), grid.J());
  for (int j = 0; j < grid.J(); ++j)
    out.col(j).setConstant(smooth_cutoff(grid.y[j], radius));
  return out;
}

NormalField make_field(const CylinderGrid& grid,
                       const std::function<double(double, double, double)>& fu,
                       double support_radius, bool apply_cutoff) {
  NormalField f;
  f.support_radius = support_radius;
  f.u.resize(grid.M(), grid.J());
  for (int i = 0; i < grid.M(); ++i) {
    const double sig = i * grid.dsig;
    for (int j = 0; j < grid.J(); ++j)
      f.u(i, j) = fu(sig, static_cast<double>(i), grid.y[j]);
  }
  if (apply_cutoff) f.u *= cutoff_profile(grid, support_radius);
  return f;
}

NormalField make_field_z(
    const CylinderGrid& grid,
    const std::function<double(double, double, double)>& fu,
    const std::function<double(double, double, double)>& fz,
    double support_radius, bool apply_cutoff) {
  if (grid.ambient_dim != 4)
    throw BadField("z-component fields require ambient_dim = 4");
  NormalField f = make_field(grid, fu, support_radius, apply_cutoff);
  f.uz.resize(grid.M(), grid.J());
  for (int i = 0; i < grid.M(); ++i) {
    const double sig = i * grid.dsig;
    for (int j = 0; j < grid.J(); ++j)
      f.uz(i, j) = fz(sig, static_cast<double>(i), grid.y[j]);
  }
  if (apply_cutoff) f.uz *= cutoff_profile(grid, support_radius);
  return f;
}

NormalField zero_field(const CylinderGrid& grid, bool with_z) {
  NormalField f;
  f.support_radius = grid.Y;
  f.u = Grid2D::Zero(grid.M(), grid.J());
  if (with_z) f.uz = Grid2D::Zero(grid.M(), grid.J());
  return f;
}

NormalField random_smooth_field(const CylinderGrid& grid, std::uint64_t seed,
                                double support_radius, bool with_z,
                                bool apply_cutoff) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  const double L = grid.profile.length;

  auto component = [&](Grid2D& out) {
    out = Grid2D::Zero(grid.M(), grid.J());
    for (int m = 0; m <= 2; ++m) {
      const double phase = M_PI * unif(rng);
      for (int n = 0; n <= 3; ++n) {
        const double amp = unif(rng) / (1.0 + m * m + n * n);
        for (int i = 0; i < grid.M(); ++i) {
          const double sig = i * grid.dsig;
          const double cs = std::cos(2.0 * M_PI * m * sig / L + phase);
          for (int j = 0; j < grid.J(); ++j) {
            const double yy = grid.y[j] / 3.0;
            out(i, j) += amp * cs * std::pow(yy, n) * std::exp(-yy * yy / 2.0);
          }
        }
      }
    }
    const double s = out.abs().maxCoeff();
    if (s > 0) out /= s;
  };

  NormalField f;
  f.support_radius = support_radius;
  component(f.u);
  if (with_z) component(f.uz);
  if (apply_cutoff) {
    const Grid2D chi = cutoff_profile(grid, support_radius);
    f.u *= chi;
    if (with_z) f.uz *= chi;
  }
  return f;
}

Grid2D field_pointwise_m(const CylinderGrid& grid, const NormalField& U, int m) {
  Grid2D acc = Grid2D::Zero(grid.M(), grid.J());
  for (int j = 0; j <= m; ++j) {
    Grid2D g = grad_sq(grid, U.u, j);
    if (U.has_z()) g += grad_sq(grid, U.uz, j);
    acc += g.sqrt();
  }
  return acc;
}

double field_cm_norm(const CylinderGrid& grid, const NormalField& U, int m) {
  return field_pointwise_m(grid, U, m).maxCoeff();
}

double inner_rho(const CylinderGrid& grid, const NormalField& a,
                 const NormalField& b) {
  Grid2D prod = a.u * b.u;
  if (a.has_z() && b.has_z()) prod += a.uz * b.uz;
  return grid.integrate_rho(prod);
}

double l2_rho(const CylinderGrid& grid, const NormalField& a) {
  return std::sqrt(std::max(0.0, inner_rho(grid, a, a)));
}

double sobolev_rho(const CylinderGrid& grid, const NormalField& U, int m,
                   int q) {
  const Grid2D um = field_pointwise_m(grid, U, m);
  return std::pow(grid.integrate_rho(um.pow(q)), 1.0 / q);
}

void write_field_snapshot(const std::string& path, const CylinderGrid& grid,
                          const NormalField& U) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open " + path + " for writing");
  os << "shrinkerlab-field v1\n";
  os << "profile_nodes " << grid.M() << "\n";
  os << "axial_nodes " << grid.J() << "\n";
  os << "support_radius " << U.support_radius << "\n";
  os << "components " << (U.has_z() ? 2 : 1) << "\n";
  os << "# i j u" << (U.has_z() ? " uz" : "") << "\n";
  char buf[128];
  for (int i = 0; i < grid.M(); ++i)
    for (int j = 0; j < grid.J(); ++j) {
      if (U.has_z())
        std::snprintf(buf, sizeof(buf), "%d %d %.17g %.17g\n", i, j, U.u(i, j),
                      U.uz(i, j));
      else
        std::snprintf(buf, sizeof(buf), "%d %d %.17g\n", i, j, U.u(i, j));
      os << buf;
    }
}

}  // namespace shrinkerlab
