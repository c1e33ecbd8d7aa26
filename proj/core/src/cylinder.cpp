#include "shrinkerlab/cylinder.hpp"

#include <cmath>
#include <fstream>

#include "shrinkerlab/errors.hpp"

namespace shrinkerlab {

CylinderGrid build_grid(const ProfileCurve& profile, double Y, int axial_count,
                        int ambient_dim) {
  if (ambient_dim != 3 && ambient_dim != 4)
    throw BadField("ambient_dim must be 3 or 4");
  if (axial_count < 33 || axial_count % 2 == 0)
    throw BadField("axial_count must be odd and >= 33");
  if (Y <= 0) throw BadField("Y must be positive");

  CylinderGrid g;
  g.profile = profile;
  g.ambient_dim = ambient_dim;
  g.Y = Y;
  const int M = profile.nodes();
  const int J = axial_count;
  g.dsig = profile.spacing();
  g.dy = 2.0 * Y / (J - 1);
  g.y = Eigen::ArrayXd::LinSpaced(J, -Y, Y);
  for (auto& p : g.pos) p = Grid2D::Zero(M, J);
  for (int i = 0; i < M; ++i) {
    g.pos[0].row(i).setConstant(profile.x(i, 0));
    g.pos[1].row(i).setConstant(profile.x(i, 1));
  }
  for (int j = 0; j < J; ++j) g.pos[2].col(j).setConstant(g.y[j]);
  g.xsq = g.pos[0].square() + g.pos[1].square() + g.pos[2].square();
  g.rho = (1.0 / (4.0 * M_PI)) * (-g.xsq / 4.0).exp();
  g.wy = Eigen::ArrayXd::Constant(J, g.dy);
  g.wy[0] = g.wy[J - 1] = 0.5 * g.dy;

  // neglected base Gaussian mass: curve mass times the axial tail
  double curve_mass = 0;
  for (int i = 0; i < M; ++i)
    curve_mass += std::exp(-(profile.x(i, 0) * profile.x(i, 0) +
                             profile.x(i, 1) * profile.x(i, 1)) /
                           4.0) *
                  g.dsig;
  curve_mass /= 4.0 * M_PI;
  g.tail_bound = curve_mass * 2.0 * std::sqrt(M_PI) * std::erfc(Y / 2.0);
  return g;
}

double CylinderGrid::integrate(const Grid2D& f) const {
  double acc = 0;
  for (int j = 0; j < J(); ++j) acc += f.col(j).sum() * wy[j];
  return acc * dsig;
}

double CylinderGrid::integrate_ball(const Grid2D& f, double r) const {
  const double r2 = r * r;
  double acc = 0;
  for (int j = 0; j < J(); ++j) {
    double col = 0;
    for (int i = 0; i < M(); ++i)
      if (xsq(i, j) <= r2) col += f(i, j);
    acc += col * wy[j];
  }
  return acc * dsig;
}

Grid2D CylinderGrid::x_dot_t() const {
  Grid2D out(M(), J());
  const Eigen::ArrayXd xt = profile.x_dot_t();
  for (int i = 0; i < M(); ++i) out.row(i).setConstant(xt[i]);
  return out;
}

Grid2D CylinderGrid::kappa() const {
  Grid2D out(M(), J());
  for (int i = 0; i < M(); ++i) out.row(i).setConstant(profile.kappa[i]);
  return out;
}

Grid2D CylinderGrid::kappa_dot() const {
  // kappa' = kappa <x,T>/2 along shrinker profiles
  Grid2D out(M(), J());
  const Eigen::ArrayXd kd = 0.5 * profile.kappa * profile.x_dot_t();
  for (int i = 0; i < M(); ++i) out.row(i).setConstant(kd[i]);
  return out;
}

Grid2D CylinderGrid::bracket_x() const { return (1.0 + xsq).sqrt(); }

Grid2D grad_sq(const CylinderGrid& grid, const Grid2D& f, int j) {
  if (j == 0) return f.square();
  // sum over mixed partials D^(a,b) f with multinomial multiplicity
  Grid2D acc = Grid2D::Zero(f.rows(), f.cols());
  for (int a = 0; a <= j; ++a) {
    const int b = j - a;
    Grid2D d = f;
    if (a > 0) d = d_periodic(d, a, grid.dsig);
    if (b > 0) d = d_bounded(d, b, grid.dy);
    double mult = 1.0;
    for (int t = 0; t < std::min(a, b); ++t)
      mult = mult * (j - t) / (t + 1);  // binomial(j, a)
    acc += mult * d.square();
  }
  return acc;
}

WeightedNormResult weighted_norm(const CylinderGrid& grid, const Grid2D& f,
                                 int k, int p, NormRegion region) {
  if (k < 0 || k > 3 || p < 1 || p > 3)
    throw UnsupportedNorm("weighted_norm supports k <= 3, p in {1,2,3}");
  Grid2D integrand = Grid2D::Zero(f.rows(), f.cols());
  for (int j = 0; j <= k; ++j) {
    Grid2D gs = grad_sq(grid, f, j);
    if (p == 2)
      integrand += gs;
    else
      integrand += gs.sqrt().pow(p);
  }
  double val = region.ball ? grid.integrate_rho_ball(integrand, *region.ball)
                           : grid.integrate_rho(integrand);
  WeightedNormResult r;
  r.value = std::pow(std::max(val, 0.0), 1.0 / p);
  r.k = k;
  r.p = p;
  r.region = region.ball ? ("ball:" + std::to_string(*region.ball)) : "entire";
  r.tail_bound = grid.tail_bound;
  return r;
}

double gaussian_area(const CylinderGrid& grid) { return grid.integrate(grid.rho); }

double round_cylinder_area(double r) {
  return std::sqrt(M_PI) * r * std::exp(-r * r / 4.0);
}

Grid2D drift_laplacian(const CylinderGrid& grid, const Grid2D& f) {
  const Grid2D fs = d_periodic(f, 1, grid.dsig);
  const Grid2D fss = d_periodic(f, 2, grid.dsig);
  const Grid2D fy = d_bounded(f, 1, grid.dy);
  const Grid2D fyy = d_bounded(f, 2, grid.dy);
  Grid2D ygrid(f.rows(), f.cols());
  for (int j = 0; j < grid.J(); ++j) ygrid.col(j).setConstant(grid.y[j]);
  return fss + fyy - 0.5 * (grid.x_dot_t() * fs + ygrid * fy);
}

void write_grid_snapshot(const std::string& path, const CylinderGrid& grid) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open " + path + " for writing");
  os << "shrinkerlab-grid v1\n";
  os << "profile "
     << (grid.profile.kind == ProfileSpec::Kind::Round ? "round"
                                                       : "abresch-langer")
     << "\n";
  os << "profile_nodes " << grid.M() << "\n";
  os << "axial_nodes " << grid.J() << "\n";
  os << "Y " << grid.Y << "\n";
  os << "ambient_dim " << grid.ambient_dim << "\n";
  os << "tail_bound " << grid.tail_bound << "\n";
  os << "# i j x1 x2 y rho\n";
  char buf[160];
  for (int i = 0; i < grid.M(); ++i)
    for (int j = 0; j < grid.J(); ++j) {
      std::snprintf(buf, sizeof(buf), "%d %d %.17g %.17g %.17g %.17g\n", i, j,
                    grid.pos[0](i, j), grid.pos[1](i, j), grid.pos[2](i, j),
                    grid.rho(i, j));
      os << buf;
    }
}

}  // namespace shrinkerlab
