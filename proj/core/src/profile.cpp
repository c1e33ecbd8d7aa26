#include "shrinkerlab/profile.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "shrinkerlab/errors.hpp"
#include "shrinkerlab/fdstencil.hpp"

namespace shrinkerlab {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

struct ShootState {
  double x1, x2, alpha, kappa;
};

inline ShootState rhs(const ShootState& s) {
  const double t1 = std::cos(s.alpha);
  const double t2 = std::sin(s.alpha);
  const double xT = s.x1 * t1 + s.x2 * t2;
  return {t1, t2, s.kappa, 0.5 * s.kappa * xT};
}

inline ShootState axpy(const ShootState& a, double c, const ShootState& b) {
  return {a.x1 + c * b.x1, a.x2 + c * b.x2, a.alpha + c * b.alpha,
          a.kappa + c * b.kappa};
}

inline ShootState rk4_step(const ShootState& s, double h) {
  const ShootState k1 = rhs(s);
  const ShootState k2 = rhs(axpy(s, 0.5 * h, k1));
  const ShootState k3 = rhs(axpy(s, 0.5 * h, k2));
  const ShootState k4 = rhs(axpy(s, h, k3));
  ShootState out = s;
  out.x1 += h / 6.0 * (k1.x1 + 2 * k2.x1 + 2 * k3.x1 + k4.x1);
  out.x2 += h / 6.0 * (k1.x2 + 2 * k2.x2 + 2 * k3.x2 + k4.x2);
  out.alpha += h / 6.0 * (k1.alpha + 2 * k2.alpha + 2 * k3.alpha + k4.alpha);
  out.kappa += h / 6.0 * (k1.kappa + 2 * k2.kappa + 2 * k3.kappa + k4.kappa);
  return out;
}

inline double x_dot_t(const ShootState& s) {
  return s.x1 * std::cos(s.alpha) + s.x2 * std::sin(s.alpha);
}

ShootState initial_state(double kappa_max) {
  // curvature maximum on the x1-axis: x = (2 kappa_max, 0), T = (0,1), N = (1,0)
  return {2.0 * kappa_max, 0.0, M_PI / 2.0, kappa_max};
}

// Integrate from a curvature maximum to the next curvature minimum (the next
// upward zero of <x,T>, since kappa' = kappa <x,T>/2). Returns arclength and
// end state, with the crossing refined by bisection inside the last step.
std::pair<double, ShootState> integrate_half_oscillation(double kappa_max,
                                                         double h) {
  ShootState s = initial_state(kappa_max);
  double sigma = 0.0;
  const int max_steps = 4'000'000;
  ShootState prev = s;
  bool left_start = false;
  for (int i = 0; i < max_steps; ++i) {
    prev = s;
    s = rk4_step(s, h);
    sigma += h;
    const double g = x_dot_t(s);
    if (!left_start) {
      if (g < -1e-14) left_start = true;
      continue;
    }
    if (g >= 0.0) {
      double lo = 0.0, hi = h;
      ShootState mid = s;
      for (int it = 0; it < 80 && (hi - lo) > 1e-17; ++it) {
        const double dm = 0.5 * (lo + hi);
        mid = rk4_step(prev, dm);
        if (x_dot_t(mid) >= 0.0)
          hi = dm;
        else
          lo = dm;
      }
      const double dt = 0.5 * (lo + hi);
      mid = rk4_step(prev, dt);
      return {sigma - h + dt, mid};
    }
  }
  throw NoConvergence("half-oscillation event not reached within step budget");
}

double turning_angle(double kappa_max, double h) {
  auto [sig, end] = integrate_half_oscillation(kappa_max, h);
  (void)sig;
  return end.alpha - M_PI / 2.0;
}

}  // namespace

double half_oscillation_angle(double kappa_max, double step) {
  return turning_angle(kappa_max, step);
}

RoundShrinkerData round_shrinker_data(int k) {
  if (k < 1) throw NoSuchCurve("round shrinker needs k >= 1");
  return {k, std::sqrt(2.0 * k), std::sqrt(0.5 * k), 0.5};
}

ProfileCurve round_profile_curve(int nodes) {
  if (nodes < 16) throw NoSuchCurve("round profile needs at least 16 nodes");
  ProfileCurve c;
  c.kind = ProfileSpec::Kind::Round;
  c.rotation_index = 1;
  c.symmetry = 0;
  const double r = std::sqrt(2.0);
  c.length = 2.0 * M_PI * r;
  c.x.resize(nodes, 2);
  c.tangent.resize(nodes, 2);
  c.normal.resize(nodes, 2);
  c.kappa.resize(nodes);
  for (int i = 0; i < nodes; ++i) {
    const double th = 2.0 * M_PI * i / nodes;
    c.x(i, 0) = r * std::cos(th);
    c.x(i, 1) = r * std::sin(th);
    c.tangent(i, 0) = -std::sin(th);
    c.tangent(i, 1) = std::cos(th);
    c.normal(i, 0) = std::cos(th);
    c.normal(i, 1) = std::sin(th);
    c.kappa[i] = kInvSqrt2;
  }
  c.closure_defect = 0;
  c.conserved_spread = 0;
  return c;
}

std::variant<ProfileCurve, RoundShrinkerData> round_profile(int k, int nodes) {
  if (k < 1) throw NoSuchCurve("round shrinker needs k >= 1");
  if (k == 1) return round_profile_curve(nodes);
  return round_shrinker_data(k);
}

ProfileCurve solve_abresch_langer(const ProfileSpec& spec) {
  const int p = spec.p, q = spec.q;
  if (p < 1 || q < 1) throw NoSuchCurve("AL indices must be positive");
  if (std::gcd(p, q) != 1) throw NoSuchCurve("AL indices must be coprime");
  const double ratio = static_cast<double>(p) / q;
  if (!(ratio > 0.5 && ratio < kInvSqrt2))
    throw NoSuchCurve("rotation number p/q outside (1/2, 1/sqrt(2))");

  const double target = M_PI * ratio;  // per half-oscillation turning
  const double h = spec.step;

  // Delta_alpha decreases from pi/sqrt(2) (circle limit) as kappa_max grows.
  double lo = kInvSqrt2 * (1.0 + 1e-7);
  double hi = 1.2;
  double f_hi = turning_angle(hi, h) - target;
  int grow = 0;
  while (f_hi > 0.0) {
    hi *= 1.6;
    if (++grow > 40) throw NoConvergence("failed to bracket kappa_max");
    f_hi = turning_angle(hi, h) - target;
  }
  for (int it = 0; it < 200 && (hi - lo) > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (turning_angle(mid, h) - target > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  const double kappa_max = 0.5 * (lo + hi);

  // Full closed curve: 2q half-oscillations, total turning 2 pi p. The final
  // pass lands exactly on the uniform-arclength nodes, so no resampling
  // interpolation is needed downstream.
  auto [sigma_half, end_state] = integrate_half_oscillation(kappa_max, h);
  (void)end_state;
  const double L = 2.0 * q * sigma_half;
  const int M = spec.nodes;
  const double dsig = L / M;
  const int per_node = std::max(1, static_cast<int>(std::ceil(dsig / h)));
  const double hf = dsig / per_node;

  ProfileCurve c;
  c.kind = ProfileSpec::Kind::AbreschLanger;
  c.rotation_index = p;
  c.symmetry = q;
  c.length = L;
  c.tolerance = spec.tolerance;
  c.x.resize(M, 2);
  c.tangent.resize(M, 2);
  c.normal.resize(M, 2);
  c.kappa.resize(M);

  ShootState s = initial_state(kappa_max);
  double cons_min = std::numeric_limits<double>::infinity();
  double cons_max = -cons_min;
  for (int i = 0; i < M; ++i) {
    c.x(i, 0) = s.x1;
    c.x(i, 1) = s.x2;
    c.tangent(i, 0) = std::cos(s.alpha);
    c.tangent(i, 1) = std::sin(s.alpha);
    c.normal(i, 0) = std::sin(s.alpha);
    c.normal(i, 1) = -std::cos(s.alpha);
    c.kappa[i] = s.kappa;
    const double cons =
        s.kappa * std::exp(-(s.x1 * s.x1 + s.x2 * s.x2) / 4.0);
    cons_min = std::min(cons_min, cons);
    cons_max = std::max(cons_max, cons);
    for (int j = 0; j < per_node; ++j) s = rk4_step(s, hf);
  }
  const ShootState s0 = initial_state(kappa_max);
  const double pos_gap = std::hypot(s.x1 - s0.x1, s.x2 - s0.x2);
  const double ang_gap = std::abs(s.alpha - s0.alpha - 2.0 * M_PI * p);
  const double kap_gap = std::abs(s.kappa - s0.kappa);
  c.closure_defect = pos_gap + ang_gap + kap_gap;
  c.conserved_spread = cons_max - cons_min;

  const double resid = shrinker_residual(c);
  if (resid > spec.tolerance)
    throw NoConvergence("shrinker residual " + std::to_string(resid) +
                        " above tolerance");
  return c;
}

ProfileCurve make_profile(const ProfileSpec& spec) {
  if (spec.kind == ProfileSpec::Kind::Round) {
    if (spec.k != 1)
      throw NoSuchCurve("grid profiles require k = 1 (use round_shrinker_data)");
    return round_profile_curve(spec.nodes);
  }
  return solve_abresch_langer(spec);
}

double shrinker_residual(const ProfileCurve& curve) {
  const auto xn = (curve.x.col(0) * curve.normal.col(0) +
                   curve.x.col(1) * curve.normal.col(1))
                      .eval();
  return (curve.kappa - 0.5 * xn).abs().maxCoeff();
}

Eigen::ArrayXd ProfileCurve::x_dot_t() const {
  return x.col(0) * tangent.col(0) + x.col(1) * tangent.col(1);
}

double ProfileCurve::diameter() const {
  const int M = nodes();
  double d2 = 0;
  for (int i = 0; i < M; ++i)
    for (int j = i + 1; j < M; ++j) {
      const double dx = x(i, 0) - x(j, 0);
      const double dy = x(i, 1) - x(j, 1);
      d2 = std::max(d2, dx * dx + dy * dy);
    }
  return std::sqrt(d2);
}

double jacobi_identity_residual(const ProfileCurve& curve) {
  const int M = curve.nodes();
  const double h = curve.spacing();
  Grid2D k(M, 1);
  k.col(0) = curve.kappa;
  const Eigen::ArrayXd kd = d_periodic(k, 1, h).col(0);
  const Eigen::ArrayXd kdd = d_periodic(k, 2, h).col(0);
  const Eigen::ArrayXd xt = curve.x_dot_t();
  const Eigen::ArrayXd res =
      kdd - 0.5 * xt * kd + curve.kappa.pow(3) - 0.5 * curve.kappa;
  return res.abs().maxCoeff();
}

double compute_B2(const ProfileCurve& curve) {
  if ((curve.kappa <= 0).any())
    throw BadField("compute_B2 requires kappa > 0 everywhere");
  const Eigen::ArrayXd w =
      (-(curve.x.col(0).square() + curve.x.col(1).square()) / 4.0).exp();
  const double num = (curve.kappa.pow(4) * w).sum();
  const double den = (curve.kappa.pow(2) * w).sum();
  return num / den;  // (4 pi)^-1 and the uniform spacing cancel in the ratio
}

namespace {
constexpr int kCurveFormatVersion = 1;

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}
}  // namespace

void write_curve(std::ostream& os, const ProfileCurve& curve) {
  os << "shrinkerlab-curve v" << kCurveFormatVersion << "\n";
  os << "kind "
     << (curve.kind == ProfileSpec::Kind::Round ? "round" : "abresch-langer")
     << "\n";
  os << "p " << curve.rotation_index << "\n";
  os << "q " << curve.symmetry << "\n";
  os << "length " << fmt17(curve.length) << "\n";
  os << "nodes " << curve.nodes() << "\n";
  const double dsig = curve.spacing();
  for (int i = 0; i < curve.nodes(); ++i) {
    os << fmt17(i * dsig) << " " << fmt17(curve.x(i, 0)) << " "
       << fmt17(curve.x(i, 1)) << " " << fmt17(curve.kappa[i]) << "\n";
  }
}

void write_curve(const std::string& path, const ProfileCurve& curve) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open " + path + " for writing");
  write_curve(os, curve);
}

ProfileCurve read_curve(std::istream& is) {
  std::string header;
  std::getline(is, header);
  if (header.rfind("shrinkerlab-curve v", 0) != 0)
    throw IoError("not a shrinkerlab curve file");
  ProfileCurve c;
  std::string key, val;
  int nodes = 0;
  for (int line = 0; line < 5; ++line) {
    is >> key;
    if (key == "kind") {
      is >> val;
      if (val == "round")
        c.kind = ProfileSpec::Kind::Round;
      else if (val == "abresch-langer")
        c.kind = ProfileSpec::Kind::AbreschLanger;
      else
        throw IoError("unknown curve kind: " + val);
    } else if (key == "p") {
      is >> c.rotation_index;
    } else if (key == "q") {
      is >> c.symmetry;
    } else if (key == "length") {
      is >> c.length;
    } else if (key == "nodes") {
      is >> nodes;
    } else {
      throw IoError("unexpected curve header key: " + key);
    }
  }
  if (nodes < 16) throw IoError("curve file has too few nodes");
  c.x.resize(nodes, 2);
  c.kappa.resize(nodes);
  for (int i = 0; i < nodes; ++i) {
    double sig, x1, x2, k;
    if (!(is >> sig >> x1 >> x2 >> k)) throw IoError("truncated curve file");
    c.x(i, 0) = x1;
    c.x(i, 1) = x2;
    c.kappa[i] = k;
  }
  // frames from spectral differentiation of the periodic position samples
  const Eigen::ArrayXd dx1 = d_spectral_periodic(c.x.col(0), c.length);
  const Eigen::ArrayXd dx2 = d_spectral_periodic(c.x.col(1), c.length);
  c.tangent.resize(nodes, 2);
  c.normal.resize(nodes, 2);
  for (int i = 0; i < nodes; ++i) {
    const double n = std::hypot(dx1[i], dx2[i]);
    c.tangent(i, 0) = dx1[i] / n;
    c.tangent(i, 1) = dx2[i] / n;
    c.normal(i, 0) = c.tangent(i, 1);
    c.normal(i, 1) = -c.tangent(i, 0);
  }
  return c;
}

ProfileCurve read_curve(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open " + path);
  return read_curve(is);
}

}  // namespace shrinkerlab
