#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>
#include <variant>

namespace shrinkerlab {

// Conventions for closed shrinker profiles in the plane:
//   unit tangent T = dx/ds, outward unit normal N = (T_y, -T_x), frame ODEs
//   dT/ds = -kappa N, dN/ds = kappa T with kappa > 0, and the profile solves
//   kappa = <x, N>/2.  The mean curvature vector is H = kappa N (outward) and
//   the second fundamental form satisfies A_ss = -kappa N.
// Along solutions, d/ds log kappa = <x,T>/2, so kappa * exp(-|x|^2/4) is the
// first integral used to monitor integration quality.

struct ProfileSpec {
  enum class Kind { Round, AbreschLanger };
  Kind kind = Kind::Round;
  int k = 1;          // sphere dimension (Round)
  int p = 0, q = 0;   // rotation index / curvature oscillation count (AL)
  double tolerance = 1e-9;  // dimensionless residual target
  int nodes = 256;
  double step = 2e-4;  // shooting integrator arclength step
};

struct ProfileCurve {
  ProfileSpec::Kind kind = ProfileSpec::Kind::Round;
  int rotation_index = 1;
  int symmetry = 0;  // q for AL curves, 0 marks full rotational symmetry
  double length = 0;
  Eigen::ArrayX2d x;        // positions at uniform arclength spacing
  Eigen::ArrayX2d tangent;  // unit tangent per node
  Eigen::ArrayX2d normal;   // outward unit normal per node (kappa > 0)
  Eigen::ArrayXd kappa;     // geodesic curvature per node
  double tolerance = 1e-9;

  // solver diagnostics
  double closure_defect = 0;    // |x(L) - x(0)| + frame gap of the final pass
  double conserved_spread = 0;  // max-min of kappa*exp(-|x|^2/4) over nodes

  int nodes() const { return static_cast<int>(x.rows()); }
  double spacing() const { return length / nodes(); }
  double diameter() const;
  Eigen::ArrayXd x_dot_t() const;  // <x,T> per node
};

// Closed-form data for the round factor S^k_{sqrt(2k)}; for k = 1 the grid
// modules use the sampled circle instead.
struct RoundShrinkerData {
  int k;
  double radius;   // sqrt(2k)
  double mean_h;   // |H| = sqrt(k/2)
  double a_sq;     // |A|^2 = 1/2
};

RoundShrinkerData round_shrinker_data(int k);
ProfileCurve round_profile_curve(int nodes);

// k = 1 yields the sampled circle, k >= 2 the symbolic record.
std::variant<ProfileCurve, RoundShrinkerData> round_profile(int k, int nodes = 256);

// Closed Abresch-Langer profile by bisection shooting on the maximal
// curvature: the turning angle of one half-oscillation of kappa is monotone
// in kappa_max, and closure requires it to equal pi*p/q.
ProfileCurve solve_abresch_langer(const ProfileSpec& spec);

ProfileCurve make_profile(const ProfileSpec& spec);

// max_i |kappa_i - <x_i, N_i>/2|
double shrinker_residual(const ProfileCurve& curve);

// max_i |kappa_dd - (<x,T>/2) kappa_d + kappa^3 - kappa/2| with fourth-order
// periodic stencils; zero to discretization order on shrinker profiles.
double jacobi_identity_residual(const ProfileCurve& curve);

// B2 = int kappa^4 rho_2 / int kappa^2 rho_2 over the profile, with
// rho_2 = (4 pi)^-1 exp(-|x|^2/4) restricted to the curve.
double compute_B2(const ProfileCurve& curve);

// Half-oscillation turning angle for a given kappa_max (exposed for the
// convergence studies; `step` is the integrator arclength step).
double half_oscillation_angle(double kappa_max, double step);

// versioned plain-text curve records: header (kind, p, q, length, node
// count), then one line per node with sigma, x1, x2, kappa at 17 significant
// digits; frames are reconstructed spectrally on read.
void write_curve(const std::string& path, const ProfileCurve& curve);
void write_curve(std::ostream& os, const ProfileCurve& curve);
ProfileCurve read_curve(const std::string& path);
ProfileCurve read_curve(std::istream& is);

}  // namespace shrinkerlab
