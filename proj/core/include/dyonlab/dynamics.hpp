#ifndef DYONLAB_DYNAMICS_HPP
#define DYONLAB_DYNAMICS_HPP

#include <string>
#include <vector>

#include "dyonlab/model.hpp"
#include "dyonlab/vec3.hpp"

namespace dyonlab {

struct Derivatives {
  Vec3 xdot;
  Vec3 pidot;
};

// Twisted-bracket equations of motion in gauge-free form:
//   xdot = pi / (mu G),
//   pidot = -grad U_eff + pi^2 G'/(2 mu G^2) rhat + B x xdot,
// where B is the summed monopole field. The B x xdot ordering reproduces
// the single-center bracket {pi_i, pi_j} = -s eps_ijk x_k / r^3.
Derivatives equations_of_motion(const SystemSpec& system, const PhaseState& state);

enum class Integrator { RK4, ImplicitMidpoint };

struct IntegrationConfig {
  Integrator integrator = Integrator::RK4;
  double h = 1e-3;
  double t_end = 1.0;
  int output_stride = 1;
  double midpoint_tol = 1e-13;
  int midpoint_max_iter = 50;
};

struct TrajectoryRecord {
  std::vector<double> times;
  std::vector<PhaseState> states;
  double step = 0.0;
  Integrator integrator = Integrator::RK4;
  bool aborted = false;
  std::string diagnostic;
};

// Fixed-step integration with a proximity/domain guard. On guard violation
// the partial trajectory is returned with `aborted` set and a diagnostic
// message instead of throwing.
TrajectoryRecord integrate(const SystemSpec& system, const PhaseState& state0,
                           const IntegrationConfig& config);

// Single steps, exposed for time-reversal experiments; h may be negative.
PhaseState step_rk4(const SystemSpec& system, const PhaseState& state, double h);
PhaseState step_implicit_midpoint(const SystemSpec& system, const PhaseState& state, double h,
                                  double tol = 1e-13, int max_iter = 50);

// J = x cross pi + s x/|x|.
Vec3 angular_momentum(const PhaseState& state, double s);

// A = (pi cross J)/mu + alpha x/|x|.
Vec3 runge_lenz(const PhaseState& state, double s, double mu, double alpha);

struct RadialDecomposition {
  double p_r = 0.0;
  double j_sq = 0.0;
};

// p_r = pi.x/|x| and J^2; pi^2 = p_r^2 + (J^2 - s^2)/r^2 holds identically.
RadialDecomposition radial_decomposition(const PhaseState& state, double s);

// d(phi)/dt = |J| / (G r^2) about the J axis. G is the kinetic conformal
// weight; pass mu*G(r) when the mass is not 1.
double azimuthal_rate(const PhaseState& state, double s, double G);

struct PhiR {
  double phi = 0.0;
  double r = 0.0;
  double dr_dphi = 0.0;
};

struct OrbitGeometry {
  Vec3 j;                        // from the initial state
  double cone_angle = 0.0;       // arccos(s/|J|)
  double cone_angle_measured = 0.0;
  double cone_residual_max = 0.0;  // max |J.x - s |x||
  bool degenerate = false;         // |J| == |s|: radial-ray cone
  std::vector<PhiR> r_of_phi;      // unwrapped azimuth in the J-aligned frame
};

OrbitGeometry orbit_geometry(const TrajectoryRecord& trajectory, double s);

// Max over a common phi grid of |r_a(phi) - r_b(phi)| / r_a(phi), after
// monotone-segment cubic Hermite resampling. Throws InfeasibleError when the
// phi ranges do not overlap.
double orbit_shape_compare(const OrbitGeometry& a, const OrbitGeometry& b,
                           int grid_points = 800);

enum class TurningBranch { Perihelion, Aphelion };

// State with p_r = 0, |J| = jmag, J.x = s|x| and H = E (to 1e-10), built by
// locating the radial turning point of E = J^2/(2 mu G r^2) + U(r).
PhaseState build_initial_state(const SystemSpec& system, double energy, double jmag, double s,
                               TurningBranch branch);

struct SectionSpec {
  Vec3 normal{0.0, 0.0, 1.0};
  double offset = 0.0;  // plane: normal.x = offset
  int direction = +1;   // sign of d/dt(normal.x) at the crossing; 0 accepts both
};

struct SectionPoint {
  double t = 0.0;
  PhaseState state;
};

// Section crossings of the integrated flow, refined to 1e-10 in crossing
// time. Returns what was found within t_max (possibly fewer than requested).
std::vector<SectionPoint> poincare_section(const SystemSpec& system, const PhaseState& state0,
                                           const SectionSpec& section, int n_crossings,
                                           const IntegrationConfig& config, double t_max);

struct Point2 {
  double u = 0.0, v = 0.0;
};

struct CurveFit {
  double residual_max = 0.0;
  double diameter = 0.0;
  bool curve_like = false;  // residual_max <= 1e-3 * diameter
};

// Regularity probe: fits a closed curve (Fourier series in the polar angle
// about the centroid) and reports the worst point distance from it.
CurveFit section_curve_fit(const std::vector<Point2>& points);

// (rho, p_rho) projection of section points, the natural plane for
// axially symmetric systems.
std::vector<Point2> section_rho_prho(const std::vector<SectionPoint>& points);

}  // namespace dyonlab

#endif
