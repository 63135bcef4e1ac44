#include "dyonlab/dynamics.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>

#include "dyonlab/error.hpp"

namespace dyonlab {

namespace {

constexpr double kPi = std::numbers::pi;

// Guard used by the integrators: empty result means the state is usable.
std::optional<std::string> state_violation(const SystemSpec& system, const PhaseState& st,
                                           double t) {
  if (!finite(st.x) || !finite(st.pi)) {
    std::ostringstream os;
    os << "non-finite state at t = " << t;
    return os.str();
  }
  const double r = norm(st.x);
  if (system.metric.curvature == Curvature::Hyperboloid && r >= kHyperboloidEdge) {
    std::ostringstream os;
    os << "state left the hyperboloid chart (r = " << r << ") at t = " << t;
    return os.str();
  }
  for (const auto& c : system.centers) {
    if (norm(st.x - c.position) < system.delta_min) {
      std::ostringstream os;
      os << "state within delta_min of a center at t = " << t;
      return os.str();
    }
  }
  return std::nullopt;
}

}  // namespace

Derivatives equations_of_motion(const SystemSpec& system, const PhaseState& state) {
  const double r = norm(state.x);
  const double G = conformal_factor(system.metric, r);
  const double mu = system.mu;

  Derivatives d;
  d.xdot = state.pi / (mu * G);
  d.pidot = -effective_potential_gradient(system, state.x);
  if (!system.metric.is_flat()) {
    const double Gp = conformal_factor_derivative(system.metric, r);
    d.pidot += norm_sq(state.pi) * Gp / (2.0 * mu * G * G * r) * state.x;
  }
  if (!system.centers.empty()) {
    const Vec3 b = magnetic_field_multi(state.x, system.centers, system.delta_min);
    d.pidot += cross(b, d.xdot);
  }
  return d;
}

PhaseState step_rk4(const SystemSpec& system, const PhaseState& state, double h) {
  const Derivatives k1 = equations_of_motion(system, state);
  const PhaseState s2{state.x + 0.5 * h * k1.xdot, state.pi + 0.5 * h * k1.pidot};
  const Derivatives k2 = equations_of_motion(system, s2);
  const PhaseState s3{state.x + 0.5 * h * k2.xdot, state.pi + 0.5 * h * k2.pidot};
  const Derivatives k3 = equations_of_motion(system, s3);
  const PhaseState s4{state.x + h * k3.xdot, state.pi + h * k3.pidot};
  const Derivatives k4 = equations_of_motion(system, s4);
  return {state.x + h / 6.0 * (k1.xdot + 2.0 * k2.xdot + 2.0 * k3.xdot + k4.xdot),
          state.pi + h / 6.0 * (k1.pidot + 2.0 * k2.pidot + 2.0 * k3.pidot + k4.pidot)};
}

PhaseState step_implicit_midpoint(const SystemSpec& system, const PhaseState& state, double h,
                                  double tol, int max_iter) {
  Derivatives f = equations_of_motion(system, state);
  PhaseState mid{state.x + 0.5 * h * f.xdot, state.pi + 0.5 * h * f.pidot};
  double delta = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    f = equations_of_motion(system, mid);
    const PhaseState next{state.x + 0.5 * h * f.xdot, state.pi + 0.5 * h * f.pidot};
    delta = std::max(max_abs(next.x - mid.x), max_abs(next.pi - mid.pi));
    mid = next;
    if (delta <= tol) {
      f = equations_of_motion(system, mid);
      return {state.x + h * f.xdot, state.pi + h * f.pidot};
    }
  }
  std::ostringstream os;
  os << "implicit midpoint fixed point stalled at delta = " << delta << " (tol " << tol << ")";
  throw ConvergenceError(os.str());
}

TrajectoryRecord integrate(const SystemSpec& system, const PhaseState& state0,
                           const IntegrationConfig& config) {
  if (!(config.h > 0.0)) throw DomainError("step size h must be positive");
  if (!(config.t_end > 0.0)) throw DomainError("t_end must be positive");
  system.validate();

  TrajectoryRecord rec;
  rec.step = config.h;
  rec.integrator = config.integrator;
  if (auto why = state_violation(system, state0, 0.0)) {
    throw DomainError("initial state invalid: " + *why);
  }

  const long n_steps = std::lround(config.t_end / config.h);
  const int stride = std::max(1, config.output_stride);
  PhaseState st = state0;
  rec.times.push_back(0.0);
  rec.states.push_back(st);
  for (long k = 1; k <= n_steps; ++k) {
    PhaseState next;
    try {
      next = config.integrator == Integrator::RK4
                 ? step_rk4(system, st, config.h)
                 : step_implicit_midpoint(system, st, config.h, config.midpoint_tol,
                                          config.midpoint_max_iter);
    } catch (const Error& e) {
      rec.aborted = true;
      rec.diagnostic = e.what();
      return rec;
    }
    const double t = k * config.h;
    if (auto why = state_violation(system, next, t)) {
      rec.aborted = true;
      rec.diagnostic = *why;
      return rec;
    }
    st = next;
    if (k % stride == 0 || k == n_steps) {
      rec.times.push_back(t);
      rec.states.push_back(st);
    }
  }
  return rec;
}

Vec3 angular_momentum(const PhaseState& state, double s) {
  const double r = norm(state.x);
  if (!(r > 0.0)) throw SingularityError("angular momentum undefined at the origin");
  return cross(state.x, state.pi) + s / r * state.x;
}

Vec3 runge_lenz(const PhaseState& state, double s, double mu, double alpha) {
  const double r = norm(state.x);
  if (!(r > 0.0)) throw SingularityError("Runge-Lenz vector undefined at the origin");
  const Vec3 j = angular_momentum(state, s);
  return cross(state.pi, j) / mu + alpha / r * state.x;
}

RadialDecomposition radial_decomposition(const PhaseState& state, double s) {
  const double r = norm(state.x);
  if (!(r > 0.0)) throw SingularityError("radial decomposition undefined at the origin");
  RadialDecomposition d;
  d.p_r = dot(state.pi, state.x) / r;
  d.j_sq = norm_sq(angular_momentum(state, s));
  return d;
}

double azimuthal_rate(const PhaseState& state, double s, double G) {
  const Vec3 j = angular_momentum(state, s);
  const double jmag = norm(j);
  const double r = norm(state.x);
  // Off-axis requirement: the state may not sit on the J axis.
  const double rho_sq = norm_sq(cross(j / jmag, state.x));
  if (rho_sq <= 0.0) throw SingularityError("azimuthal rate undefined on the J axis");
  return jmag / (G * r * r);
}

OrbitGeometry orbit_geometry(const TrajectoryRecord& trajectory, double s) {
  if (trajectory.states.empty()) throw DomainError("empty trajectory");
  OrbitGeometry geo;
  geo.j = angular_momentum(trajectory.states.front(), s);
  const double jmag = norm(geo.j);
  if (!(jmag > 0.0)) throw SingularityError("|J| = 0: no cone axis");
  const double c = std::clamp(s / jmag, -1.0, 1.0);
  geo.cone_angle = std::acos(c);
  geo.degenerate = std::abs(jmag - std::abs(s)) <= 1e-12;

  const Vec3 e3 = geo.j / jmag;
  Vec3 e1 = trajectory.states.front().x - dot(trajectory.states.front().x, e3) * e3;
  if (norm(e1) < 1e-14) {
    // Initial point on the axis: any transverse direction serves.
    e1 = std::abs(e3.x) < 0.9 ? cross(e3, Vec3{1, 0, 0}) : cross(e3, Vec3{0, 1, 0});
  }
  e1 = normalized(e1);
  const Vec3 e2 = cross(e3, e1);

  double cos_sum = 0.0;
  double phi_prev_raw = 0.0, phi_acc = 0.0;
  bool first = true;
  geo.r_of_phi.reserve(trajectory.states.size());
  for (const auto& st : trajectory.states) {
    const double r = norm(st.x);
    geo.cone_residual_max =
        std::max(geo.cone_residual_max, std::abs(dot(geo.j, st.x) - s * r));
    cos_sum += dot(st.x, e3) / r;

    if (geo.degenerate) continue;
    const double u = dot(st.x, e1), v = dot(st.x, e2);
    const double raw = std::atan2(v, u);
    if (first) {
      phi_acc = raw;
      first = false;
    } else {
      double d = raw - phi_prev_raw;
      if (d > kPi) d -= 2.0 * kPi;
      if (d < -kPi) d += 2.0 * kPi;
      phi_acc += d;
    }
    phi_prev_raw = raw;

    const double ell3 = dot(cross(st.x, st.pi), e3);
    const double rho_sq = u * u + v * v;
    const double p_r = dot(st.pi, st.x) / r;
    PhiR pr;
    pr.phi = phi_acc;
    pr.r = r;
    pr.dr_dphi = ell3 != 0.0 ? p_r * rho_sq / ell3 : 0.0;
    geo.r_of_phi.push_back(pr);
  }
  geo.cone_angle_measured =
      std::acos(std::clamp(cos_sum / static_cast<double>(trajectory.states.size()), -1.0, 1.0));
  return geo;
}

namespace {

struct MonotoneSegment {
  std::size_t begin = 0, end = 0;  // inclusive indices into r_of_phi
  double lo = 0.0, hi = 0.0;       // phi range (sorted)
  bool increasing = true;
};

std::vector<MonotoneSegment> monotone_segments(const std::vector<PhiR>& path) {
  std::vector<MonotoneSegment> segs;
  if (path.size() < 2) return segs;
  std::size_t start = 0;
  bool inc = path[1].phi >= path[0].phi;
  for (std::size_t i = 1; i < path.size(); ++i) {
    const bool step_inc = path[i].phi >= path[i - 1].phi;
    if (step_inc != inc) {
      segs.push_back({start, i - 1, std::min(path[start].phi, path[i - 1].phi),
                      std::max(path[start].phi, path[i - 1].phi), inc});
      start = i - 1;
      inc = step_inc;
    }
  }
  segs.push_back({start, path.size() - 1,
                  std::min(path[start].phi, path.back().phi),
                  std::max(path[start].phi, path.back().phi), inc});
  return segs;
}

double hermite_eval(const PhiR& a, const PhiR& b, double phi) {
  const double w = b.phi - a.phi;
  if (w == 0.0) return a.r;
  const double t = (phi - a.phi) / w;
  const double t2 = t * t, t3 = t2 * t;
  return (2.0 * t3 - 3.0 * t2 + 1.0) * a.r + (t3 - 2.0 * t2 + t) * w * a.dr_dphi +
         (-2.0 * t3 + 3.0 * t2) * b.r + (t3 - t2) * w * b.dr_dphi;
}

double interpolate_r(const std::vector<PhiR>& path, const std::vector<MonotoneSegment>& segs,
                     double phi) {
  for (const auto& seg : segs) {
    if (phi < seg.lo || phi > seg.hi) continue;
    std::size_t lo = seg.begin, hi = seg.end;
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      const bool left = seg.increasing ? path[mid].phi > phi : path[mid].phi < phi;
      (left ? hi : lo) = mid;
    }
    return hermite_eval(path[lo], path[hi], phi);
  }
  throw InfeasibleError("phi outside every monotone segment");
}

}  // namespace

double orbit_shape_compare(const OrbitGeometry& a, const OrbitGeometry& b, int grid_points) {
  if (a.r_of_phi.size() < 2 || b.r_of_phi.size() < 2) {
    throw DomainError("orbit_shape_compare needs sampled r(phi) paths");
  }
  const auto range = [](const std::vector<PhiR>& p) {
    double lo = p.front().phi, hi = p.front().phi;
    for (const auto& q : p) {
      lo = std::min(lo, q.phi);
      hi = std::max(hi, q.phi);
    }
    return std::pair{lo, hi};
  };
  const auto [alo, ahi] = range(a.r_of_phi);
  const auto [blo, bhi] = range(b.r_of_phi);
  const double lo = std::max(alo, blo), hi = std::min(ahi, bhi);
  if (!(hi > lo)) throw InfeasibleError("phi ranges of the two orbits do not overlap");

  const auto seg_a = monotone_segments(a.r_of_phi);
  const auto seg_b = monotone_segments(b.r_of_phi);
  double worst = 0.0;
  for (int i = 0; i <= grid_points; ++i) {
    // clamp against one-ulp overshoot at the endpoints
    const double phi = std::clamp(lo + (hi - lo) * i / grid_points, lo, hi);
    const double ra = interpolate_r(a.r_of_phi, seg_a, phi);
    const double rb = interpolate_r(b.r_of_phi, seg_b, phi);
    worst = std::max(worst, std::abs(ra - rb) / ra);
  }
  return worst;
}

namespace {

// Radial energy profile W(r) = J^2/(2 mu G r^2) + U_central(r), the
// replacement term being absorbed into J^2.
double radial_energy_profile(const SystemSpec& system, double jmag, double r) {
  const double G = conformal_factor(system.metric, r);
  const Vec3 x{r, 0.0, 0.0};
  double u = potential_value(system.potential, system.metric, x, system.mu);
  if (!system.centers.empty()) {
    u += scalar_potential_multi(x, system.centers, system.metric, ChargeWeight::Electric,
                                system.delta_min);
  }
  return jmag * jmag / (2.0 * system.mu * G * r * r) + u;
}

}  // namespace

PhaseState build_initial_state(const SystemSpec& system, double energy, double jmag, double s,
                               TurningBranch branch) {
  system.validate();
  if (jmag < std::abs(s)) {
    std::ostringstream os;
    os << "|J| = " << jmag << " violates the bound |J| >= |s| = " << std::abs(s);
    throw InfeasibleError(os.str());
  }
  if (!system.potential.is_central()) {
    throw InfeasibleError("turning-point construction requires a central potential");
  }
  if (std::abs(s - system.total_monopole_number()) > 1e-12) {
    throw DomainError("s does not match the system's total monopole number");
  }
  if (s != 0.0 && system.replacement != ReplacementMode::OneCenter) {
    throw DomainError("s != 0 requires the one-center replacement mode");
  }
  for (const auto& c : system.centers) {
    if (norm(c.position) != 0.0) {
      throw InfeasibleError("turning-point construction requires centers at the origin");
    }
  }

  const double r_lo = std::max(system.delta_min, 1e-8);
  const double r_hi =
      system.metric.curvature == Curvature::Hyperboloid ? 1.0 - 1e-9 : 1e6;
  const auto W = [&](double r) { return radial_energy_profile(system, jmag, r); };

  // Log-grid scan for sign changes of W - E and for the global minimum.
  const int n_scan = 4000;
  const double lr_lo = std::log(r_lo), lr_hi = std::log(r_hi);
  std::vector<double> roots;
  double w_prev = W(r_lo), r_prev = r_lo;
  double r_min_loc = r_lo, w_min = w_prev;
  for (int i = 1; i <= n_scan; ++i) {
    const double r = std::exp(lr_lo + (lr_hi - lr_lo) * i / n_scan);
    const double w = W(r);
    if (w < w_min) {
      w_min = w;
      r_min_loc = r;
    }
    if ((w_prev - energy) * (w - energy) < 0.0) {
      double a = r_prev, b = r;
      double fa = w_prev - energy;
      for (int it = 0; it < 200; ++it) {
        const double m = 0.5 * (a + b);
        const double fm = W(m) - energy;
        if (fm == 0.0) {
          a = b = m;
          break;
        }
        if ((fa < 0.0) == (fm < 0.0)) {
          a = m;
          fa = fm;
        } else {
          b = m;
        }
        if (b - a <= 1e-16 * b) break;
      }
      roots.push_back(0.5 * (a + b));
    }
    w_prev = w;
    r_prev = r;
  }

  double r_turn;
  if (!roots.empty()) {
    r_turn = branch == TurningBranch::Perihelion ? roots.front() : roots.back();
  } else {
    // Possible circular orbit: E sits at the minimum of W.
    double a = std::max(r_lo, r_min_loc * 0.5), b = std::min(r_hi, r_min_loc * 2.0);
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = W(x1), f2 = W(x2);
    for (int it = 0; it < 200 && (b - a) > 1e-15 * b; ++it) {
      if (f1 < f2) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - gr * (b - a);
        f1 = W(x1);
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + gr * (b - a);
        f2 = W(x2);
      }
    }
    r_min_loc = 0.5 * (a + b);
    w_min = W(r_min_loc);
    const double scale = std::max({1.0, std::abs(energy), std::abs(w_min)});
    if (std::abs(w_min - energy) > 1e-11 * scale) {
      std::ostringstream os;
      os << "no radial turning point for E = " << energy << ", |J| = " << jmag
         << " (min of the radial profile is " << w_min << ")";
      throw InfeasibleError(os.str());
    }
    r_turn = r_min_loc;
  }

  PhaseState state;
  if (jmag == 0.0) {
    state.x = {r_turn, 0.0, 0.0};
    state.pi = {0.0, 0.0, 0.0};
    return state;
  }
  const double ct = std::clamp(s / jmag, -1.0, 1.0);
  const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
  state.x = {r_turn * st, 0.0, r_turn * ct};
  const double p_t = std::sqrt(std::max(0.0, jmag * jmag - s * s)) / r_turn;
  state.pi = {0.0, p_t, 0.0};
  return state;
}

std::vector<SectionPoint> poincare_section(const SystemSpec& system, const PhaseState& state0,
                                           const SectionSpec& section, int n_crossings,
                                           const IntegrationConfig& config, double t_max) {
  const Vec3 n = normalized(section.normal);
  const double c = section.offset;
  const auto f_of = [&](const PhaseState& st) { return dot(n, st.x) - c; };

  std::vector<SectionPoint> out;
  PhaseState st = state0;
  double t = 0.0;
  double f = f_of(st);
  const long max_steps = static_cast<long>(t_max / config.h) + 1;
  for (long k = 0; k < max_steps && static_cast<int>(out.size()) < n_crossings; ++k) {
    PhaseState next;
    try {
      next = config.integrator == Integrator::RK4
                 ? step_rk4(system, st, config.h)
                 : step_implicit_midpoint(system, st, config.h, config.midpoint_tol,
                                          config.midpoint_max_iter);
    } catch (const Error&) {
      break;  // partial result
    }
    if (state_violation(system, next, t + config.h)) break;
    const double f_next = f_of(next);
    const bool sign_change = (f < 0.0 && f_next >= 0.0) || (f > 0.0 && f_next <= 0.0);
    const bool wanted = section.direction == 0 ||
                        (section.direction > 0 ? f < f_next : f > f_next);
    if (sign_change && wanted && f != 0.0) {
      // Newton refinement of the crossing time within [0, h], integrating a
      // fresh partial step from `st` each iterate.
      double lo = 0.0, hi = config.h, f_lo = f;
      double tau = config.h * f / (f - f_next);
      PhaseState at{};
      for (int it = 0; it < 60; ++it) {
        at = step_rk4(system, st, tau);
        const double g = f_of(at);
        if (g == 0.0) break;  // landed exactly on the section
        if ((g < 0.0) == (f_lo < 0.0)) {
          lo = tau;
          f_lo = g;
        } else {
          hi = tau;
        }
        const double gp = dot(n, equations_of_motion(system, at).xdot);
        double tau_next = gp != 0.0 ? tau - g / gp : 0.5 * (lo + hi);
        if (!(tau_next > lo && tau_next < hi)) tau_next = 0.5 * (lo + hi);
        if (std::abs(tau_next - tau) < 1e-12) {
          tau = tau_next;
          break;
        }
        tau = tau_next;
      }
      at = step_rk4(system, st, tau);
      out.push_back({t + tau, at});
    }
    st = next;
    t += config.h;
    f = f_next;
  }
  return out;
}

CurveFit section_curve_fit(const std::vector<Point2>& points) {
  CurveFit fit;
  const int n = static_cast<int>(points.size());
  if (n < 2) return fit;

  // Sections of near-separable flows are often extremely elongated; rescale
  // each axis to its range so neighbour searches see an isotropic cloud.
  double u_lo = points[0].u, u_hi = points[0].u, v_lo = points[0].v, v_hi = points[0].v;
  for (const auto& p : points) {
    u_lo = std::min(u_lo, p.u);
    u_hi = std::max(u_hi, p.u);
    v_lo = std::min(v_lo, p.v);
    v_hi = std::max(v_hi, p.v);
  }
  const double su = u_hi > u_lo ? 1.0 / (u_hi - u_lo) : 0.0;
  const double sv = v_hi > v_lo ? 1.0 / (v_hi - v_lo) : 0.0;
  std::vector<Point2> pts(points.size());
  for (int i = 0; i < n; ++i) {
    pts[i] = {(points[i].u - u_lo) * su, (points[i].v - v_lo) * sv};
  }

  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double du = pts[i].u - pts[j].u, dv = pts[i].v - pts[j].v;
      fit.diameter = std::max(fit.diameter, std::hypot(du, dv));
    }
  }
  if (n < 16) return fit;

  // Local curve fit: for each point, an algebraic circle (falling back to a
  // total-least-squares line when degenerate) through its nearest neighbours
  // approximates the invariant curve; the distance to it is the point's
  // defect. Points filling an area have defects on the neighbour-spacing
  // scale instead. The 95th percentile stands in for the max to shed
  // isolated fold artifacts.
  constexpr int k_neighbors = 5;
  std::vector<double> defect;
  defect.reserve(n);
  std::vector<std::pair<double, int>> dist(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double du = pts[i].u - pts[j].u, dv = pts[i].v - pts[j].v;
      dist[j] = {j == i ? std::numeric_limits<double>::infinity() : du * du + dv * dv,
                 j};
    }
    std::partial_sort(dist.begin(), dist.begin() + k_neighbors + 1, dist.end());
    double mu = 0.0, mv = 0.0;
    int used = 0;
    for (int k = 0; k < k_neighbors; ++k) {
      if (!std::isfinite(dist[k].first)) break;
      if (dist[k].first < 1e-24) continue;  // duplicate crossing of a periodic orbit
      mu += pts[dist[k].second].u;
      mv += pts[dist[k].second].v;
      ++used;
    }
    if (used < 2) {
      defect.push_back(0.0);
      continue;
    }
    mu /= used;
    mv /= used;
    double suu = 0.0, suv = 0.0, svv = 0.0;
    double suz = 0.0, svz = 0.0;  // z = u^2 + v^2 moments for the circle fit
    double sz = 0.0;
    for (int k = 0; k < k_neighbors; ++k) {
      if (!std::isfinite(dist[k].first) || dist[k].first < 1e-24) continue;
      const double du = pts[dist[k].second].u - mu, dv = pts[dist[k].second].v - mv;
      const double z = du * du + dv * dv;
      suu += du * du;
      suv += du * dv;
      svv += dv * dv;
      suz += du * z;
      svz += dv * z;
      sz += z;
    }

    // Kasa circle fit in centred coordinates: 2 (suu suv; suv svv) c = (suz; svz)
    const double det2 = suu * svv - suv * suv;
    double d = -1.0;
    if (std::abs(det2) > 1e-9 * (suu + svv) * (suu + svv)) {
      const double cu = 0.5 * (svv * suz - suv * svz) / det2;
      const double cv = 0.5 * (suu * svz - suv * suz) / det2;
      // mean-centred data: R^2 = |c|^2 + <z>
      const double radius = std::sqrt(std::max(0.0, cu * cu + cv * cv + sz / used));
      d = std::abs(std::hypot(pts[i].u - mu - cu, pts[i].v - mv - cv) - radius);
    }
    if (d < 0.0) {
      // smallest-eigenvalue direction of the scatter matrix is the line normal
      const double tr = suu + svv, det = det2;
      const double lam = 0.5 * tr - std::sqrt(std::max(0.0, 0.25 * tr * tr - det));
      double nu = suv, nv = lam - suu;
      if (std::hypot(nu, nv) < 1e-30) {
        nu = lam - svv;
        nv = suv;
      }
      const double nm = std::hypot(nu, nv);
      d = nm < 1e-30 ? 0.0
                     : std::abs((pts[i].u - mu) * nu / nm + (pts[i].v - mv) * nv / nm);
    }
    defect.push_back(d);
  }
  std::sort(defect.begin(), defect.end());
  fit.residual_max = defect[static_cast<std::size_t>(0.95 * (defect.size() - 1))];
  fit.curve_like = fit.residual_max <= 1e-3 * fit.diameter;
  return fit;
}

std::vector<Point2> section_rho_prho(const std::vector<SectionPoint>& points) {
  std::vector<Point2> out;
  out.reserve(points.size());
  for (const auto& p : points) {
    const double rho = std::hypot(p.state.x.x, p.state.x.y);
    const double prho =
        rho > 0.0 ? (p.state.x.x * p.state.pi.x + p.state.x.y * p.state.pi.y) / rho : 0.0;
    out.push_back({rho, prho});
  }
  return out;
}

}  // namespace dyonlab
