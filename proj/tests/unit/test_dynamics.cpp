#include <cmath>
#include <numbers>
#include <random>

#include <doctest.h>

#include "dyonlab/dynamics.hpp"
#include "dyonlab/error.hpp"

using namespace dyonlab;

namespace {

constexpr double kPi = std::numbers::pi;

SystemSpec flat_micz(double s, double alpha) {
  SystemSpec sys;
  sys.metric = MetricSpec::flat();
  sys.centers = {DyonCenter{{0, 0, 0}, s, 0.0}};
  sys.potential = PotentialSpec::coulomb(alpha);
  sys.replacement = s != 0.0 ? ReplacementMode::OneCenter : ReplacementMode::None;
  return sys;
}

SystemSpec free_particle() {
  SystemSpec sys;
  sys.metric = MetricSpec::flat();
  sys.potential = PotentialSpec::zero();
  return sys;
}

// six-dimensional finite-difference gradient of H
void fd_grad_h(const SystemSpec& sys, const PhaseState& st, Vec3& gx, Vec3& gp) {
  const double h = 1e-6;
  for (int i = 0; i < 3; ++i) {
    PhaseState sp = st, sm = st;
    sp.x[i] += h;
    sm.x[i] -= h;
    gx[i] = (evaluate_hamiltonian(sys, sp) - evaluate_hamiltonian(sys, sm)) / (2.0 * h);
    sp = st;
    sm = st;
    sp.pi[i] += h;
    sm.pi[i] -= h;
    gp[i] = (evaluate_hamiltonian(sys, sp) - evaluate_hamiltonian(sys, sm)) / (2.0 * h);
  }
}

// time of the first interior minimum of r(t), parabola-refined
double first_radial_period(const TrajectoryRecord& traj) {
  for (std::size_t i = 2; i + 1 < traj.states.size(); ++i) {
    const double r0 = norm(traj.states[i - 1].x);
    const double r1 = norm(traj.states[i].x);
    const double r2 = norm(traj.states[i + 1].x);
    if (r1 <= r0 && r1 <= r2) {
      const double denom = r0 - 2.0 * r1 + r2;
      const double shift = denom != 0.0 ? 0.5 * (r0 - r2) / denom : 0.0;
      const double dt = traj.times[i] - traj.times[i - 1];
      return traj.times[i] + shift * dt;
    }
  }
  return -1.0;
}

}  // namespace

TEST_SUITE("dynamics") {

TEST_CASE("newtonian limit of the equations of motion") {
  SystemSpec sys;
  sys.metric = MetricSpec::flat();
  sys.potential = PotentialSpec::oscillator(1.3);
  const PhaseState st{{0.7, -0.2, 0.4}, {0.1, 0.5, -0.3}};
  const Derivatives d = equations_of_motion(sys, st);
  CHECK(max_abs(d.xdot - st.pi) == 0.0);
  CHECK(max_abs(d.pidot + 1.69 * st.x) <= 1e-15);
}

TEST_CASE("monopole force reproduces the twisted bracket") {
  SystemSpec sys;
  sys.metric = MetricSpec::flat();
  sys.potential = PotentialSpec::zero();
  const double s = 1.0;
  sys.centers = {DyonCenter{{0, 0, 0}, s, 0.0}};

  std::mt19937_64 rng(37);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int i = 0; i < 30; ++i) {
    const Vec3 x{1.0 + 0.2 * n(rng), n(rng), n(rng)};
    const Vec3 pi{n(rng), n(rng), n(rng)};
    const Derivatives d = equations_of_motion(sys, {x, pi});
    const double r = norm(x);
    const Vec3 bracket = -s / (r * r * r) * cross(d.xdot, x);
    CHECK(max_abs(d.pidot - bracket) <= 1e-13 * std::max(1.0, max_abs(bracket)));
  }
}

TEST_CASE("energy is stationary along the flow (chain rule oracle)") {
  SystemSpec sys = flat_micz(1.0, -1.0);
  std::mt19937_64 rng(41);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int i = 0; i < 25; ++i) {
    const PhaseState st{{1.2 + 0.3 * n(rng), n(rng), n(rng)}, {n(rng), n(rng), n(rng)}};
    const Derivatives d = equations_of_motion(sys, st);

    // analytic grad H, cross-checked against the finite-difference oracle
    const Vec3 gx = effective_potential_gradient(sys, st.x);
    const Vec3 gp = st.pi;  // flat metric, mu = 1
    Vec3 fx, fp;
    fd_grad_h(sys, st, fx, fp);
    CHECK(max_abs(gx - fx) <= 1e-7 * std::max(1.0, max_abs(gx)));
    CHECK(max_abs(gp - fp) <= 1e-7 * std::max(1.0, max_abs(gp)));

    const double hdot = dot(gx, d.xdot) + dot(gp, d.pidot);
    CHECK(std::abs(hdot) <= 1e-10 * std::max(1.0, norm(gx) * norm(d.xdot)));
  }
}

TEST_CASE("free particle moves on a straight line") {
  const SystemSpec sys = free_particle();
  const PhaseState st{{0.3, -0.1, 0.2}, {0.4, 0.8, -0.1}};
  IntegrationConfig cfg;
  cfg.h = 1e-2;
  cfg.t_end = 5.0;
  cfg.output_stride = 100;
  const TrajectoryRecord traj = integrate(sys, st, cfg);
  REQUIRE(!traj.aborted);
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    const Vec3 expected = st.x + traj.times[i] * st.pi;
    CHECK(max_abs(traj.states[i].x - expected) <= 1e-12);
    CHECK(max_abs(traj.states[i].pi - st.pi) <= 1e-15);
  }
}

TEST_CASE("kepler third law") {
  SystemSpec sys = flat_micz(0.0, -1.0);
  // moderately eccentric bound orbit, a = 2
  const PhaseState s0 = build_initial_state(sys, -0.25, 1.3, 0.0, TurningBranch::Perihelion);
  IntegrationConfig cfg;
  cfg.h = 17.77 / 20000.0;
  cfg.t_end = 1.2 * 17.78;
  const TrajectoryRecord traj = integrate(sys, s0, cfg);
  REQUIRE(!traj.aborted);
  const double period = first_radial_period(traj);
  REQUIRE(period > 0.0);
  const double a = 2.0;  // a = -alpha/(2E)
  CHECK(period == doctest::Approx(2.0 * kPi * std::pow(a, 1.5)).epsilon(1e-6));
}

TEST_CASE("micz energy drift at the reference step") {
  SystemSpec sys = flat_micz(1.0, -1.0);
  const double e0 = -0.25, jmag = 1.3;
  const double period = 2.0 * kPi * std::pow(2.0, 1.5);
  const PhaseState s0 = build_initial_state(sys, e0, jmag, 1.0, TurningBranch::Perihelion);

  IntegrationConfig cfg;
  cfg.h = period / 2000.0;
  cfg.t_end = 100.0 * period;
  cfg.output_stride = 50;
  const TrajectoryRecord traj = integrate(sys, s0, cfg);
  REQUIRE(!traj.aborted);
  double drift = 0.0;
  for (const auto& st : traj.states) {
    drift = std::max(drift, std::abs(evaluate_hamiltonian(sys, st) - e0));
  }
  CHECK(drift / std::abs(e0) <= 1e-8);

  SUBCASE("halving the step reduces the drift by at least 12x") {
    IntegrationConfig half = cfg;
    half.h = cfg.h / 2.0;
    half.t_end = 10.0 * period;
    half.output_stride = 100;
    IntegrationConfig full = cfg;
    full.t_end = 10.0 * period;
    full.output_stride = 50;
    double d1 = 0.0, d2 = 0.0;
    for (const auto& st : integrate(sys, s0, full).states) {
      d1 = std::max(d1, std::abs(evaluate_hamiltonian(sys, st) - e0));
    }
    for (const auto& st : integrate(sys, s0, half).states) {
      d2 = std::max(d2, std::abs(evaluate_hamiltonian(sys, st) - e0));
    }
    CHECK(d1 / d2 >= 12.0);
    CHECK(d1 / d2 <= 24.0);
  }
}

TEST_CASE("angular momentum and the cone relation") {
  CHECK(max_abs(angular_momentum({{1, 0, 0}, {0, 1, 0}}, 0.0) - Vec3{0, 0, 1}) == 0.0);
  const Vec3 j = angular_momentum({{1, 0, 0}, {0, 1, 0}}, 1.0);
  CHECK(max_abs(j - Vec3{1, 0, 1}) == 0.0);
  CHECK(dot(j, Vec3{1, 0, 0}) == doctest::Approx(1.0));  // J.xhat = s
  CHECK_THROWS_AS(angular_momentum({{0, 0, 0}, {0, 1, 0}}, 1.0), SingularityError);
}

TEST_CASE("runge-lenz specializations") {
  // circular Kepler orbit: A vanishes
  CHECK(max_abs(runge_lenz({{1, 0, 0}, {0, 1, 0}}, 0.0, 1.0, -1.0)) <= 1e-15);
  // s = 0 reduces to the standard Laplace-Runge-Lenz vector
  const PhaseState st{{1.3, -0.2, 0.5}, {0.1, 0.8, -0.4}};
  const Vec3 a = runge_lenz(st, 0.0, 1.0, -1.0);
  const Vec3 lrl = cross(st.pi, cross(st.x, st.pi)) - st.x / norm(st.x);
  CHECK(max_abs(a - lrl) <= 1e-15);
}

TEST_CASE("conserved quantities along the micz flow") {
  SystemSpec sys = flat_micz(1.0, -1.0);
  const double e0 = -0.25, jmag = 1.3;
  const double period = 2.0 * kPi * std::pow(2.0, 1.5);
  const PhaseState s0 = build_initial_state(sys, e0, jmag, 1.0, TurningBranch::Perihelion);

  IntegrationConfig cfg;
  cfg.h = period / 4000.0;
  cfg.t_end = 20.0 * period;
  cfg.output_stride = 20;
  const TrajectoryRecord traj = integrate(sys, s0, cfg);
  REQUIRE(!traj.aborted);

  const Vec3 j0 = angular_momentum(s0, 1.0);
  const Vec3 a0 = runge_lenz(s0, 1.0, 1.0, -1.0);
  double dj = 0.0, da = 0.0, cone = 0.0, jmin = 1e300;
  for (const auto& st : traj.states) {
    dj = std::max(dj, max_abs(angular_momentum(st, 1.0) - j0));
    da = std::max(da, max_abs(runge_lenz(st, 1.0, 1.0, -1.0) - a0));
    cone = std::max(cone, std::abs(dot(j0, st.x) - norm(st.x)));
    jmin = std::min(jmin, norm(angular_momentum(st, 1.0)));
  }
  CHECK(dj <= 1e-8);
  CHECK(da <= 1e-8);
  CHECK(cone <= 1e-8);
  CHECK(jmin >= 1.0 - 1e-12);  // |J| >= |s| along the flow

  const OrbitGeometry geo = orbit_geometry(traj, 1.0);
  CHECK(geo.cone_residual_max <= 1e-8);
  CHECK(std::abs(geo.cone_angle - std::acos(1.0 / jmag)) <= 1e-12);
  CHECK(std::abs(geo.cone_angle_measured - geo.cone_angle) <= 1e-8);
}

TEST_CASE("j conservation on the sphere metric") {
  SystemSpec sys;
  sys.metric = MetricSpec::sphere(1.0);
  sys.centers = {DyonCenter{{0, 0, 0}, 1.0, 0.0}};
  sys.potential = PotentialSpec::coulomb(-1.0);
  sys.replacement = ReplacementMode::OneCenter;

  const PhaseState s0 = build_initial_state(sys, 1.0, 1.3, 1.0, TurningBranch::Perihelion);
  IntegrationConfig cfg;
  cfg.h = 2e-3;
  cfg.t_end = 40.0;
  cfg.output_stride = 10;
  const TrajectoryRecord traj = integrate(sys, s0, cfg);
  REQUIRE(!traj.aborted);
  const Vec3 j0 = angular_momentum(s0, 1.0);
  const double e0 = evaluate_hamiltonian(sys, s0);
  double dj = 0.0, de = 0.0;
  for (const auto& st : traj.states) {
    dj = std::max(dj, max_abs(angular_momentum(st, 1.0) - j0));
    de = std::max(de, std::abs(evaluate_hamiltonian(sys, st) - e0));
  }
  CHECK(dj <= 1e-8);
  CHECK(de <= 1e-8 * std::max(1.0, std::abs(e0)));
}

TEST_CASE("conservation on the hyperboloid chart") {
  SystemSpec sys;
  sys.metric = MetricSpec::hyperboloid(1.0);
  sys.centers = {DyonCenter{{0, 0, 0}, 1.0, 0.0}};
  // attraction strong enough to bind below the hyperbolic potential floor
  sys.potential = PotentialSpec::coulomb(-6.0);
  sys.replacement = ReplacementMode::OneCenter;

  const PhaseState s0{{0.45, 0.0, 0.0}, {0.0, 2.2, 0.5}};
  IntegrationConfig cfg;
  cfg.h = 2e-4;
  cfg.t_end = 20.0;
  cfg.output_stride = 10;
  const TrajectoryRecord traj = integrate(sys, s0, cfg);
  REQUIRE(!traj.aborted);
  const double e0 = evaluate_hamiltonian(sys, s0);
  const Vec3 j0 = angular_momentum(s0, 1.0);
  double de = 0.0, dj = 0.0, cone = 0.0;
  for (const auto& st : traj.states) {
    de = std::max(de, std::abs(evaluate_hamiltonian(sys, st) - e0));
    dj = std::max(dj, max_abs(angular_momentum(st, 1.0) - j0));
    cone = std::max(cone, std::abs(dot(j0, st.x) - norm(st.x)));
  }
  CHECK(de <= 1e-8 * std::max(1.0, std::abs(e0)));
  CHECK(dj <= 1e-8);
  CHECK(cone <= 1e-8);
}

TEST_CASE("orbit geometry basics") {
  SUBCASE("planar orbit for s = 0") {
    TrajectoryRecord traj;
    traj.times = {0.0, 0.1};
    traj.states = {{{1, 0, 0}, {0, 1, 0}}, {{0.995, 0.0998, 0}, {-0.0998, 0.995, 0}}};
    const OrbitGeometry geo = orbit_geometry(traj, 0.0);
    CHECK(geo.cone_angle == doctest::Approx(kPi / 2.0));
  }
  SUBCASE("60 degree cone for s = 1, |J| = 2") {
    SystemSpec sys = flat_micz(1.0, -1.0);
    const PhaseState s0 = build_initial_state(sys, -0.1, 2.0, 1.0, TurningBranch::Perihelion);
    TrajectoryRecord traj;
    traj.times = {0.0};
    traj.states = {s0};
    const OrbitGeometry geo = orbit_geometry(traj, 1.0);
    CHECK(geo.cone_angle == doctest::Approx(kPi / 3.0).epsilon(1e-12));
  }
}

TEST_CASE("radial decomposition identity") {
  const RadialDecomposition d = radial_decomposition({{1, 0, 0}, {0, 1, 0}}, 1.0);
  CHECK(d.p_r == 0.0);
  CHECK(d.j_sq == doctest::Approx(2.0));

  const RadialDecomposition dr = radial_decomposition({{2, 0, 0}, {0.7, 0, 0}}, 0.0);
  CHECK(dr.j_sq == 0.0);
  CHECK(dr.p_r == doctest::Approx(0.7));

  std::mt19937_64 rng(43);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const PhaseState st{{n(rng), n(rng), 1.0 + 0.2 * n(rng)}, {n(rng), n(rng), n(rng)}};
    const double s = 0.5 * std::round(4.0 * n(rng)) / 2.0;
    const RadialDecomposition rd = radial_decomposition(st, s);
    const double r = norm(st.x);
    const double residual =
        norm_sq(st.pi) - rd.p_r * rd.p_r - (rd.j_sq - s * s) / (r * r);
    CHECK(std::abs(residual) <= 1e-12 * std::max(1.0, norm_sq(st.pi)));
  }
}

TEST_CASE("azimuthal rate") {
  // uniform circular motion: d(phi)/dt = 1
  CHECK(azimuthal_rate({{1, 0, 0}, {0, 1, 0}}, 0.0, 1.0) == doctest::Approx(1.0));

  SUBCASE("matches differentiation of the unwrapped azimuth, flat micz") {
    SystemSpec sys = flat_micz(1.0, -1.0);
    const PhaseState s0 = build_initial_state(sys, -0.22, 1.4, 1.0, TurningBranch::Perihelion);
    IntegrationConfig cfg;
    cfg.h = 1e-3;
    cfg.t_end = 15.0;
    cfg.output_stride = 2;
    const TrajectoryRecord traj = integrate(sys, s0, cfg);
    const OrbitGeometry geo = orbit_geometry(traj, 1.0);
    const double dt = cfg.h * cfg.output_stride;
    for (std::size_t i = 1; i + 1 < geo.r_of_phi.size(); i += 7) {
      const double fd = (geo.r_of_phi[i + 1].phi - geo.r_of_phi[i - 1].phi) / (2.0 * dt);
      const double rate = azimuthal_rate(traj.states[i], 1.0, 1.0);
      CHECK(std::abs(fd - rate) <= 1e-6 * rate);
    }
  }

  SUBCASE("matches on the sphere metric") {
    SystemSpec sys;
    sys.metric = MetricSpec::sphere(1.0);
    sys.centers = {DyonCenter{{0, 0, 0}, 1.0, 0.0}};
    sys.potential = PotentialSpec::coulomb(-1.0);
    sys.replacement = ReplacementMode::OneCenter;
    const PhaseState s0 = build_initial_state(sys, 1.0, 1.3, 1.0, TurningBranch::Perihelion);
    IntegrationConfig cfg;
    cfg.h = 5e-5;
    cfg.t_end = 6.0;
    cfg.output_stride = 2;
    const TrajectoryRecord traj = integrate(sys, s0, cfg);
    const OrbitGeometry geo = orbit_geometry(traj, 1.0);
    const double dt = cfg.h * cfg.output_stride;
    for (std::size_t i = 1; i + 1 < geo.r_of_phi.size(); i += 11) {
      const double fd = (geo.r_of_phi[i + 1].phi - geo.r_of_phi[i - 1].phi) / (2.0 * dt);
      const double g = conformal_factor(sys.metric, norm(traj.states[i].x));
      const double rate = azimuthal_rate(traj.states[i], 1.0, g);
      CHECK(std::abs(fd - rate) <= 1e-6 * rate);
    }
  }
}

TEST_CASE("orbit shape comparisons") {
  SystemSpec with = flat_micz(1.0, -1.0);
  SystemSpec without = flat_micz(0.0, -1.0);
  const double e0 = -0.1, jmag = 2.0;

  IntegrationConfig cfg;
  cfg.h = 70.25 / 20000.0;
  cfg.t_end = 72.0;
  cfg.output_stride = 10;

  const PhaseState s1 = build_initial_state(with, e0, jmag, 1.0, TurningBranch::Perihelion);
  const PhaseState s0 = build_initial_state(without, e0, jmag, 0.0, TurningBranch::Perihelion);
  const OrbitGeometry g1 = orbit_geometry(integrate(with, s1, cfg), 1.0);
  const OrbitGeometry g0 = orbit_geometry(integrate(without, s0, cfg), 0.0);

  SUBCASE("identical trajectories compare to zero") {
    CHECK(orbit_shape_compare(g0, g0) == 0.0);
  }
  SUBCASE("r(phi) does not depend on the monopole number") {
    CHECK(orbit_shape_compare(g1, g0) <= 1e-6);
  }
  SUBCASE("different energies are far apart (negative control)") {
    const PhaseState s2 =
        build_initial_state(without, -0.08, jmag, 0.0, TurningBranch::Perihelion);
    IntegrationConfig cfg2 = cfg;
    cfg2.t_end = 100.0;
    const OrbitGeometry g2 = orbit_geometry(integrate(without, s2, cfg2), 0.0);
    CHECK(orbit_shape_compare(g0, g2) > 1e-3);
  }
}

TEST_CASE("build_initial_state") {
  SUBCASE("circular kepler") {
    SystemSpec sys = flat_micz(0.0, -1.0);
    const PhaseState st = build_initial_state(sys, -0.5, 1.0, 0.0, TurningBranch::Perihelion);
    CHECK(norm(st.x) == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(norm(st.pi) == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(std::abs(dot(st.x, st.pi)) <= 1e-12);
  }
  SUBCASE("round-trips the requested energy") {
    SystemSpec sys = flat_micz(1.0, -1.0);
    std::mt19937_64 rng(47);
    std::uniform_real_distribution<double> uj(1.05, 2.2);
    for (int i = 0; i < 20; ++i) {
      const double jm = uj(rng);
      const double e_circ = -0.5 / (jm * jm);
      std::uniform_real_distribution<double> ue(0.9 * e_circ, 0.2 * e_circ);
      const double e = ue(rng);
      for (const TurningBranch branch : {TurningBranch::Perihelion, TurningBranch::Aphelion}) {
        const PhaseState st = build_initial_state(sys, e, jm, 1.0, branch);
        CHECK(std::abs(evaluate_hamiltonian(sys, st) - e) <= 1e-10);
        CHECK(norm(angular_momentum(st, 1.0)) == doctest::Approx(jm).epsilon(1e-12));
        CHECK(std::abs(radial_decomposition(st, 1.0).p_r) <= 1e-14);
      }
    }
  }
  SUBCASE("aphelion differs from perihelion") {
    SystemSpec sys = flat_micz(0.0, -1.0);
    const PhaseState peri = build_initial_state(sys, -0.25, 1.3, 0.0, TurningBranch::Perihelion);
    const PhaseState apo = build_initial_state(sys, -0.25, 1.3, 0.0, TurningBranch::Aphelion);
    CHECK(norm(peri.x) == doctest::Approx(1.2126).epsilon(1e-3));
    CHECK(norm(apo.x) == doctest::Approx(2.7874).epsilon(1e-3));
  }
  SUBCASE("bound violation") {
    SystemSpec sys = flat_micz(1.0, -1.0);
    CHECK_THROWS_AS(build_initial_state(sys, -0.25, 0.5, 1.0, TurningBranch::Perihelion),
                    InfeasibleError);
  }
  SUBCASE("no turning point") {
    SystemSpec sys = flat_micz(0.0, -1.0);
    CHECK_THROWS_AS(build_initial_state(sys, -5.0, 2.0, 0.0, TurningBranch::Perihelion),
                    InfeasibleError);
  }
}

TEST_CASE("time reversal of the implicit midpoint step") {
  SystemSpec sys = flat_micz(1.0, -1.0);
  PhaseState st = build_initial_state(sys, -0.25, 1.3, 1.0, TurningBranch::Perihelion);
  const PhaseState start = st;
  const double h = 1e-3;
  const int n = 2000;
  for (int i = 0; i < n; ++i) st = step_implicit_midpoint(sys, st, h);
  for (int i = 0; i < n; ++i) st = step_implicit_midpoint(sys, st, -h);
  CHECK(max_abs(st.x - start.x) <= 1e-9);
  CHECK(max_abs(st.pi - start.pi) <= 1e-9);
}

TEST_CASE("proximity guard aborts with a partial trajectory") {
  SystemSpec sys = flat_micz(0.0, -1.0);
  sys.delta_min = 0.05;
  // radial plunge into the center
  const PhaseState st{{1.0, 0, 0}, {-0.5, 0, 0}};
  IntegrationConfig cfg;
  cfg.h = 1e-3;
  cfg.t_end = 10.0;
  const TrajectoryRecord traj = integrate(sys, st, cfg);
  CHECK(traj.aborted);
  CHECK(!traj.diagnostic.empty());
  CHECK(traj.states.size() >= 2);
}

TEST_CASE("poincare section of the planar kepler flow") {
  SystemSpec sys = flat_micz(0.0, -1.0);
  // circular orbit starting just below the y = 0 half-plane crossing
  const double phase = 0.5;
  const PhaseState s0{{std::cos(-phase), std::sin(-phase), 0.0},
                      {-std::sin(-phase), std::cos(-phase), 0.0}};
  SectionSpec section;
  section.normal = {0, 1, 0};
  section.offset = 0.0;
  section.direction = +1;

  IntegrationConfig cfg;
  cfg.h = 1e-3;
  cfg.t_end = 1.0;
  const auto points = poincare_section(sys, s0, section, 4, cfg, 40.0);
  REQUIRE(points.size() == 4);
  for (std::size_t k = 0; k < points.size(); ++k) {
    CHECK(std::abs(points[k].t - (phase + 2.0 * kPi * k)) <= 1e-9);
    CHECK(std::abs(points[k].state.x.y) <= 1e-10);
  }
}

TEST_CASE("degenerate cone and on-axis guards") {
  // |J| = |s| exactly: radial-ray cone, flagged
  TrajectoryRecord traj;
  traj.times = {0.0};
  traj.states = {{{0, 0, 1}, {0, 0, 0}}};
  const OrbitGeometry geo = orbit_geometry(traj, 1.0);
  CHECK(geo.degenerate);
  CHECK(geo.cone_angle == doctest::Approx(0.0));
  // azimuthal rate undefined on the J axis
  CHECK_THROWS_AS(azimuthal_rate({{0, 0, 1}, {0, 0, 2}}, 1.0, 1.0), SingularityError);
}

TEST_CASE("implicit midpoint stall is diagnosed") {
  SystemSpec sys = flat_micz(1.0, -1.0);
  const PhaseState st = build_initial_state(sys, -0.25, 1.3, 1.0, TurningBranch::Perihelion);
  CHECK_THROWS_AS(step_implicit_midpoint(sys, st, 50.0), ConvergenceError);
  IntegrationConfig cfg;
  cfg.integrator = Integrator::ImplicitMidpoint;
  cfg.h = 50.0;
  cfg.t_end = 100.0;
  const TrajectoryRecord rec = integrate(sys, st, cfg);
  CHECK(rec.aborted);
  CHECK(rec.diagnostic.find("midpoint") != std::string::npos);
}

TEST_CASE("poincare returns a partial result when the budget runs out") {
  SystemSpec sys = flat_micz(0.0, -1.0);
  const PhaseState s0{{1.0, 0, 0}, {0, 1, 0}};
  SectionSpec section;
  section.normal = {0, 1, 0};
  IntegrationConfig cfg;
  cfg.h = 1e-3;
  const auto pts = poincare_section(sys, s0, section, 1000, cfg, 30.0);
  CHECK(pts.size() < 1000);
  CHECK(pts.size() >= 4);
}

TEST_CASE("section curve fit separates curves from scatter") {
  std::vector<Point2> ellipse;
  for (int i = 0; i < 400; ++i) {
    const double t = 2.0 * kPi * i / 400.0 * 7.0;  // quasi-dense wrap
    ellipse.push_back({2.0 * std::cos(t), 0.7 * std::sin(t)});
  }
  const CurveFit good = section_curve_fit(ellipse);
  CHECK(good.curve_like);

  std::mt19937_64 rng(53);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Point2> scatter;
  for (int i = 0; i < 400; ++i) scatter.push_back({u(rng), u(rng)});
  const CurveFit bad = section_curve_fit(scatter);
  CHECK(!bad.curve_like);
}

}  // TEST_SUITE
