#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include <doctest.h>

#include "dyonlab/error.hpp"
#include "dyonlab/fields.hpp"

using namespace dyonlab;

namespace {

constexpr double kPi = std::numbers::pi;

// finite-difference curl oracle, step 1e-4
Vec3 fd_curl(const std::function<Vec3(const Vec3&)>& f, const Vec3& p, double h = 1e-4) {
  Vec3 curl;
  for (int i = 0; i < 3; ++i) {
    Vec3 dp = p, dm = p;
    dp[i] += h;
    dm[i] -= h;
    const Vec3 up = f(dp), um = f(dm);
    const int j = (i + 1) % 3, k = (i + 2) % 3;
    curl[k] += (up[j] - um[j]) / (2.0 * h);
    curl[j] -= (up[k] - um[k]) / (2.0 * h);
  }
  return curl;
}

double fd_div(const std::function<Vec3(const Vec3&)>& f, const Vec3& p, double h = 1e-4) {
  double div = 0.0;
  for (int i = 0; i < 3; ++i) {
    Vec3 dp = p, dm = p;
    dp[i] += h;
    dm[i] -= h;
    div += (f(dp)[i] - f(dm)[i]) / (2.0 * h);
  }
  return div;
}

}  // namespace

TEST_SUITE("fields") {

TEST_CASE("dirac vector potential gauge structure") {
  const DyonCenter c{{0, 0, 0}, 1.0, 0.0};
  // regular on the +z axis
  CHECK(max_abs(dirac_vector_potential({0, 0, 2}, c)) == 0.0);
  // unit azimuthal magnitude at (1,0,0)
  const Vec3 a = dirac_vector_potential({1, 0, 0}, c);
  CHECK(norm(a) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(a.x == 0.0);
  CHECK(a.y == doctest::Approx(1.0).epsilon(1e-14));
  // string: on the -z axis
  CHECK_THROWS_AS(dirac_vector_potential({0, 0, -1}, c), SingularityError);
  CHECK_THROWS_AS(dirac_vector_potential({0, 0, 0}, c), SingularityError);
}

TEST_CASE("curl of the string potential is the monopole field") {
  const DyonCenter c{{0.1, -0.2, 0.3}, 1.7, 0.0};
  const auto a_field = [&](const Vec3& p) { return dirac_vector_potential(p, c); };
  const Vec3 p{0.4, 0.2, 0.8};
  const Vec3 curl = fd_curl(a_field, p);
  const Vec3 b = magnetic_field_multi(p, {c});
  CHECK(max_abs(curl - b) <= 1e-5);
}

TEST_CASE("gauge independence of the curl") {
  const DyonCenter c{{0, 0, 0}, 1.0, 0.0};
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    Vec3 axis{n(rng), n(rng), n(rng)};
    axis = axis / norm(axis);
    const Vec3 p{1.1, 0.7, 0.4};
    const auto a1 = [&](const Vec3& q) { return dirac_vector_potential(q, c); };
    const auto a2 = [&](const Vec3& q) { return dirac_vector_potential(q, c, axis); };
    CHECK(max_abs(fd_curl(a1, p) - fd_curl(a2, p)) <= 1e-5);
  }
}

TEST_CASE("magnetic field superposition and values") {
  const DyonCenter origin{{0, 0, 0}, 1.0, 0.0};
  CHECK(max_abs(magnetic_field_multi({0, 0, 2}, {origin}) - Vec3{0, 0, 0.25}) <= 1e-15);

  const std::vector<DyonCenter> pair = {DyonCenter{{0, 0, 1}, 1.0, 0.0},
                                        DyonCenter{{0, 0, -1}, 1.0, 0.0}};
  CHECK(max_abs(magnetic_field_multi({0, 0, 0}, pair)) == 0.0);

  const DyonCenter g2{{0, 0, 0}, 2.0, 0.0};
  CHECK(max_abs(magnetic_field_multi({1, 0, 0}, {g2}) - Vec3{2, 0, 0}) <= 1e-15);

  // linearity: sum over singletons equals the list field exactly
  const Vec3 p{0.3, -1.2, 0.7};
  const Vec3 total = magnetic_field_multi(p, pair);
  const Vec3 split = magnetic_field_multi(p, {pair[0]}) + magnetic_field_multi(p, {pair[1]});
  CHECK(total.x == split.x);
  CHECK(total.y == split.y);
  CHECK(total.z == split.z);

  CHECK_THROWS_AS(magnetic_field_multi({0, 0, 1 + 1e-9}, pair), ProximityError);
}

TEST_CASE("scalar potentials") {
  const std::vector<DyonCenter> one = {DyonCenter{{0, 0, 0}, 1.0, 2.0}};
  CHECK(scalar_potential_multi({0, 0, 2}, one, MetricSpec::flat(), ChargeWeight::Electric) ==
        doctest::Approx(1.0).epsilon(1e-15));
  CHECK(scalar_potential_multi({0, 0, 2}, one, MetricSpec::flat(), ChargeWeight::Magnetic) ==
        doctest::Approx(0.5).epsilon(1e-15));
  CHECK(scalar_potential_multi({1, 0, 0}, one, MetricSpec::sphere(1.0),
                               ChargeWeight::Magnetic) == 0.0);
}

TEST_CASE("duality residual flat") {
  const std::vector<DyonCenter> one = {DyonCenter{{0, 0, 0}, 1.0, 0.0}};
  CHECK(duality_residual({1, 1, 1}, one, MetricSpec::flat()) <= 1e-5);

  const std::vector<DyonCenter> none = {DyonCenter{{0, 0, 0}, 0.0, 0.0}};
  CHECK(duality_residual({1, 1, 1}, none, MetricSpec::flat()) == 0.0);

  const std::vector<DyonCenter> pair = {DyonCenter{{0, 0, 1}, 1.0, 0.0},
                                        DyonCenter{{0, 0, -1}, -1.0, 0.0}};
  CHECK(duality_residual({2, 0, 0}, pair, MetricSpec::flat()) <= 1e-5);
}

TEST_CASE("duality residual with curved weight") {
  const std::vector<DyonCenter> one = {DyonCenter{{0, 0, 0}, 1.0, 0.0}};
  CHECK(duality_residual({0.25, 0.2, 0.3}, one, MetricSpec::sphere(1.0)) <= 1e-5);
  CHECK(duality_residual({0.2, 0.15, 0.25}, one, MetricSpec::hyperboloid(1.0)) <= 1e-5);
}

TEST_CASE("monopole flux") {
  CHECK(monopole_flux(DyonCenter{{0, 0, 0}, 1.0, 0.0}, 1.0) ==
        doctest::Approx(4.0 * kPi).epsilon(1e-7));
  CHECK(monopole_flux(DyonCenter{{0, 0, 0}, 0.0, 0.0}, 1.0) == 0.0);
  CHECK(monopole_flux(DyonCenter{{0, 0, 0}, -2.0, 0.0}, 3.0) ==
        doctest::Approx(-8.0 * kPi).epsilon(1e-7));
}

TEST_CASE("flux additivity over enclosed centers") {
  const std::vector<DyonCenter> centers = {DyonCenter{{0, 0, 0.5}, 1.0, 0.0},
                                           DyonCenter{{0, 0, -0.5}, 2.5, 0.0},
                                           DyonCenter{{0, 0, 4.0}, -7.0, 0.0}};
  // sphere of radius 2 encloses the first two only
  const double flux = monopole_flux_multi(centers, {0, 0, 0}, 2.0);
  CHECK(flux / (4.0 * kPi * 3.5) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK_THROWS_AS(monopole_flux_multi(centers, {0, 0, 0}, 4.0), ProximityError);
}

TEST_CASE("div B and curl B vanish away from centers") {
  const std::vector<DyonCenter> centers = {DyonCenter{{0, 0, 1}, 1.0, 0.0},
                                           DyonCenter{{0, 0, -1}, 2.0, 0.0}};
  const auto b_field = [&](const Vec3& p) { return magnetic_field_multi(p, centers); };
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  int accepted = 0;
  while (accepted < 20) {
    const Vec3 p{u(rng), u(rng), u(rng)};
    bool ok = true;
    for (const auto& c : centers) {
      if (norm(p - c.position) < 0.4) ok = false;
    }
    if (!ok) continue;
    ++accepted;
    CHECK(std::abs(fd_div(b_field, p)) <= 1e-5);
    CHECK(max_abs(fd_curl(b_field, p)) <= 1e-5);
  }
}

TEST_CASE("field sample bundle") {
  const std::vector<DyonCenter> one = {DyonCenter{{0, 0, 0}, 1.0, -1.0}};
  const FieldSample s = sample_fields({0, 0, 2}, one, MetricSpec::flat());
  CHECK(s.phi_g == doctest::Approx(0.5));
  CHECK(s.phi_q == doctest::Approx(-0.5));
  CHECK(max_abs(s.magnetic_field - Vec3{0, 0, 0.25}) <= 1e-15);
}

}  // TEST_SUITE
