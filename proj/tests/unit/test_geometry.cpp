#include <cmath>
#include <random>

#include <doctest.h>

#include "dyonlab/error.hpp"
#include "dyonlab/geometry.hpp"
#include "dyonlab/quadrature.hpp"

using namespace dyonlab;

TEST_SUITE("geometry") {

TEST_CASE("conformal factor closed forms") {
  CHECK(conformal_factor(MetricSpec::flat(), 3.7) == 1.0);
  CHECK(conformal_factor(MetricSpec::sphere(1.0), 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(conformal_factor(MetricSpec::hyperboloid(2.0), 0.5) ==
        doctest::Approx(16.0 / (0.75 * 0.75)).epsilon(1e-15));
}

TEST_CASE("conformal factor domain guard") {
  CHECK_THROWS_AS(conformal_factor(MetricSpec::hyperboloid(1.0), 1.0), DomainError);
  CHECK_THROWS_AS(conformal_factor(MetricSpec::hyperboloid(1.0), 1.0 - 1e-13), DomainError);
  CHECK_NOTHROW(conformal_factor(MetricSpec::hyperboloid(1.0), 0.999));
  CHECK_THROWS_AS(conformal_factor(MetricSpec::sphere(1.0), -0.1), DomainError);
}

TEST_CASE("conformal factor derivative") {
  CHECK(conformal_factor_derivative(MetricSpec::flat(), 0.3) == 0.0);
  CHECK(conformal_factor_derivative(MetricSpec::sphere(1.0), 1.0) ==
        doctest::Approx(-2.0).epsilon(1e-14));

  // finite-difference oracle
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.05, 0.9);
  const MetricSpec metrics[] = {MetricSpec::sphere(1.0), MetricSpec::sphere(2.5),
                                MetricSpec::hyperboloid(1.0), MetricSpec::hyperboloid(0.4)};
  for (const auto& metric : metrics) {
    for (int i = 0; i < 40; ++i) {
      const double r = u(rng);
      const double h = 1e-5;
      const double fd =
          (conformal_factor(metric, r + h) - conformal_factor(metric, r - h)) / (2.0 * h);
      const double an = conformal_factor_derivative(metric, r);
      CHECK(std::abs(an - fd) <= 1e-7 * std::max(1.0, std::abs(an)));
    }
  }
}

TEST_CASE("coulomb green closed form values") {
  CHECK(coulomb_green_closed(MetricSpec::flat(), 2.0) == 0.5);
  CHECK(coulomb_green_closed(MetricSpec::sphere(1.0), 1.0) == 0.0);
  CHECK(coulomb_green_closed(MetricSpec::sphere(1.0), 0.5) ==
        doctest::Approx(0.75).epsilon(1e-15));
  CHECK(coulomb_green_closed(MetricSpec::hyperboloid(1.0), 0.5) ==
        doctest::Approx(1.25).epsilon(1e-15));
  CHECK_THROWS_AS(coulomb_green_closed(MetricSpec::flat(), 0.0), SingularityError);
}

TEST_CASE("green derivative equals -1/(r^2 sqrt(G))") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.05, 0.9);
  const MetricSpec metrics[] = {MetricSpec::flat(), MetricSpec::sphere(1.0),
                                MetricSpec::hyperboloid(1.0)};
  for (const auto& metric : metrics) {
    for (int i = 0; i < 100; ++i) {
      const double r = u(rng);
      const double h = 1e-6;
      const double fd =
          (coulomb_green_closed(metric, r + h) - coulomb_green_closed(metric, r - h)) /
          (2.0 * h);
      const double target = -1.0 / (r * r * std::sqrt(conformal_factor(metric, r)));
      CHECK(std::abs(fd - target) <= 1e-7 * std::max(1.0, std::abs(target)));
      CHECK(coulomb_green_derivative(metric, r) ==
            doctest::Approx(target).epsilon(1e-14));
    }
  }
}

TEST_CASE("quadrature route agrees with closed form") {
  const MetricSpec metrics[] = {MetricSpec::flat(), MetricSpec::sphere(1.0),
                                MetricSpec::sphere(3.0), MetricSpec::hyperboloid(1.0),
                                MetricSpec::hyperboloid(2.0)};
  for (const auto& metric : metrics) {
    for (double r : {0.07, 0.2, 0.5, 0.75, 0.95}) {
      const double quad = coulomb_green_quadrature(metric, r);
      const double closed = coulomb_green_closed(metric, r);
      CHECK(std::abs(quad - closed) <= 1e-8);
    }
  }
  // spec'd examples
  CHECK(std::abs(coulomb_green_quadrature(MetricSpec::flat(), 2.0) - 0.5) <= 1e-8);
  CHECK(std::abs(coulomb_green_quadrature(MetricSpec::sphere(1.0), 0.5) - 0.75) <= 1e-8);
  CHECK(std::abs(coulomb_green_quadrature(MetricSpec::hyperboloid(1.0), 0.5) - 1.25) <= 1e-8);
}

TEST_CASE("flat limit at large curvature radius") {
  // At fixed physical distance rho the curved potentials approach 1/rho with
  // an eps rho/(4 r0^2) defect; the closed form satisfies the stronger exact
  // identity below.
  const double r0 = 1e3;
  for (double rho : {0.3, 1.0, 2.0}) {
    for (int eps : {+1, -1}) {
      const MetricSpec metric = eps > 0 ? MetricSpec::sphere(r0) : MetricSpec::hyperboloid(r0);
      const double r = rho / (2.0 * r0);
      const double phi = coulomb_green_closed(metric, r);
      // literal closed form, exactly
      CHECK(phi == (1.0 - eps * r * r) / (2.0 * r0 * r));
      // flat-limit convergence
      CHECK(std::abs(phi - 1.0 / rho + eps * rho / (4.0 * r0 * r0)) <= 1e-12 / rho);
      CHECK(std::abs(phi - 1.0 / rho) <= 1.0001 * rho / (4.0 * r0 * r0));
      // G in physical units: G (1 + eps r^2)^2 / (4 r0^2) = 1 exactly
      CHECK(conformal_factor(metric, r) * (1.0 + eps * r * r) * (1.0 + eps * r * r) /
                (4.0 * r0 * r0) ==
            doctest::Approx(1.0).epsilon(1e-15));
    }
  }
}

TEST_CASE("adaptive quadrature sanity") {
  const double v = integrate_adaptive([](double x) { return std::exp(-x * x); }, 0.0, 5.0, 1e-12);
  CHECK(v == doctest::Approx(0.5 * std::sqrt(std::acos(-1.0))).epsilon(1e-11));
  const GaussRule rule = gauss_legendre(16);
  double s = 0.0;
  for (int i = 0; i < 16; ++i) s += rule.weights[i] * std::pow(rule.nodes[i], 8);
  CHECK(s == doctest::Approx(2.0 / 9.0).epsilon(1e-13));
}

}  // TEST_SUITE
