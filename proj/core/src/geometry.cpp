#include "dyonlab/geometry.hpp"

#include <cmath>
#include <sstream>

#include "dyonlab/error.hpp"
#include "dyonlab/quadrature.hpp"

namespace dyonlab {

void check_metric_domain(const MetricSpec& metric, double r) {
  if (!(r >= 0.0) || !std::isfinite(r)) {
    std::ostringstream os;
    os << "radial coordinate " << r << " is not a finite nonnegative number";
    throw DomainError(os.str());
  }
  if (metric.curvature != Curvature::Flat && !(metric.r0 > 0.0)) {
    throw DomainError("curvature radius r0 must be positive");
  }
  if (metric.curvature == Curvature::Hyperboloid && r >= kHyperboloidEdge) {
    std::ostringstream os;
    os << "r = " << r << " is outside the hyperboloid chart (r < 1)";
    throw DomainError(os.str());
  }
}

double conformal_factor(const MetricSpec& metric, double r) {
  check_metric_domain(metric, r);
  if (metric.is_flat()) return 1.0;
  const double u = 1.0 + metric.eps() * r * r;
  return 4.0 * metric.r0 * metric.r0 / (u * u);
}

double conformal_factor_derivative(const MetricSpec& metric, double r) {
  check_metric_domain(metric, r);
  if (metric.is_flat()) return 0.0;
  const double e = metric.eps();
  const double u = 1.0 + e * r * r;
  return -16.0 * metric.r0 * metric.r0 * e * r / (u * u * u);
}

double coulomb_green_closed(const MetricSpec& metric, double r) {
  check_metric_domain(metric, r);
  if (r == 0.0) throw SingularityError("Coulomb potential singular at r = 0");
  if (metric.is_flat()) return 1.0 / r;
  return (1.0 - metric.eps() * r * r) / (2.0 * metric.r0 * r);
}

double coulomb_green_derivative(const MetricSpec& metric, double r) {
  check_metric_domain(metric, r);
  if (r == 0.0) throw SingularityError("Coulomb potential singular at r = 0");
  return -1.0 / (r * r * std::sqrt(conformal_factor(metric, r)));
}

double coulomb_green_quadrature(const MetricSpec& metric, double r) {
  check_metric_domain(metric, r);
  if (r == 0.0) throw SingularityError("Coulomb potential singular at r = 0");
  constexpr double tol = 1e-11;
  if (metric.is_flat()) {
    // phi(r) = int_r^inf ds / s^2, mapped to u = 1/s so the anchor at
    // infinity becomes the finite endpoint u = 0.
    return integrate_adaptive([](double) { return 1.0; }, 0.0, 1.0 / r, tol);
  }
  // Curved metrics: anchor the antiderivative to the closed form at r = 1/2.
  const double r_ref = 0.5;
  const double anchored = coulomb_green_closed(metric, r_ref);
  const auto integrand = [&](double s) {
    return -1.0 / (s * s * std::sqrt(conformal_factor(metric, s)));
  };
  return anchored + integrate_adaptive(integrand, r_ref, r, tol);
}

}  // namespace dyonlab
