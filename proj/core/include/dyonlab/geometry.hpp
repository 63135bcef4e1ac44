#ifndef DYONLAB_GEOMETRY_HPP
#define DYONLAB_GEOMETRY_HPP

namespace dyonlab {

enum class Curvature { Flat, Sphere, Hyperboloid };

// Rotationally invariant conformally flat metric ds^2 = G(r) dx.dx with
//   G(r) = 4 r0^2 / (1 + eps r^2)^2,   eps = +1 (sphere), -1 (hyperboloid),
// and G = 1 for flat space. The hyperboloid chart is limited to r < 1.
struct MetricSpec {
  Curvature curvature = Curvature::Flat;
  double r0 = 1.0;  // curvature radius, ignored for Flat

  static MetricSpec flat() { return {Curvature::Flat, 1.0}; }
  static MetricSpec sphere(double r0) { return {Curvature::Sphere, r0}; }
  static MetricSpec hyperboloid(double r0) { return {Curvature::Hyperboloid, r0}; }

  // +1 / -1 / 0 encoding of the curvature sign.
  int eps() const {
    switch (curvature) {
      case Curvature::Sphere: return 1;
      case Curvature::Hyperboloid: return -1;
      default: return 0;
    }
  }
  bool is_flat() const { return curvature == Curvature::Flat; }
};

// Hyperboloid chart boundary guard: reject r >= 1 - 1e-12.
inline constexpr double kHyperboloidEdge = 1.0 - 1e-12;

// Throws DomainError if r lies outside the metric's radial chart.
void check_metric_domain(const MetricSpec& metric, double r);

// G(r). Exactly 1 for the flat metric.
double conformal_factor(const MetricSpec& metric, double r);

// dG/dr, analytic.
double conformal_factor_derivative(const MetricSpec& metric, double r);

// Rotationally invariant Coulomb potential of the metric in closed form:
// 1/r (flat), (1/(2 r0)) (1 - eps r^2)/r (curved). Throws SingularityError
// at r = 0.
double coulomb_green_closed(const MetricSpec& metric, double r);

// d/dr of the closed form, equal to -1/(r^2 sqrt(G)).
double coulomb_green_derivative(const MetricSpec& metric, double r);

// Same potential evaluated by adaptive quadrature of -1/(r^2 sqrt(G)),
// with the integration constant fixed to match the closed form (anchored
// at r = 1/2 for curved metrics, at infinity for flat). Agrees with
// coulomb_green_closed to <= 1e-8 absolute.
double coulomb_green_quadrature(const MetricSpec& metric, double r);

}  // namespace dyonlab

#endif
