#include "dyonlab/fields.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "dyonlab/error.hpp"
#include "dyonlab/quadrature.hpp"

namespace dyonlab {

namespace {

void check_off_centers(const Vec3& point, const std::vector<DyonCenter>& centers,
                       double delta_min) {
  for (const auto& c : centers) {
    if (norm(point - c.position) < delta_min) {
      std::ostringstream os;
      os << "point within delta_min = " << delta_min << " of a center";
      throw ProximityError(os.str());
    }
  }
}

}  // namespace

Vec3 dirac_vector_potential(const Vec3& point, const DyonCenter& center,
                            const Vec3& string_axis) {
  const Vec3 n = normalized(string_axis);
  const Vec3 d = point - center.position;
  const double r = norm(d);
  if (r < kDeltaMin) throw SingularityError("vector potential evaluated at the center");
  const double axial = dot(d, n);
  const Vec3 transverse = cross(n, d);
  const double rho_sq = norm_sq(transverse);
  // String ray: axial < 0 with vanishing transverse distance. Angular
  // tolerance 1e-9.
  if (axial < 0.0 && std::sqrt(rho_sq) / r < 1e-9) {
    throw SingularityError("point lies on the Dirac string; rotate string_axis");
  }
  if (rho_sq == 0.0) return {0.0, 0.0, 0.0};  // exactly on the regular axis
  return center.g * (1.0 - axial / r) / rho_sq * transverse;
}

Vec3 magnetic_field_multi(const Vec3& point, const std::vector<DyonCenter>& centers,
                          double delta_min) {
  check_off_centers(point, centers, delta_min);
  Vec3 b;
  for (const auto& c : centers) {
    const Vec3 d = point - c.position;
    const double r = norm(d);
    b += c.g / (r * r * r) * d;
  }
  return b;
}

double scalar_potential_multi(const Vec3& point, const std::vector<DyonCenter>& centers,
                              const MetricSpec& metric, ChargeWeight weight,
                              double delta_min) {
  check_off_centers(point, centers, delta_min);
  double phi = 0.0;
  for (const auto& c : centers) {
    const double coef = weight == ChargeWeight::Magnetic ? c.g : c.q;
    if (coef == 0.0) continue;
    phi += coef * coulomb_green_closed(metric, norm(point - c.position));
  }
  return phi;
}

Vec3 scalar_potential_gradient(const Vec3& point, const std::vector<DyonCenter>& centers,
                               const MetricSpec& metric, ChargeWeight weight,
                               double delta_min) {
  check_off_centers(point, centers, delta_min);
  Vec3 grad;
  for (const auto& c : centers) {
    const double coef = weight == ChargeWeight::Magnetic ? c.g : c.q;
    if (coef == 0.0) continue;
    const Vec3 d = point - c.position;
    const double r = norm(d);
    grad += coef * coulomb_green_derivative(metric, r) / r * d;
  }
  return grad;
}

FieldSample sample_fields(const Vec3& point, const std::vector<DyonCenter>& centers,
                          const MetricSpec& metric, double delta_min) {
  FieldSample s;
  s.point = point;
  for (const auto& c : centers) s.vector_potential += dirac_vector_potential(point, c);
  s.magnetic_field = magnetic_field_multi(point, centers, delta_min);
  s.phi_g = scalar_potential_multi(point, centers, metric, ChargeWeight::Magnetic, delta_min);
  s.phi_q = scalar_potential_multi(point, centers, metric, ChargeWeight::Electric, delta_min);
  return s;
}

double duality_residual(const Vec3& point, const std::vector<DyonCenter>& centers,
                        const MetricSpec& metric, double fd_step) {
  const double h = fd_step;
  Vec3 residual;
  for (const auto& c : centers) {
    if (c.g == 0.0) continue;
    const std::vector<DyonCenter> one{c};
    const double ri = norm(point - c.position);
    const double w = std::sqrt(conformal_factor(metric, ri));

    Vec3 grad_phi, curl_a;
    for (int i = 0; i < 3; ++i) {
      Vec3 dp = point, dm = point;
      dp[i] += h;
      dm[i] -= h;
      grad_phi[i] = (scalar_potential_multi(dp, one, metric, ChargeWeight::Magnetic) -
                     scalar_potential_multi(dm, one, metric, ChargeWeight::Magnetic)) /
                    (2.0 * h);
      const Vec3 ap = dirac_vector_potential(dp, c);
      const Vec3 am = dirac_vector_potential(dm, c);
      // d A_j / d x_i rows accumulated into the curl below.
      const int j = (i + 1) % 3, k = (i + 2) % 3;
      curl_a[k] += (ap[j] - am[j]) / (2.0 * h);
      curl_a[j] -= (ap[k] - am[k]) / (2.0 * h);
    }
    residual += w * grad_phi + curl_a;
  }
  return max_abs(residual);
}

double monopole_flux(const DyonCenter& center, double radius, int quadrature_order) {
  return monopole_flux_multi({center}, center.position, radius, quadrature_order);
}

double monopole_flux_multi(const std::vector<DyonCenter>& centers, const Vec3& sphere_center,
                           double radius, int quadrature_order, double delta_min) {
  if (!(radius > 0.0)) throw DomainError("flux sphere radius must be positive");
  for (const auto& c : centers) {
    const double dist = norm(c.position - sphere_center);
    if (std::abs(dist - radius) < delta_min) {
      throw ProximityError("a center lies on the flux sphere surface");
    }
  }
  const GaussRule rule = gauss_legendre(quadrature_order);
  const int n_phi = 2 * quadrature_order;
  const double dphi = 2.0 * std::numbers::pi / n_phi;
  double flux = 0.0;
  for (int i = 0; i < quadrature_order; ++i) {
    const double ct = rule.nodes[i];
    const double st = std::sqrt(1.0 - ct * ct);
    for (int j = 0; j < n_phi; ++j) {
      const double phi = j * dphi;
      const Vec3 nrm{st * std::cos(phi), st * std::sin(phi), ct};
      const Vec3 p = sphere_center + radius * nrm;
      flux += dot(magnetic_field_multi(p, centers, delta_min), nrm) * rule.weights[i] * dphi;
    }
  }
  return flux * radius * radius;
}

}  // namespace dyonlab
