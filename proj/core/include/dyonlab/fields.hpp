#ifndef DYONLAB_FIELDS_HPP
#define DYONLAB_FIELDS_HPP

#include <vector>

#include "dyonlab/geometry.hpp"
#include "dyonlab/vec3.hpp"

namespace dyonlab {

// Background dyon: point source at `position` with magnetic charge g and
// electric charge q. With particle charge e = 1 the monopole number
// contributed by this center is s_i = g_i.
struct DyonCenter {
  Vec3 position;
  double g = 0.0;
  double q = 0.0;
};

// Default guard radius around centers; all fields diverge there.
inline constexpr double kDeltaMin = 1e-6;

enum class ChargeWeight { Magnetic, Electric };

// One field evaluation bundle at `point`.
struct FieldSample {
  Vec3 point;
  Vec3 vector_potential;  // single-string gauge, summed over centers
  Vec3 magnetic_field;
  double phi_g = 0.0;  // magnetic-charge-weighted scalar potential
  double phi_q = 0.0;  // electric-charge-weighted scalar potential
};

// Vector potential of one Dirac monopole in the string gauge that is regular
// along +string_axis from the center (the string runs along -string_axis).
// curl A = g d/|d|^3 away from the string. Throws SingularityError within
// angular tolerance 1e-9 of the string ray or at the center itself.
Vec3 dirac_vector_potential(const Vec3& point, const DyonCenter& center,
                            const Vec3& string_axis = {0.0, 0.0, 1.0});

// B(point) = sum_i g_i (point - a_i)/|point - a_i|^3.
Vec3 magnetic_field_multi(const Vec3& point, const std::vector<DyonCenter>& centers,
                          double delta_min = kDeltaMin);

// sum_i c_i phi_C(|point - a_i|) with c_i = g_i or q_i.
double scalar_potential_multi(const Vec3& point, const std::vector<DyonCenter>& centers,
                              const MetricSpec& metric, ChargeWeight weight,
                              double delta_min = kDeltaMin);

// Analytic gradient of scalar_potential_multi.
Vec3 scalar_potential_gradient(const Vec3& point, const std::vector<DyonCenter>& centers,
                               const MetricSpec& metric, ChargeWeight weight,
                               double delta_min = kDeltaMin);

FieldSample sample_fields(const Vec3& point, const std::vector<DyonCenter>& centers,
                          const MetricSpec& metric, double delta_min = kDeltaMin);

// Max-norm finite-difference residual of the duality relation between the
// magnetic scalar potential and the Dirac vector potential,
//   sqrt(G(r_i)) grad phi_i + curl A_i = 0   per center,
// with central differences of step 1e-4. For the flat metric the summed
// residual must be <= 1e-5 at points away from centers and strings.
double duality_residual(const Vec3& point, const std::vector<DyonCenter>& centers,
                        const MetricSpec& metric, double fd_step = 1e-4);

// Surface integral of this center's B over the sphere of `radius` around the
// center, by product quadrature (Gauss-Legendre in cos(theta) x uniform in
// phi). Equals 4 pi g to the quadrature tolerance.
double monopole_flux(const DyonCenter& center, double radius, int quadrature_order = 32);

// Flux of the summed field of `centers` through the sphere of `radius` about
// `sphere_center`. Throws ProximityError if any center lies within
// delta_min of the spherical surface.
double monopole_flux_multi(const std::vector<DyonCenter>& centers, const Vec3& sphere_center,
                           double radius, int quadrature_order = 32,
                           double delta_min = kDeltaMin);

}  // namespace dyonlab

#endif
