#include "dyonlab/model.hpp"

#include <cmath>
#include <sstream>

#include "dyonlab/error.hpp"

namespace dyonlab {

bool PotentialSpec::is_central() const {
  switch (kind) {
    case Kind::LinearStark:
      return norm_sq(field) == 0.0;
    case Kind::Sum:
      for (const auto& t : terms) {
        if (!t.is_central()) return false;
      }
      return true;
    default:
      return true;
  }
}

double SystemSpec::total_monopole_number() const {
  double s = 0.0;
  for (const auto& c : centers) s += c.g;
  return s;
}

void SystemSpec::validate() const {
  if (!(mu > 0.0)) throw DomainError("particle mass mu must be positive");
  if (!(delta_min > 0.0)) throw DomainError("delta_min must be positive");
  for (const auto& c : centers) {
    if (!finite(c.position) || !std::isfinite(c.g) || !std::isfinite(c.q)) {
      throw DomainError("dyon center has non-finite fields");
    }
    check_metric_domain(metric, norm(c.position));
  }
  if (replacement == ReplacementMode::OneCenter) {
    if (centers.size() != 1 || norm(centers[0].position) != 0.0) {
      throw DomainError("one-center replacement requires exactly one center at the origin");
    }
  }
}

double apply_micz_replacement(double potential_value, double s, double G, double r) {
  if (!(r > 0.0)) throw SingularityError("replacement term singular at r = 0");
  if (!(G > 0.0)) throw DomainError("conformal weight G must be positive");
  const double t = s / r;
  return potential_value + t * t / (2.0 * G);
}

double apply_multicenter_replacement(double potential_value, const Vec3& point,
                                     const std::vector<DyonCenter>& centers, double G) {
  if (!(G > 0.0)) throw DomainError("conformal weight G must be positive");
  double t = 0.0;
  for (const auto& c : centers) {
    const double r = norm(point - c.position);
    if (!(r > 0.0)) throw ProximityError("replacement term evaluated at a center");
    t += c.g / r;
  }
  return potential_value + t * t / (2.0 * G);
}

double potential_value(const PotentialSpec& pot, const MetricSpec& metric, const Vec3& x,
                       double mu) {
  switch (pot.kind) {
    case PotentialSpec::Kind::Zero:
      return 0.0;
    case PotentialSpec::Kind::Coulomb:
      return pot.alpha * coulomb_green_closed(metric, norm(x));
    case PotentialSpec::Kind::Oscillator:
      return 0.5 * mu * pot.omega * pot.omega * norm_sq(x);
    case PotentialSpec::Kind::LinearStark:
      return dot(pot.field, x);
    case PotentialSpec::Kind::Sum: {
      double u = 0.0;
      for (const auto& t : pot.terms) u += potential_value(t, metric, x, mu);
      return u;
    }
  }
  return 0.0;
}

Vec3 potential_gradient(const PotentialSpec& pot, const MetricSpec& metric, const Vec3& x,
                        double mu) {
  switch (pot.kind) {
    case PotentialSpec::Kind::Zero:
      return {};
    case PotentialSpec::Kind::Coulomb: {
      const double r = norm(x);
      return pot.alpha * coulomb_green_derivative(metric, r) / r * x;
    }
    case PotentialSpec::Kind::Oscillator:
      return mu * pot.omega * pot.omega * x;
    case PotentialSpec::Kind::LinearStark:
      return pot.field;
    case PotentialSpec::Kind::Sum: {
      Vec3 g;
      for (const auto& t : pot.terms) g += potential_gradient(t, metric, x, mu);
      return g;
    }
  }
  return {};
}

double effective_potential(const SystemSpec& system, const Vec3& x) {
  double u = potential_value(system.potential, system.metric, x, system.mu);
  if (!system.centers.empty()) {
    u += scalar_potential_multi(x, system.centers, system.metric, ChargeWeight::Electric,
                                system.delta_min);
  }
  switch (system.replacement) {
    case ReplacementMode::None:
      break;
    case ReplacementMode::OneCenter: {
      const double r = norm(x);
      const double G = conformal_factor(system.metric, r);
      u = apply_micz_replacement(u, system.total_monopole_number(), system.mu * G, r);
      break;
    }
    case ReplacementMode::MultiCenter: {
      const double phi_g = scalar_potential_multi(x, system.centers, system.metric,
                                                  ChargeWeight::Magnetic, system.delta_min);
      u += phi_g * phi_g / (2.0 * system.mu);
      break;
    }
  }
  return u;
}

Vec3 effective_potential_gradient(const SystemSpec& system, const Vec3& x) {
  Vec3 grad = potential_gradient(system.potential, system.metric, x, system.mu);
  if (!system.centers.empty()) {
    grad += scalar_potential_gradient(x, system.centers, system.metric, ChargeWeight::Electric,
                                      system.delta_min);
  }
  switch (system.replacement) {
    case ReplacementMode::None:
      break;
    case ReplacementMode::OneCenter: {
      const double s = system.total_monopole_number();
      const double r = norm(x);
      const double G = conformal_factor(system.metric, r);
      const double Gp = conformal_factor_derivative(system.metric, r);
      // d/dr [ s^2 / (2 mu G r^2) ] = -s^2 (G' r + 2 G) / (2 mu G^2 r^3)
      const double dr = -s * s * (Gp * r + 2.0 * G) / (2.0 * system.mu * G * G * r * r * r);
      grad += dr / r * x;
      break;
    }
    case ReplacementMode::MultiCenter: {
      const double phi_g = scalar_potential_multi(x, system.centers, system.metric,
                                                  ChargeWeight::Magnetic, system.delta_min);
      grad += phi_g / system.mu *
              scalar_potential_gradient(x, system.centers, system.metric,
                                        ChargeWeight::Magnetic, system.delta_min);
      break;
    }
  }
  return grad;
}

double evaluate_hamiltonian(const SystemSpec& system, const PhaseState& state) {
  const double r = norm(state.x);
  const double G = conformal_factor(system.metric, r);
  return norm_sq(state.pi) / (2.0 * system.mu * G) + effective_potential(system, state.x);
}

double susy_potential(const Vec3& point, const std::vector<DyonCenter>& centers,
                      const Vec3& b0, double kappa, const MetricSpec& metric) {
  const double G = conformal_factor(metric, norm(point));
  double sum = dot(b0, point);
  for (const auto& c : centers) {
    const double r = norm(point - c.position);
    if (!(r > 0.0)) throw ProximityError("susy potential evaluated at a center");
    sum += c.g / r;
  }
  return kappa / G * sum + kappa * kappa / (2.0 * G);
}

DszResult dsz_check(const std::vector<DyonCenter>& centers) {
  DszResult res;
  for (std::size_t i = 0; i < centers.size(); ++i) {
    for (std::size_t j = i + 1; j < centers.size(); ++j) {
      const double v = std::abs(centers[i].g * centers[j].q - centers[j].g * centers[i].q);
      res.max_violation = std::max(res.max_violation, v);
    }
  }
  res.ok = res.max_violation <= 1e-12;
  return res;
}

Iv2Result iv2_residual(const std::vector<DyonCenter>& centers, double kappa,
                       const MetricSpec& metric, double mu,
                       const std::vector<PhaseState>& samples) {
  Iv2Result res;
  res.precondition_ok = dsz_check(centers).ok;
  for (const auto& c : centers) {
    if (std::abs(c.q - kappa * c.g) > 1e-12 * std::max(1.0, std::abs(c.q))) {
      res.precondition_ok = false;
    }
  }
  for (const auto& st : samples) {
    const double G = conformal_factor(metric, norm(st.x));
    const double kinetic = norm_sq(st.pi) / (2.0 * mu * G);
    const double phi_g =
        scalar_potential_multi(st.x, centers, metric, ChargeWeight::Magnetic);
    const double phi_q =
        scalar_potential_multi(st.x, centers, metric, ChargeWeight::Electric);
    const double h_direct = kinetic + 0.5 * phi_g * phi_g + phi_q;
    const double shifted = phi_g + kappa;
    const double h_square = kinetic + 0.5 * shifted * shifted - 0.5 * kappa * kappa;
    res.residual = std::max(res.residual, std::abs(h_direct - h_square));
  }
  return res;
}

void NBodySpec::validate() const {
  if (e_charge.size() != g_charge.size()) {
    throw DomainError("per-particle charge lists must have equal length");
  }
  if (e_charge.empty()) throw DomainError("N-body spec needs at least one particle");
  if (omega < 0.0) throw DomainError("trap frequency omega must be nonnegative");
}

double calogero_monopole_energy(const NBodySpec& spec, const std::vector<Vec3>& positions,
                                const std::vector<Vec3>& momenta) {
  const int n = spec.count();
  if (static_cast<int>(positions.size()) != n || static_cast<int>(momenta.size()) != n) {
    throw DomainError("positions/momenta size mismatch with spec");
  }
  double h = 0.0;
  for (int i = 0; i < n; ++i) h += 0.5 * norm_sq(momenta[i]);
  for (int i = 0; i < n; ++i) {
    double phi = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const double rij = norm(positions[i] - positions[j]);
      if (rij < spec.delta_min) throw ProximityError("particles closer than delta_min");
      phi += spec.s(i, j) / rij;
    }
    h += 0.5 * phi * phi;
  }
  for (int i = 0; i < n; ++i) h += 0.5 * spec.omega * spec.omega * norm_sq(positions[i]);
  return h;
}

}  // namespace dyonlab
