#ifndef DYONLAB_MODEL_HPP
#define DYONLAB_MODEL_HPP

#include <optional>
#include <vector>

#include "dyonlab/fields.hpp"
#include "dyonlab/geometry.hpp"
#include "dyonlab/vec3.hpp"

namespace dyonlab {

// Scalar potential term. Coulomb couples through the metric's Green function
// (alpha/r in flat space, alpha < 0 attractive); Oscillator is
// mu omega^2 r^2 / 2; LinearStark is field.x.
struct PotentialSpec {
  enum class Kind { Zero, Coulomb, Oscillator, LinearStark, Sum };
  Kind kind = Kind::Zero;
  double alpha = 0.0;
  double omega = 0.0;
  Vec3 field;
  std::vector<PotentialSpec> terms;

  static PotentialSpec zero() { return {}; }
  static PotentialSpec coulomb(double alpha) {
    PotentialSpec p;
    p.kind = Kind::Coulomb;
    p.alpha = alpha;
    return p;
  }
  static PotentialSpec oscillator(double omega) {
    PotentialSpec p;
    p.kind = Kind::Oscillator;
    p.omega = omega;
    return p;
  }
  static PotentialSpec linear_stark(const Vec3& field) {
    PotentialSpec p;
    p.kind = Kind::LinearStark;
    p.field = field;
    return p;
  }
  static PotentialSpec sum(std::vector<PotentialSpec> terms) {
    PotentialSpec p;
    p.kind = Kind::Sum;
    p.terms = std::move(terms);
    return p;
  }

  bool is_central() const;
};

// How the monopole scalar term enters the effective potential:
//   None       -- Lorentz force only, no scalar monopole term (control runs)
//   OneCenter  -- + s^2/(2 mu G r^2) for a single center at the origin
//   MultiCenter-- + phi_g^2/(2 mu), the squared magnetic Green potential
enum class ReplacementMode { None, OneCenter, MultiCenter };

struct SystemSpec {
  MetricSpec metric;
  std::vector<DyonCenter> centers;
  PotentialSpec potential;
  double mu = 1.0;
  ReplacementMode replacement = ReplacementMode::None;
  std::optional<double> susy_kappa;
  double delta_min = kDeltaMin;

  // Total monopole number seen by a unit-charge particle.
  double total_monopole_number() const;
  // Throws DomainError on an inconsistent spec (mu <= 0, OneCenter with the
  // wrong center layout, centers outside the metric chart).
  void validate() const;
};

struct PhaseState {
  Vec3 x;
  Vec3 pi;  // gauge-invariant kinetic momentum
};

// U -> U + s^2/(2 G r^2). G is the kinetic conformal weight; pass mu*G(r)
// when the mass is not 1.
double apply_micz_replacement(double potential_value, double s, double G, double r);

// U -> U + (1/(2G)) (sum_i g_i/|x - a_i|)^2. Reduces bitwise to
// apply_micz_replacement for a single center at the origin.
double apply_multicenter_replacement(double potential_value, const Vec3& point,
                                     const std::vector<DyonCenter>& centers, double G);

// Base scalar potential value / gradient (no monopole terms).
double potential_value(const PotentialSpec& pot, const MetricSpec& metric, const Vec3& x,
                       double mu);
Vec3 potential_gradient(const PotentialSpec& pot, const MetricSpec& metric, const Vec3& x,
                        double mu);

// Full effective potential: base potential + electric dyon potential phi_q
// + the replacement-mode monopole term.
double effective_potential(const SystemSpec& system, const Vec3& x);
Vec3 effective_potential_gradient(const SystemSpec& system, const Vec3& x);

// H = pi^2/(2 mu G(|x|)) + effective_potential(x).
double evaluate_hamiltonian(const SystemSpec& system, const PhaseState& state);

// U0 = (kappa/G)(sum_I g_I/|x - a_I| + B0.x) + kappa^2/(2G).
double susy_potential(const Vec3& point, const std::vector<DyonCenter>& centers,
                      const Vec3& b0, double kappa, const MetricSpec& metric);

struct DszResult {
  bool ok = true;
  double max_violation = 0.0;
};

// Pairwise check of g_i q_j - g_j q_i = 0 (tolerance 1e-12).
DszResult dsz_check(const std::vector<DyonCenter>& centers);

struct Iv2Result {
  double residual = 0.0;
  // False when the charges do not satisfy q_i = kappa g_i (plus DSZ); the
  // residual is then reported instead of being an error.
  bool precondition_ok = true;
};

// Max |H_direct - H_completed_square| over the sample states, where
// H_direct carries phi_g^2/2 + phi_q and the completed-square form carries
// (phi_g + kappa)^2/2 - kappa^2/2.
Iv2Result iv2_residual(const std::vector<DyonCenter>& centers, double kappa,
                       const MetricSpec& metric, double mu,
                       const std::vector<PhaseState>& samples);

// N interacting dyons with pairwise couplings s_IJ = e_I g_J - e_J g_I and a
// common harmonic trap.
struct NBodySpec {
  std::vector<double> e_charge;
  std::vector<double> g_charge;
  double omega = 0.0;
  double delta_min = kDeltaMin;

  int count() const { return static_cast<int>(e_charge.size()); }
  double s(int i, int j) const {
    return e_charge[i] * g_charge[j] - e_charge[j] * g_charge[i];
  }
  void validate() const;
};

// H = (1/2) sum_I pi_I^2
//   + (1/2) sum_I (sum_{J != I} s_IJ / r_IJ)^2
//   + (omega^2/2) sum_I r_I^2,  unit masses.
double calogero_monopole_energy(const NBodySpec& spec, const std::vector<Vec3>& positions,
                                const std::vector<Vec3>& momenta);

}  // namespace dyonlab

#endif
