#ifndef DYONLAB_QUANTUM_HPP
#define DYONLAB_QUANTUM_HPP

#include <functional>
#include <string>
#include <vector>

#include "dyonlab/geometry.hpp"
#include "dyonlab/model.hpp"

namespace dyonlab {

// (n_r, l, m) with half-integers stored as twice-values. n = n_r + l + 1.
struct QuantumNumbers {
  int twice_s = 0;
  int twice_l = 0;
  int twice_m = 0;
  int n_r = 0;

  double s() const { return 0.5 * twice_s; }
  double l() const { return 0.5 * twice_l; }
  double m() const { return 0.5 * twice_m; }
  double n() const { return n_r + l() + 1.0; }
};

// E = -mu alpha^2 / (2 n^2). Throws DomainError for n <= 0.
double analytic_spectrum(double mu, double alpha, double n);

// All (n_r, l, m) with l >= |s|, l - |s| integer, |m| <= l and n <= n_max,
// ordered by (n, l, m).
std::vector<QuantumNumbers> allowed_quantum_numbers(double s, double n_max);

// Size of the lowest-n multiplet, equal to 2|s| + 1.
int ground_multiplet_size(double s);

struct RadialGrid {
  enum class Spacing { Uniform, Logarithmic };
  double r_min = 1e-6;
  double r_max = 200.0;
  int nodes = 6000;
  Spacing spacing = Spacing::Logarithmic;
};

// Radial reduction of one spherically symmetric system: the solver adds the
// angular kinetic coefficient [l(l+1) - s^2] itself, so `potential` must
// carry everything else (including any replacement term).
struct RadialProblem {
  MetricSpec metric;
  double mu = 1.0;
  std::function<double(double)> potential;
};

struct EigenResult {
  int n_r = 0;
  double l = 0.0;
  int degeneracy = 0;  // 2l + 1
  double energy = 0.0;
  int grid_nodes = 0;
  std::string scheme;
};

// Lowest `count` eigenvalues of
//   -(1/(2 mu G^{3/2} r^2)) d/dr (G^{1/2} r^2 d/dr)
//   + [l(l+1) - s^2]/(2 mu G r^2) + potential(r)
// discretized flux-conservatively on the grid with Dirichlet ends and
// symmetrized against the curved measure. Throws InfeasibleError when fewer
// than `count` states lie below the potential at the outer edge. When
// convergence_tol > 0 the grid is doubled once and the refined values are
// returned; a change above the tolerance throws ConvergenceError.
std::vector<EigenResult> radial_eigenvalues(const RadialProblem& problem, double l, double s,
                                            int count, const RadialGrid& grid,
                                            double convergence_tol = 0.0);

// Radial problem of a one-center system (its effective potential evaluated
// on a ray, replacement term included).
RadialProblem radial_problem(const SystemSpec& system);

struct SpectrumShift {
  double max_shift = 0.0;
  std::vector<EigenResult> with_monopole;
  std::vector<EigenResult> without_monopole;
};

// Solves the (metric, potential) system once with monopole number s (and the
// matching replacement term) and once with s = 0, over the same l >= |s|
// window, and reports max |E(n_r, l; s) - E(n_r, l; 0)|.
SpectrumShift spectrum_shift_check(const MetricSpec& metric, const PotentialSpec& potential,
                                   double s, double mu, double l_max, int n_r_max,
                                   const RadialGrid& grid);

// E0(m) = -mu alpha^2/(2(|s|+1)^2) + (F/(mu |alpha|)) m sgn(s) (|s| + 3/2).
double stark_ground_energy(double mu, double alpha, double s, double m,
                           double field_magnitude);

// First-order degenerate perturbation theory in the ground multiplet:
// numeric radial expectation of r over the nodeless hydrogenic state
// (n = |s|+1, l = |s|) times the monopole-harmonic expectation of cos(theta),
// for every m. Energies ordered by m = -|s| .. |s|.
std::vector<double> stark_splitting_oracle(double mu, double alpha, double s,
                                           double field_magnitude);

enum class DipoleComponent { Z, Plus, Minus };

// Angular dipole matrix element <s,l',m'| rhat_mu |s,l,m> over monopole
// harmonics, as a product of two 3j symbols. Throws DomainError when
// l or l' < |s|.
double dipole_matrix_element(double s, double l, double m, double lp, double mp,
                             DipoleComponent component);

// Independent evaluation by 2D quadrature over monopole harmonics.
double dipole_matrix_element_quadrature(double s, double l, double m, double lp, double mp,
                                        DipoleComponent component, int n_theta = 200,
                                        int n_phi = 256);

struct Transition {
  double l = 0.0, m = 0.0;
  double lp = 0.0, mp = 0.0;
  double amp_z = 0.0, amp_plus = 0.0, amp_minus = 0.0;
};

// All (l,m) -> (l',m') transitions with any dipole component above the
// threshold, l and l' running over |s| .. l_max.
std::vector<Transition> selection_rule_table(double s, double l_max, double threshold = 1e-12);

}  // namespace dyonlab

#endif
