#include "dyonlab/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include "dyonlab/error.hpp"
#include "dyonlab/quadrature.hpp"
#include "dyonlab/wigner.hpp"

namespace dyonlab {

namespace {

int to_twice_checked(double x, const char* what) {
  const double t = 2.0 * x;
  const double r = std::round(t);
  if (std::abs(t - r) > 1e-9) {
    throw DomainError(std::string(what) + " must be a half-integer");
  }
  return static_cast<int>(r);
}

}  // namespace

double analytic_spectrum(double mu, double alpha, double n) {
  if (!(n > 0.0)) throw DomainError("principal quantum number must be positive");
  return -mu * alpha * alpha / (2.0 * n * n);
}

std::vector<QuantumNumbers> allowed_quantum_numbers(double s, double n_max) {
  const int ts = to_twice_checked(s, "s");
  std::vector<QuantumNumbers> out;
  const int tl_min = std::abs(ts);
  for (int tl = tl_min;; tl += 2) {
    const double l = 0.5 * tl;
    if (l + 1.0 > n_max + 1e-12) break;
    const int nr_cap = static_cast<int>(std::floor(n_max - l - 1.0 + 1e-12));
    for (int nr = 0; nr <= nr_cap; ++nr) {
      for (int tm = -tl; tm <= tl; tm += 2) {
        QuantumNumbers q;
        q.twice_s = ts;
        q.twice_l = tl;
        q.twice_m = tm;
        q.n_r = nr;
        out.push_back(q);
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const QuantumNumbers& a, const QuantumNumbers& b) {
    if (a.n() != b.n()) return a.n() < b.n();
    if (a.twice_l != b.twice_l) return a.twice_l < b.twice_l;
    return a.twice_m < b.twice_m;
  });
  return out;
}

int ground_multiplet_size(double s) {
  return std::abs(to_twice_checked(s, "s")) + 1;
}

namespace {

// Number of eigenvalues of the symmetric tridiagonal (diag, off) below
// lambda, by the Sturm/LDL^T sign count.
int sturm_count(const std::vector<double>& diag, const std::vector<double>& off,
                double lambda) {
  const std::size_t n = diag.size();
  int count = 0;
  double q = diag[0] - lambda;
  if (q < 0.0) ++count;
  for (std::size_t i = 1; i < n; ++i) {
    if (q == 0.0) q = 1e-300;
    q = diag[i] - lambda - off[i - 1] * off[i - 1] / q;
    if (q < 0.0) ++count;
  }
  return count;
}

// k-th smallest eigenvalue (0-based) by bisection.
double tridiag_eigenvalue(const std::vector<double>& diag, const std::vector<double>& off,
                          int k) {
  double lo = diag[0], hi = diag[0];
  for (std::size_t i = 0; i < diag.size(); ++i) {
    const double left = i > 0 ? std::abs(off[i - 1]) : 0.0;
    const double right = i + 1 < diag.size() ? std::abs(off[i]) : 0.0;
    lo = std::min(lo, diag[i] - left - right);
    hi = std::max(hi, diag[i] + left + right);
  }
  for (int it = 0; it < 220; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (sturm_count(diag, off, mid) <= k) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 1e-15 * std::max(1.0, std::max(std::abs(lo), std::abs(hi)))) break;
  }
  return 0.5 * (lo + hi);
}

struct Discretization {
  std::vector<double> diag, off;
  double v_edge = 0.0;  // full potential at the outer boundary
};

// Flux-conservative discretization of
//   -(1/W) d/dx (P v_x) + V v = E v,  A v = E M v,  B = M^{-1/2} A M^{-1/2}
// on either a uniform r grid (x = r) or a uniform log grid (x = ln r).
Discretization discretize(const RadialProblem& problem, double centrifugal_coef,
                          const RadialGrid& grid, int nodes) {
  const bool log_grid = grid.spacing == RadialGrid::Spacing::Logarithmic;
  if (!(grid.r_min > 0.0) || !(grid.r_max > grid.r_min)) {
    throw DomainError("radial grid requires 0 < r_min < r_max");
  }
  if (nodes < 200) throw DomainError("radial grid needs at least 200 nodes");

  const double x_lo = log_grid ? std::log(grid.r_min) : grid.r_min;
  const double x_hi = log_grid ? std::log(grid.r_max) : grid.r_max;
  const double h = (x_hi - x_lo) / (nodes + 1);
  const auto r_of = [&](double x) { return log_grid ? std::exp(x) : x; };
  // P = sqrt(G) r^2 dr/dx weights; W = 2 mu G^{3/2} r^2 dr/dx.
  const auto p_of = [&](double x) {
    const double r = r_of(x);
    const double g = conformal_factor(problem.metric, r);
    return std::sqrt(g) * r * r / (log_grid ? r : 1.0);
  };
  const auto w_of = [&](double x) {
    const double r = r_of(x);
    const double g = conformal_factor(problem.metric, r);
    return 2.0 * problem.mu * g * std::sqrt(g) * r * r * (log_grid ? r : 1.0);
  };
  const auto v_of = [&](double x) {
    const double r = r_of(x);
    const double g = conformal_factor(problem.metric, r);
    return centrifugal_coef / (2.0 * problem.mu * g * r * r) + problem.potential(r);
  };

  Discretization d;
  d.diag.resize(nodes);
  d.off.resize(nodes - 1);
  std::vector<double> w(nodes);
  std::vector<double> p_half(nodes + 1);
  for (int i = 0; i <= nodes; ++i) p_half[i] = p_of(x_lo + (i + 0.5) * h);
  for (int i = 0; i < nodes; ++i) {
    const double x = x_lo + (i + 1) * h;
    w[i] = w_of(x);
    d.diag[i] = ((p_half[i] + p_half[i + 1]) / (h * h) + w[i] * v_of(x)) / w[i];
  }
  for (int i = 0; i + 1 < nodes; ++i) {
    d.off[i] = -p_half[i + 1] / (h * h * std::sqrt(w[i] * w[i + 1]));
  }
  d.v_edge = v_of(x_hi);
  return d;
}

std::vector<double> solve_lowest(const RadialProblem& problem, double centrifugal_coef,
                                 const RadialGrid& grid, int nodes, int count) {
  const Discretization d = discretize(problem, centrifugal_coef, grid, nodes);
  std::vector<double> vals(count);
  for (int k = 0; k < count; ++k) vals[k] = tridiag_eigenvalue(d.diag, d.off, k);
  // Bound-state window check against the continuum threshold at the outer
  // edge. On the hyperboloid the kinetic operator has a spectral gap of
  // 1/(2 mu r0^2) above the potential's asymptote.
  double threshold = d.v_edge;
  if (problem.metric.curvature == Curvature::Hyperboloid) {
    threshold += 1.0 / (2.0 * problem.mu * problem.metric.r0 * problem.metric.r0);
  }
  int bound = 0;
  for (const double e : vals) {
    if (e < threshold) ++bound;
  }
  if (bound < count) {
    std::ostringstream os;
    os << "only " << bound << " of " << count
       << " requested states lie below the potential at r_max; enlarge the window";
    throw InfeasibleError(os.str());
  }
  return vals;
}

}  // namespace

std::vector<EigenResult> radial_eigenvalues(const RadialProblem& problem, double l, double s,
                                            int count, const RadialGrid& grid,
                                            double convergence_tol) {
  const int tl = to_twice_checked(l, "l");
  const int ts = to_twice_checked(s, "s");
  if (tl < std::abs(ts)) throw DomainError("l >= |s| required");
  if (count < 1) throw DomainError("count must be positive");

  const double coef = l * (l + 1.0) - s * s;
  std::vector<double> vals = solve_lowest(problem, coef, grid, grid.nodes, count);
  int nodes_used = grid.nodes;
  if (convergence_tol > 0.0) {
    const std::vector<double> fine = solve_lowest(problem, coef, grid, 2 * grid.nodes, count);
    for (int k = 0; k < count; ++k) {
      if (std::abs(fine[k] - vals[k]) > convergence_tol) {
        std::ostringstream os;
        os << "grid not converged for (l = " << l << ", n_r = " << k
           << "): doubling nodes moved E by " << std::abs(fine[k] - vals[k]);
        throw ConvergenceError(os.str());
      }
    }
    vals = fine;
    nodes_used = 2 * grid.nodes;
  }

  std::vector<EigenResult> out(count);
  for (int k = 0; k < count; ++k) {
    out[k].n_r = k;
    out[k].l = l;
    out[k].degeneracy = tl + 1;
    out[k].energy = vals[k];
    out[k].grid_nodes = nodes_used;
    out[k].scheme = grid.spacing == RadialGrid::Spacing::Logarithmic ? "fd2-log" : "fd2-uniform";
  }
  return out;
}

RadialProblem radial_problem(const SystemSpec& system) {
  system.validate();
  RadialProblem p;
  p.metric = system.metric;
  p.mu = system.mu;
  p.potential = [system](double r) { return effective_potential(system, {r, 0.0, 0.0}); };
  return p;
}

SpectrumShift spectrum_shift_check(const MetricSpec& metric, const PotentialSpec& potential,
                                   double s, double mu, double l_max, int n_r_max,
                                   const RadialGrid& grid) {
  SystemSpec with;
  with.metric = metric;
  with.potential = potential;
  with.mu = mu;
  with.centers = {DyonCenter{{0, 0, 0}, s, 0.0}};
  with.replacement = ReplacementMode::OneCenter;

  SystemSpec without = with;
  without.centers[0].g = 0.0;

  const RadialProblem prob_s = radial_problem(with);
  const RadialProblem prob_0 = radial_problem(without);

  SpectrumShift shift;
  const int ts = to_twice_checked(s, "s");
  const int tl_max = to_twice_checked(l_max, "l_max");
  for (int tl = std::abs(ts); tl <= tl_max; tl += 2) {
    const double l = 0.5 * tl;
    const auto ev_s = radial_eigenvalues(prob_s, l, s, n_r_max + 1, grid);
    const auto ev_0 = radial_eigenvalues(prob_0, l, 0.0, n_r_max + 1, grid);
    for (int k = 0; k <= n_r_max; ++k) {
      shift.max_shift =
          std::max(shift.max_shift, std::abs(ev_s[k].energy - ev_0[k].energy));
      shift.with_monopole.push_back(ev_s[k]);
      shift.without_monopole.push_back(ev_0[k]);
    }
  }
  return shift;
}

double stark_ground_energy(double mu, double alpha, double s, double m,
                           double field_magnitude) {
  const int ts = to_twice_checked(s, "s");
  const int tm = to_twice_checked(m, "m");
  if (std::abs(tm) > std::abs(ts)) throw DomainError("|m| <= |s| required in the ground multiplet");
  if ((std::abs(ts) + tm) % 2 != 0) throw DomainError("m must differ from |s| by an integer");
  const double abs_s = std::abs(s);
  const double e0 = -mu * alpha * alpha / (2.0 * (abs_s + 1.0) * (abs_s + 1.0));
  const double sgn = s > 0.0 ? 1.0 : (s < 0.0 ? -1.0 : 0.0);
  return e0 + field_magnitude / (mu * std::abs(alpha)) * m * sgn * (abs_s + 1.5);
}

std::vector<double> stark_splitting_oracle(double mu, double alpha, double s,
                                           double field_magnitude) {
  const int ts = to_twice_checked(s, "s");
  const double abs_s = std::abs(s);
  const double l = abs_s;
  const double n = abs_s + 1.0;
  const double lambda = mu * std::abs(alpha) / n;

  // Nodeless hydrogenic state u(r) ~ r^{l+1} exp(-lambda r); expectation of
  // r by quadrature rather than by closed form. Scaled variable y = 2 lambda r
  // keeps the integrand O(1).
  const auto u_sq = [&](double y) { return std::pow(y, 2.0 * l + 2.0) * std::exp(-y); };
  const double y_cut = 60.0 + 10.0 * l;
  const double norm = integrate_adaptive(u_sq, 0.0, y_cut, 1e-12);
  const double r_expect =
      integrate_adaptive([&](double y) { return y * u_sq(y); }, 0.0, y_cut, 1e-12) /
      (norm * 2.0 * lambda);

  const double e0 = analytic_spectrum(mu, alpha, n);
  std::vector<double> energies;
  for (int tm = -std::abs(ts); tm <= std::abs(ts); tm += 2) {
    const double m = 0.5 * tm;
    const double cos_expect = dipole_matrix_element(s, l, m, l, m, DipoleComponent::Z);
    energies.push_back(e0 + field_magnitude * r_expect * cos_expect);
  }
  return energies;
}

namespace {

int component_mu(DipoleComponent c) {
  switch (c) {
    case DipoleComponent::Z: return 0;
    case DipoleComponent::Plus: return 1;
    case DipoleComponent::Minus: return -1;
  }
  return 0;
}

}  // namespace

double dipole_matrix_element(double s, double l, double m, double lp, double mp,
                             DipoleComponent component) {
  const int ts = to_twice_checked(s, "s");
  const int tl = to_twice_checked(l, "l");
  const int tlp = to_twice_checked(lp, "l'");
  if (tl < std::abs(ts) || tlp < std::abs(ts)) {
    throw DomainError("monopole harmonics require l, l' >= |s|");
  }
  const int mu = component_mu(component);
  // <s,l',m'| rhat_mu |s,l,m> = (-1)^{mu + m - s} sqrt((2l'+1)(2l+1))
  //   * 3j(l' 1 l; m' -mu -m) * 3j(l' 1 l; s 0 -s)
  const int tm = to_twice_checked(m, "m");
  const int phase_exp = mu + (tm - ts) / 2;
  const double phase = ((phase_exp % 2) + 2) % 2 == 0 ? 1.0 : -1.0;
  return phase * std::sqrt((2.0 * lp + 1.0) * (2.0 * l + 1.0)) *
         wigner_3j(lp, 1.0, l, mp, -static_cast<double>(mu), -m) *
         wigner_3j(lp, 1.0, l, s, 0.0, -s);
}

double dipole_matrix_element_quadrature(double s, double l, double m, double lp, double mp,
                                        DipoleComponent component, int n_theta, int n_phi) {
  const GaussRule rule = gauss_legendre(n_theta);
  const double dphi = 2.0 * std::numbers::pi / n_phi;
  const int mu = component_mu(component);
  std::complex<double> acc = 0.0;
  for (int i = 0; i < n_theta; ++i) {
    // map [-1,1] -> [0,pi]
    const double theta = 0.5 * std::numbers::pi * (rule.nodes[i] + 1.0);
    const double wt = 0.5 * std::numbers::pi * rule.weights[i] * std::sin(theta);
    for (int j = 0; j < n_phi; ++j) {
      const double phi = j * dphi;
      std::complex<double> rhat;
      if (mu == 0) {
        rhat = std::cos(theta);
      } else if (mu == 1) {
        rhat = -std::sin(theta) / std::sqrt(2.0) * std::polar(1.0, phi);
      } else {
        rhat = std::sin(theta) / std::sqrt(2.0) * std::polar(1.0, -phi);
      }
      acc += std::conj(monopole_harmonic(s, lp, mp, theta, phi)) * rhat *
             monopole_harmonic(s, l, m, theta, phi) * wt * dphi;
    }
  }
  return acc.real();
}

std::vector<Transition> selection_rule_table(double s, double l_max, double threshold) {
  const int ts = to_twice_checked(s, "s");
  const int tl_max = to_twice_checked(l_max, "l_max");
  if (tl_max < std::abs(ts)) throw DomainError("l_max >= |s| required");

  std::vector<Transition> table;
  for (int tl = std::abs(ts); tl <= tl_max; tl += 2) {
    for (int tm = -tl; tm <= tl; tm += 2) {
      for (int tlp = std::abs(ts); tlp <= tl_max; tlp += 2) {
        for (int tmp = -tlp; tmp <= tlp; tmp += 2) {
          const double l = 0.5 * tl, m = 0.5 * tm, lp = 0.5 * tlp, mp = 0.5 * tmp;
          Transition tr;
          tr.l = l;
          tr.m = m;
          tr.lp = lp;
          tr.mp = mp;
          tr.amp_z = dipole_matrix_element(s, l, m, lp, mp, DipoleComponent::Z);
          tr.amp_plus = dipole_matrix_element(s, l, m, lp, mp, DipoleComponent::Plus);
          tr.amp_minus = dipole_matrix_element(s, l, m, lp, mp, DipoleComponent::Minus);
          if (std::abs(tr.amp_z) > threshold || std::abs(tr.amp_plus) > threshold ||
              std::abs(tr.amp_minus) > threshold) {
            table.push_back(tr);
          }
        }
      }
    }
  }
  return table;
}

}  // namespace dyonlab
