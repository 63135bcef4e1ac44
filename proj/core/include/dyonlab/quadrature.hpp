#ifndef DYONLAB_QUADRATURE_HPP
#define DYONLAB_QUADRATURE_HPP

#include <functional>
#include <vector>

namespace dyonlab {

// Adaptive Simpson integration of f over [a, b] to absolute tolerance tol.
// Throws ConvergenceError with the achieved estimate if the recursion depth
// limit is hit before the tolerance is met.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double tol, int max_depth = 48);

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

// Gauss-Legendre nodes/weights, n >= 1. Computed by Newton iteration on P_n.
GaussRule gauss_legendre(int n);

}  // namespace dyonlab

#endif
