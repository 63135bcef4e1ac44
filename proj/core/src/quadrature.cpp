#include "dyonlab/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "dyonlab/error.hpp"

namespace dyonlab {

namespace {

struct SimpsonState {
  const std::function<double(double)>& f;
  int max_depth;
  double worst_err = 0.0;
  bool depth_hit = false;

  double recurse(double a, double b, double fa, double fm, double fb, double whole,
                 double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double err = (left + right - whole) / 15.0;
    if (std::abs(err) <= tol || depth >= max_depth) {
      if (depth >= max_depth && std::abs(err) > tol) {
        depth_hit = true;
        worst_err = std::max(worst_err, std::abs(err));
      }
      return left + right + err;  // Richardson correction
    }
    return recurse(a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
           recurse(m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
  }
};

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double tol, int max_depth) {
  if (a == b) return 0.0;
  SimpsonState st{f, max_depth};
  // Eight initial panels so a localized integrand cannot hide between the
  // first sample points.
  constexpr int panels = 8;
  double result = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double pa = a + (b - a) * p / panels;
    const double pb = a + (b - a) * (p + 1) / panels;
    const double fa = f(pa), fb = f(pb), fm = f(0.5 * (pa + pb));
    const double whole = (pb - pa) / 6.0 * (fa + 4.0 * fm + fb);
    result += st.recurse(pa, pb, fa, fm, fb, whole, tol / panels, 0);
  }
  if (st.depth_hit) {
    std::ostringstream os;
    os << "adaptive quadrature did not converge: requested tol " << tol
       << ", achieved " << st.worst_err;
    throw ConvergenceError(os.str());
  }
  return result;
}

GaussRule gauss_legendre(int n) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Chebyshev-based initial guess for the i-th root of P_n.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

}  // namespace dyonlab
