#include "dyonlab/nbody.hpp"

#include <cmath>
#include <sstream>

#include "dyonlab/error.hpp"

namespace dyonlab {

NBodyDerivatives nbody_equations_of_motion(const NBodySpec& spec,
                                           const NBodyPhaseState& state) {
  const int n = spec.count();
  NBodyDerivatives d;
  d.xdot = state.pi;  // unit masses
  d.pidot.assign(n, Vec3{});

  // Phi_I = sum_{J != I} s_IJ / r_IJ enters both the potential gradient and
  // the energy; precompute once.
  std::vector<double> phi(n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const double rij = norm(state.x[i] - state.x[j]);
      if (rij < spec.delta_min) throw ProximityError("particles closer than delta_min");
      phi[i] += spec.s(i, j) / rij;
    }
  }

  for (int i = 0; i < n; ++i) {
    Vec3 force = -spec.omega * spec.omega * state.x[i];
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const Vec3 dij = state.x[i] - state.x[j];
      const double rij = norm(dij);
      const double inv3 = 1.0 / (rij * rij * rij);
      const double sij = spec.s(i, j);
      // -grad_I of (1/2) sum_L Phi_L^2: the I-row and the L != I rows.
      force += (phi[i] - phi[j]) * sij * inv3 * dij;
      // pairwise magnetic force
      force += sij * inv3 * cross(dij, d.xdot[i] - d.xdot[j]);
    }
    d.pidot[i] = force;
  }
  return d;
}

NBodyTrajectory integrate_nbody(const NBodySpec& spec, const NBodyPhaseState& state0, double h,
                                double t_end, int output_stride) {
  spec.validate();
  if (!(h > 0.0) || !(t_end > 0.0)) throw DomainError("h and t_end must be positive");
  const int n = spec.count();
  if (static_cast<int>(state0.x.size()) != n || static_cast<int>(state0.pi.size()) != n) {
    throw DomainError("initial state size mismatch with spec");
  }

  NBodyTrajectory rec;
  rec.step = h;
  const long n_steps = std::lround(t_end / h);
  const int stride = std::max(1, output_stride);

  NBodyPhaseState st = state0;
  rec.times.push_back(0.0);
  rec.states.push_back(st);

  const auto axpy = [n](const NBodyPhaseState& a, double c, const NBodyDerivatives& d) {
    NBodyPhaseState out = a;
    for (int i = 0; i < n; ++i) {
      out.x[i] += c * d.xdot[i];
      out.pi[i] += c * d.pidot[i];
    }
    return out;
  };

  for (long k = 1; k <= n_steps; ++k) {
    try {
      const NBodyDerivatives k1 = nbody_equations_of_motion(spec, st);
      const NBodyDerivatives k2 = nbody_equations_of_motion(spec, axpy(st, 0.5 * h, k1));
      const NBodyDerivatives k3 = nbody_equations_of_motion(spec, axpy(st, 0.5 * h, k2));
      const NBodyDerivatives k4 = nbody_equations_of_motion(spec, axpy(st, h, k3));
      for (int i = 0; i < n; ++i) {
        st.x[i] += h / 6.0 * (k1.xdot[i] + 2.0 * k2.xdot[i] + 2.0 * k3.xdot[i] + k4.xdot[i]);
        st.pi[i] +=
            h / 6.0 * (k1.pidot[i] + 2.0 * k2.pidot[i] + 2.0 * k3.pidot[i] + k4.pidot[i]);
      }
    } catch (const Error& e) {
      rec.aborted = true;
      rec.diagnostic = e.what();
      return rec;
    }
    if (k % stride == 0 || k == n_steps) {
      rec.times.push_back(k * h);
      rec.states.push_back(st);
    }
  }
  return rec;
}

}  // namespace dyonlab
