#ifndef DYONLAB_NBODY_HPP
#define DYONLAB_NBODY_HPP

#include <string>
#include <vector>

#include "dyonlab/model.hpp"
#include "dyonlab/vec3.hpp"

namespace dyonlab {

struct NBodyPhaseState {
  std::vector<Vec3> x;
  std::vector<Vec3> pi;
};

struct NBodyDerivatives {
  std::vector<Vec3> xdot;
  std::vector<Vec3> pidot;
};

// Gauge-free equations of motion for N interacting dyons:
//   xdot_I = pi_I,
//   pidot_I = -grad_I V + sum_{J != I} s_IJ d_IJ x (xdot_I - xdot_J) / r_IJ^3,
// with V the pairwise-product inverse-square potential plus the trap. The
// two-particle reduction reproduces the one-center twisted bracket with
// monopole number s_12 and reduced mass 1/2.
NBodyDerivatives nbody_equations_of_motion(const NBodySpec& spec, const NBodyPhaseState& state);

struct NBodyTrajectory {
  std::vector<double> times;
  std::vector<NBodyPhaseState> states;
  double step = 0.0;
  bool aborted = false;
  std::string diagnostic;
};

// Fixed-step RK4 with a pairwise proximity guard; aborts with a partial
// trajectory on close encounters.
NBodyTrajectory integrate_nbody(const NBodySpec& spec, const NBodyPhaseState& state0, double h,
                                double t_end, int output_stride = 1);

}  // namespace dyonlab

#endif
