#ifndef DYONLAB_WIGNER_HPP
#define DYONLAB_WIGNER_HPP

#include <complex>

namespace dyonlab {

// Wigner 3j symbol, half-integer arguments. Evaluated with the Racah sum
// over exact big-integer factorial arithmetic, converted to double at the
// end. Out-of-domain argument combinations (triangle rule, m ranges,
// m1+m2+m3 != 0) return 0. Non-half-integer input throws DomainError.
double wigner_3j(double j1, double j2, double j3, double m1, double m2, double m3);

// Wigner small-d matrix element d^j_{ma,mb}(beta), half-integer arguments.
double wigner_small_d(double j, double ma, double mb, double beta);

// Monopole (spin-weighted spherical) harmonic for monopole number q:
//   Y_{q,l,m}(theta, phi) = sqrt((2l+1)/4pi) e^{i m phi} d^l_{m,q}(theta),
// oriented so <cos theta> = q m / (l (l+1)). Reduces to the ordinary Y_{lm}
// for q = 0. Requires l >= |q|, l >= |m|.
std::complex<double> monopole_harmonic(double q, double l, double m, double theta, double phi);

}  // namespace dyonlab

#endif
