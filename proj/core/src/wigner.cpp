#include "dyonlab/wigner.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "dyonlab/error.hpp"

namespace dyonlab {

namespace {

// Minimal unsigned big integer, base 2^32, enough for products of factorials
// in the Racah sum. Only the operations the 3j evaluation needs.
class BigUInt {
 public:
  BigUInt() = default;
  explicit BigUInt(std::uint64_t v) {
    while (v != 0) {
      limbs_.push_back(static_cast<std::uint32_t>(v));
      v >>= 32;
    }
  }

  bool is_zero() const { return limbs_.empty(); }

  void mul_small(std::uint32_t m) {
    if (m == 0) {
      limbs_.clear();
      return;
    }
    std::uint64_t carry = 0;
    for (auto& limb : limbs_) {
      const std::uint64_t p = static_cast<std::uint64_t>(limb) * m + carry;
      limb = static_cast<std::uint32_t>(p);
      carry = p >> 32;
    }
    while (carry != 0) {
      limbs_.push_back(static_cast<std::uint32_t>(carry));
      carry >>= 32;
    }
  }

  static BigUInt mul(const BigUInt& a, const BigUInt& b) {
    BigUInt r;
    if (a.is_zero() || b.is_zero()) return r;
    r.limbs_.assign(a.limbs_.size() + b.limbs_.size(), 0);
    for (std::size_t i = 0; i < a.limbs_.size(); ++i) {
      std::uint64_t carry = 0;
      for (std::size_t j = 0; j < b.limbs_.size(); ++j) {
        const std::uint64_t p = static_cast<std::uint64_t>(a.limbs_[i]) * b.limbs_[j] +
                                r.limbs_[i + j] + carry;
        r.limbs_[i + j] = static_cast<std::uint32_t>(p);
        carry = p >> 32;
      }
      std::size_t k = i + b.limbs_.size();
      while (carry != 0) {
        const std::uint64_t p = static_cast<std::uint64_t>(r.limbs_[k]) + carry;
        r.limbs_[k] = static_cast<std::uint32_t>(p);
        carry = p >> 32;
        ++k;
      }
    }
    r.trim();
    return r;
  }

  static BigUInt add(const BigUInt& a, const BigUInt& b) {
    BigUInt r;
    const std::size_t n = std::max(a.limbs_.size(), b.limbs_.size());
    r.limbs_.resize(n, 0);
    std::uint64_t carry = 0;
    for (std::size_t i = 0; i < n; ++i) {
      std::uint64_t s = carry;
      if (i < a.limbs_.size()) s += a.limbs_[i];
      if (i < b.limbs_.size()) s += b.limbs_[i];
      r.limbs_[i] = static_cast<std::uint32_t>(s);
      carry = s >> 32;
    }
    if (carry != 0) r.limbs_.push_back(static_cast<std::uint32_t>(carry));
    return r;
  }

  // Requires a >= b.
  static BigUInt sub(const BigUInt& a, const BigUInt& b) {
    BigUInt r;
    r.limbs_ = a.limbs_;
    std::int64_t borrow = 0;
    for (std::size_t i = 0; i < r.limbs_.size(); ++i) {
      std::int64_t s = static_cast<std::int64_t>(r.limbs_[i]) - borrow -
                       (i < b.limbs_.size() ? b.limbs_[i] : 0);
      borrow = 0;
      if (s < 0) {
        s += (std::int64_t{1} << 32);
        borrow = 1;
      }
      r.limbs_[i] = static_cast<std::uint32_t>(s);
    }
    r.trim();
    return r;
  }

  // -1, 0, +1 of a - b.
  static int cmp(const BigUInt& a, const BigUInt& b) {
    if (a.limbs_.size() != b.limbs_.size()) {
      return a.limbs_.size() < b.limbs_.size() ? -1 : 1;
    }
    for (std::size_t i = a.limbs_.size(); i-- > 0;) {
      if (a.limbs_[i] != b.limbs_[i]) return a.limbs_[i] < b.limbs_[i] ? -1 : 1;
    }
    return 0;
  }

  double to_double() const {
    double v = 0.0;
    for (std::size_t i = limbs_.size(); i-- > 0;) {
      v = v * 4294967296.0 + limbs_[i];
    }
    return v;
  }

 private:
  void trim() {
    while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
  }
  std::vector<std::uint32_t> limbs_;
};

// Signed accumulator over BigUInt magnitudes.
struct BigInt {
  int sign = 0;  // -1, 0, +1
  BigUInt mag;

  static BigInt from(const BigUInt& m, int s) {
    BigInt r;
    r.mag = m;
    r.sign = m.is_zero() ? 0 : s;
    return r;
  }

  void accumulate(const BigUInt& term, int term_sign) {
    if (term.is_zero()) return;
    if (sign == 0) {
      mag = term;
      sign = term_sign;
      return;
    }
    if (sign == term_sign) {
      mag = BigUInt::add(mag, term);
      return;
    }
    const int c = BigUInt::cmp(mag, term);
    if (c == 0) {
      mag = BigUInt();
      sign = 0;
    } else if (c > 0) {
      mag = BigUInt::sub(mag, term);
    } else {
      mag = BigUInt::sub(term, mag);
      sign = term_sign;
    }
  }

  double to_double() const { return sign * mag.to_double(); }
};

BigUInt factorial_big(int n) {
  BigUInt r(1);
  for (int k = 2; k <= n; ++k) r.mul_small(static_cast<std::uint32_t>(k));
  return r;
}

// n (n-1) ... (n-k+1), exact.
BigUInt falling_factorial_big(int n, int k) {
  BigUInt r(1);
  for (int i = 0; i < k; ++i) r.mul_small(static_cast<std::uint32_t>(n - i));
  return r;
}

int to_twice(double x, const char* what) {
  const double t = 2.0 * x;
  const double r = std::round(t);
  if (std::abs(t - r) > 1e-9) {
    throw DomainError(std::string(what) + " must be a half-integer");
  }
  return static_cast<int>(r);
}

double factorial_d(int n) {
  double r = 1.0;
  for (int k = 2; k <= n; ++k) r *= k;
  return r;
}

}  // namespace

double wigner_3j(double j1, double j2, double j3, double m1, double m2, double m3) {
  const int tj1 = to_twice(j1, "j1"), tj2 = to_twice(j2, "j2"), tj3 = to_twice(j3, "j3");
  const int tm1 = to_twice(m1, "m1"), tm2 = to_twice(m2, "m2"), tm3 = to_twice(m3, "m3");

  if (tj1 < 0 || tj2 < 0 || tj3 < 0) return 0.0;
  if (tm1 + tm2 + tm3 != 0) return 0.0;
  if (std::abs(tm1) > tj1 || std::abs(tm2) > tj2 || std::abs(tm3) > tj3) return 0.0;
  // m must step from -j in integers
  if ((tj1 + tm1) % 2 != 0 || (tj2 + tm2) % 2 != 0 || (tj3 + tm3) % 2 != 0) return 0.0;
  // triangle rule, integer perimeter
  if ((tj1 + tj2 + tj3) % 2 != 0) return 0.0;
  const int a1 = (tj1 + tj2 - tj3) / 2;
  const int a2 = (tj1 - tj2 + tj3) / 2;
  const int a3 = (-tj1 + tj2 + tj3) / 2;
  if (a1 < 0 || a2 < 0 || a3 < 0) return 0.0;

  const int j1m1 = (tj1 - tm1) / 2, j1p1 = (tj1 + tm1) / 2;
  const int j2m2 = (tj2 - tm2) / 2, j2p2 = (tj2 + tm2) / 2;
  const int j3m3 = (tj3 - tm3) / 2, j3p3 = (tj3 + tm3) / 2;

  const int b1 = (tj3 - tj2 + tm1) / 2;  // j3 - j2 + m1
  const int b2 = (tj3 - tj1 - tm2) / 2;  // j3 - j1 - m2
  const int k_min = std::max({0, -b1, -b2});
  const int k_max = std::min({a1, j1m1, j2p2});
  if (k_min > k_max) return 0.0;

  // Racah sum S = sum_k (-1)^k / [k! (a1-k)! (j1-m1-k)! (j2+m2-k)! (b1+k)! (b2+k)!],
  // taken over the common denominator
  //   D = k_max! a1! (j1-m1)! (j2+m2)! (b1+k_max)! (b2+k_max)!
  // so each term becomes an exact product of falling factorials.
  BigInt numerator;
  for (int k = k_min; k <= k_max; ++k) {
    BigUInt term = falling_factorial_big(k_max, k_max - k);          // k_max!/k!
    term = BigUInt::mul(term, falling_factorial_big(a1, k));         // a1!/(a1-k)!
    term = BigUInt::mul(term, falling_factorial_big(j1m1, k));       // (j1-m1)!/(j1-m1-k)!
    term = BigUInt::mul(term, falling_factorial_big(j2p2, k));       // (j2+m2)!/(j2+m2-k)!
    term = BigUInt::mul(term, falling_factorial_big(b1 + k_max, k_max - k));
    term = BigUInt::mul(term, falling_factorial_big(b2 + k_max, k_max - k));
    numerator.accumulate(term, k % 2 == 0 ? 1 : -1);
  }
  if (numerator.sign == 0) return 0.0;

  BigUInt denom = factorial_big(k_max);
  denom = BigUInt::mul(denom, factorial_big(a1));
  denom = BigUInt::mul(denom, factorial_big(j1m1));
  denom = BigUInt::mul(denom, factorial_big(j2p2));
  denom = BigUInt::mul(denom, factorial_big(b1 + k_max));
  denom = BigUInt::mul(denom, factorial_big(b2 + k_max));

  // sqrt factor: Delta(j1 j2 j3) * prod_i (j_i + m_i)! (j_i - m_i)!
  BigUInt rad_num = factorial_big(a1);
  rad_num = BigUInt::mul(rad_num, factorial_big(a2));
  rad_num = BigUInt::mul(rad_num, factorial_big(a3));
  rad_num = BigUInt::mul(rad_num, factorial_big(j1p1));
  rad_num = BigUInt::mul(rad_num, factorial_big(j1m1));
  rad_num = BigUInt::mul(rad_num, factorial_big(j2p2));
  rad_num = BigUInt::mul(rad_num, factorial_big(j2m2));
  rad_num = BigUInt::mul(rad_num, factorial_big(j3p3));
  rad_num = BigUInt::mul(rad_num, factorial_big(j3m3));
  const BigUInt rad_den = factorial_big((tj1 + tj2 + tj3) / 2 + 1);

  // overall phase (-1)^(j1 - j2 - m3)
  const int phase_twice = tj1 - tj2 - tm3;
  const int phase = (phase_twice / 2) % 2 == 0 ? 1 : -1;

  const double sum = numerator.to_double() / denom.to_double();
  const double radical = std::sqrt(rad_num.to_double() / rad_den.to_double());
  return phase * sum * radical;
}

double wigner_small_d(double j, double ma, double mb, double beta) {
  const int tj = to_twice(j, "j");
  const int ta = to_twice(ma, "ma");
  const int tb = to_twice(mb, "mb");
  if (std::abs(ta) > tj || std::abs(tb) > tj) return 0.0;
  if ((tj + ta) % 2 != 0 || (tj + tb) % 2 != 0) return 0.0;

  const int jpa = (tj + ta) / 2, jma = (tj - ta) / 2;
  const int jpb = (tj + tb) / 2, jmb = (tj - tb) / 2;
  const int amb = (ta - tb) / 2;  // ma - mb

  const double pref = std::sqrt(factorial_d(jpa) * factorial_d(jma) * factorial_d(jpb) *
                                factorial_d(jmb));
  const double c = std::cos(0.5 * beta);
  const double s = std::sin(0.5 * beta);

  const int k_min = std::max(0, -amb);
  const int k_max = std::min(jpb, jma);
  double sum = 0.0;
  for (int k = k_min; k <= k_max; ++k) {
    const int c_pow = jpb + jma - 2 * k;  // 2j + m - m' - 2k
    const int s_pow = 2 * k + amb;
    const double denom = factorial_d(k) * factorial_d(jpb - k) * factorial_d(jma - k) *
                         factorial_d(amb + k);
    const double term = std::pow(c, c_pow) * std::pow(s, s_pow) / denom;
    sum += (k % 2 == 0 ? term : -term);
  }
  // (-sin)^{m'-m+2k} in the Wigner formula contributes (-1)^(m'-m).
  const int phase = ((amb % 2) + 2) % 2 == 0 ? 1 : -1;
  return pref * sum * phase;
}

std::complex<double> monopole_harmonic(double q, double l, double m, double theta, double phi) {
  const int tl = to_twice(l, "l");
  const int tq = to_twice(q, "q");
  const int tm = to_twice(m, "m");
  if (tl < std::abs(tq)) throw DomainError("monopole harmonic requires l >= |q|");
  if (std::abs(tm) > tl) throw DomainError("monopole harmonic requires |m| <= l");
  const double nrm = std::sqrt((tl + 1.0) / (4.0 * std::numbers::pi));
  const double d = wigner_small_d(l, m, q, theta);
  return std::polar(nrm * d, m * phi);
}

}  // namespace dyonlab
