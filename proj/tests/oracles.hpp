#pragma once

// Test-only reference values computed along paths that share no code with the
// library evaluators: closed forms through MPFR's own constants, brute-force
// sums with integral-test brackets, and exact rational arithmetic.

#include <gmpxx.h>
#include <mpfr.h>

#include <string>

#include "zlab/ball.hpp"
#include "zlab/real.hpp"

namespace oracle {

using zlab::Ball;
using zlab::Real;

/// pi^k * num / den via mpfr_const_pi at `bits` of precision.
inline Real pi_power(int k, long num, long den, mpfr_prec_t bits) {
  Real p(bits);
  mpfr_const_pi(p.get(), MPFR_RNDN);
  mpfr_pow_ui(p.get(), p.get(), static_cast<unsigned long>(k), MPFR_RNDN);
  mpfr_mul_si(p.get(), p.get(), num, MPFR_RNDN);
  mpfr_div_si(p.get(), p.get(), den, MPFR_RNDN);
  return p;
}

/// |x.mid - v| + x.rad, an upper bound on the distance from v to any point of x.
inline double distance(const Ball& x, const Real& v) {
  Real d(std::max(x.precision(), v.precision()) + 64);
  mpfr_sub(d.get(), x.mid().get(), v.get(), MPFR_RNDN);
  mpfr_abs(d.get(), d.get(), MPFR_RNDU);
  mpfr_add(d.get(), d.get(), x.rad().get(), MPFR_RNDU);
  return d.to_double();
}

/// True if v lies within x, allowing `slack` for the oracle's own rounding.
inline bool encloses(const Ball& x, const Real& v, double slack = 0.0) {
  Real d(std::max(x.precision(), v.precision()) + 64);
  mpfr_sub(d.get(), x.mid().get(), v.get(), MPFR_RNDN);
  mpfr_abs(d.get(), d.get(), MPFR_RNDD);
  Real r(64);
  mpfr_add_d(r.get(), x.rad().get(), slack, MPFR_RNDU);
  return d <= r;
}

/// Brute-force sum_{k=from}^{to} k^-s in `bits` precision.
inline Real power_partial_sum(long from, long to, long s, mpfr_prec_t bits) {
  Real acc(bits), t(bits);
  for (long k = to; k >= from; --k) {
    mpfr_set_si(t.get(), k, MPFR_RNDN);
    mpfr_pow_si(t.get(), t.get(), -s, MPFR_RNDN);
    mpfr_add(acc.get(), acc.get(), t.get(), MPFR_RNDN);
  }
  return acc;
}

// zeta(3) = 5/2 sum_{k>=1} (-1)^(k+1) / (k^3 C(2k, k)), summed in MPFR.
inline Real apery(mpfr_prec_t bits) {
  Real acc(bits), t(bits);
  mpz_class c;
  for (unsigned long k = 1; k < static_cast<unsigned long>(bits); ++k) {
    mpz_bin_uiui(c.get_mpz_t(), 2 * k, k);
    mpz_class den = c * k * k * k;
    mpfr_set_z(t.get(), den.get_mpz_t(), MPFR_RNDN);
    mpfr_ui_div(t.get(), 1, t.get(), MPFR_RNDN);
    if (k % 2 == 1)
      mpfr_add(acc.get(), acc.get(), t.get(), MPFR_RNDN);
    else
      mpfr_sub(acc.get(), acc.get(), t.get(), MPFR_RNDN);
  }
  mpfr_mul_ui(acc.get(), acc.get(), 5, MPFR_RNDN);
  mpfr_div_2ui(acc.get(), acc.get(), 1, MPFR_RNDN);
  return acc;
}

inline double log10_of(const Real& r) {
  Real l(64);
  mpfr_abs(l.get(), r.get(), MPFR_RNDN);
  mpfr_log10(l.get(), l.get(), MPFR_RNDN);
  return l.to_double();
}

inline Ball ball_of(long v, mpfr_prec_t prec) { return Ball::from_int(v, prec); }

}  // namespace oracle
