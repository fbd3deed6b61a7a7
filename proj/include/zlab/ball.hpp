#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <string>

#include "zlab/real.hpp"

namespace zlab {

/// Midpoint-radius interval. The midpoint carries the working precision; the
/// radius is a 64-bit upper bound. Every operation below returns a ball that
/// contains the exact result whenever the inputs contain theirs.
class Ball {
 public:
  explicit Ball(mpfr_prec_t prec = 64) : mid_(prec), rad_(64) {}
  Ball(Real mid, Real rad);

  static Ball from_int(long value, mpfr_prec_t prec);
  static Ball from_ratio(long num, long den, mpfr_prec_t prec);
  static Ball from_rational(const mpq_class& q, mpfr_prec_t prec);
  /// Accepts integers, decimals with optional exponent, and p/q fractions.
  static Ball parse(const std::string& text, mpfr_prec_t prec);
  static Ball pi(mpfr_prec_t prec);

  const Real& mid() const { return mid_; }
  const Real& rad() const { return rad_; }
  mpfr_prec_t precision() const { return mid_.precision(); }

  Real lower() const;  ///< mid - rad, rounded down
  Real upper() const;  ///< mid + rad, rounded up
  Real mag() const;    ///< upper bound on |x|
  Real mig() const;    ///< lower bound on |x|, zero if the ball straddles 0

  bool is_exact() const { return rad_.is_zero(); }
  bool is_finite() const { return mid_.is_finite() && rad_.is_finite(); }
  bool contains_zero() const;
  bool is_positive() const;  ///< whole interval strictly above 0
  /// True if `inner` lies inside this ball.
  bool contains(const Ball& inner) const;
  bool overlaps(const Ball& other) const;

  /// Widens the radius by `err` (rounded up).
  Ball& add_error(const Real& err);
  /// Same value at a different midpoint precision (rounding folded into rad).
  Ball with_precision(mpfr_prec_t prec) const;

  double to_double() const { return mid_.to_double(); }
  /// "<mid> +/- <rad>" with `digits` significant digits on the midpoint.
  std::string to_string(int digits) const;

  Ball& operator+=(const Ball& other);
  Ball& operator-=(const Ball& other);
  Ball& operator*=(const Ball& other);
  Ball& operator/=(const Ball& other);

  friend Ball operator+(Ball a, const Ball& b) { return a += b; }
  friend Ball operator-(Ball a, const Ball& b) { return a -= b; }
  friend Ball operator*(Ball a, const Ball& b) { return a *= b; }
  friend Ball operator/(Ball a, const Ball& b) { return a /= b; }
  friend Ball operator-(const Ball& a);

  Ball& mul_si(long k);
  Ball& div_si(long k);
  Ball& add_si(long k);
  /// Exact scaling by 2^e.
  Ball& mul_2exp(long e);

  /// Fused `this += a * b`, the inner kernel of every long summation.
  Ball& addmul(const Ball& a, const Ball& b);

 private:
  Real mid_;
  Real rad_;
};

Ball exp(const Ball& x);
Ball expm1(const Ball& x);
/// Requires a strictly positive interval.
Ball log(const Ball& x);
/// base^exponent for a strictly positive base.
Ball pow(const Ball& base, const Ball& exponent);
Ball pow_int(const Ball& base, long k);
Ball abs(const Ball& x);

enum class BallOp { add, sub, mul, div, pow_int, exp, log };

/// Checked arithmetic dispatch. Unary operations ignore `b`; pow_int reads
/// its exponent from `b`, which must be an exact integer. Throws DomainError
/// for a divisor ball containing zero or a non-positive log argument, and
/// PrecisionExhausted when the result radius exceeds |midpoint|.
Ball ball_arith(const Ball& a, const Ball& b, BallOp op);

}  // namespace zlab
