#include "zlab/ball.hpp"

#include <algorithm>
#include <string>

#include "zlab/errors.hpp"

namespace zlab {
namespace {

constexpr mpfr_prec_t kRadPrec = 64;

// After a round-to-nearest operation with ternary value `t`, the error is
// below one ulp of the stored midpoint.
void add_rounding_error(mpfr_ptr rad, mpfr_srcptr mid, int t) {
  if (t == 0) return;
  MPFR_DECL_INIT(u, kRadPrec);
  if (mpfr_zero_p(mid) || !mpfr_number_p(mid)) {
    mpfr_set_ui_2exp(u, 1, mpfr_get_emin(), MPFR_RNDU);
  } else {
    mpfr_set_ui_2exp(u, 1, mpfr_get_exp(mid) - mpfr_get_prec(mid), MPFR_RNDU);
  }
  mpfr_add(rad, rad, u, MPFR_RNDU);
}

void raise_precision(Real& r, mpfr_prec_t prec) {
  if (r.precision() < prec) mpfr_prec_round(r.get(), prec, MPFR_RNDN);
}

}  // namespace

Ball::Ball(Real mid, Real rad) : mid_(std::move(mid)), rad_(kRadPrec) {
  mpfr_abs(rad_.get(), rad.get(), MPFR_RNDU);
}

Ball Ball::from_int(long value, mpfr_prec_t prec) {
  Ball b(std::max<mpfr_prec_t>(prec, 64));
  mpfr_set_si(b.mid_.get(), value, MPFR_RNDN);
  return b;
}

Ball Ball::from_ratio(long num, long den, mpfr_prec_t prec) {
  if (den == 0) throw DomainError("zero denominator");
  return from_rational(mpq_class(num, den), prec);
}

Ball Ball::from_rational(const mpq_class& q, mpfr_prec_t prec) {
  mpq_class c(q);
  c.canonicalize();
  Ball b(prec);
  const int t = mpfr_set_q(b.mid_.get(), c.get_mpq_t(), MPFR_RNDN);
  add_rounding_error(b.rad_.get(), b.mid_.get(), t);
  return b;
}

Ball Ball::parse(const std::string& text, mpfr_prec_t prec) {
  const auto slash = text.find('/');
  if (slash != std::string::npos) {
    mpz_class num, den;
    if (num.set_str(text.substr(0, slash), 10) != 0 || den.set_str(text.substr(slash + 1), 10) != 0 ||
        den == 0) {
      throw DomainError("not a fraction: '" + text + "'");
    }
    return from_rational(mpq_class(num, den), prec);
  }
  Ball b(prec);
  if (text.empty()) throw DomainError("empty number");
  const int t = mpfr_strtofr(b.mid_.get(), text.c_str(), nullptr, 10, MPFR_RNDN);
  Real check(prec);
  if (mpfr_set_str(check.get(), text.c_str(), 10, MPFR_RNDN) != 0) {
    throw DomainError("not a number: '" + text + "'");
  }
  add_rounding_error(b.rad_.get(), b.mid_.get(), t);
  return b;
}

Ball Ball::pi(mpfr_prec_t prec) {
  Ball b(prec);
  const int t = mpfr_const_pi(b.mid_.get(), MPFR_RNDN);
  add_rounding_error(b.rad_.get(), b.mid_.get(), t);
  return b;
}

Real Ball::lower() const {
  Real r(mid_.precision() + kRadPrec);
  mpfr_sub(r.get(), mid_.get(), rad_.get(), MPFR_RNDD);
  return r;
}

Real Ball::upper() const {
  Real r(mid_.precision() + kRadPrec);
  mpfr_add(r.get(), mid_.get(), rad_.get(), MPFR_RNDU);
  return r;
}

Real Ball::mag() const {
  Real r(kRadPrec);
  mpfr_abs(r.get(), mid_.get(), MPFR_RNDU);
  mpfr_add(r.get(), r.get(), rad_.get(), MPFR_RNDU);
  return r;
}

Real Ball::mig() const {
  Real r(kRadPrec);
  Real a(mid_.precision());
  mpfr_abs(a.get(), mid_.get(), MPFR_RNDN);
  mpfr_sub(r.get(), a.get(), rad_.get(), MPFR_RNDD);
  if (r.sign() < 0) mpfr_set_zero(r.get(), 1);
  return r;
}

bool Ball::contains_zero() const { return mig().is_zero(); }

bool Ball::is_positive() const { return lower().sign() > 0; }

bool Ball::contains(const Ball& inner) const {
  return lower() <= inner.lower() && inner.upper() <= upper();
}

bool Ball::overlaps(const Ball& other) const {
  return lower() <= other.upper() && other.lower() <= upper();
}

Ball& Ball::add_error(const Real& err) {
  Real e(kRadPrec);
  mpfr_abs(e.get(), err.get(), MPFR_RNDU);
  mpfr_add(rad_.get(), rad_.get(), e.get(), MPFR_RNDU);
  return *this;
}

Ball Ball::with_precision(mpfr_prec_t prec) const {
  Ball b(prec);
  const int t = mpfr_set(b.mid_.get(), mid_.get(), MPFR_RNDN);
  mpfr_set(b.rad_.get(), rad_.get(), MPFR_RNDU);
  add_rounding_error(b.rad_.get(), b.mid_.get(), t);
  return b;
}

std::string Ball::to_string(int digits) const {
  return mid_.to_string(digits) + " +/- " + rad_.to_string(3, MPFR_RNDU);
}

Ball& Ball::operator+=(const Ball& other) {
  raise_precision(mid_, other.precision());
  const int t = mpfr_add(mid_.get(), mid_.get(), other.mid_.get(), MPFR_RNDN);
  mpfr_add(rad_.get(), rad_.get(), other.rad_.get(), MPFR_RNDU);
  add_rounding_error(rad_.get(), mid_.get(), t);
  return *this;
}

Ball& Ball::operator-=(const Ball& other) {
  raise_precision(mid_, other.precision());
  const int t = mpfr_sub(mid_.get(), mid_.get(), other.mid_.get(), MPFR_RNDN);
  mpfr_add(rad_.get(), rad_.get(), other.rad_.get(), MPFR_RNDU);
  add_rounding_error(rad_.get(), mid_.get(), t);
  return *this;
}

Ball& Ball::operator*=(const Ball& other) {
  raise_precision(mid_, other.precision());
  MPFR_DECL_INIT(prop, kRadPrec);
  mpfr_set_zero(prop, 1);
  if (!rad_.is_zero() || !other.rad_.is_zero()) {
    MPFR_DECL_INIT(t1, kRadPrec);
    MPFR_DECL_INIT(t2, kRadPrec);
    mpfr_abs(t1, mid_.get(), MPFR_RNDU);
    mpfr_mul(prop, t1, other.rad_.get(), MPFR_RNDU);
    mpfr_abs(t2, other.mid_.get(), MPFR_RNDU);
    mpfr_mul(t2, t2, rad_.get(), MPFR_RNDU);
    mpfr_add(prop, prop, t2, MPFR_RNDU);
    mpfr_mul(t1, rad_.get(), other.rad_.get(), MPFR_RNDU);
    mpfr_add(prop, prop, t1, MPFR_RNDU);
  }
  const int t = mpfr_mul(mid_.get(), mid_.get(), other.mid_.get(), MPFR_RNDN);
  mpfr_set(rad_.get(), prop, MPFR_RNDU);
  add_rounding_error(rad_.get(), mid_.get(), t);
  return *this;
}

Ball& Ball::operator/=(const Ball& other) {
  const Real den_low = other.mig();
  if (den_low.is_zero()) throw DomainError("division by a ball containing zero");
  raise_precision(mid_, other.precision());
  MPFR_DECL_INIT(prop, kRadPrec);
  mpfr_set_zero(prop, 1);
  if (!rad_.is_zero() || !other.rad_.is_zero()) {
    // |a/b - am/bm| <= (|am| rb + |bm| ra) / (|bm| (|bm| - rb))
    MPFR_DECL_INIT(t1, kRadPrec);
    MPFR_DECL_INIT(t2, kRadPrec);
    MPFR_DECL_INIT(d, kRadPrec);
    mpfr_abs(t1, mid_.get(), MPFR_RNDU);
    mpfr_mul(prop, t1, other.rad_.get(), MPFR_RNDU);
    mpfr_abs(t2, other.mid_.get(), MPFR_RNDU);
    mpfr_mul(t2, t2, rad_.get(), MPFR_RNDU);
    mpfr_add(prop, prop, t2, MPFR_RNDU);
    mpfr_abs(d, other.mid_.get(), MPFR_RNDD);
    mpfr_mul(d, d, den_low.get(), MPFR_RNDD);
    mpfr_div(prop, prop, d, MPFR_RNDU);
  }
  const int t = mpfr_div(mid_.get(), mid_.get(), other.mid_.get(), MPFR_RNDN);
  mpfr_set(rad_.get(), prop, MPFR_RNDU);
  add_rounding_error(rad_.get(), mid_.get(), t);
  return *this;
}

Ball operator-(const Ball& a) {
  Ball r(a);
  mpfr_neg(r.mid_.get(), r.mid_.get(), MPFR_RNDN);
  return r;
}

Ball& Ball::mul_si(long k) {
  const int t = mpfr_mul_si(mid_.get(), mid_.get(), k, MPFR_RNDN);
  mpfr_mul_ui(rad_.get(), rad_.get(), static_cast<unsigned long>(k < 0 ? -k : k), MPFR_RNDU);
  add_rounding_error(rad_.get(), mid_.get(), t);
  return *this;
}

Ball& Ball::div_si(long k) {
  if (k == 0) throw DomainError("division by zero");
  const int t = mpfr_div_si(mid_.get(), mid_.get(), k, MPFR_RNDN);
  mpfr_div_ui(rad_.get(), rad_.get(), static_cast<unsigned long>(k < 0 ? -k : k), MPFR_RNDU);
  add_rounding_error(rad_.get(), mid_.get(), t);
  return *this;
}

Ball& Ball::add_si(long k) {
  const int t = mpfr_add_si(mid_.get(), mid_.get(), k, MPFR_RNDN);
  add_rounding_error(rad_.get(), mid_.get(), t);
  return *this;
}

Ball& Ball::mul_2exp(long e) {
  mpfr_mul_2si(mid_.get(), mid_.get(), e, MPFR_RNDN);
  mpfr_mul_2si(rad_.get(), rad_.get(), e, MPFR_RNDU);
  return *this;
}

Ball& Ball::addmul(const Ball& a, const Ball& b) {
  raise_precision(mid_, std::max(a.precision(), b.precision()));
  if (!a.rad_.is_zero() || !b.rad_.is_zero()) {
    MPFR_DECL_INIT(t1, kRadPrec);
    MPFR_DECL_INIT(t2, kRadPrec);
    mpfr_abs(t1, a.mid_.get(), MPFR_RNDU);
    mpfr_mul(t1, t1, b.rad_.get(), MPFR_RNDU);
    mpfr_add(rad_.get(), rad_.get(), t1, MPFR_RNDU);
    mpfr_abs(t2, b.mid_.get(), MPFR_RNDU);
    mpfr_mul(t2, t2, a.rad_.get(), MPFR_RNDU);
    mpfr_add(rad_.get(), rad_.get(), t2, MPFR_RNDU);
    mpfr_mul(t1, a.rad_.get(), b.rad_.get(), MPFR_RNDU);
    mpfr_add(rad_.get(), rad_.get(), t1, MPFR_RNDU);
  }
  const int t = mpfr_fma(mid_.get(), a.mid_.get(), b.mid_.get(), mid_.get(), MPFR_RNDN);
  add_rounding_error(rad_.get(), mid_.get(), t);
  return *this;
}

Ball exp(const Ball& x) {
  Ball r(x.precision());
  Real mid(x.precision());
  const int t = mpfr_exp(mid.get(), x.mid().get(), MPFR_RNDN);
  Real rad(kRadPrec);
  if (!x.is_exact()) {
    // |e^(m+d) - e^m| <= e^m (e^r - 1)
    MPFR_DECL_INIT(em, kRadPrec);
    mpfr_exp(em, x.mid().get(), MPFR_RNDU);
    mpfr_expm1(rad.get(), x.rad().get(), MPFR_RNDU);
    mpfr_mul(rad.get(), rad.get(), em, MPFR_RNDU);
  }
  add_rounding_error(rad.get(), mid.get(), t);
  return Ball(std::move(mid), std::move(rad));
}

Ball expm1(const Ball& x) {
  Real mid(x.precision());
  const int t = mpfr_expm1(mid.get(), x.mid().get(), MPFR_RNDN);
  Real rad(kRadPrec);
  if (!x.is_exact()) {
    MPFR_DECL_INIT(em, kRadPrec);
    mpfr_exp(em, x.mid().get(), MPFR_RNDU);
    mpfr_expm1(rad.get(), x.rad().get(), MPFR_RNDU);
    mpfr_mul(rad.get(), rad.get(), em, MPFR_RNDU);
  }
  add_rounding_error(rad.get(), mid.get(), t);
  return Ball(std::move(mid), std::move(rad));
}

Ball log(const Ball& x) {
  Real low(kRadPrec);
  mpfr_sub(low.get(), x.mid().get(), x.rad().get(), MPFR_RNDD);
  if (low.sign() <= 0) throw DomainError("log of a ball that is not strictly positive");
  Real mid(x.precision());
  const int t = mpfr_log(mid.get(), x.mid().get(), MPFR_RNDN);
  Real rad(kRadPrec);
  if (!x.is_exact()) mpfr_div(rad.get(), x.rad().get(), low.get(), MPFR_RNDU);
  add_rounding_error(rad.get(), mid.get(), t);
  return Ball(std::move(mid), std::move(rad));
}

Ball pow(const Ball& base, const Ball& exponent) {
  if (!base.is_positive()) throw DomainError("pow requires a strictly positive base");
  if (base.is_exact() && exponent.is_exact()) {
    Real mid(std::max(base.precision(), exponent.precision()));
    const int t = mpfr_pow(mid.get(), base.mid().get(), exponent.mid().get(), MPFR_RNDN);
    Real rad(kRadPrec);
    add_rounding_error(rad.get(), mid.get(), t);
    return Ball(std::move(mid), std::move(rad));
  }
  return exp(exponent * log(base));
}

Ball pow_int(const Ball& base, long k) {
  if (k < 0) {
    Ball one = Ball::from_int(1, base.precision());
    return one / pow_int(base, -k);
  }
  if (base.is_exact()) {
    Real mid(base.precision());
    const int t = mpfr_pow_si(mid.get(), base.mid().get(), k, MPFR_RNDN);
    Real rad(kRadPrec);
    add_rounding_error(rad.get(), mid.get(), t);
    return Ball(std::move(mid), std::move(rad));
  }
  Ball result = Ball::from_int(1, base.precision());
  Ball square(base);
  for (long e = k; e > 0; e >>= 1) {
    if (e & 1) result *= square;
    if (e > 1) square *= square;
  }
  return result;
}

Ball abs(const Ball& x) {
  Ball r(x);
  if (r.mid().sign() < 0) r = -r;
  return r;
}

Ball ball_arith(const Ball& a, const Ball& b, BallOp op) {
  Ball r;
  switch (op) {
    case BallOp::add: r = a + b; break;
    case BallOp::sub: r = a - b; break;
    case BallOp::mul: r = a * b; break;
    case BallOp::div: r = a / b; break;
    case BallOp::exp: r = exp(a); break;
    case BallOp::log: r = log(a); break;
    case BallOp::pow_int: {
      if (!b.is_exact() || !mpfr_integer_p(b.mid().get()) || !mpfr_fits_slong_p(b.mid().get(), MPFR_RNDN)) {
        throw DomainError("pow_int exponent must be an exact integer");
      }
      r = pow_int(a, mpfr_get_si(b.mid().get(), MPFR_RNDN));
      break;
    }
  }
  if (!r.is_finite()) throw PrecisionExhausted("non-finite ball result");
  Real absmid(r.precision());
  mpfr_abs(absmid.get(), r.mid().get(), MPFR_RNDN);
  if (r.rad() > absmid) throw PrecisionExhausted("ball radius exceeds |midpoint|: total cancellation");
  return r;
}

}  // namespace zlab
