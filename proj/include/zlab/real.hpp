#pragma once

#include <mpfr.h>

#include <string>
#include <utility>

namespace zlab {

/// Owning wrapper around an mpfr_t with value semantics: copies carry the
/// source precision along with the value.
class Real {
 public:
  explicit Real(mpfr_prec_t prec = 64) {
    mpfr_init2(v_, prec);
    mpfr_set_zero(v_, 1);
  }
  Real(long value, mpfr_prec_t prec) : Real(prec) { mpfr_set_si(v_, value, MPFR_RNDN); }

  Real(const Real& other) {
    mpfr_init2(v_, mpfr_get_prec(other.v_));
    mpfr_set(v_, other.v_, MPFR_RNDN);
  }
  Real(Real&& other) noexcept {
    mpfr_init2(v_, MPFR_PREC_MIN);
    mpfr_swap(v_, other.v_);
  }
  Real& operator=(const Real& other) {
    if (this != &other) {
      if (mpfr_get_prec(v_) != mpfr_get_prec(other.v_)) mpfr_set_prec(v_, mpfr_get_prec(other.v_));
      mpfr_set(v_, other.v_, MPFR_RNDN);
    }
    return *this;
  }
  Real& operator=(Real&& other) noexcept {
    mpfr_swap(v_, other.v_);
    return *this;
  }
  ~Real() { mpfr_clear(v_); }

  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }
  mpfr_prec_t precision() const { return mpfr_get_prec(v_); }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  bool is_inf() const { return mpfr_inf_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }

  /// Scientific notation with `digits` significant decimal digits.
  std::string to_string(int digits, mpfr_rnd_t rnd = MPFR_RNDN) const;

  /// Parses a decimal literal; throws DomainError on malformed input.
  static Real parse(const std::string& text, mpfr_prec_t prec, mpfr_rnd_t rnd = MPFR_RNDN);
  static Real infinity(mpfr_prec_t prec = 64) {
    Real r(prec);
    mpfr_set_inf(r.v_, 1);
    return r;
  }
  /// 10^exponent rounded in direction `rnd`.
  static Real pow10(long exponent, mpfr_prec_t prec, mpfr_rnd_t rnd);

  friend bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
  friend bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.v_, b.v_) != 0; }
  friend bool operator>(const Real& a, const Real& b) { return mpfr_greater_p(a.v_, b.v_) != 0; }
  friend bool operator>=(const Real& a, const Real& b) { return mpfr_greaterequal_p(a.v_, b.v_) != 0; }
  friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }

 private:
  mpfr_t v_;
};

// Directed-rounding helpers used for error radii. All results are upper
// bounds (RNDU) unless the name says otherwise.
Real add_up(const Real& a, const Real& b);
Real mul_up(const Real& a, const Real& b);
Real div_up(const Real& a, const Real& b);
Real max_of(const Real& a, const Real& b);

}  // namespace zlab
