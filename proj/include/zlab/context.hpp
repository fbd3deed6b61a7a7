#pragma once

#include <mpfr.h>

#include "zlab/real.hpp"

namespace zlab {

/// Working precision and tolerance policy shared by every evaluation.
///
/// The default tolerance keeps ten guard digits below the working precision.
/// Series truncation targets are stricter than the tolerance (two digits past
/// the working precision) so that verdicts never sit on the truncation error.
class PrecisionContext {
 public:
  explicit PrecisionContext(int working_digits = 50);

  /// Same caps, new precision, tolerance reset to the derived default.
  PrecisionContext with_digits(int working_digits) const;

  int working_digits() const { return working_digits_; }
  const Real& target_tolerance() const { return target_tolerance_; }
  long max_terms() const { return max_terms_; }
  int max_quad_levels() const { return max_quad_levels_; }
  int max_abel_level() const { return max_abel_level_; }

  /// Throws DomainError if the tolerance is non-positive or finer than
  /// 10^-working_digits.
  void set_target_tolerance(const Real& tol);
  void set_max_terms(long n);
  void set_max_quad_levels(int levels);
  void set_max_abel_level(int level);

  /// Binary precision for midpoints: the decimal digits plus 32 guard bits.
  mpfr_prec_t bits() const;
  /// Absolute error target for series truncation, 10^-(working_digits+2).
  Real truncation_target() const;

 private:
  int working_digits_;
  Real target_tolerance_;
  long max_terms_ = 40'000'000;
  int max_quad_levels_ = 12;
  int max_abel_level_ = 18;
};

}  // namespace zlab
