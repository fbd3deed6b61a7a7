#include "zlab/context.hpp"

#include <cmath>
#include <string>

#include "zlab/errors.hpp"

namespace zlab {

PrecisionContext::PrecisionContext(int working_digits) : working_digits_(working_digits) {
  if (working_digits < 15) {
    throw DomainError("working_digits must be at least 15, got " + std::to_string(working_digits));
  }
  target_tolerance_ = Real::pow10(-(working_digits - 10), 64, MPFR_RNDN);
}

PrecisionContext PrecisionContext::with_digits(int working_digits) const {
  PrecisionContext ctx(working_digits);
  ctx.max_terms_ = max_terms_;
  ctx.max_quad_levels_ = max_quad_levels_;
  ctx.max_abel_level_ = max_abel_level_;
  return ctx;
}

void PrecisionContext::set_target_tolerance(const Real& tol) {
  const Real floor = Real::pow10(-working_digits_, 64, MPFR_RNDD);
  if (!(tol.sign() > 0) || tol < floor) {
    throw DomainError("target tolerance must lie in [10^-working_digits, inf)");
  }
  target_tolerance_ = tol;
}

void PrecisionContext::set_max_terms(long n) {
  if (n <= 0) throw DomainError("max_terms must be positive");
  max_terms_ = n;
}

void PrecisionContext::set_max_quad_levels(int levels) {
  if (levels <= 0) throw DomainError("max_quad_levels must be positive");
  max_quad_levels_ = levels;
}

void PrecisionContext::set_max_abel_level(int level) {
  if (level < 5) throw DomainError("max_abel_level must be at least 5");
  max_abel_level_ = level;
}

mpfr_prec_t PrecisionContext::bits() const {
  return static_cast<mpfr_prec_t>(std::ceil(working_digits_ * 3.3219280948873623)) + 32;
}

Real PrecisionContext::truncation_target() const {
  return Real::pow10(-(working_digits_ + 2), 64, MPFR_RNDD);
}

}  // namespace zlab
