#include "zlab/quadrature.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "zlab/errors.hpp"

namespace zlab {
namespace {

// |t| beyond which the exp-sinh nodes are never placed: x = exp(+-pi/2 sinh 12)
// is far outside any magnitude a 1000-digit computation can resolve.
constexpr double kHardTMax = 12.0;

class ExpSinhRule {
 public:
  ExpSinhRule(const Integrand& f, mpfr_prec_t prec) : f_(f), prec_(prec), half_pi_(prec) {
    mpfr_const_pi(half_pi_.get(), MPFR_RNDN);
    mpfr_div_2ui(half_pi_.get(), half_pi_.get(), 1, MPFR_RNDN);
  }

  // f(x(t)) * x'(t) for a dyadic t = num * 2^-shift.
  Ball term(long num, unsigned shift) {
    Real t(prec_);
    mpfr_set_si_2exp(t.get(), num, -static_cast<long>(shift), MPFR_RNDN);
    Real sh(prec_), ch(prec_);
    mpfr_sinh_cosh(sh.get(), ch.get(), t.get(), MPFR_RNDN);
    Real x(prec_);
    mpfr_mul(x.get(), sh.get(), half_pi_.get(), MPFR_RNDN);
    mpfr_exp(x.get(), x.get(), MPFR_RNDN);
    Real w(prec_);
    mpfr_mul(w.get(), ch.get(), half_pi_.get(), MPFR_RNDN);
    mpfr_mul(w.get(), w.get(), x.get(), MPFR_RNDN);
    ++evaluations_;
    Ball fx = f_(Ball(std::move(x), Real(64)));
    if (!fx.is_finite()) {
      throw DomainError("integrand returned a non-finite sample at t = " + t.to_string(12));
    }
    fx *= Ball(std::move(w), Real(64));
    return fx;
  }

  long evaluations() const { return evaluations_; }

 private:
  const Integrand& f_;
  mpfr_prec_t prec_;
  Real half_pi_;
  long evaluations_ = 0;
};

}  // namespace

QuadratureResult quad_semiinfinite_detailed(const Integrand& f, const PrecisionContext& ctx) {
  const mpfr_prec_t prec = ctx.bits();
  ExpSinhRule rule(f, prec);
  Real cutoff = ctx.truncation_target();
  mpfr_div_2ui(cutoff.get(), cutoff.get(), 8, MPFR_RNDD);

  // Level 0: unit step, walk outwards until the terms are negligible and
  // still shrinking.
  Ball raw_sum = rule.term(0, 0);
  Real abs_sum = raw_sum.mag();
  Real boundary(64);
  long t_hi = 0;
  long t_lo = 0;
  for (int dir : {1, -1}) {
    Real prev = raw_sum.mag();
    for (long k = 1; k <= static_cast<long>(kHardTMax); ++k) {
      Ball g = rule.term(dir * k, 0);
      raw_sum += g;
      Real m = g.mag();
      abs_sum = add_up(abs_sum, m);
      (dir > 0 ? t_hi : t_lo) = dir * k;
      if (m < cutoff && m <= prev) {
        boundary = add_up(boundary, m);
        break;
      }
      if (k == static_cast<long>(kHardTMax)) boundary = add_up(boundary, m);
      prev = m;
    }
  }

  Ball estimate = raw_sum;  // step h = 1
  Real last_diff = Real::infinity();
  int level = 0;
  bool converged = false;
  for (level = 1; level <= ctx.max_quad_levels(); ++level) {
    // New nodes are the odd multiples of 2^-level inside [t_lo, t_hi].
    const long lo = t_lo << level;
    const long hi = t_hi << level;
    for (long num = lo + 1; num < hi; num += 2) {
      Ball g = rule.term(num, static_cast<unsigned>(level));
      abs_sum = add_up(abs_sum, g.mag());
      raw_sum += g;
    }
    Ball next = raw_sum;
    next.mul_2exp(-level);
    Ball diff = next - estimate;
    last_diff = diff.mag();
    estimate = std::move(next);
    if (level >= 3 && last_diff <= ctx.truncation_target()) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    level = ctx.max_quad_levels();
    if (last_diff > ctx.target_tolerance()) {
      throw QuadratureNoConvergence("exp-sinh quadrature: level difference " + last_diff.to_string(3) +
                                    " after " + std::to_string(level) + " levels");
    }
  }

  // Node and weight rounding: a few ulps relative to the absolute sum.
  Real slack(64);
  mpfr_mul_2si(slack.get(), abs_sum.get(), -static_cast<long>(prec) + 8, MPFR_RNDU);
  mpfr_mul_2si(boundary.get(), boundary.get(), 1, MPFR_RNDU);
  estimate.add_error(last_diff);
  estimate.add_error(boundary);
  estimate.add_error(slack);
  return QuadratureResult{std::move(estimate), level, rule.evaluations()};
}

}  // namespace zlab
