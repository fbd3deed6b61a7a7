#include "zlab/zeta.hpp"

#include <map>

#include <cmath>
#include <functional>
#include <optional>
#include <string>

#include "zlab/errors.hpp"
#include "zlab/numerics.hpp"

namespace zlab {
namespace {

constexpr int kMaxBernoulliPairs = 60;

// coeff * (k + q)^-sigma
struct PowerComponent {
  Ball coeff;
  Ball sigma;
};

Ball bernoulli_factor(int j, mpfr_prec_t prec) {
  mpz_class fact;
  mpz_fac_ui(fact.get_mpz_t(), static_cast<unsigned long>(2 * j));
  return Ball::from_rational(bernoulli(static_cast<unsigned>(2 * j)) / Rational(fact), prec);
}

// Euler-Maclaurin for sum_{k>=N} f(k), f(x) = sum_i c_i (x+q)^-sigma_i.
// The remainder after M correction pairs is bounded by
// |B_2M|/(2M)! sum_i |c_i| (sigma_i)_{2M-1} (N+q)^{-sigma_i-2M+1}, since every
// component has a 2M-th derivative of constant sign. Returns nothing if the
// asymptotic terms start growing before reaching `target`.
std::optional<Ball> euler_maclaurin_tail(const std::vector<PowerComponent>& comps, const Ball& q, long n,
                                         const Real& target, mpfr_prec_t prec) {
  Ball x = Ball::from_int(n, prec) + q;
  Ball inv_x = Ball::from_int(1, prec) / x;
  Ball inv_x2 = inv_x * inv_x;
  Ball result(prec);
  std::vector<Ball> deriv;
  deriv.reserve(comps.size());
  for (const auto& c : comps) {
    Ball p0 = pow(x, -c.sigma);
    Ball sigma_m1 = c.sigma;
    sigma_m1.add_si(-1);
    Ball integral = p0 * x / sigma_m1;
    Ball half = p0;
    half.mul_2exp(-1);
    result.addmul(c.coeff, integral + half);
    deriv.push_back(c.sigma * p0 * inv_x);
  }
  Real prev_bound = Real::infinity();
  for (int j = 1; j <= kMaxBernoulliPairs; ++j) {
    const Ball factor = bernoulli_factor(j, prec);
    Ball term(prec);
    Real bound(64);
    for (std::size_t i = 0; i < comps.size(); ++i) {
      term.addmul(comps[i].coeff, deriv[i]);
      bound = add_up(bound, mul_up(comps[i].coeff.mag(), deriv[i].mag()));
    }
    bound = mul_up(bound, factor.mag());
    result.addmul(factor, term);
    if (bound < target) {
      result.add_error(bound);
      return result;
    }
    if (bound > prev_bound) return std::nullopt;
    prev_bound = bound;
    for (std::size_t i = 0; i < comps.size(); ++i) {
      Ball a = comps[i].sigma;
      a.add_si(2 * j - 1);
      Ball b = comps[i].sigma;
      b.add_si(2 * j);
      deriv[i] *= a;
      deriv[i] *= b;
      deriv[i] *= inv_x2;
    }
  }
  return std::nullopt;
}

// sum_{k>=N} |f(k)| <= f(N) + integral_N^inf f for decreasing f.
Real integral_test_bound(const std::vector<PowerComponent>& comps, const Ball& q, long n, mpfr_prec_t prec) {
  Ball x = Ball::from_int(n, prec) + q;
  Real bound(64);
  for (const auto& c : comps) {
    Ball p0 = pow(x, -c.sigma);
    Ball sigma_m1 = c.sigma;
    sigma_m1.add_si(-1);
    Ball part = p0 + p0 * x / sigma_m1;
    bound = add_up(bound, mul_up(c.coeff.mag(), part.mag()));
  }
  return bound;
}

// Smallest N with (N+q)^(1-sigma)/(sigma-1) below 10^-digits, as a double
// estimate used only to pick between the two strategies.
double direct_length_estimate(double sigma, double q, double log10_target) {
  if (sigma <= 1.0) return HUGE_VAL;
  const double need = (-log10_target - std::log10(sigma - 1.0)) / (sigma - 1.0);
  return std::max(1.0, std::pow(10.0, need) - q + 1.0);
}

Ball power_sum(const std::vector<PowerComponent>& comps, const Ball& q, const std::function<Ball(long)>& head_term,
               const Real& target, const PrecisionContext& ctx) {
  const mpfr_prec_t prec = ctx.bits();
  double sigma_min = HUGE_VAL;
  double sigma_max = 0.0;
  for (const auto& c : comps) {
    sigma_min = std::min(sigma_min, c.sigma.lower().to_double());
    sigma_max = std::max(sigma_max, std::fabs(c.sigma.mid().to_double()));
  }
  long n_em = static_cast<long>(std::ceil(0.7 * ctx.working_digits() + sigma_max));
  n_em = std::max(n_em, 2L);

  Real lt(64);
  mpfr_log10(lt.get(), target.get(), MPFR_RNDN);
  const double log10_target = lt.to_double();
  const double n_direct = direct_length_estimate(sigma_min, q.mid().to_double(), log10_target);

  Ball head(prec);
  long summed = 0;
  auto extend_head = [&](long n) {
    if (n > ctx.max_terms()) {
      throw PrecisionExhausted("zeta evaluation needs more than max_terms = " + std::to_string(ctx.max_terms()) +
                               " terms");
    }
    for (; summed < n; ++summed) head += head_term(summed);
  };

  if (n_direct <= static_cast<double>(n_em)) {
    long n = static_cast<long>(n_direct);
    for (int attempt = 0; attempt < 8; ++attempt, n = n * 2 + 1) {
      extend_head(n);
      const Real bound = integral_test_bound(comps, q, n, prec);
      if (bound < target) {
        Ball out = head;
        out.add_error(bound);
        return out;
      }
    }
  }

  for (long n = n_em;; n *= 2) {
    extend_head(n);
    if (auto tail = euler_maclaurin_tail(comps, q, n, target, prec)) return head + *tail;
  }
}

void require_above(const Ball& s, long bound, const char* what) {
  if (!(s.lower() > Real(bound, 64))) {
    throw DomainError(std::string(what) + ": s must satisfy s > " + std::to_string(bound) + ", got " +
                      s.to_string(10) + (bound == 1 ? " (pole at s = 1)" : ""));
  }
}

}  // namespace

Ball hurwitz_zeta(const Ball& s, const Ball& q, const PrecisionContext& ctx) {
  require_above(s, 1, "hurwitz_zeta");
  if (!q.is_positive()) throw DomainError("hurwitz_zeta: q must be strictly positive, got " + q.to_string(10));
  const mpfr_prec_t prec = ctx.bits();
  const Ball sp = s.with_precision(std::max(prec, s.precision()));
  const Ball neg_s = -sp;
  std::vector<PowerComponent> comps{{Ball::from_int(1, prec), sp}};
  auto term = [&](long k) { return pow(Ball::from_int(k, prec) + q, neg_s); };
  return power_sum(comps, q, term, ctx.truncation_target(), ctx);
}

Ball riemann_zeta(const Ball& s, const PrecisionContext& ctx) {
  require_above(s, 1, "riemann_zeta");
  return hurwitz_zeta(s, Ball::from_int(1, ctx.bits()), ctx);
}

Ball zeta_minus_one(const Ball& s, const PrecisionContext& ctx) {
  require_above(s, 1, "zeta_minus_one");
  const mpfr_prec_t prec = ctx.bits();
  const Ball sp = s.with_precision(std::max(prec, s.precision()));
  const Ball neg_s = -sp;
  const Ball two = Ball::from_int(2, prec);
  // Relative target: the value is at least 2^-s.
  Real target = ctx.truncation_target();
  Real scale(64);
  Real neg_upper(64);
  mpfr_neg(neg_upper.get(), sp.upper().get(), MPFR_RNDD);
  mpfr_exp2(scale.get(), neg_upper.get(), MPFR_RNDD);
  mpfr_mul(target.get(), target.get(), scale.get(), MPFR_RNDD);
  std::vector<PowerComponent> comps{{Ball::from_int(1, prec), sp}};
  auto term = [&](long k) { return pow(Ball::from_int(k + 2, prec), neg_s); };
  return power_sum(comps, two, term, target, ctx);
}

Ball hurwitz_tail_sum(const Ball& s, const PrecisionContext& ctx) {
  require_above(s, 2, "hurwitz_tail_sum");
  const mpfr_prec_t prec = ctx.bits();
  const Ball sp = s.with_precision(std::max(prec, s.precision()));
  const Ball neg_s = -sp;
  Ball s_m1 = sp;
  s_m1.add_si(-1);
  // (n-1) n^-s = n^(1-s) - n^-s, n = k + 2
  std::vector<PowerComponent> comps{{Ball::from_int(1, prec), s_m1}, {Ball::from_int(-1, prec), sp}};
  auto term = [&](long k) {
    Ball p = pow(Ball::from_int(k + 2, prec), neg_s);
    p.mul_si(k + 1);
    return p;
  };
  return power_sum(comps, Ball::from_int(2, prec), term, ctx.truncation_target(), ctx);
}

Real zeta_minus_one_bound(const Real& sigma) {
  Real one(1, 64);
  if (!(sigma > one)) return Real::infinity();
  Real neg(sigma.precision());
  mpfr_neg(neg.get(), sigma.get(), MPFR_RNDN);
  Real p(64);
  mpfr_exp2(p.get(), neg.get(), MPFR_RNDU);
  Real d(64);
  mpfr_sub_ui(d.get(), sigma.get(), 1, MPFR_RNDD);
  Real f(64);
  mpfr_ui_div(f.get(), 2, d.get(), MPFR_RNDU);
  mpfr_add_ui(f.get(), f.get(), 1, MPFR_RNDU);
  return mul_up(p, f);
}

IntegerZetaTable::IntegerZetaTable(const PrecisionContext& ctx) : ctx_(ctx), cutoff_(2) {
  const Real target = ctx.truncation_target();
  while (!(zeta_minus_one_bound(Real(cutoff_, 64)) < target)) ++cutoff_;
  // zeta(m) - 1 in [0, B(cutoff)] for every m >= cutoff.
  Real b = zeta_minus_one_bound(Real(cutoff_, 64));
  mpfr_div_2ui(b.get(), b.get(), 1, MPFR_RNDU);
  beyond_ = Ball(b, b).with_precision(ctx.bits());
}

std::shared_ptr<IntegerZetaTable> IntegerZetaTable::shared(const PrecisionContext& ctx) {
  static std::mutex registry_mutex;
  static std::map<int, std::shared_ptr<IntegerZetaTable>> registry;
  std::lock_guard<std::mutex> lock(registry_mutex);
  auto& slot = registry[ctx.working_digits()];
  if (!slot) slot = std::make_shared<IntegerZetaTable>(ctx.with_digits(ctx.working_digits()));
  return slot;
}

Ball IntegerZetaTable::minus_one(long m) {
  if (m < 2) throw DomainError("IntegerZetaTable: index must be >= 2");
  if (m >= cutoff_) return beyond_;
  std::lock_guard<std::mutex> lock(mutex_);
  while (static_cast<long>(cache_.size()) <= m - 2) {
    const long k = static_cast<long>(cache_.size()) + 2;
    cache_.push_back(zeta_minus_one(Ball::from_int(k, ctx_.bits()), ctx_));
  }
  return cache_[static_cast<std::size_t>(m - 2)];
}

Ball IntegerZetaTable::value(long m) {
  Ball v = minus_one(m);
  v.add_si(1);
  return v;
}

}  // namespace zlab
