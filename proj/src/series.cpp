#include "zlab/series.hpp"

#include <memory>

#include "zlab/errors.hpp"
#include "zlab/numerics.hpp"
#include "zlab/zeta.hpp"

namespace zlab {
namespace {

bool exact_integer(const Ball& b) { return b.is_exact() && mpfr_integer_p(b.mid().get()); }

bool exact_one(const Ball& b) { return b.is_exact() && mpfr_cmp_ui(b.mid().get(), 1) == 0; }

// Source of zeta(s + n) for n = start, start+1, ...
std::function<Ball(long)> zeta_values(const Ball& s, const PrecisionContext& ctx) {
  if (exact_integer(s)) {
    auto table = IntegerZetaTable::shared(ctx);
    const long s0 = mpfr_get_si(s.mid().get(), MPFR_RNDN);
    return [table, s0](long n) { return table->value(s0 + n); };
  }
  return [s, ctx](long n) {
    Ball sigma = s;
    sigma.add_si(n);
    return riemann_zeta(sigma, ctx);
  };
}

// q (s_up + n) / (n + 1), rounded up.
Real shifted_ratio(const Real& q_up, const Real& s_up, long n) {
  Real r(64);
  mpfr_add_si(r.get(), s_up.get(), n, MPFR_RNDU);
  mpfr_mul(r.get(), r.get(), q_up.get(), MPFR_RNDU);
  mpfr_div_si(r.get(), r.get(), n + 1, MPFR_RNDU);
  return r;
}

// (-1)^m (m-1) or (-1)^m, zero at the skipped index.
Ball alternating_weight(long m, std::optional<long> skip, bool weighted, mpfr_prec_t prec) {
  if (skip && m == *skip) return Ball(prec);
  const long sign = (m % 2 == 0) ? 1 : -1;
  return Ball::from_int(weighted ? -sign * (m - 1) : sign, prec);
}

}  // namespace

std::function<TermStream(const PrecisionContext&)> pochhammer_coefficients(const Ball& s, const Ball& q, long start,
                                                                            int sign) {
  return [s, q, start, sign](const PrecisionContext& ctx) -> TermStream {
    const mpfr_prec_t prec = ctx.bits();
    const Ball sp = s.with_precision(prec);
    const Ball qp = q.with_precision(prec);
    mpz_class fact;
    mpz_fac_ui(fact.get_mpz_t(), static_cast<unsigned long>(start));
    Ball c = pochhammer_ratio(sp, static_cast<unsigned long>(start), ctx) / Ball::from_rational(mpq_class(fact), prec);
    c *= pow_int(qp, start);
    c.mul_si((start % 2 == 0 ? 1 : -1) * sign);
    auto cur = std::make_shared<Ball>(c);
    auto n = std::make_shared<long>(start);
    if (exact_integer(sp) && exact_one(qp)) {
      const long s0 = mpfr_get_si(sp.mid().get(), MPFR_RNDN);
      return [cur, n, s0]() {
        Ball out = *cur;
        cur->mul_si(-(s0 + *n));
        cur->div_si(*n + 1);
        ++*n;
        return out;
      };
    }
    const Ball neg_q = -qp;
    return [cur, n, sp, neg_q]() {
      Ball out = *cur;
      Ball f = sp;
      f.add_si(*n);
      *cur *= f;
      *cur *= neg_q;
      cur->div_si(*n + 1);
      ++*n;
      return out;
    };
  };
}

SeriesSpec hurwitz_shift_series(const Ball& s, const Ball& q) {
  if (!q.is_positive()) throw DomainError("hurwitz_shift_series: q must be positive");
  if (!(s.lower() >= Real(1, 64))) throw DomainError("hurwitz_shift_series: s must be >= 1");
  auto coeffs = pochhammer_coefficients(s, q, 0, 1);
  const Real q_up = q.upper();
  const Real s_up = s.upper();
  const Real s_low = s.lower();
  const bool convergent = q_up < Real(1, 64);

  auto form = std::make_shared<ZetaForm>();
  form->s = s;
  form->start_index = 0;
  form->coeff_stream = coeffs;
  form->part_a_tail = [q_up, s_up, s_low](long n, const Ball& c_next) -> std::optional<Real> {
    Real sigma(64);
    mpfr_add_si(sigma.get(), s_low.get(), n + 1, MPFR_RNDD);
    return geometric_zeta_tail(c_next.mag(), shifted_ratio(q_up, s_up, n + 1), sigma);
  };
  form->constant.stream = coeffs;
  form->constant.start_index = 0;
  form->constant.description = "sum (-q)^n (s)_n/n!";
  if (convergent) {
    form->constant.ratio_bound = [q_up, s_up](long n) -> std::optional<Real> { return shifted_ratio(q_up, s_up, n); };
  }
  form->constant_method = SummationMethod::ABEL;

  SeriesSpec spec;
  spec.start_index = 0;
  spec.stream = [coeffs, s](const PrecisionContext& ctx) -> TermStream {
    auto c = std::make_shared<TermStream>(coeffs(ctx));
    auto z = zeta_values(s, ctx);
    auto n = std::make_shared<long>(0);
    return [c, z, n]() { return (*c)() * z((*n)++); };
  };
  // |t_{n+1}/t_n| <= q (s+n)/(n+1) since zeta decreases; non-increasing in n for s >= 1.
  if (convergent) {
    spec.ratio_bound = [q_up, s_up](long n) -> std::optional<Real> { return shifted_ratio(q_up, s_up, n); };
  }
  spec.zeta_form = form;
  spec.description = "sum (-1)^n q^n (s)_n/n! zeta(s+n)";
  return spec;
}

SeriesSpec unit_series(const Ball& s) {
  if (!(s.lower() >= Real(1, 64))) throw DomainError("unit_series: s must be >= 1");
  auto coeffs = pochhammer_coefficients(s, Ball::from_int(1, s.precision()), 1, -1);
  const Real s_up = s.upper();
  const Real s_low = s.lower();
  const Real one(1, 64);

  auto form = std::make_shared<ZetaForm>();
  form->s = s;
  form->start_index = 1;
  form->coeff_stream = coeffs;
  form->part_a_tail = [s_up, s_low, one](long n, const Ball& c_next) -> std::optional<Real> {
    Real sigma(64);
    mpfr_add_si(sigma.get(), s_low.get(), n + 1, MPFR_RNDD);
    return geometric_zeta_tail(c_next.mag(), shifted_ratio(one, s_up, n + 1), sigma);
  };
  form->constant.stream = coeffs;
  form->constant.start_index = 1;
  form->constant.description = "sum (-1)^(n+1) (s)_n/n!";
  form->constant_method = SummationMethod::ABEL;

  SeriesSpec spec;
  spec.start_index = 1;
  spec.stream = [coeffs, s](const PrecisionContext& ctx) -> TermStream {
    auto c = std::make_shared<TermStream>(coeffs(ctx));
    auto z = zeta_values(s, ctx);
    auto n = std::make_shared<long>(1);
    return [c, z, n]() { return (*c)() * z((*n)++); };
  };
  spec.zeta_form = form;
  spec.description = "sum (-1)^(n+1) (s)_n/n! zeta(s+n)";
  return spec;
}

SeriesSpec alternating_zeta_series(long from, std::optional<long> skip, bool weighted,
                                   SummationMethod constant_method) {
  if (from < 2) throw DomainError("alternating_zeta_series: index must start at 2 or later");
  auto weights = [from, skip, weighted](const PrecisionContext& ctx) -> TermStream {
    auto m = std::make_shared<long>(from);
    const mpfr_prec_t prec = ctx.bits();
    return [m, skip, weighted, prec]() { return alternating_weight((*m)++, skip, weighted, prec); };
  };
  // Pairs (m, m+1) beyond the skipped index telescope to +-(zeta(m) - zeta(m+1)).
  const long aligned_from = skip ? std::max(from - 1, *skip) : from - 1;

  auto form = std::make_shared<ZetaForm>();
  form->s = Ball::from_int(0, 64);
  form->start_index = from;
  form->coeff_stream = weights;
  form->part_a_tail = [weighted](long n, const Ball&) -> std::optional<Real> {
    // |c_{n+1}| <= n (weighted) or 1; ratio (n+2)/(n+1) or 1.
    const Real env(weighted ? n : 1, 64);
    Real ratio(64);
    mpfr_set_si(ratio.get(), weighted ? n + 2 : 1, MPFR_RNDU);
    mpfr_div_si(ratio.get(), ratio.get(), weighted ? n + 1 : 1, MPFR_RNDU);
    return geometric_zeta_tail(env, ratio, Real(n + 1, 64));
  };
  form->constant.stream = weights;
  form->constant.start_index = from;
  form->constant.description = weighted ? "sum (-1)^(m-1) (m-1)" : "sum (-1)^m";
  if (!weighted) {
    // Every pair past the skipped index is (+1) + (-1) or (-1) + (+1).
    form->constant.paired_tail_bound = [aligned_from](long n) -> std::optional<Real> {
      if (n < aligned_from) return std::nullopt;
      return Real(0, 64);
    };
  }
  form->constant_method = constant_method;

  SeriesSpec spec;
  spec.start_index = from;
  spec.stream = [weights, from](const PrecisionContext& ctx) -> TermStream {
    auto w = std::make_shared<TermStream>(weights(ctx));
    auto table = IntegerZetaTable::shared(ctx);
    auto m = std::make_shared<long>(from);
    return [w, table, m]() { return (*w)() * table->value((*m)++); };
  };
  if (!weighted) {
    // |zeta(a) - zeta(a+1)| <= zeta(a) - 1 <= B(a), and B drops by 4x per pair.
    spec.paired_tail_bound = [aligned_from](long n) -> std::optional<Real> {
      if (n < aligned_from) return std::nullopt;
      Real b = zeta_minus_one_bound(Real(n + 1, 64));
      mpfr_mul_ui(b.get(), b.get(), 4, MPFR_RNDU);
      mpfr_div_ui(b.get(), b.get(), 3, MPFR_RNDU);
      return b;
    };
  }
  spec.zeta_form = form;
  spec.description = weighted ? "sum (-1)^(m-1) (m-1) zeta(m)" : "sum (-1)^m zeta(m)";
  return spec;
}

}  // namespace zlab
