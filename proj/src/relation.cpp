#include "zlab/relation.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <optional>

#include "zlab/errors.hpp"
#include "zlab/zeta.hpp"

namespace zlab {

const char* to_string(RelationOutcome o) { return o == RelationOutcome::FOUND ? "FOUND" : "EXCLUDED"; }

namespace {

constexpr long kMaxBound = 1000000000000000L;  // keeps coefficients in a long
constexpr int kGuardBits = 60;

// Python-style floor division, which the fixed-point recurrences rely on.
mpz_class fdiv(const mpz_class& a, const mpz_class& b) {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

mpz_class shr(const mpz_class& a, unsigned long bits) {
  mpz_class q;
  mpz_fdiv_q_2exp(q.get_mpz_t(), a.get_mpz_t(), bits);
  return q;
}

mpz_class shl(const mpz_class& a, unsigned long bits) {
  mpz_class q;
  mpz_mul_2exp(q.get_mpz_t(), a.get_mpz_t(), bits);
  return q;
}

mpz_class one(unsigned long prec) { return shl(mpz_class(1), prec); }

mpz_class round_fixed(const mpz_class& x, unsigned long prec) {
  return shl(shr(x + shl(mpz_class(1), prec - 1), prec), prec);
}

mpz_class sqrt_fixed(const mpz_class& x, unsigned long prec) {
  mpz_class r;
  mpz_class scaled = shl(x, prec);
  mpz_sqrt(r.get_mpz_t(), scaled.get_mpz_t());
  return r;
}

mpz_class to_fixed(const Real& v, unsigned long prec) {
  Real t(v.precision());
  mpfr_mul_2ui(t.get(), v.get(), prec, MPFR_RNDN);
  mpz_class z;
  mpfr_get_z(z.get_mpz_t(), t.get(), MPFR_RNDN);
  return z;
}

Real scaled_threshold(int digits, const Real& scale, mpfr_prec_t prec) {
  Real t = Real::pow10(-(digits - 8), prec, MPFR_RNDN);
  mpfr_mul(t.get(), t.get(), scale.get(), MPFR_RNDN);
  return t;
}

// sum c_i v_i in ball arithmetic.
Ball combine(const std::vector<long>& c, const std::vector<Ball>& v) {
  Ball acc(v.front().precision());
  for (std::size_t i = 0; i < c.size(); ++i) {
    Ball term = v[i];
    term.mul_si(c[i]);
    acc += term;
  }
  return acc;
}

std::vector<long> normalize(std::vector<mpz_class> c) {
  mpz_class g = 0;
  for (const auto& x : c) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
  if (g != 0) {
    for (auto& x : c) x /= g;
  }
  auto first = std::find_if(c.begin(), c.end(), [](const mpz_class& x) { return x != 0; });
  if (first != c.end() && *first < 0) {
    for (auto& x : c) x = -x;
  }
  std::vector<long> out;
  for (const auto& x : c) out.push_back(x.get_si());
  return out;
}

struct PslqOutcome {
  std::optional<std::vector<long>> relation;
  mpz_class norm_bound;  // every integer relation has Euclidean norm >= this
  long iterations = 0;
};

// Ferguson-Bailey PSLQ on fixed-point numbers with `prec` fractional bits.
// `accept` filters candidate relations; PSLQ keeps going past rejected ones.
PslqOutcome pslq(const std::vector<mpz_class>& input, const mpz_class& tol, long coeff_bound, unsigned long prec,
                 long max_steps, const std::function<bool(const std::vector<long>&)>& accept) {
  const int n = static_cast<int>(input.size());
  PslqOutcome out;
  auto index = [n](int i, int j) { return static_cast<std::size_t>(i * (n + 1) + j); };
  std::vector<mpz_class> A((n + 1) * (n + 1)), B((n + 1) * (n + 1)), H((n + 1) * (n + 1));
  std::vector<mpz_class> x(n + 1), y(n + 1), s(n + 1);
  for (int i = 1; i <= n; ++i) x[i] = input[i - 1];
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) {
      A[index(i, j)] = B[index(i, j)] = i == j ? one(prec) : mpz_class(0);
      H[index(i, j)] = 0;
    }
  }
  const mpz_class g = sqrt_fixed(fdiv(shl(mpz_class(4), prec), 3), prec);

  for (int k = 1; k <= n; ++k) {
    mpz_class t = 0;
    for (int j = k; j <= n; ++j) t += shr(x[j] * x[j], prec);
    s[k] = sqrt_fixed(t, prec);
  }
  const mpz_class t0 = s[1];
  for (int k = 1; k <= n; ++k) {
    y[k] = fdiv(shl(x[k], prec), t0);
    s[k] = fdiv(shl(s[k], prec), t0);
  }
  for (int i = 1; i <= n; ++i) {
    if (i <= n - 1) H[index(i, i)] = s[i] != 0 ? fdiv(shl(s[i + 1], prec), s[i]) : mpz_class(0);
    for (int j = 1; j < i; ++j) {
      const mpz_class sjj = s[j] * s[j + 1];
      H[index(i, j)] = sjj != 0 ? fdiv(shl(-y[i] * y[j], prec), sjj) : mpz_class(0);
    }
  }

  auto reduce_row = [&](int i, int j) {
    if (H[index(j, j)] == 0) return false;
    const mpz_class t = round_fixed(fdiv(shl(H[index(i, j)], prec), H[index(j, j)]), prec);
    y[j] += shr(t * y[i], prec);
    for (int k = 1; k <= j; ++k) H[index(i, k)] -= shr(t * H[index(j, k)], prec);
    for (int k = 1; k <= n; ++k) {
      A[index(i, k)] -= shr(t * A[index(j, k)], prec);
      B[index(k, j)] += shr(t * B[index(k, i)], prec);
    }
    return true;
  };
  for (int i = 2; i <= n; ++i) {
    for (int j = i - 1; j >= 1; --j) reduce_row(i, j);
  }

  for (long step = 1; step <= max_steps; ++step) {
    out.iterations = step;
    int m = -1;
    mpz_class best = -1;
    mpz_class gi = g;
    for (int i = 1; i < n; ++i) {
      mpz_class h = abs(H[index(i, i)]);
      const mpz_class sz = shr(gi * h, prec * static_cast<unsigned long>(i));
      if (sz > best) {
        best = sz;
        m = i;
      }
      gi *= g;
    }
    std::swap(y[m], y[m + 1]);
    for (int i = 1; i <= n; ++i) {
      std::swap(H[index(m, i)], H[index(m + 1, i)]);
      std::swap(A[index(m, i)], A[index(m + 1, i)]);
      std::swap(B[index(i, m)], B[index(i, m + 1)]);
    }
    if (m <= n - 2) {
      const mpz_class a = H[index(m, m)];
      const mpz_class b = H[index(m, m + 1)];
      const mpz_class r = sqrt_fixed(shr(a * a + b * b, prec), prec);
      if (r == 0) break;
      const mpz_class t1 = fdiv(shl(a, prec), r);
      const mpz_class t2 = fdiv(shl(b, prec), r);
      for (int i = m; i <= n; ++i) {
        const mpz_class t3 = H[index(i, m)];
        const mpz_class t4 = H[index(i, m + 1)];
        H[index(i, m)] = shr(t1 * t3 + t2 * t4, prec);
        H[index(i, m + 1)] = shr(-t2 * t3 + t1 * t4, prec);
      }
    }
    for (int i = m + 1; i <= n; ++i) {
      for (int j = std::min(i - 1, m + 1); j >= 1; --j) {
        if (!reduce_row(i, j)) break;
      }
    }

    for (int i = 1; i <= n; ++i) {
      if (abs(y[i]) >= tol) continue;
      std::vector<mpz_class> vec;
      bool within = true;
      for (int j = 1; j <= n; ++j) {
        vec.push_back(shr(round_fixed(B[index(j, i)], prec), prec));
        if (abs(vec.back()) > coeff_bound) within = false;
      }
      if (!within) continue;
      auto candidate = normalize(vec);
      if (accept(candidate)) {
        out.relation = candidate;
        return out;
      }
    }

    mpz_class recnorm = 0;
    for (const auto& h : H) recnorm = std::max(recnorm, mpz_class(abs(h)));
    if (recnorm == 0) break;
    // 1/max|H| with a factor 2 of slack for the fixed-point rounding.
    out.norm_bound = shr(fdiv(one(2 * prec), recnorm), prec + 1);
    if (out.norm_bound * out.norm_bound > mpz_class(n) * coeff_bound * coeff_bound) return out;
  }
  return out;
}

void validate(const RelationQuery& q, const PrecisionContext& ctx) {
  const std::size_t n = q.values.size();
  if (n < 2 || n > 8) throw InvalidQuery("relation search needs 2 to 8 values, got " + std::to_string(n));
  if (q.coeff_bound < 1 || q.coeff_bound > kMaxBound) {
    throw InvalidQuery("coefficient bound must lie in [1, 1e15], got " + std::to_string(q.coeff_bound));
  }
  if (!q.labels.empty() && q.labels.size() != n) throw InvalidQuery("labels must match the values");
  const int d = ctx.working_digits();
  const Real width = Real::pow10(-(d - 5), 64, MPFR_RNDN);
  for (std::size_t i = 0; i < n; ++i) {
    if (!q.values[i].is_finite() || !(q.values[i].rad() < width)) {
      throw InvalidQuery("value " + std::to_string(i + 1) + " is wider than 1e-" + std::to_string(d - 5) +
                         ": " + q.values[i].to_string(10));
    }
  }
  const double floor_digits = 3.0 * std::log10(static_cast<double>(q.coeff_bound)) * static_cast<double>(n);
  if (d < floor_digits) {
    throw PrecisionTooLow("a search up to H = " + std::to_string(q.coeff_bound) + " over " + std::to_string(n) +
                          " values needs at least " + std::to_string(static_cast<int>(std::ceil(floor_digits))) +
                          " digits, have " + std::to_string(d));
  }
}

}  // namespace

RelationResult find_integer_relation(const RelationQuery& q, const PrecisionContext& ctx) {
  validate(q, ctx);
  const int d = ctx.working_digits();
  const std::size_t n = q.values.size();
  const mpfr_prec_t bits = ctx.bits();

  Real scale(bits);
  Real max_rad(64);
  for (const auto& v : q.values) {
    Real a(bits);
    mpfr_abs(a.get(), v.mid().get(), MPFR_RNDN);
    if (a > scale) scale = a;
    if (v.rad() > max_rad) max_rad = v.rad();
  }
  if (scale.is_zero()) throw InvalidQuery("all values are zero");

  // Relative detection threshold, widened so that a true relation is not
  // hidden by the input radii.
  Real rel_tol = Real::pow10(-(d - 8), 64, MPFR_RNDN);
  Real noise(64);
  mpfr_mul_si(noise.get(), max_rad.get(), 2 * static_cast<long>(n) * q.coeff_bound, MPFR_RNDU);
  mpfr_div(noise.get(), noise.get(), scale.get(), MPFR_RNDU);
  if (noise > rel_tol) rel_tol = noise;

  RelationResult result;
  result.labels = q.labels;
  result.precision_digits = d;

  const PrecisionContext doubled = ctx.with_digits(2 * d);
  std::vector<Ball> fine;
  auto fine_values = [&]() -> const std::vector<Ball>& {
    if (fine.empty()) {
      if (q.reevaluate) {
        fine = q.reevaluate(doubled);
        if (fine.size() != n) throw InvalidQuery("re-evaluation returned the wrong number of values");
      } else {
        for (const auto& v : q.values) fine.push_back(v.with_precision(doubled.bits()));
      }
    }
    return fine;
  };
  auto passes = [&](const Ball& residual, int digits, const Real& tol_floor) {
    Real t = scaled_threshold(digits, scale, 64);
    Real f(64);
    mpfr_mul(f.get(), tol_floor.get(), scale.get(), MPFR_RNDU);
    if (f > t) t = f;
    return residual.mig() <= t;
  };
  std::string rejection;
  auto accept = [&](const std::vector<long>& c) {
    if (!passes(combine(c, q.values), d, rel_tol)) return false;
    Ball fine_residual = combine(c, fine_values());
    // At doubled precision only the fine radii widen the threshold.
    if (!passes(fine_residual, 2 * d, Real(0, 64))) {
      rejection = "candidate relation failed re-verification at " + std::to_string(2 * d) + " digits";
      return false;
    }
    result.residual = fine_residual;
    return true;
  };

  const unsigned long prec = static_cast<unsigned long>(bits) + kGuardBits;
  std::vector<mpz_class> fixed;
  for (const auto& v : q.values) {
    Real x(bits + kGuardBits);
    mpfr_div(x.get(), v.mid().get(), scale.get(), MPFR_RNDN);
    fixed.push_back(to_fixed(x, prec));
  }
  const mpz_class tol_fixed = to_fixed(rel_tol, prec);

  // A value indistinguishable from zero is its own relation.
  for (std::size_t i = 0; i < n; ++i) {
    if (abs(fixed[i]) < tol_fixed) {
      std::vector<long> unit(n, 0);
      unit[i] = 1;
      if (accept(unit)) {
        result.outcome = RelationOutcome::FOUND;
        result.coefficients = unit;
        result.note = "value " + std::to_string(i + 1) + " is zero to working precision";
        return result;
      }
    }
  }

  const long max_steps = 200L * static_cast<long>(n) * d;
  PslqOutcome run = pslq(fixed, tol_fixed, q.coeff_bound, prec, max_steps, accept);
  result.iterations = run.iterations;
  if (run.relation) {
    result.outcome = RelationOutcome::FOUND;
    result.coefficients = *run.relation;
    result.note = "re-verified at " + std::to_string(2 * d) + " digits";
    return result;
  }
  if (!rejection.empty()) throw PrecisionTooLow(rejection + "; raise the working precision");

  result.outcome = RelationOutcome::EXCLUDED;
  // Any c with max |c_i| <= H has Euclidean norm <= sqrt(n) H.
  mpz_class reach;
  mpz_class nb2 = run.norm_bound * run.norm_bound / static_cast<long>(n);
  mpz_sqrt(reach.get_mpz_t(), nb2.get_mpz_t());
  if (reach >= q.coeff_bound) {
    result.bound = q.coeff_bound;
    result.note = "no integer relation with max |c_i| <= " + std::to_string(q.coeff_bound) + " at " +
                  std::to_string(d) + " digits (a bounded search, not an irrationality proof)";
  } else {
    result.bound = reach.get_si();
    result.note = "search stopped after " + std::to_string(run.iterations) +
                  " iterations; relations excluded only up to max |c_i| <= " + std::to_string(result.bound);
  }
  return result;
}

std::vector<RelationResult> probe_zeta_family(const std::vector<long>& js, long coeff_bound,
                                              const PrecisionContext& ctx) {
  for (long j : js) {
    if (j < 3) throw DomainError("probe_zeta_family needs j >= 3, got " + std::to_string(j));
  }
  std::vector<RelationResult> out;
  for (long j : js) {
    const std::string zj = "zeta(" + std::to_string(j) + ")";
    for (bool with_two : {true, false}) {
      RelationQuery q;
      q.coeff_bound = coeff_bound;
      q.reevaluate = [j, with_two](const PrecisionContext& c) {
        std::vector<Ball> v{Ball::from_int(1, c.bits())};
        auto table = IntegerZetaTable::shared(c);
        if (with_two) v.push_back(table->value(2));
        v.push_back(table->value(j));
        return v;
      };
      q.values = q.reevaluate(ctx);
      q.labels = with_two ? std::vector<std::string>{"1", "zeta(2)", zj} : std::vector<std::string>{"1", zj};
      out.push_back(find_integer_relation(q, ctx));
    }
  }
  return out;
}

}  // namespace zlab
