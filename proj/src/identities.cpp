#include "zlab/identities.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <mutex>
#include <sstream>

#include "zlab/errors.hpp"
#include "zlab/quadrature.hpp"
#include "zlab/series.hpp"
#include "zlab/zeta.hpp"

namespace zlab {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::PASS: return "PASS";
    case Verdict::FAIL: return "FAIL";
    case Verdict::DIVERGENT_CLASSICAL: return "DIVERGENT_CLASSICAL";
    case Verdict::REGULARIZATION_DEPENDENT: return "REGULARIZATION_DEPENDENT";
    case Verdict::INCONCLUSIVE: return "INCONCLUSIVE";
  }
  return "?";
}

const char* to_string(CheckMethod m) {
  switch (m) {
    case CheckMethod::AUTO: return "AUTO";
    case CheckMethod::DIRECT: return "DIRECT";
    case CheckMethod::ZETA_SPLIT: return "ZETA_SPLIT";
    case CheckMethod::ABEL: return "ABEL";
    case CheckMethod::PAIRING: return "PAIRING";
    case CheckMethod::QUADRATURE: return "QUADRATURE";
    case CheckMethod::ALL: return "ALL";
  }
  return "?";
}

CheckMethod parse_check_method(const std::string& name) {
  std::string u;
  for (char c : name) u.push_back(c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  for (auto m : {CheckMethod::AUTO, CheckMethod::DIRECT, CheckMethod::ZETA_SPLIT, CheckMethod::ABEL,
                 CheckMethod::PAIRING, CheckMethod::QUADRATURE, CheckMethod::ALL}) {
    if (u == to_string(m)) return m;
  }
  throw DomainError("unknown method '" + name + "'");
}

Rational parse_rational(const std::string& text) {
  std::string t;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) t.push_back(c);
  }
  const auto bad = [&text]() { return DomainError("not a rational number: '" + text + "'"); };
  if (t.empty()) throw bad();
  const auto slash = t.find('/');
  if (slash != std::string::npos) {
    mpz_class p, q;
    const std::string ps = t.substr(0, slash);
    const std::string qs = t.substr(slash + 1);
    if (ps.empty() || qs.empty() || p.set_str(ps, 10) != 0 || q.set_str(qs, 10) != 0) throw bad();
    if (q == 0) throw DomainError("zero denominator in '" + text + "'");
    Rational r(p, q);
    r.canonicalize();
    return r;
  }
  std::size_t i = 0;
  bool negative = false;
  if (t[i] == '+' || t[i] == '-') negative = t[i++] == '-';
  std::string digits;
  long frac = 0;
  bool seen_point = false;
  for (; i < t.size() && (std::isdigit(static_cast<unsigned char>(t[i])) || t[i] == '.'); ++i) {
    if (t[i] == '.') {
      if (seen_point) throw bad();
      seen_point = true;
    } else {
      digits.push_back(t[i]);
      if (seen_point) ++frac;
    }
  }
  if (digits.empty()) throw bad();
  long exponent = 0;
  if (i < t.size()) {
    if (t[i] != 'e' && t[i] != 'E') throw bad();
    const std::string e = t.substr(i + 1);
    std::size_t used = 0;
    try {
      exponent = std::stol(e, &used);
    } catch (const std::exception&) {
      throw bad();
    }
    if (used != e.size() || exponent > 100000 || exponent < -100000) throw bad();
  }
  mpz_class mant(digits, 10);
  if (negative) mant = -mant;
  const long shift = exponent - frac;
  mpz_class pow10;
  mpz_ui_pow_ui(pow10.get_mpz_t(), 10, static_cast<unsigned long>(shift < 0 ? -shift : shift));
  Rational r = shift < 0 ? Rational(mant, pow10) : Rational(mant * pow10);
  r.canonicalize();
  return r;
}

std::string format_rational(const Rational& r) {
  Rational c(r);
  c.canonicalize();
  return c.get_str();
}

void Params::set(const std::string& name, const Rational& value) {
  for (auto& item : items_) {
    if (item.first == name) {
      item.second = value;
      return;
    }
  }
  items_.emplace_back(name, value);
}

bool Params::has(const std::string& name) const {
  return std::any_of(items_.begin(), items_.end(), [&](const auto& item) { return item.first == name; });
}

const Rational& Params::get(const std::string& name) const {
  for (const auto& item : items_) {
    if (item.first == name) return item.second;
  }
  throw DomainError("missing parameter '" + name + "'");
}

std::string Params::to_string() const {
  std::string out;
  for (const auto& [name, value] : items_) {
    if (!out.empty()) out += ",";
    out += name + "=" + format_rational(value);
  }
  return out;
}

Verdict residual_verdict(const Ball& residual, const Real& tolerance) {
  if (!residual.is_finite()) return Verdict::INCONCLUSIVE;
  if (residual.mag() <= tolerance) return Verdict::PASS;
  Real margin(64);
  mpfr_mul_ui(margin.get(), tolerance.get(), 10, MPFR_RNDU);
  if (residual.mig() > margin) return Verdict::FAIL;
  return Verdict::INCONCLUSIVE;
}

namespace {

using Clock = std::chrono::steady_clock;

// Summation results shared between entries of one run (K(1), A(t), ...).
struct EvalCache {
  std::mutex mutex;
  std::map<std::string, SummationResult> sums;
};

SummationResult memo(EvalCache& cache, const std::string& key, const PrecisionContext& ctx,
                     const std::function<SummationResult()>& compute) {
  const std::string k = key + "@" + std::to_string(ctx.working_digits()) + "/" +
                        ctx.target_tolerance().to_string(6) + "/" + std::to_string(ctx.max_abel_level()) + "/" +
                        std::to_string(ctx.max_terms());
  {
    std::lock_guard<std::mutex> lock(cache.mutex);
    auto it = cache.sums.find(k);
    if (it != cache.sums.end()) return it->second;
  }
  SummationResult r = compute();
  std::lock_guard<std::mutex> lock(cache.mutex);
  cache.sums.emplace(k, r);
  return r;
}

struct RawCheck {
  std::string name;
  Ball lhs;
  Ball rhs;
  SumVerdict sum = SumVerdict::CONVERGED;
  std::string diagnostics;
};

struct Evaluation {
  std::vector<RawCheck> checks;
  std::vector<NamedValue> values;
  long terms = 0;
  std::vector<std::string> notes;
};

using Evaluator = std::function<Evaluation(const Params&, CheckMethod, const PrecisionContext&, EvalCache&)>;

struct Entry {
  IdentitySpec spec;
  Evaluator eval;
};

Ball rat(const Rational& r, const PrecisionContext& ctx) { return Ball::from_rational(r, ctx.bits()); }
Ball num(long v, const PrecisionContext& ctx) { return Ball::from_int(v, ctx.bits()); }
bool is_integer(const Rational& r) { return r.get_den() == 1; }

long to_long(const Rational& r) {
  if (!is_integer(r) || !r.get_num().fits_slong_p()) throw DomainError("expected an integer, got " + r.get_str());
  return r.get_num().get_si();
}

Ball factorial(long n, const PrecisionContext& ctx) {
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
  return Ball::from_rational(Rational(f), ctx.bits());
}

// x^e, exact integer powers when e is an integer.
Ball power(const Ball& x, const Rational& e, const PrecisionContext& ctx) {
  if (is_integer(e)) return pow_int(x, to_long(e));
  return pow(x, rat(e, ctx));
}

SummationMethod as_summation(CheckMethod m) {
  switch (m) {
    case CheckMethod::DIRECT: return SummationMethod::DIRECT;
    case CheckMethod::ZETA_SPLIT: return SummationMethod::ZETA_SPLIT;
    case CheckMethod::ABEL: return SummationMethod::ABEL;
    case CheckMethod::PAIRING: return SummationMethod::PAIRING;
    default: break;
  }
  throw DomainError(std::string("not a summation method: ") + to_string(m));
}

SumVerdict worse(SumVerdict a, SumVerdict b) {
  auto rank = [](SumVerdict v) {
    switch (v) {
      case SumVerdict::DIVERGENT_CLASSICAL: return 3;
      case SumVerdict::INCONCLUSIVE: return 2;
      case SumVerdict::REGULARIZED: return 1;
      case SumVerdict::CONVERGED: return 0;
    }
    return 0;
  };
  return rank(a) >= rank(b) ? a : b;
}

// Records a summation in the evaluation's values and notes.
void note(Evaluation& ev, const std::string& label, const SummationResult& r) {
  ev.terms += r.terms_used;
  ev.values.push_back({label, r.value});
  if (r.parts.size() == 2) {
    ev.values.push_back({label + ".part_a", r.parts[0].value});
    ev.values.push_back({label + ".part_b", r.parts[1].value});
  }
  ev.notes.push_back(label + " [" + to_string(r.method) + ", " + to_string(r.verdict) + "]: " + r.diagnostics);
}

Real bound_times_four_thirds(const Real& sigma) {
  Real b = zeta_minus_one_bound(sigma);
  mpfr_mul_ui(b.get(), b.get(), 4, MPFR_RNDU);
  mpfr_div_ui(b.get(), b.get(), 3, MPFR_RNDU);
  return b;
}

// ---- shared sums ----

// K(1) = sum_{m>=2} (-1)^m zeta(m) under one method. Under ZETA_SPLIT the
// constant part is grouped in pairs.
SummationResult k1_sum(CheckMethod m, const PrecisionContext& ctx, EvalCache& cache) {
  return memo(cache, std::string("K1:") + to_string(m), ctx, [&] {
    return sum_series(alternating_zeta_series(2, std::nullopt, false, SummationMethod::PAIRING), as_summation(m), ctx);
  });
}

// sum_{n>=1} (zeta(2n) - zeta(2n+1)), classically convergent.
SummationResult k1_paired_form(const PrecisionContext& ctx, EvalCache& cache) {
  return memo(cache, "K1:paired-form", ctx, [&] {
    SeriesSpec spec;
    spec.start_index = 1;
    spec.stream = [](const PrecisionContext& c) -> TermStream {
      auto table = IntegerZetaTable::shared(c);
      auto n = std::make_shared<long>(1);
      return [table, n]() {
        const long k = (*n)++;
        return table->minus_one(2 * k) - table->minus_one(2 * k + 1);
      };
    };
    // 0 <= zeta(2n) - zeta(2n+1) <= B(2n), and B drops by 4x per step of 2.
    spec.tail_bound = [](long n) -> std::optional<Real> { return bound_times_four_thirds(Real(2 * n + 2, 64)); };
    spec.description = "sum (zeta(2n) - zeta(2n+1))";
    return sum_series(spec, SummationMethod::DIRECT, ctx);
  });
}

// A(t) = sum_{n>=t} tail(2n+1) (offset 1) and B(t) = sum_{n>=t} tail(2n+2)
// (offset 2) with tail(sigma) = sum_{m>=2} zeta(sigma, m).
SeriesSpec tail_family_series(long t, long offset) {
  SeriesSpec spec;
  spec.start_index = t;
  spec.term = [offset](long n, const PrecisionContext& c) {
    return hurwitz_tail_sum(Ball::from_int(2 * n + offset, c.bits()), c);
  };
  // tail(sigma) = zeta(sigma-1) - zeta(sigma) <= B(sigma-1).
  spec.tail_bound = [offset](long n) -> std::optional<Real> {
    return bound_times_four_thirds(Real(2 * n + 1 + offset, 64));
  };
  spec.description = offset == 1 ? "A(t)" : "B(t)";
  return spec;
}

SummationResult tail_family(long t, long offset, const PrecisionContext& ctx, EvalCache& cache) {
  const std::string key = (offset == 1 ? "A:" : "B:") + std::to_string(t);
  return memo(cache, key, ctx,
              [&] { return sum_series(tail_family_series(t, offset), SummationMethod::DIRECT, ctx); });
}

// sum_{m>=2} zeta(s,m) term by term; the tail after N is
// sum_{k>N} (k-N) k^-s <= N^(2-s)/(s-2).
SeriesSpec ladder_series(const Rational& s) {
  SeriesSpec spec;
  spec.start_index = 2;
  spec.term = [s](long m, const PrecisionContext& c) {
    return hurwitz_zeta(Ball::from_rational(s, c.bits()), Ball::from_int(m, c.bits()), c);
  };
  Real s_low(64);
  mpfr_set_q(s_low.get(), s.get_mpq_t(), MPFR_RNDD);
  spec.tail_bound = [s_low](long n) -> std::optional<Real> {
    Real e(64), b(64), d(64);
    mpfr_ui_sub(e.get(), 2, s_low.get(), MPFR_RNDU);
    mpfr_set_si(b.get(), n, MPFR_RNDN);
    mpfr_pow(b.get(), b.get(), e.get(), MPFR_RNDU);
    mpfr_sub_ui(d.get(), s_low.get(), 2, MPFR_RNDD);
    mpfr_div(b.get(), b.get(), d.get(), MPFR_RNDU);
    return b;
  };
  spec.description = "sum_{m>=2} zeta(s,m)";
  return spec;
}

// ---- evaluators ----

Evaluation eval_integral_rep(const Params& p, CheckMethod, const PrecisionContext& ctx, EvalCache&) {
  const long s = to_long(p.get("s"));
  const Ball q = rat(p.get("q"), ctx);
  Evaluation ev;
  auto bose = quad_semiinfinite_detailed(
      [s, q](const Ball& x) { return pow_int(x, s - 1) * exp(-(q * x)) / expm1(x); }, ctx);
  auto gamma = quad_semiinfinite_detailed([s, q](const Ball& x) { return pow_int(x, s - 1) * exp(-(q * x)); }, ctx);
  ev.terms = bose.evaluations + gamma.evaluations;
  ev.values.push_back({"integral e^-qx x^(s-1)/(e^x-1)", bose.value});
  ev.values.push_back({"integral e^-qx x^(s-1)", gamma.value});
  ev.checks.push_back({"integrals = Gamma(s) zeta(s,q)", bose.value + gamma.value,
                       factorial(s - 1, ctx) * hurwitz_zeta(num(s, ctx), q, ctx), SumVerdict::CONVERGED, ""});
  return ev;
}

Ball inverse_power(const Rational& q, const Rational& s, const PrecisionContext& ctx) {
  if (is_integer(s)) {
    const long k = to_long(s);
    mpz_class n, d;
    mpz_pow_ui(n.get_mpz_t(), q.get_num_mpz_t(), static_cast<unsigned long>(std::labs(k)));
    mpz_pow_ui(d.get_mpz_t(), q.get_den_mpz_t(), static_cast<unsigned long>(std::labs(k)));
    Rational r = k >= 0 ? Rational(d, n) : Rational(n, d);
    r.canonicalize();
    return rat(r, ctx);
  }
  return pow(rat(q, ctx), -rat(s, ctx));
}

Evaluation eval_series_rep(const Params& p, CheckMethod m, const PrecisionContext& ctx, EvalCache&) {
  const Rational& s = p.get("s");
  const Rational& q = p.get("q");
  Evaluation ev;
  auto r = sum_series(hurwitz_shift_series(rat(s, ctx), rat(q, ctx)), as_summation(m), ctx);
  note(ev, "series", r);
  const Ball head = inverse_power(q, s, ctx);
  ev.checks.push_back({"zeta(s,q) = q^-s + series", hurwitz_zeta(rat(s, ctx), rat(q, ctx), ctx), head + r.value,
                       r.verdict, r.diagnostics});
  return ev;
}

Evaluation eval_riemann_fe(const Params& p, CheckMethod m, const PrecisionContext& ctx, EvalCache&) {
  const Ball s = rat(p.get("s"), ctx);
  Evaluation ev;
  auto r = sum_series(hurwitz_shift_series(s, num(1, ctx)), as_summation(m), ctx);
  note(ev, "series", r);
  Ball rhs = r.value;
  rhs.add_si(1);
  ev.checks.push_back({"zeta(s) = 1 + series", riemann_zeta(s, ctx), rhs, r.verdict, r.diagnostics});
  return ev;
}

Evaluation eval_unit_fe(const Params& p, CheckMethod m, const PrecisionContext& ctx, EvalCache&) {
  Evaluation ev;
  auto r = sum_series(unit_series(rat(p.get("s"), ctx)), as_summation(m), ctx);
  note(ev, "series", r);
  ev.checks.push_back({"1 = series", num(1, ctx), r.value, r.verdict, r.diagnostics});
  return ev;
}

Evaluation eval_weighted_at_two(const Params&, CheckMethod m, const PrecisionContext& ctx, EvalCache&) {
  Evaluation ev;
  auto r = sum_series(alternating_zeta_series(3, std::nullopt, true, SummationMethod::ABEL), as_summation(m), ctx);
  note(ev, "series", r);
  ev.checks.push_back({"sum_{m>=3} (-1)^(m-1)(m-1) zeta(m) = 1", r.value, num(1, ctx), r.verdict, r.diagnostics});
  return ev;
}

Evaluation eval_k1(const Params&, CheckMethod m, const PrecisionContext& ctx, EvalCache& cache) {
  Evaluation ev;
  auto k = k1_sum(m, ctx, cache);
  auto form = k1_paired_form(ctx, cache);
  note(ev, "K(1)", k);
  note(ev, "sum (zeta(2n) - zeta(2n+1))", form);
  ev.checks.push_back({"K(1) = sum (zeta(2n) - zeta(2n+1))", k.value, form.value, worse(k.verdict, form.verdict),
                       k.diagnostics});
  return ev;
}

// The two boundary terms of the integrated derivative, each enclosed by
// monotonicity: sampled values must decrease towards the end point, and the
// limit lies in [0, last sample].
Evaluation eval_boundary_limits(const Params& p, CheckMethod, const PrecisionContext& ctx, EvalCache&) {
  const Rational s1 = p.get("s") - 1;
  const Real tol = ctx.target_tolerance();
  Evaluation ev;
  auto f = [&](const Ball& x) { return power(x, s1, ctx) / expm1(x); };
  auto scan = [&](bool at_zero) {
    const int max_samples = at_zero ? 40 : 16;
    RawCheck check;
    check.name = at_zero ? "lim_{x->0} x^(s-1)/(e^x-1) = 0" : "lim_{x->inf} x^(s-1)/(e^x-1) = 0";
    std::optional<Ball> prev;
    Ball last;
    std::string last_x;
    int count = 0;
    for (int k = 0; k < max_samples; ++k) {
      Rational x_r;
      if (at_zero) {
        mpz_class d;
        mpz_ui_pow_ui(d.get_mpz_t(), 10, static_cast<unsigned long>(6 + 3 * k));
        x_r = Rational(mpz_class(1), d);
        last_x = "1e-" + std::to_string(6 + 3 * k);
      } else {
        x_r = Rational(mpz_class(30) << static_cast<mp_bitcnt_t>(k));
        last_x = x_r.get_str();
      }
      Ball v = f(rat(x_r, ctx));
      ++count;
      if (prev && !(v.upper() < prev->lower())) {
        check.sum = SumVerdict::INCONCLUSIVE;
        check.diagnostics = "samples not monotone at x = " + last_x;
        break;
      }
      prev = v;
      last = v;
      if (k >= 2 && v.upper() <= tol) break;
    }
    Real half = last.upper();
    mpfr_div_2ui(half.get(), half.get(), 1, MPFR_RNDU);
    check.lhs = Ball(half, half);
    check.rhs = num(0, ctx);
    if (check.diagnostics.empty()) {
      check.diagnostics = std::to_string(count) + " samples, last x = " + last_x + ", value " + last.to_string(6);
    }
    ev.values.push_back({std::string("f(") + last_x + ")", last});
    ev.terms += count;
    return check;
  };
  ev.checks.push_back(scan(false));
  ev.checks.push_back(scan(true));
  return ev;
}

Evaluation eval_derivative_integrals(const Params& p, CheckMethod, const PrecisionContext& ctx, EvalCache&) {
  const Rational& s = p.get("s");
  const Rational s1 = s - 1;
  const Rational s2 = s - 2;
  Evaluation ev;
  auto left = quad_semiinfinite_detailed([&](const Ball& x) { return power(x, s2, ctx) / expm1(x); }, ctx);
  auto right = quad_semiinfinite_detailed(
      [&](const Ball& x) {
        Ball d = expm1(x);
        return power(x, s1, ctx) * exp(x) / (d * d);
      },
      ctx);
  ev.terms = left.evaluations + right.evaluations;
  Ball lhs = left.value * rat(s1, ctx);
  ev.values.push_back({"integral x^(s-2)/(e^x-1)", left.value});
  ev.values.push_back({"integral x^(s-1) e^x/(e^x-1)^2", right.value});
  if (is_integer(s)) {
    ev.values.push_back({"Gamma(s) zeta(s-1)", factorial(to_long(s) - 1, ctx) * riemann_zeta(rat(s1, ctx), ctx)});
  }
  ev.checks.push_back({"(s-1) integral x^(s-2)/(e^x-1) = integral x^(s-1) e^x/(e^x-1)^2", lhs, right.value,
                       SumVerdict::CONVERGED, ""});
  return ev;
}

Evaluation eval_ladder(const Params& p, CheckMethod, const PrecisionContext& ctx, EvalCache&) {
  const Rational& s = p.get("s");
  Evaluation ev;
  Ball tail = hurwitz_tail_sum(rat(s, ctx), ctx);
  ev.values.push_back({"sum_{m>=2} zeta(s,m)", tail});
  ev.checks.push_back({"zeta(s-1) = zeta(s) + sum_{m>=2} zeta(s,m)", riemann_zeta(rat(s - 1, ctx), ctx),
                       riemann_zeta(rat(s, ctx), ctx) + tail, SumVerdict::CONVERGED, ""});
  return ev;
}

Evaluation eval_finite_iterate(const Params& p, CheckMethod, const PrecisionContext& ctx, EvalCache&) {
  const Rational& s = p.get("s");
  const long steps = to_long(p.get("p"));
  Evaluation ev;
  auto d = double_sum(rat(s, ctx), steps, ctx);
  note(ev, "double sum", d);
  ev.checks.push_back({"zeta(s) = zeta(s+p) + double sum", riemann_zeta(rat(s, ctx), ctx),
                       riemann_zeta(rat(s + steps, ctx), ctx) + d.value, d.verdict, d.diagnostics});
  return ev;
}

Evaluation eval_infinite_iterate(const Params& p, CheckMethod, const PrecisionContext& ctx, EvalCache&) {
  const Rational& s = p.get("s");
  Evaluation ev;
  auto d = double_sum(rat(s, ctx), std::nullopt, ctx);
  note(ev, "double sum", d);
  Ball rhs = d.value;
  rhs.add_si(1);
  ev.checks.push_back({"zeta(s) = 1 + double sum", riemann_zeta(rat(s, ctx), ctx), rhs, d.verdict, d.diagnostics});
  return ev;
}

Evaluation eval_pair_tails(const Params&, CheckMethod, const PrecisionContext& ctx, EvalCache& cache) {
  Evaluation ev;
  auto k = k1_sum(CheckMethod::PAIRING, ctx, cache);
  auto a = tail_family(1, 1, ctx, cache);
  note(ev, "K(1)", k);
  note(ev, "sum_n sum_m zeta(2n+1,m)", a);
  ev.checks.push_back({"K(1) paired = sum_n sum_m zeta(2n+1,m)", k.value, a.value, worse(k.verdict, a.verdict),
                       k.diagnostics});
  return ev;
}

Evaluation eval_ab_split(const Params& p, CheckMethod, const PrecisionContext& ctx, EvalCache& cache) {
  const long t = to_long(p.get("t"));
  Evaluation ev;
  auto a = tail_family(t, 1, ctx, cache);
  auto b = tail_family(t, 2, ctx, cache);
  note(ev, "A(t)", a);
  note(ev, "B(t)", b);
  Ball rhs = a.value + b.value;
  rhs.add_si(1);
  ev.checks.push_back({"zeta(2t) = 1 + A(t) + B(t)", riemann_zeta(num(2 * t, ctx), ctx), rhs,
                       worse(a.verdict, b.verdict), ""});
  auto form = k1_paired_form(ctx, cache);
  note(ev, "sum (zeta(2n) - zeta(2n+1))", form);
  Ball head = a.value;
  for (long n = 1; n < t; ++n) head += hurwitz_tail_sum(num(2 * n + 1, ctx), ctx);
  ev.checks.push_back({"K(1) paired = sum_{n<t} sum_m zeta(2n+1,m) + A(t)", form.value, head,
                       worse(form.verdict, a.verdict), ""});
  return ev;
}

Evaluation eval_linear_forms(const Params& p, CheckMethod m, const PrecisionContext& ctx, EvalCache& cache) {
  const long j = to_long(p.get("j"));
  Evaluation ev;
  const std::string tag = std::to_string(j) + ":" + to_string(m);
  auto pj = memo(cache, "P:" + tag, ctx, [&] {
    return sum_series(alternating_zeta_series(3, j, true, SummationMethod::ABEL), as_summation(m), ctx);
  });
  auto sj = memo(cache, "S:" + tag, ctx, [&] {
    return sum_series(alternating_zeta_series(3, j, false, SummationMethod::ABEL), as_summation(m), ctx);
  });
  auto k = k1_sum(m, ctx, cache);
  note(ev, "P_j", pj);
  note(ev, "sum_{m>=3, m!=j} (-1)^m zeta(m)", sj);
  note(ev, "K(1)", k);
  const Ball zj = riemann_zeta(num(j, ctx), ctx);
  const long a_j = (j % 2 == 0 ? -1 : 1) * (j - 1);
  const long b_j = j % 2 == 0 ? 1 : -1;
  Ball q_j = sj.value - k.value;
  ev.values.push_back({"Q_j", q_j});
  ev.checks.push_back({"a_j zeta(j) + P_j = 1", num(a_j, ctx) * zj + pj.value, num(1, ctx), pj.verdict,
                       pj.diagnostics});
  ev.checks.push_back({"b_j zeta(j) + Q_j = -zeta(2)", num(b_j, ctx) * zj + q_j, -riemann_zeta(num(2, ctx), ctx),
                       worse(sj.verdict, k.verdict), sj.diagnostics});
  return ev;
}

// ---- catalog ----

using Predicate = std::function<void(const Params&)>;

void require(bool ok, const std::string& message) {
  if (!ok) throw DomainError(message);
}

void s_above(const Params& p, long bound) {
  const Rational& s = p.get("s");
  require(s != 1, "s = 1 is the pole of zeta");
  require(s > bound, "requires s > " + std::to_string(bound) + ", got s = " + s.get_str());
}

void positive_integer(const Params& p, const std::string& name, long min) {
  const Rational& v = p.get(name);
  require(is_integer(v) && v >= min && v <= 100000,
          "requires integer " + name + " >= " + std::to_string(min) + ", got " + v.get_str());
}

std::vector<Params> grid1(const std::string& name, std::vector<long> values) {
  std::vector<Params> out;
  for (long v : values) out.push_back(Params{{name, Rational(v)}});
  return out;
}

std::vector<Params> grid2(const std::string& a, std::vector<Rational> as, const std::string& b,
                          std::vector<Rational> bs) {
  std::vector<Params> out;
  for (const auto& x : as) {
    for (const auto& y : bs) out.push_back(Params{{a, x}, {b, y}});
  }
  return out;
}

Entry make(std::string id, std::string short_id, std::string statement, std::vector<std::string> names,
           std::vector<CheckMethod> methods, bool sensitive, std::vector<Params> grid, Predicate pred,
           Evaluator eval) {
  Entry e;
  e.spec.id = std::move(id);
  e.spec.short_id = std::move(short_id);
  e.spec.statement = std::move(statement);
  e.spec.param_names = std::move(names);
  e.spec.allowed_methods = std::move(methods);
  e.spec.regularization_sensitive = sensitive;
  e.spec.default_grid = std::move(grid);
  const auto declared = e.spec.param_names;
  const auto label = e.spec.id;
  e.spec.domain_check = [declared, label, pred](const Params& p) {
    for (const auto& [name, value] : p.items()) {
      if (std::find(declared.begin(), declared.end(), name) == declared.end()) {
        if (name == "s" && value == 1) throw DomainError(label + ": s = 1 is the pole of zeta");
        throw DomainError(label + " takes no parameter '" + name + "'");
      }
    }
    for (const auto& name : declared) {
      if (!p.has(name)) throw DomainError(label + " needs parameter '" + name + "'");
    }
    if (pred) pred(p);
  };
  e.eval = std::move(eval);
  return e;
}

const std::vector<Entry>& entries() {
  static const std::vector<Entry> all = [] {
    using M = CheckMethod;
    const std::vector<long> s_grid = {3, 4, 5, 6};
    const std::vector<Rational> s_rats = {3, 4, 5, 6};
    std::vector<Entry> v;
    v.push_back(make("EQ-2.5-INT", "EQ-2.5",
                     "int e^-qx x^(s-1)/(e^x-1) dx + int e^-qx x^(s-1) dx = Gamma(s) zeta(s,q)", {"s", "q"},
                     {M::QUADRATURE}, false,
                     {Params{{"s", 2}, {"q", 1}}, Params{{"s", 3}, {"q", 1}}, Params{{"s", 3}, {"q", Rational(1, 2)}},
                      Params{{"s", 4}, {"q", 2}}},
                     [](const Params& p) {
                       positive_integer(p, "s", 2);
                       require(p.get("q") > 0, "requires q > 0");
                     },
                     eval_integral_rep));
    v.push_back(make("EQ-2.8-SERIES", "EQ-2.8", "zeta(s,q) = q^-s + sum_{n>=0} (-q)^n (s)_n/n! zeta(s+n)",
                     {"s", "q"}, {M::DIRECT, M::ZETA_SPLIT, M::ABEL}, false,
                     grid2("s", s_rats, "q", {Rational(1, 4), Rational(1, 2), Rational(3, 4), Rational(1)}),
                     [](const Params& p) {
                       s_above(p, 1);
                       const Rational& q = p.get("q");
                       require(q > 0 && q <= 1, "requires 0 < q <= 1 (the series diverges for q > 1)");
                     },
                     eval_series_rep));
    v.push_back(make("EQ-2.9-FE", "EQ-2.9", "zeta(s) = 1 + sum_{n>=0} (-1)^n (s)_n/n! zeta(s+n)", {"s"},
                     {M::ZETA_SPLIT, M::ABEL}, false, grid1("s", s_grid), [](const Params& p) { s_above(p, 1); },
                     eval_riemann_fe));
    v.push_back(make("EQ-2.11-FE", "EQ-2.11", "1 = sum_{n>=1} (-1)^(n+1) (s)_n/n! zeta(s+n)", {"s"},
                     {M::ZETA_SPLIT, M::ABEL}, false, grid1("s", s_grid), [](const Params& p) { s_above(p, 1); },
                     eval_unit_fe));
    v.push_back(make("EQ-3.3", "EQ-3.3", "sum_{m>=3} (-1)^(m-1) (m-1) zeta(m) = 1", {}, {M::ZETA_SPLIT, M::ABEL},
                     false, {Params{}}, nullptr, eval_weighted_at_two));
    v.push_back(make("EQ-3.4-K1", "EQ-3.4", "K(1) = sum_{m>=2} (-1)^m zeta(m) = sum_{n>=1} (zeta(2n) - zeta(2n+1))",
                     {}, {M::PAIRING, M::ZETA_SPLIT, M::ABEL}, true, {Params{}}, nullptr, eval_k1));
    v.push_back(make("EQ-3.7-LIM", "EQ-3.7", "lim_{x->inf} x^(s-1)/(e^x-1) = lim_{x->0} x^(s-1)/(e^x-1) = 0",
                     {"s"}, {M::DIRECT}, false, grid1("s", s_grid), [](const Params& p) { s_above(p, 2); },
                     eval_boundary_limits));
    v.push_back(make("EQ-3.9-INT", "EQ-3.9", "(s-1) int x^(s-2)/(e^x-1) dx = int x^(s-1) e^x/(e^x-1)^2 dx", {"s"},
                     {M::QUADRATURE}, false, grid1("s", s_grid), [](const Params& p) { s_above(p, 2); },
                     eval_derivative_integrals));
    v.push_back(make("EQ-3.16-LADDER", "EQ-3.16", "zeta(s-1) = zeta(s) + sum_{m>=2} zeta(s,m)", {"s"}, {M::DIRECT},
                     false, grid1("s", s_grid), [](const Params& p) { s_above(p, 2); }, eval_ladder));
    v.push_back(make("EQ-3.21-FIN", "EQ-3.21", "zeta(s) = zeta(s+p) + sum_{q=1}^{p} sum_{m>=2} zeta(s+q,m)",
                     {"s", "p"}, {M::DIRECT}, false, grid2("s", s_rats, "p", {1, 2, 5}),
                     [](const Params& p) {
                       s_above(p, 1);
                       positive_integer(p, "p", 1);
                     },
                     eval_finite_iterate));
    v.push_back(make("EQ-3.22-INF", "EQ-3.22", "zeta(s) = 1 + sum_{q>=1} sum_{m>=2} zeta(s+q,m)", {"s"},
                     {M::DIRECT}, false, grid1("s", s_grid), [](const Params& p) { s_above(p, 1); },
                     eval_infinite_iterate));
    v.push_back(make("EQ-3.29-PAIR", "EQ-3.29", "K(1) paired = sum_{n>=1} sum_{m>=2} zeta(2n+1,m)", {},
                     {M::PAIRING}, false, {Params{}}, nullptr, eval_pair_tails));
    v.push_back(make("EQ-3.34-AB", "EQ-3.34",
                     "zeta(2t) = 1 + A(t) + B(t); K(1) paired = sum_{n<t} sum_m zeta(2n+1,m) + A(t)", {"t"},
                     {M::DIRECT}, false, grid1("t", {1, 2, 3}), [](const Params& p) { positive_integer(p, "t", 1); },
                     eval_ab_split));
    v.push_back(make("EQ-4.1-LINFORM", "EQ-4.1", "a_j zeta(j) + P_j = 1; b_j zeta(j) + Q_j = -zeta(2)", {"j"},
                     {M::ZETA_SPLIT, M::ABEL, M::PAIRING}, true, grid1("j", {3, 4, 5, 6, 7}),
                     [](const Params& p) { positive_integer(p, "j", 3); }, eval_linear_forms));
    return v;
  }();
  return all;
}

const Entry& find_entry(const std::string& id) {
  for (const auto& e : entries()) {
    if (e.spec.id == id || e.spec.short_id == id) return e;
  }
  throw UnknownIdentity("unknown identity '" + id + "'");
}

// Reorders params to the declared order and validates them.
Params normalized(const IdentitySpec& spec, const Params& p) {
  spec.domain_check(p);
  Params out;
  for (const auto& name : spec.param_names) out.set(name, p.get(name));
  return out;
}

Ball unbounded(mpfr_prec_t prec) { return Ball(Real(prec), Real::infinity()); }

CheckOutcome finish(const RawCheck& c, const Real& tol) {
  CheckOutcome out;
  out.name = c.name;
  out.lhs = c.lhs;
  out.rhs = c.rhs;
  out.diagnostics = c.diagnostics;
  if (c.sum == SumVerdict::DIVERGENT_CLASSICAL) {
    out.residual = unbounded(c.lhs.precision());
    out.certified_bound = Real::infinity();
    out.verdict = Verdict::DIVERGENT_CLASSICAL;
    return out;
  }
  out.residual = c.lhs - c.rhs;
  out.certified_bound = out.residual.mag();
  out.verdict = residual_verdict(out.residual, tol);
  if (c.sum == SumVerdict::INCONCLUSIVE && out.verdict == Verdict::PASS) out.verdict = Verdict::INCONCLUSIVE;
  return out;
}

// Picks the deciding check and the overall verdict of one method run.
void summarize(IdentityCheckResult& r) {
  if (r.checks.empty()) return;
  const CheckOutcome* pick = nullptr;
  for (Verdict v : {Verdict::FAIL, Verdict::DIVERGENT_CLASSICAL, Verdict::INCONCLUSIVE}) {
    for (const auto& c : r.checks) {
      if (c.verdict == v) {
        pick = &c;
        break;
      }
    }
    if (pick) break;
  }
  if (!pick) {
    pick = &r.checks.front();
    for (const auto& c : r.checks) {
      if (c.certified_bound > pick->certified_bound) pick = &c;
    }
  }
  r.residual = pick->residual;
  r.certified_bound = pick->certified_bound;
  r.verdict = pick->verdict;
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

IdentityCheckResult run_method(const Entry& e, const Params& p, CheckMethod m, const PrecisionContext& ctx,
                               EvalCache& cache) {
  const auto t0 = Clock::now();
  IdentityCheckResult r;
  r.id = e.spec.id;
  r.params = p;
  r.method = m;
  try {
    Evaluation ev = e.eval(p, m, ctx, cache);
    for (const auto& c : ev.checks) r.checks.push_back(finish(c, ctx.target_tolerance()));
    r.values = std::move(ev.values);
    r.terms_used = ev.terms;
    std::string diag;
    for (const auto& n : ev.notes) diag += (diag.empty() ? "" : "; ") + n;
    r.diagnostics = diag;
    summarize(r);
  } catch (const PrecisionExhausted& ex) {
    r.verdict = Verdict::INCONCLUSIVE;
    r.residual = unbounded(ctx.bits());
    r.certified_bound = Real::infinity();
    r.diagnostics = std::string("precision exhausted: ") + ex.what();
  } catch (const QuadratureNoConvergence& ex) {
    r.verdict = Verdict::INCONCLUSIVE;
    r.residual = unbounded(ctx.bits());
    r.certified_bound = Real::infinity();
    r.diagnostics = std::string("quadrature did not converge: ") + ex.what();
  }
  r.elapsed_seconds = seconds_since(t0);
  return r;
}

bool usable(const CheckOutcome& c) {
  return c.verdict != Verdict::DIVERGENT_CLASSICAL && c.lhs.is_finite();
}

IdentityCheckResult run_all_methods(const Entry& e, const Params& p, const PrecisionContext& ctx, EvalCache& cache) {
  const auto t0 = Clock::now();
  IdentityCheckResult r;
  r.id = e.spec.id;
  r.params = p;
  r.method = CheckMethod::ALL;
  for (CheckMethod m : e.spec.allowed_methods) r.by_method.push_back(run_method(e, p, m, ctx, cache));

  const Real& tol = ctx.target_tolerance();
  std::ostringstream disagreements;
  for (std::size_t a = 0; a < r.by_method.size(); ++a) {
    for (std::size_t b = a + 1; b < r.by_method.size(); ++b) {
      const auto& ca = r.by_method[a].checks;
      const auto& cb = r.by_method[b].checks;
      for (std::size_t k = 0; k < std::min(ca.size(), cb.size()); ++k) {
        if (!usable(ca[k]) || !usable(cb[k])) continue;
        const Ball d = ca[k].lhs - cb[k].lhs;
        if (d.mig() > tol) {
          disagreements << (disagreements.tellp() > 0 ? "; " : "") << ca[k].name << ": "
                        << ca[k].lhs.to_string(12) << " (" << to_string(r.by_method[a].method) << ") vs "
                        << cb[k].lhs.to_string(12) << " (" << to_string(r.by_method[b].method) << ")";
        }
      }
    }
  }
  for (const auto& sub : r.by_method) r.terms_used += sub.terms_used;
  const auto& first = r.by_method.front();
  r.checks = first.checks;
  r.values = first.values;
  r.residual = first.residual;
  r.certified_bound = first.certified_bound;
  if (disagreements.tellp() > 0) {
    r.verdict = Verdict::REGULARIZATION_DEPENDENT;
    r.diagnostics = "methods disagree: " + disagreements.str();
  } else {
    auto any = [&](Verdict v) {
      return std::any_of(r.by_method.begin(), r.by_method.end(), [v](const auto& s) { return s.verdict == v; });
    };
    if (any(Verdict::FAIL)) {
      r.verdict = Verdict::FAIL;
    } else if (any(Verdict::PASS)) {
      r.verdict = Verdict::PASS;
    } else if (any(Verdict::INCONCLUSIVE)) {
      r.verdict = Verdict::INCONCLUSIVE;
    } else {
      r.verdict = Verdict::DIVERGENT_CLASSICAL;
    }
    r.diagnostics = "methods agree within radii";
  }
  r.elapsed_seconds = seconds_since(t0);
  return r;
}

IdentityCheckResult run_checked(const Entry& e, const Params& p, CheckMethod method, const PrecisionContext& ctx,
                                EvalCache& cache) {
  const auto& allowed = e.spec.allowed_methods;
  if (method == CheckMethod::ALL || (method == CheckMethod::AUTO && e.spec.regularization_sensitive)) {
    return run_all_methods(e, p, ctx, cache);
  }
  if (method != CheckMethod::AUTO) {
    if (std::find(allowed.begin(), allowed.end(), method) == allowed.end()) {
      throw DomainError(std::string("method ") + to_string(method) + " is not allowed for " + e.spec.id);
    }
    return run_method(e, p, method, ctx, cache);
  }
  const auto t0 = Clock::now();
  std::vector<RejectedMethod> rejected;
  for (std::size_t i = 0; i < allowed.size(); ++i) {
    IdentityCheckResult r = run_method(e, p, allowed[i], ctx, cache);
    if (r.verdict == Verdict::DIVERGENT_CLASSICAL && i + 1 < allowed.size()) {
      rejected.push_back({allowed[i], r.verdict, r.diagnostics});
      continue;
    }
    r.rejected = std::move(rejected);
    r.elapsed_seconds = seconds_since(t0);
    return r;
  }
  throw DomainError("no method allowed for " + e.spec.id);
}

}  // namespace

const std::vector<IdentitySpec>& catalog() {
  static const std::vector<IdentitySpec> specs = [] {
    std::vector<IdentitySpec> out;
    for (const auto& e : entries()) out.push_back(e.spec);
    return out;
  }();
  return specs;
}

const IdentitySpec& find_identity(const std::string& id) { return find_entry(id).spec; }

IdentityCheckResult check(const std::string& id, const Params& params, CheckMethod method,
                          const PrecisionContext& ctx) {
  const Entry& e = find_entry(id);
  EvalCache cache;
  return run_checked(e, normalized(e.spec, params), method, ctx, cache);
}

SeriesSpec identity_series(const std::string& id, const Params& params, const PrecisionContext& ctx) {
  const Entry& e = find_entry(id);
  const Params p = normalized(e.spec, params);
  const std::string& key = e.spec.id;
  if (key == "EQ-2.8-SERIES") return hurwitz_shift_series(rat(p.get("s"), ctx), rat(p.get("q"), ctx));
  if (key == "EQ-2.9-FE") return hurwitz_shift_series(rat(p.get("s"), ctx), num(1, ctx));
  if (key == "EQ-2.11-FE") return unit_series(rat(p.get("s"), ctx));
  if (key == "EQ-3.3") return alternating_zeta_series(3, std::nullopt, true, SummationMethod::ABEL);
  if (key == "EQ-3.4-K1") return alternating_zeta_series(2, std::nullopt, false, SummationMethod::PAIRING);
  if (key == "EQ-3.16-LADDER") return ladder_series(p.get("s"));
  if (key == "EQ-3.29-PAIR") return tail_family_series(1, 1);
  if (key == "EQ-3.34-AB") return tail_family_series(to_long(p.get("t")), 1);
  if (key == "EQ-4.1-LINFORM") return alternating_zeta_series(3, to_long(p.get("j")), true, SummationMethod::ABEL);
  throw DomainError(key + " is not a single series and has no convergence trace");
}

std::vector<IdentityCheckResult> verify_all(const GridOverrides& grids, const PrecisionContext& ctx,
                                            CheckMethod method) {
  for (const auto& [id, unused] : grids) find_entry(id);
  EvalCache cache;
  std::vector<IdentityCheckResult> out;
  for (const auto& e : entries()) {
    auto it = grids.find(e.spec.id);
    if (it == grids.end()) it = grids.find(e.spec.short_id);
    const std::vector<Params>& grid = it != grids.end() ? it->second : e.spec.default_grid;
    const auto& allowed = e.spec.allowed_methods;
    const bool applies = method == CheckMethod::ALL ||
                         std::find(allowed.begin(), allowed.end(), method) != allowed.end();
    const CheckMethod m = applies ? method : CheckMethod::AUTO;
    for (const auto& p : grid) {
      try {
        out.push_back(run_checked(e, normalized(e.spec, p), m, ctx, cache));
      } catch (const Error& ex) {
        IdentityCheckResult r;
        r.id = e.spec.id;
        r.params = p;
        r.method = m;
        r.residual = unbounded(ctx.bits());
        r.certified_bound = Real::infinity();
        r.verdict = Verdict::INCONCLUSIVE;
        r.diagnostics = std::string("error: ") + ex.what();
        out.push_back(std::move(r));
      }
    }
  }
  return out;
}

}  // namespace zlab
