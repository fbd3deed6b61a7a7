#include "zlab/summation.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <deque>
#include <sstream>

#include "zlab/errors.hpp"
#include "zlab/zeta.hpp"

namespace zlab {
namespace {

constexpr long kDetectorLimit = 4096;
constexpr int kAbelFirstLevel = 3;
constexpr int kAbelMinLevels = 4;
constexpr int kAbelNodesPerOctave = 6;

double mag_d(const Ball& b) { return b.mag().to_double(); }

Real real_from_double_up(double v) {
  Real r(64);
  mpfr_set_d(r.get(), v, MPFR_RNDU);
  return r;
}

TermStream open_stream(const SeriesSpec& spec, const PrecisionContext& ctx) {
  if (spec.stream) return spec.stream(ctx);
  if (!spec.term) throw DomainError("series '" + spec.description + "' has neither term nor stream");
  auto term = spec.term;
  auto n = std::make_shared<long>(spec.start_index);
  return [term, n, ctx]() { return term((*n)++, ctx); };
}

// Flags classical divergence of a series that carries no tail bound.
class DivergenceDetector {
 public:
  std::optional<std::string> update(const Ball& term, const Ball& partial) {
    ++count_;
    const double m = mag_d(term);
    if (first_ == 0.0 && m > 0.0) first_ = m;
    if (first_ > 0.0 && mag_d(partial) > 1e6 * first_) {
      return "partial sums exceed 1e6 times the first term after " + std::to_string(count_) + " terms";
    }
    const int sign = term.mid().sign();
    last_.push_back({sign, m});
    if (last_.size() > 3) last_.pop_front();
    if (last_.size() == 3) {
      const auto& a = last_[0];
      const auto& b = last_[1];
      const auto& c = last_[2];
      const bool alternating = a.first != 0 && b.first == -a.first && c.first == a.first;
      if (alternating && a.second < b.second && b.second < c.second) {
        return "three successive alternating partial-sum gaps grow (term " + std::to_string(count_) + ")";
      }
    }
    // Terms that stop shrinking: at N = 2^k, every |t| in (N/2, N] is at
    // least 0.9 times the largest in (N/4, N/2].
    mags_.push_back(m);
    const auto n = static_cast<std::size_t>(count_);
    if (n >= 256 && (n & (n - 1)) == 0) {
      const double late_min = *std::min_element(mags_.begin() + static_cast<long>(n / 2), mags_.end());
      const double early_max =
          *std::max_element(mags_.begin() + static_cast<long>(n / 4), mags_.begin() + static_cast<long>(n / 2));
      if (early_max > 0.0 && late_min >= 0.9 * early_max) {
        std::ostringstream msg;
        msg << "terms do not tend to zero (|t| >= " << late_min << " over terms " << n / 2 + 1 << ".." << n << ")";
        return msg.str();
      }
    }
    return std::nullopt;
  }

 private:
  long count_ = 0;
  double first_ = 0.0;
  std::deque<std::pair<int, double>> last_;
  std::vector<double> mags_;
};

// Bound on the tail after index n given the current and the next term.
using TailAt = std::function<std::optional<Real>(long n, const Ball& cur, const Ball& nxt)>;

struct CoreOut {
  Ball partial;
  long terms = 0;
  SumVerdict verdict = SumVerdict::INCONCLUSIVE;
  std::string diagnostics;
  std::vector<TracePoint> points;
};

void keep_min(std::optional<Real>& best, const Real& cand) {
  if (!best || cand < *best) best = cand;
}

// Partial sums with one term of lookahead. In trace mode (non-empty
// checkpoints) it records partials and stops after the last checkpoint.
using EnclosureAt = std::function<std::optional<Ball>(long n, const PrecisionContext& ctx)>;

CoreOut direct_core(TermStream& next, long start, const TailAt& tail_at, bool detect, const PrecisionContext& ctx,
                    const std::vector<long>& checkpoints = {}, const EnclosureAt& enclosure = nullptr) {
  const bool tracing = !checkpoints.empty();
  const Real target = ctx.truncation_target();
  CoreOut out;
  out.partial = Ball(ctx.bits());
  DivergenceDetector detector;
  std::size_t next_cp = 0;
  Ball cur = next();
  for (long n = start;; ++n) {
    out.partial += cur;
    ++out.terms;
    Ball nxt = next();
    std::optional<Real> tail = tail_at ? tail_at(n, cur, nxt) : std::nullopt;
    if (tracing && next_cp < checkpoints.size() && out.terms == checkpoints[next_cp]) {
      out.points.push_back({out.terms, out.partial, tail});
      if (++next_cp == checkpoints.size()) {
        out.verdict = SumVerdict::CONVERGED;
        return out;
      }
    }
    if (!tracing && enclosure) {
      auto e = enclosure(n, ctx);
      if (e && e->rad() < target) {
        out.partial += *e;
        out.verdict = SumVerdict::CONVERGED;
        out.diagnostics = "tail enclosure " + e->to_string(3) + " after " + std::to_string(out.terms) + " terms";
        return out;
      }
    }
    if (!tracing && tail && *tail < target) {
      out.partial.add_error(*tail);
      out.verdict = SumVerdict::CONVERGED;
      out.diagnostics = "certified tail " + tail->to_string(3) + " after " + std::to_string(out.terms) + " terms";
      return out;
    }
    if (detect) {
      if (auto why = detector.update(cur, out.partial)) {
        out.verdict = SumVerdict::DIVERGENT_CLASSICAL;
        out.diagnostics = *why;
        return out;
      }
      if (!tracing && out.terms >= kDetectorLimit) {
        out.verdict = SumVerdict::INCONCLUSIVE;
        out.diagnostics = "no tail bound available and no divergence detected in " + std::to_string(out.terms) +
                          " terms";
        return out;
      }
    }
    if (out.terms >= ctx.max_terms()) {
      throw PrecisionExhausted("tail bound not below the truncation target after max_terms = " +
                               std::to_string(ctx.max_terms()) + " terms");
    }
    cur = std::move(nxt);
  }
}

// |t_n| rho / (1 - rho), rounded up.
Real ratio_tail(const Ball& cur, const Real& rho) {
  Real den(64);
  mpfr_ui_sub(den.get(), 1, rho.get(), MPFR_RNDD);
  return div_up(mul_up(cur.mag(), rho), den);
}

TailAt direct_tail(const SeriesSpec& spec) {
  if (!spec.tail_bound && !spec.ratio_bound && !spec.alternating_decreasing_from) return nullptr;
  return [&spec](long n, const Ball& cur, const Ball& nxt) {
    std::optional<Real> best;
    if (spec.tail_bound) {
      if (auto b = spec.tail_bound(n)) keep_min(best, *b);
    }
    if (spec.ratio_bound) {
      auto r = spec.ratio_bound(n);
      if (r && *r < Real(1, 64)) keep_min(best, ratio_tail(cur, *r));
    }
    if (spec.alternating_decreasing_from && n + 1 >= *spec.alternating_decreasing_from) keep_min(best, nxt.mag());
    return best;
  };
}

struct PairStream {
  TermStream stream;
  std::shared_ptr<Ball> latest_first;
};

PairStream pair_stream(const SeriesSpec& spec, const PrecisionContext& ctx) {
  auto raw = std::make_shared<TermStream>(open_stream(spec, ctx));
  auto first = std::make_shared<Ball>();
  TermStream s = [raw, first]() {
    *first = (*raw)();
    Ball second = (*raw)();
    return *first + second;
  };
  return {s, first};
}

TailAt pair_tail(const SeriesSpec& spec, std::shared_ptr<Ball> latest_first) {
  if (!spec.paired_tail_bound && !spec.tail_bound && !spec.alternating_decreasing_from) return nullptr;
  return [&spec, latest_first](long k, const Ball&, const Ball&) {
    const long raw_end = spec.start_index + 2 * k + 1;
    std::optional<Real> best;
    if (spec.paired_tail_bound) {
      if (auto b = spec.paired_tail_bound(raw_end)) keep_min(best, *b);
    }
    if (spec.tail_bound) {
      if (auto b = spec.tail_bound(raw_end)) keep_min(best, *b);
    }
    // The lookahead pair has been produced, so latest_first is raw_end + 1.
    if (spec.alternating_decreasing_from && raw_end + 1 >= *spec.alternating_decreasing_from) {
      keep_min(best, latest_first->mag());
    }
    return best;
  };
}

SummationResult from_core(CoreOut core, SummationMethod method) {
  SummationResult r;
  r.value = std::move(core.partial);
  r.method = method;
  r.terms_used = core.terms;
  r.verdict = core.verdict;
  if (method != SummationMethod::DIRECT && r.verdict == SumVerdict::CONVERGED) r.verdict = SumVerdict::REGULARIZED;
  r.diagnostics = std::move(core.diagnostics);
  return r;
}

SummationResult sum_direct(const SeriesSpec& spec, const PrecisionContext& ctx) {
  TermStream s = open_stream(spec, ctx);
  TailAt tail = direct_tail(spec);
  const bool bounded = tail || spec.tail_enclosure;
  return from_core(direct_core(s, spec.start_index, tail, !bounded, ctx, {}, spec.tail_enclosure),
                   SummationMethod::DIRECT);
}

SummationResult sum_pairing(const SeriesSpec& spec, const PrecisionContext& ctx) {
  PairStream ps = pair_stream(spec, ctx);
  TailAt tail = pair_tail(spec, ps.latest_first);
  SummationResult r = from_core(direct_core(ps.stream, 0, tail, !tail, ctx), SummationMethod::PAIRING);
  r.terms_used *= 2;
  return r;
}

// ---- Abel ----

// Abel node h = num * 2^-exp, x = 1 - h.
struct AbelNode {
  long num;
  long exp;
};

// h = 2^-j for j = 3..last, with kAbelNodesPerOctave - 1 nodes between
// consecutive powers at dyadic approximations of 2^-(j + f/k).
std::vector<AbelNode> abel_nodes(int last_level) {
  std::vector<AbelNode> nodes;
  for (int j = kAbelFirstLevel; j <= last_level; ++j) {
    for (int f = 0; f < kAbelNodesPerOctave; ++f) {
      if (f > 0 && j == last_level) break;
      const long num = std::lround(256.0 * std::exp2(-static_cast<double>(f) / kAbelNodesPerOctave));
      nodes.push_back({num, j + 8});
    }
  }
  return nodes;
}

mpq_class node_h(const AbelNode& node) {
  mpq_class h(node.num);
  mpz_class den(1);
  den <<= static_cast<mp_bitcnt_t>(node.exp);
  h /= den;
  return h;
}

struct LevelOut {
  Ball value;
  long terms = 0;
  double max_log10 = -1e9;
};

// sum t_n x^n on midpoints only. Rounding and input radii are bounded in
// double precision as the loop runs: x is exact, x^n carries at most (n+2)
// roundings, each product one more, each addition one.
LevelOut abel_level(const SeriesSpec& spec, const AbelNode& node, const PrecisionContext& lctx) {
  const mpfr_prec_t prec = lctx.bits();
  Real x(prec), xp(prec), sum(prec), prod(prec);
  mpfr_set_ui_2exp(x.get(), static_cast<unsigned long>(node.num), -node.exp, MPFR_RNDN);
  mpfr_ui_sub(x.get(), 1, x.get(), MPFR_RNDN);
  const double x_d = 1.0 - std::ldexp(static_cast<double>(node.num), static_cast<int>(-node.exp));
  const double u = std::ldexp(1.0, static_cast<int>(1 - prec));
  const double cut = lctx.truncation_target().to_double() / 16.0;
  const long start = std::max(0L, spec.start_index);
  mpfr_pow_ui(xp.get(), x.get(), static_cast<unsigned long>(start), MPFR_RNDN);
  mpfr_set_zero(sum.get(), 1);
  TermStream next = open_stream(spec, lctx);
  LevelOut out;
  double err = 0.0;
  std::deque<double> window;
  double prev = 0.0;
  double max_mag = 0.0;
  for (long count = 1;; ++count) {
    const Ball t = next();
    const double n_pow = static_cast<double>(start + count + 3);
    const double xp_d = mpfr_get_d(xp.get(), MPFR_RNDU);
    mpfr_mul(prod.get(), t.mid().get(), xp.get(), MPFR_RNDN);
    mpfr_add(sum.get(), sum.get(), prod.get(), MPFR_RNDN);
    mpfr_mul(xp.get(), xp.get(), x.get(), MPFR_RNDN);
    const double m = std::fabs(mpfr_get_d(prod.get(), MPFR_RNDA));
    const double rad_d = mpfr_get_d(t.rad().get(), MPFR_RNDU);
    err += m * n_pow * u + rad_d * xp_d * (1.0 + n_pow * u) + std::fabs(mpfr_get_d(sum.get(), MPFR_RNDA)) * u;
    const double mt = m + rad_d * xp_d;
    max_mag = std::max(max_mag, mt);
    if (mt > 0.0) {
      if (prev > 0.0) {
        window.push_back(mt / prev);
        if (window.size() > 8) window.pop_front();
      }
      prev = mt;
    }
    if (count >= 16 && window.size() == 8) {
      const double rho = std::max(*std::max_element(window.begin(), window.end()), x_d);
      if (rho < 1.0) {
        const double tail = mt * rho / (1.0 - rho);
        if (tail < cut) {
          out.value = Ball(sum, real_from_double_up((err + tail) * (1.0 + 1e-6)));
          out.terms = count;
          out.max_log10 = max_mag > 0.0 ? std::log10(max_mag) : -1e9;
          return out;
        }
      }
    }
    if (count >= lctx.max_terms()) {
      throw PrecisionExhausted("Abel node h = " + std::to_string(node.num) + "*2^-" + std::to_string(node.exp) +
                               " needs more than max_terms = " + std::to_string(lctx.max_terms()) + " terms");
    }
  }
}

Real abs_mid_diff(const Ball& a, const Ball& b) {
  Real d(std::max(a.precision(), b.precision()));
  mpfr_sub(d.get(), a.mid().get(), b.mid().get(), MPFR_RNDN);
  Real r(64);
  mpfr_abs(r.get(), d.get(), MPFR_RNDU);
  return r;
}

}  // namespace

const char* to_string(SummationMethod m) {
  switch (m) {
    case SummationMethod::DIRECT: return "DIRECT";
    case SummationMethod::ZETA_SPLIT: return "ZETA_SPLIT";
    case SummationMethod::ABEL: return "ABEL";
    case SummationMethod::PAIRING: return "PAIRING";
  }
  return "?";
}

const char* to_string(SumVerdict v) {
  switch (v) {
    case SumVerdict::CONVERGED: return "CONVERGED";
    case SumVerdict::DIVERGENT_CLASSICAL: return "DIVERGENT_CLASSICAL";
    case SumVerdict::REGULARIZED: return "REGULARIZED";
    case SumVerdict::INCONCLUSIVE: return "INCONCLUSIVE";
  }
  return "?";
}

SummationMethod parse_method(const std::string& name) {
  std::string u;
  for (char c : name) u.push_back(c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  for (auto m : {SummationMethod::DIRECT, SummationMethod::ZETA_SPLIT, SummationMethod::ABEL, SummationMethod::PAIRING}) {
    if (u == to_string(m)) return m;
  }
  throw DomainError("unknown summation method '" + name + "'");
}

SummationResult sum_series(const SeriesSpec& spec, SummationMethod method, const PrecisionContext& ctx) {
  switch (method) {
    case SummationMethod::DIRECT: return sum_direct(spec, ctx);
    case SummationMethod::PAIRING: return sum_pairing(spec, ctx);
    case SummationMethod::ABEL: return abel_limit(spec, ctx);
    case SummationMethod::ZETA_SPLIT:
      if (!spec.zeta_form) throw DomainError("ZETA_SPLIT needs a zeta form: '" + spec.description + "'");
      return zeta_split_sum(*spec.zeta_form, ctx);
  }
  throw DomainError("bad summation method");
}

namespace {

SummationResult abel_run(const SeriesSpec& spec, const PrecisionContext& ctx, int last_level, bool stop_early,
                         std::vector<Ball>* extrapolants) {
  const Real tol = ctx.target_tolerance();
  // Level values must sit well under the tolerance before extrapolation.
  Real level_target = ctx.truncation_target();
  mpfr_mul_ui(level_target.get(), level_target.get(), 100, MPFR_RNDD);
  const mpfr_prec_t prec_hi = ctx.bits() + 64;
  const std::vector<AbelNode> nodes = abel_nodes(last_level);

  std::vector<mpq_class> hs;
  std::vector<Ball> row;  // T_{i-1,k}, k = 0..i-1
  SummationResult result;
  result.method = SummationMethod::ABEL;
  long terms = 0;
  int extra = 0;
  double prev_log = 0.0, prev_prev_log = 0.0;
  std::optional<Ball> last_extrap;
  Real last_diff = Real::infinity();
  Real prev_diff = Real::infinity();
  std::ostringstream diag;

  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (i >= 2) extra += std::max(0, static_cast<int>(std::ceil(prev_log - prev_prev_log)));
    LevelOut lv;
    for (int attempt = 0;; ++attempt) {
      lv = abel_level(spec, nodes[i], ctx.with_digits(ctx.working_digits() + extra));
      terms += lv.terms;
      if (lv.value.rad() <= level_target || attempt == 3) break;
      Real ratio(64);
      mpfr_div(ratio.get(), lv.value.rad().get(), level_target.get(), MPFR_RNDU);
      extra += static_cast<int>(std::ceil(std::log10(ratio.to_double()))) + 3;
    }
    prev_prev_log = prev_log;
    prev_log = lv.max_log10;
    hs.push_back(node_h(nodes[i]));

    // Neville in h: T_{i,k} = T_{i,k-1} + (T_{i,k-1} - T_{i-1,k-1}) h_i / (h_{i-k} - h_i).
    std::vector<Ball> cur;
    cur.reserve(i + 1);
    cur.push_back(lv.value.with_precision(prec_hi));
    for (std::size_t k = 1; k <= i; ++k) {
      Ball d = cur[k - 1] - row[k - 1];
      const mpq_class f = hs[i] / (hs[i - k] - hs[i]);
      d *= Ball::from_rational(f, prec_hi);
      cur.push_back(cur[k - 1] + d);
    }
    const Ball& extrap = cur.back();
    if (extrapolants) extrapolants->push_back(extrap);
    if (last_extrap) {
      prev_diff = last_diff;
      last_diff = abs_mid_diff(extrap, *last_extrap);
      if (stop_early && static_cast<int>(i) >= kAbelMinLevels - 1 && last_diff < tol && prev_diff < tol) {
        result.value = extrap.with_precision(ctx.bits());
        result.value.add_error(last_diff);
        result.verdict = SumVerdict::REGULARIZED;
        result.terms_used = terms;
        diag << "Abel nodes down to h = " << nodes[i].num << "*2^-" << nodes[i].exp << ", extrapolant change "
             << last_diff.to_string(3) << ", extra digits " << extra;
        result.diagnostics = diag.str();
        return result;
      }
    }
    last_extrap = extrap;
    row = std::move(cur);
  }
  result.value = last_extrap->with_precision(ctx.bits());
  if (last_diff.is_finite()) result.value.add_error(last_diff);
  result.verdict = SumVerdict::INCONCLUSIVE;
  result.terms_used = terms;
  diag << "Abel extrapolants did not stabilize below the tolerance by h = 2^-" << last_level << " (last change "
       << last_diff.to_string(3) << ")";
  result.diagnostics = diag.str();
  return result;
}

}  // namespace

SummationResult abel_limit(const SeriesSpec& spec, const PrecisionContext& ctx) {
  return abel_run(spec, ctx, ctx.max_abel_level(), true, nullptr);
}

std::vector<Ball> abel_extrapolants(const SeriesSpec& spec, int last_level, const PrecisionContext& ctx) {
  std::vector<Ball> out;
  abel_run(spec, ctx, last_level, false, &out);
  return out;
}

std::optional<Real> geometric_zeta_tail(const Real& env, const Real& ratio, const Real& sigma) {
  Real half(64);
  mpfr_div_2ui(half.get(), ratio.get(), 1, MPFR_RNDU);
  if (!(half < Real(1, 64))) return std::nullopt;
  Real den(64);
  mpfr_ui_sub(den.get(), 1, half.get(), MPFR_RNDD);
  return div_up(mul_up(env, zeta_minus_one_bound(sigma)), den);
}

namespace {

bool exact_integer(const Ball& b) { return b.is_exact() && mpfr_integer_p(b.mid().get()); }

// Stream of c_n (zeta(s+n) - 1). The last coefficient drawn is published
// through `last_coeff`; under the one-term lookahead of direct_core that is
// c_{N+1} when the tail after N is queried.
std::function<TermStream(const PrecisionContext&)> part_a_stream(const ZetaForm& form,
                                                                 std::shared_ptr<Ball> last_coeff) {
  return [form, last_coeff](const PrecisionContext& lctx) -> TermStream {
    auto coeff = std::make_shared<TermStream>(form.coeff_stream(lctx));
    auto n = std::make_shared<long>(form.start_index);
    if (exact_integer(form.s)) {
      auto table = IntegerZetaTable::shared(lctx);
      const long s0 = mpfr_get_si(form.s.mid().get(), MPFR_RNDN);
      return [coeff, n, table, s0, last_coeff]() {
        *last_coeff = (*coeff)();
        return *last_coeff * table->minus_one(s0 + (*n)++);
      };
    }
    Ball s = form.s;
    return [coeff, n, s, lctx, last_coeff]() {
      *last_coeff = (*coeff)();
      Ball sigma = s;
      sigma.add_si((*n)++);
      return *last_coeff * zeta_minus_one(sigma, lctx);
    };
  };
}

SeriesSpec part_a_spec(const ZetaForm& form) {
  auto last_coeff = std::make_shared<Ball>();
  SeriesSpec a;
  a.stream = part_a_stream(form, last_coeff);
  a.start_index = form.start_index;
  auto tail = form.part_a_tail;
  a.tail_bound = [tail, last_coeff](long n) { return tail(n, *last_coeff); };
  a.description = "zeta-1 part";
  return a;
}

}  // namespace

SummationResult zeta_split_sum(const ZetaForm& form, const PrecisionContext& ctx) {
  if (!form.coeff_stream || !form.part_a_tail) throw DomainError("zeta form needs a coefficient stream and a tail");
  SummationResult a = sum_direct(part_a_spec(form), ctx);
  SummationResult b = sum_series(form.constant, form.constant_method, ctx);
  SummationResult r;
  r.method = SummationMethod::ZETA_SPLIT;
  r.value = a.value + b.value;
  r.terms_used = a.terms_used + b.terms_used;
  if (a.ok() && b.ok()) {
    r.verdict = SumVerdict::REGULARIZED;
  } else if (a.verdict == SumVerdict::DIVERGENT_CLASSICAL || b.verdict == SumVerdict::DIVERGENT_CLASSICAL) {
    r.verdict = SumVerdict::DIVERGENT_CLASSICAL;
  } else {
    r.verdict = SumVerdict::INCONCLUSIVE;
  }
  r.diagnostics = std::string("part a (zeta-1) ") + to_string(a.verdict) + " = " + a.value.to_string(20) +
                  "; part b (constant, " + to_string(form.constant_method) + ") " + to_string(b.verdict) + " = " +
                  b.value.to_string(20);
  r.parts = {std::move(a), std::move(b)};
  return r;
}

SummationResult double_sum(const Ball& s, std::optional<long> p, const PrecisionContext& ctx) {
  if (!(s.lower() > Real(1, 64))) throw DomainError("double_sum: s must exceed 1, got " + s.to_string(10));
  if (p && *p < 1) throw DomainError("double_sum: p must be >= 1");
  const Real target = ctx.truncation_target();
  SummationResult r;
  r.method = SummationMethod::DIRECT;
  r.value = Ball(ctx.bits());
  for (long q = 1;; ++q) {
    Ball sq = s;
    sq.add_si(q);
    r.value += hurwitz_tail_sum(sq, ctx);
    r.terms_used = q;
    if (p) {
      if (q == *p) {
        r.verdict = SumVerdict::CONVERGED;
        r.diagnostics = "finite outer sum, p = " + std::to_string(*p);
        return r;
      }
      continue;
    }
    const Real tail = zeta_minus_one_bound(sq.lower());
    if (tail < target) {
      r.value.add_error(tail);
      r.verdict = SumVerdict::CONVERGED;
      r.diagnostics = "outer tail zeta(s+Q)-1 <= " + tail.to_string(3) + " at Q = " + std::to_string(q);
      return r;
    }
    if (q >= ctx.max_terms()) throw PrecisionExhausted("double_sum: outer sum did not certify");
  }
}

TraceResult trace_series(const SeriesSpec& spec, SummationMethod method, std::vector<long> counts,
                         const PrecisionContext& ctx) {
  std::sort(counts.begin(), counts.end());
  counts.erase(std::unique(counts.begin(), counts.end()), counts.end());
  if (counts.empty() || counts.front() < 1) throw DomainError("trace: term counts must be positive");
  TraceResult out;
  CoreOut core;
  std::optional<Ball> shift;
  switch (method) {
    case SummationMethod::DIRECT: {
      TermStream s = open_stream(spec, ctx);
      TailAt tail = direct_tail(spec);
      core = direct_core(s, spec.start_index, tail, !tail, ctx, counts);
      break;
    }
    case SummationMethod::PAIRING: {
      PairStream ps = pair_stream(spec, ctx);
      TailAt tail = pair_tail(spec, ps.latest_first);
      core = direct_core(ps.stream, 0, tail, !tail, ctx, counts);
      break;
    }
    case SummationMethod::ZETA_SPLIT: {
      if (!spec.zeta_form) throw DomainError("ZETA_SPLIT needs a zeta form: '" + spec.description + "'");
      const ZetaForm& form = *spec.zeta_form;
      SummationResult b = sum_series(form.constant, form.constant_method, ctx);
      if (!b.ok()) {
        out.verdict = b.verdict;
        out.diagnostics = "constant part: " + b.diagnostics;
        return out;
      }
      shift = b.value;
      SeriesSpec a = part_a_spec(form);
      TermStream s = open_stream(a, ctx);
      TailAt tail = direct_tail(a);
      core = direct_core(s, a.start_index, tail, !tail, ctx, counts);
      break;
    }
    case SummationMethod::ABEL:
      throw DomainError("trace supports DIRECT, PAIRING and ZETA_SPLIT");
  }
  out.verdict = core.verdict;
  out.diagnostics = core.diagnostics;
  out.points = std::move(core.points);
  if (shift) {
    for (auto& pt : out.points) pt.partial += *shift;
  }
  return out;
}

}  // namespace zlab
