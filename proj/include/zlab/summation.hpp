#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "zlab/ball.hpp"
#include "zlab/context.hpp"

namespace zlab {

enum class SummationMethod { DIRECT, ZETA_SPLIT, ABEL, PAIRING };
enum class SumVerdict { CONVERGED, DIVERGENT_CLASSICAL, REGULARIZED, INCONCLUSIVE };

const char* to_string(SummationMethod m);
const char* to_string(SumVerdict v);
/// Case-insensitive; throws DomainError on an unknown name.
SummationMethod parse_method(const std::string& name);

/// Yields successive terms. Each call advances by one index.
using TermStream = std::function<Ball()>;
/// Optional bound as a function of the last summed index.
using BoundFn = std::function<std::optional<Real>(long n)>;

struct ZetaForm;

struct SeriesSpec {
  /// Random access term(n, ctx). Used when `stream` is empty.
  std::function<Ball(long n, const PrecisionContext& ctx)> term;
  /// Sequential terms from start_index on, built for the given context. Much
  /// cheaper than `term` for hypergeometric coefficients.
  std::function<TermStream(const PrecisionContext& ctx)> stream;
  long start_index = 0;

  /// Bound on |sum_{n>N} term(n)|.
  BoundFn tail_bound;
  /// sup_{n>=N} |term(n+1)/term(n)|; used while it is below 1.
  BoundFn ratio_bound;
  /// Index from which the terms alternate in sign with non-increasing
  /// magnitude (verified by the caller for the specific series).
  std::optional<long> alternating_decreasing_from;
  /// Enclosure of sum_{n>N} term(n) itself. DIRECT stops once its radius is
  /// below the truncation target and adds it to the partial sum.
  std::function<std::optional<Ball>(long n, const PrecisionContext& ctx)> tail_enclosure;
  /// For PAIRING: bound on the sum of all pairs after the pair ending at raw
  /// index N.
  BoundFn paired_tail_bound;

  /// term(n) = c_n * zeta(s + n); enables ZETA_SPLIT.
  std::shared_ptr<const ZetaForm> zeta_form;
  std::string description;
};

struct SummationResult {
  Ball value;
  SummationMethod method = SummationMethod::DIRECT;
  long terms_used = 0;
  SumVerdict verdict = SumVerdict::INCONCLUSIVE;
  std::string diagnostics;
  /// Sub-results of a composite method (ZETA_SPLIT: part a, part b).
  std::vector<SummationResult> parts;

  bool ok() const { return verdict == SumVerdict::CONVERGED || verdict == SumVerdict::REGULARIZED; }
};

/// Series of the form sum_{n>=start} c_n zeta(s + n), split into
/// (a) sum c_n (zeta(s+n) - 1), summed directly, and
/// (b) sum c_n, summed with `constant_method`.
struct ZetaForm {
  Ball s;
  long start_index = 0;
  /// Stream of c_start, c_{start+1}, ...
  std::function<TermStream(const PrecisionContext& ctx)> coeff_stream;
  /// Bound on sum_{n>N} |c_n| (zeta(s+n) - 1), given c_{N+1}.
  std::function<std::optional<Real>(long n, const Ball& c_next)> part_a_tail;
  /// The constant part as its own series, with whatever bounds it admits.
  SeriesSpec constant;
  SummationMethod constant_method = SummationMethod::ABEL;
};

/// Sums `spec` with the given method. Divergence under DIRECT or PAIRING is
/// reported through the verdict, never thrown. Throws PrecisionExhausted when
/// a supplied bound fails to certify within max_terms, DomainError when
/// ZETA_SPLIT is requested for a series without a zeta form.
SummationResult sum_series(const SeriesSpec& spec, SummationMethod method, const PrecisionContext& ctx);

/// lim_{x->1-} sum term(n) x^n, extrapolated to x = 1 in h = 1 - x from the
/// nodes h = 2^-j (j = 3..max_abel_level) plus five dyadic nodes inside each
/// octave, near 2^-(j + f/6).
/// The radius includes the difference of the last two extrapolants. Inner
/// tails are empirical geometric bounds.
SummationResult abel_limit(const SeriesSpec& spec, const PrecisionContext& ctx);

/// The diagonal extrapolants after each node down to h = 2^-last_level.
std::vector<Ball> abel_extrapolants(const SeriesSpec& spec, int last_level, const PrecisionContext& ctx);

SummationResult zeta_split_sum(const ZetaForm& form, const PrecisionContext& ctx);

/// sum_{q=1}^{p} sum_{m>=2} zeta(s+q, m) through hurwitz_tail_sum(s+q). With
/// no p the outer tail after Q equals zeta(s+Q) - 1 and is bounded by
/// zeta_minus_one_bound(s+Q).
SummationResult double_sum(const Ball& s, std::optional<long> p, const PrecisionContext& ctx);

/// env * B(sigma) / (1 - ratio/2): tail of sum_{n>N} |c_n| (zeta(sigma_n) - 1)
/// when |c_{N+1}| <= env, |c_{n+1}/c_n| <= ratio < 2 beyond N, and
/// sigma_{N+1} = sigma. Empty if ratio >= 2.
std::optional<Real> geometric_zeta_tail(const Real& env, const Real& ratio, const Real& sigma);

struct TracePoint {
  long n = 0;  ///< number of summed terms (pairs under PAIRING)
  Ball partial;
  std::optional<Real> tail;
};

struct TraceResult {
  std::vector<TracePoint> points;
  SumVerdict verdict = SumVerdict::CONVERGED;
  std::string diagnostics;
};

/// Partial sums at the requested term counts (sorted ascending) under DIRECT,
/// PAIRING or ZETA_SPLIT. For ZETA_SPLIT the partial is part (a) truncated
/// plus the full constant part. Stops early with DIVERGENT_CLASSICAL if the
/// divergence detector fires.
TraceResult trace_series(const SeriesSpec& spec, SummationMethod method, std::vector<long> counts,
                         const PrecisionContext& ctx);

}  // namespace zlab
