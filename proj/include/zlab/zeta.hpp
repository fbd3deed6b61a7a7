#pragma once

#include <memory>
#include <mutex>
#include <vector>

#include "zlab/ball.hpp"
#include "zlab/context.hpp"

namespace zlab {

// All four evaluators share one scheme: a directly summed head followed by an
// Euler-Maclaurin tail whose remainder |B_2M|/(2M)! * int |f^(2M)| is folded
// into the radius. The head length N starts near 0.7*digits + |s| and doubles
// until the remainder drops below ctx.truncation_target(). For large s a plain
// head with an integral-test tail is used when it is shorter.

/// zeta(s) for s > 1. Throws DomainError if the interval of s reaches 1 and
/// PrecisionExhausted if max_terms is exceeded.
Ball riemann_zeta(const Ball& s, const PrecisionContext& ctx);

/// zeta(s, q) = sum_{n>=0} (n+q)^-s for s > 1, q > 0.
Ball hurwitz_zeta(const Ball& s, const Ball& q, const PrecisionContext& ctx);

/// zeta(s) - 1 summed from k = 2, so its relative accuracy survives when the
/// value is close to 2^-s.
Ball zeta_minus_one(const Ball& s, const PrecisionContext& ctx);

/// sum_{m>=2} zeta(s, m), evaluated through the exchanged single series
/// sum_{n>=2} (n-1) n^-s. Requires s > 2.
Ball hurwitz_tail_sum(const Ball& s, const PrecisionContext& ctx);

/// Upper bound on zeta(sigma) - 1 valid for sigma > 1:
/// 2^-sigma + integral_2^inf x^-sigma dx = 2^-sigma (1 + 2/(sigma-1)).
Real zeta_minus_one_bound(const Real& sigma);

/// Memoized zeta(m) - 1 at integers m >= 2 for the long term streams of the
/// summation and identity modules. Beyond the index where the bound drops
/// under the truncation target the value is returned as the enclosure
/// [0, B(cutoff)] without summing. Thread-safe.
class IntegerZetaTable {
 public:
  explicit IntegerZetaTable(const PrecisionContext& ctx);
  /// Process-wide table for ctx.working_digits(), built on first use.
  static std::shared_ptr<IntegerZetaTable> shared(const PrecisionContext& ctx);

  /// zeta(m) - 1, m >= 2.
  Ball minus_one(long m);
  /// zeta(m), m >= 2.
  Ball value(long m);

  const PrecisionContext& context() const { return ctx_; }

 private:
  PrecisionContext ctx_;
  long cutoff_;
  Ball beyond_;
  std::mutex mutex_;
  std::vector<Ball> cache_;  // index m - 2
};

}  // namespace zlab
