#pragma once

#include <gmpxx.h>

#include "zlab/ball.hpp"
#include "zlab/context.hpp"

namespace zlab {

/// Exact rational in lowest terms with a positive denominator.
using Rational = mpq_class;

/// B_k with the convention B_1 = -1/2. Values are computed by the exact
/// recurrence sum_{j=0}^{k} C(k+1, j) B_j = 0 and cached process-wide.
Rational bernoulli(unsigned k);

/// Rising factorial s (s+1) ... (s+n-1) = Gamma(s+n)/Gamma(s); exactly 1 for
/// n = 0. Throws PrecisionExhausted if a factor's interval contains zero.
Ball pochhammer_ratio(const Ball& s, unsigned long n, const PrecisionContext& ctx);

/// Binomial coefficient C(n, k) as an exact ball.
Ball binomial_ball(unsigned long n, unsigned long k, mpfr_prec_t prec);

}  // namespace zlab
