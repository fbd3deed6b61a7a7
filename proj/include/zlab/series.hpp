#pragma once

#include <optional>

#include "zlab/summation.hpp"

namespace zlab {

/// Coefficients sign * (-q)^n (s)_n / n! for n = start, start+1, ...
std::function<TermStream(const PrecisionContext&)> pochhammer_coefficients(const Ball& s, const Ball& q, long start,
                                                                            int sign);

/// sum_{n>=0} (-1)^n q^n (s)_n/n! zeta(s+n). Converges for 0 < q < 1, where a
/// ratio bound is attached; at q = 1 no classical bound exists. Carries a zeta
/// form whose constant part sum (-q)^n (s)_n/n! is Abel-summed.
SeriesSpec hurwitz_shift_series(const Ball& s, const Ball& q);

/// sum_{n>=1} (-1)^(n+1) (s)_n/n! zeta(s+n), classically divergent.
SeriesSpec unit_series(const Ball& s);

/// sum_{m>=from, m != skip} w_m zeta(m) with w_m = (-1)^(m-1) (m-1) when
/// `weighted`, else (-1)^m. The skipped index contributes an exact zero so
/// the index stays m. `constant_method` sums the constant part of the split.
SeriesSpec alternating_zeta_series(long from, std::optional<long> skip, bool weighted,
                                   SummationMethod constant_method);

}  // namespace zlab
