#pragma once

#include <functional>

#include "zlab/ball.hpp"
#include "zlab/context.hpp"

namespace zlab {

using Integrand = std::function<Ball(const Ball& x)>;

struct QuadratureResult {
  Ball value;
  int levels = 0;        ///< refinement levels evaluated
  long evaluations = 0;  ///< integrand calls
};

/// Integral over (0, inf) of an integrand that is smooth on the open interval,
/// integrable at 0 and decays at least exponentially at infinity.
///
/// Uses the exp-sinh map x = exp(pi/2 sinh t) followed by the trapezoidal rule
/// in t, halving the step until two successive levels agree below the
/// truncation target. The radius is the last level difference plus the
/// discarded boundary terms plus the propagated integrand radii; the
/// discretization part is an estimate, not a proof.
///
/// Throws QuadratureNoConvergence when max_quad_levels is reached while the
/// level difference still exceeds the target tolerance, and DomainError when
/// the integrand returns a non-finite sample.
QuadratureResult quad_semiinfinite_detailed(const Integrand& f, const PrecisionContext& ctx);

inline Ball quad_semiinfinite(const Integrand& f, const PrecisionContext& ctx) {
  return quad_semiinfinite_detailed(f, ctx).value;
}

}  // namespace zlab
