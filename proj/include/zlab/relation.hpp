#pragma once

#include <functional>
#include <string>
#include <vector>

#include "zlab/ball.hpp"
#include "zlab/context.hpp"

namespace zlab {

struct RelationQuery {
  /// 2 to 8 values, each with radius below 10^-(working_digits - 5).
  std::vector<Ball> values;
  /// Search bound H on max |c_i|.
  long coeff_bound = 1000;
  /// Recomputes the values at another precision; used to re-verify a relation
  /// at doubled precision. When empty the input balls are combined exactly.
  std::function<std::vector<Ball>(const PrecisionContext&)> reevaluate;
  /// Display names, e.g. {"1", "zeta(2)", "zeta(3)"}. Optional.
  std::vector<std::string> labels;
};

enum class RelationOutcome { FOUND, EXCLUDED };
const char* to_string(RelationOutcome o);

struct RelationResult {
  RelationOutcome outcome = RelationOutcome::EXCLUDED;
  /// FOUND: primitive, first nonzero entry positive.
  std::vector<long> coefficients;
  /// FOUND: sum c_i v_i evaluated at doubled precision.
  Ball residual;
  /// EXCLUDED: no relation with max |c_i| <= bound exists at this precision.
  /// Equal to the requested H unless the search stopped early.
  long bound = 0;
  int precision_digits = 0;
  long iterations = 0;
  std::vector<std::string> labels;
  std::string note;
};

/// PSLQ on the midpoints in fixed point at the working precision. A candidate
/// relation counts only if it passes the detection threshold
/// 10^-(working_digits - 8) |v| and then again at doubled precision.
/// EXCLUDED follows from the PSLQ norm bound, so it is a statement about
/// relations up to H at this precision, not an irrationality proof.
///
/// Throws InvalidQuery (length, radius, H < 1) and PrecisionTooLow when
/// working_digits < 3 log10(H) length.
RelationResult find_integer_relation(const RelationQuery& q, const PrecisionContext& ctx);

/// For each j, in order: (1, zeta(2), zeta(j)) then (1, zeta(j)).
/// Throws DomainError for j < 3.
std::vector<RelationResult> probe_zeta_family(const std::vector<long>& js, long coeff_bound,
                                              const PrecisionContext& ctx);

}  // namespace zlab
