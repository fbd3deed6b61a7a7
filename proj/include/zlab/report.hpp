#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "zlab/identities.hpp"
#include "zlab/relation.hpp"
#include "zlab/summation.hpp"

namespace zlab {

const char* tool_version();

/// One `eval` call: riemann, hurwitz, zeta_minus_one or tail_sum.
struct EvalRecord {
  std::string function;
  Params params;
  Ball value;
};

using ReportEntry = std::variant<IdentityCheckResult, RelationResult, EvalRecord>;

struct Report {
  int digits = 50;
  Real tolerance;
  std::string method = "AUTO";
  std::vector<ReportEntry> results;
  double wall_clock_seconds = 0.0;
};

struct SummaryCounts {
  long total = 0;
  /// Every verdict name, zero counts included. Top-level identity results only.
  std::map<std::string, long> verdicts;
  /// FOUND / EXCLUDED.
  std::map<std::string, long> outcomes;
  long evaluations = 0;
};

SummaryCounts summarize(const Report& report);

/// Keys: version, context, results, summary. Timing lives in the
/// elapsed_seconds and wall_clock_seconds fields only.
std::string to_json(const Report& report);

/// Columns: kind,id,params,method,verdict,value_mid,value_rad,certified_bound,
/// detail,elapsed_seconds. Relations put their labels in id, the outcome in
/// verdict and the coefficients or bound in detail.
std::string to_csv(const Report& report);

/// Columns: N,partial_value,certified_tail (empty when no tail is known).
std::string trace_to_csv(const TraceResult& trace, int digits);

/// Parses and re-serializes a JSON report with every timing field removed.
std::string strip_timing(const std::string& json_text);

/// verify: 2 if any FAIL, else 3 if any INCONCLUSIVE or DIVERGENT_CLASSICAL,
/// else 0. REGULARIZATION_DEPENDENT counts as success.
int verify_exit_code(const SummaryCounts& counts);

/// "<mid to digits significant digits> ± <radius, 2 digits, rounded up>"
std::string format_ball(const Ball& b, int digits);

}  // namespace zlab
