#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "zlab/ball.hpp"
#include "zlab/context.hpp"
#include "zlab/numerics.hpp"
#include "zlab/summation.hpp"

namespace zlab {

enum class Verdict { PASS, FAIL, DIVERGENT_CLASSICAL, REGULARIZATION_DEPENDENT, INCONCLUSIVE };

/// AUTO and ALL are requests; results carry the method actually used, or ALL
/// for a multi-method run.
enum class CheckMethod { AUTO, DIRECT, ZETA_SPLIT, ABEL, PAIRING, QUADRATURE, ALL };

const char* to_string(Verdict v);
const char* to_string(CheckMethod m);
/// Case-insensitive, '-' accepted for '_'. Throws DomainError.
CheckMethod parse_check_method(const std::string& name);

/// "3", "-2", "1/4" or a plain decimal such as "0.25" (read exactly).
Rational parse_rational(const std::string& text);
std::string format_rational(const Rational& r);

/// Named parameter values in the order the identity declares them.
class Params {
 public:
  Params() = default;
  Params(std::initializer_list<std::pair<std::string, Rational>> items) : items_(items) {}

  void set(const std::string& name, const Rational& value);
  bool has(const std::string& name) const;
  /// Throws DomainError if absent.
  const Rational& get(const std::string& name) const;
  const std::vector<std::pair<std::string, Rational>>& items() const { return items_; }
  bool empty() const { return items_.empty(); }
  /// "s=3,q=1/4"
  std::string to_string() const;

  friend bool operator==(const Params& a, const Params& b) { return a.items_ == b.items_; }

 private:
  std::vector<std::pair<std::string, Rational>> items_;
};

struct IdentitySpec {
  std::string id;        ///< e.g. "EQ-3.16-LADDER"
  std::string short_id;  ///< e.g. "EQ-3.16", accepted by check()
  std::string statement;
  std::vector<std::string> param_names;
  /// In AUTO fallback order.
  std::vector<CheckMethod> allowed_methods;
  /// AUTO runs every allowed method and compares the values.
  bool regularization_sensitive = false;
  std::vector<Params> default_grid;
  /// Throws DomainError unless params name exactly param_names and satisfy the
  /// entry's constraints.
  std::function<void(const Params&)> domain_check;
};

/// One scalar relation lhs = rhs inside an identity.
struct CheckOutcome {
  std::string name;
  Ball lhs;
  Ball rhs;
  Ball residual;  ///< lhs - rhs; infinite radius when a side diverged
  Real certified_bound;
  Verdict verdict = Verdict::INCONCLUSIVE;
  std::string diagnostics;
};

struct NamedValue {
  std::string name;
  Ball value;
};

struct RejectedMethod {
  CheckMethod method;
  Verdict verdict;
  std::string diagnostics;
};

struct IdentityCheckResult {
  std::string id;
  Params params;
  CheckMethod method = CheckMethod::AUTO;
  /// Residual of the deciding check (the first non-passing one, else the one
  /// with the largest bound).
  Ball residual;
  /// |residual.mid| + residual.rad: certified upper bound on the true residual.
  Real certified_bound;
  Verdict verdict = Verdict::INCONCLUSIVE;
  double elapsed_seconds = 0.0;
  long terms_used = 0;
  std::string diagnostics;
  std::vector<CheckOutcome> checks;
  std::vector<NamedValue> values;
  /// Per-method results of a multi-method run.
  std::vector<IdentityCheckResult> by_method;
  /// Methods AUTO tried and abandoned before the reported one.
  std::vector<RejectedMethod> rejected;
};

const std::vector<IdentitySpec>& catalog();
/// Accepts the full or the short id. Throws UnknownIdentity.
const IdentitySpec& find_identity(const std::string& id);

/// PASS when the bound is within tolerance, FAIL when |mid| - rad exceeds ten
/// times the tolerance, INCONCLUSIVE otherwise.
Verdict residual_verdict(const Ball& residual, const Real& tolerance);

/// Throws UnknownIdentity, DomainError for bad params or a method the entry
/// does not allow. Evaluation failures (precision, quadrature) come back as
/// INCONCLUSIVE.
IdentityCheckResult check(const std::string& id, const Params& params, CheckMethod method,
                          const PrecisionContext& ctx);

/// The series behind an entry, for convergence traces: EQ-2.8, 2.9, 2.11,
/// 3.3, 3.4-K1, 3.16 (sum_{m>=2} zeta(s,m)), 3.29 (A(1)), 3.34 (A(t)) and 4.1
/// (P_j). Throws DomainError for the others and for bad params.
SeriesSpec identity_series(const std::string& id, const Params& params, const PrecisionContext& ctx);

/// Parameter sets per id; ids absent from the map run their default grid.
using GridOverrides = std::map<std::string, std::vector<Params>>;

/// Every catalog entry on its grid, in catalog order then grid order. An
/// explicit method applies to the entries that allow it; the rest run AUTO.
/// Errors are reported as INCONCLUSIVE results, never thrown.
std::vector<IdentityCheckResult> verify_all(const GridOverrides& grids, const PrecisionContext& ctx,
                                            CheckMethod method = CheckMethod::AUTO);

}  // namespace zlab
