#include "zlab/report.hpp"

#include <sstream>

#include "json.hpp"

namespace zlab {

using nlohmann::json;

const char* tool_version() { return "0.1.0"; }

std::string format_ball(const Ball& b, int digits) {
  return b.mid().to_string(digits) + " ± " + b.rad().to_string(2, MPFR_RNDU);
}

namespace {

constexpr Verdict kVerdicts[] = {Verdict::PASS, Verdict::FAIL, Verdict::DIVERGENT_CLASSICAL,
                                 Verdict::REGULARIZATION_DEPENDENT, Verdict::INCONCLUSIVE};

json ball_json(const Ball& b, int digits) {
  return json{{"mid", b.mid().to_string(digits)}, {"rad", b.rad().to_string(3, MPFR_RNDU)}};
}

json params_json(const Params& p) {
  json out = json::object();
  for (const auto& [name, value] : p.items()) out[name] = format_rational(value);
  return out;
}

json check_json(const CheckOutcome& c, int digits) {
  return json{{"name", c.name},
              {"lhs", ball_json(c.lhs, digits)},
              {"rhs", ball_json(c.rhs, digits)},
              {"residual", ball_json(c.residual, digits)},
              {"certified_bound", c.certified_bound.to_string(3, MPFR_RNDU)},
              {"verdict", to_string(c.verdict)},
              {"diagnostics", c.diagnostics}};
}

json identity_json(const IdentityCheckResult& r, int digits) {
  json checks = json::array();
  for (const auto& c : r.checks) checks.push_back(check_json(c, digits));
  json values = json::array();
  for (const auto& v : r.values) values.push_back(json{{"name", v.name}, {"value", ball_json(v.value, digits)}});
  json by_method = json::array();
  for (const auto& sub : r.by_method) by_method.push_back(identity_json(sub, digits));
  json rejected = json::array();
  for (const auto& rej : r.rejected) {
    rejected.push_back(
        json{{"method", to_string(rej.method)}, {"verdict", to_string(rej.verdict)}, {"diagnostics", rej.diagnostics}});
  }
  return json{{"kind", "identity"},
              {"id", r.id},
              {"params", params_json(r.params)},
              {"method", to_string(r.method)},
              {"verdict", to_string(r.verdict)},
              {"residual", ball_json(r.residual, digits)},
              {"certified_bound", r.certified_bound.to_string(3, MPFR_RNDU)},
              {"terms_used", r.terms_used},
              {"elapsed_seconds", r.elapsed_seconds},
              {"diagnostics", r.diagnostics},
              {"checks", checks},
              {"values", values},
              {"by_method", by_method},
              {"rejected", rejected}};
}

json relation_json(const RelationResult& r, int digits) {
  json out{{"kind", "relation"},
           {"labels", r.labels},
           {"outcome", to_string(r.outcome)},
           {"precision_digits", r.precision_digits},
           {"iterations", r.iterations},
           {"note", r.note}};
  if (r.outcome == RelationOutcome::FOUND) {
    out["coefficients"] = r.coefficients;
    out["residual"] = ball_json(r.residual, digits);
  } else {
    out["bound"] = r.bound;
  }
  return out;
}

json eval_json(const EvalRecord& e, int digits) {
  return json{{"kind", "evaluation"},
              {"function", e.function},
              {"params", params_json(e.params)},
              {"value", ball_json(e.value, digits)}};
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void strip(json& j) {
  if (j.is_object()) {
    j.erase("elapsed_seconds");
    j.erase("wall_clock_seconds");
    for (auto& [key, value] : j.items()) strip(value);
  } else if (j.is_array()) {
    for (auto& v : j) strip(v);
  }
}

}  // namespace

SummaryCounts summarize(const Report& report) {
  SummaryCounts c;
  for (Verdict v : kVerdicts) c.verdicts[to_string(v)] = 0;
  c.outcomes[to_string(RelationOutcome::FOUND)] = 0;
  c.outcomes[to_string(RelationOutcome::EXCLUDED)] = 0;
  for (const auto& entry : report.results) {
    ++c.total;
    if (const auto* r = std::get_if<IdentityCheckResult>(&entry)) {
      ++c.verdicts[to_string(r->verdict)];
    } else if (const auto* rel = std::get_if<RelationResult>(&entry)) {
      ++c.outcomes[to_string(rel->outcome)];
    } else {
      ++c.evaluations;
    }
  }
  return c;
}

std::string to_json(const Report& report) {
  json results = json::array();
  for (const auto& entry : report.results) {
    std::visit(
        [&](const auto& r) {
          using T = std::decay_t<decltype(r)>;
          if constexpr (std::is_same_v<T, IdentityCheckResult>) {
            results.push_back(identity_json(r, report.digits));
          } else if constexpr (std::is_same_v<T, RelationResult>) {
            results.push_back(relation_json(r, report.digits));
          } else {
            results.push_back(eval_json(r, report.digits));
          }
        },
        entry);
  }
  const SummaryCounts counts = summarize(report);
  json doc{{"version", tool_version()},
           {"context",
            {{"digits", report.digits},
             {"tolerance", report.tolerance.to_string(3)},
             {"method", report.method},
             {"deterministic", true}}},
           {"results", results},
           {"summary",
            {{"total", counts.total},
             {"verdicts", counts.verdicts},
             {"outcomes", counts.outcomes},
             {"evaluations", counts.evaluations},
             {"wall_clock_seconds", report.wall_clock_seconds}}}};
  return doc.dump(2) + "\n";
}

std::string to_csv(const Report& report) {
  std::ostringstream out;
  out << "kind,id,params,method,verdict,value_mid,value_rad,certified_bound,detail,elapsed_seconds\n";
  const int d = report.digits;
  for (const auto& entry : report.results) {
    if (const auto* r = std::get_if<IdentityCheckResult>(&entry)) {
      out << "identity," << r->id << ',' << csv_field(r->params.to_string()) << ',' << to_string(r->method) << ','
          << to_string(r->verdict) << ',' << r->residual.mid().to_string(d) << ','
          << r->residual.rad().to_string(3, MPFR_RNDU) << ',' << r->certified_bound.to_string(3, MPFR_RNDU) << ','
          << "terms=" << r->terms_used << ',' << r->elapsed_seconds << '\n';
    } else if (const auto* rel = std::get_if<RelationResult>(&entry)) {
      std::string labels, detail;
      for (const auto& l : rel->labels) labels += (labels.empty() ? "" : ";") + l;
      if (rel->outcome == RelationOutcome::FOUND) {
        for (long c : rel->coefficients) detail += (detail.empty() ? "" : ";") + std::to_string(c);
      } else {
        detail = "H=" + std::to_string(rel->bound);
      }
      const bool found = rel->outcome == RelationOutcome::FOUND;
      out << "relation," << csv_field(labels) << ",,PSLQ," << to_string(rel->outcome) << ','
          << (found ? rel->residual.mid().to_string(d) : "") << ','
          << (found ? rel->residual.rad().to_string(3, MPFR_RNDU) : "") << ",," << csv_field(detail) << ",\n";
    } else {
      const auto& e = std::get<EvalRecord>(entry);
      out << "evaluation," << e.function << ',' << csv_field(e.params.to_string()) << ",,," << e.value.mid().to_string(d)
          << ',' << e.value.rad().to_string(3, MPFR_RNDU) << ",,,\n";
    }
  }
  return out.str();
}

std::string trace_to_csv(const TraceResult& trace, int digits) {
  std::ostringstream out;
  out << "N,partial_value,certified_tail\n";
  for (const auto& pt : trace.points) {
    out << pt.n << ',' << pt.partial.mid().to_string(digits) << ','
        << (pt.tail ? pt.tail->to_string(3, MPFR_RNDU) : "") << '\n';
  }
  return out.str();
}

std::string strip_timing(const std::string& json_text) {
  json j = json::parse(json_text);
  strip(j);
  return j.dump(2) + "\n";
}

int verify_exit_code(const SummaryCounts& counts) {
  auto n = [&](Verdict v) {
    auto it = counts.verdicts.find(to_string(v));
    return it == counts.verdicts.end() ? 0L : it->second;
  };
  if (n(Verdict::FAIL) > 0) return 2;
  if (n(Verdict::INCONCLUSIVE) > 0 || n(Verdict::DIVERGENT_CLASSICAL) > 0) return 3;
  return 0;
}

}  // namespace zlab
