#include "zlab/cli.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <regex>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "zlab/errors.hpp"
#include "zlab/identities.hpp"
#include "zlab/relation.hpp"
#include "zlab/report.hpp"
#include "zlab/zeta.hpp"

namespace zlab {

namespace {

constexpr int kUsage = 64;
constexpr int kDomain = 65;
constexpr int kCantCreate = 73;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  int digits = 50;
  std::string method = "AUTO";
  std::string format = "json";
  bool format_given = false;
  std::string out_path;
  long coeff_bound = 1000;
  std::map<std::string, std::string> params;  // --s, --q, ...
  std::vector<std::string> grid;
  // eval
  std::string function;
  // verify / trace
  std::string id;
  bool all = false;
  std::string counts = "10,100,1000";
  // probe
  std::string values;
  std::string zeta_family;
};

const char* kCsvHelp =
    "CSV columns: kind,id,params,method,verdict,value_mid,value_rad,certified_bound,detail,elapsed_seconds. "
    "trace writes N,partial_value,certified_tail.";

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Rational parse_number(const std::string& name, const std::string& text) {
  try {
    return parse_rational(text);
  } catch (const DomainError&) {
    throw UsageError("--" + name + " expects a number such as 3, 1/4 or 0.25, got '" + text + "'");
  }
}

Params params_from_flags(const Options& o) {
  Params p;
  for (const auto& [name, text] : o.params) p.set(name, parse_number(name, text));
  return p;
}

// "s=3,q=1/4"
Params parse_param_list(const std::string& text) {
  Params p;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("expected name=value in '" + text + "'");
    p.set(item.substr(0, eq), parse_number(item.substr(0, eq), item.substr(eq + 1)));
  }
  return p;
}

// "EQ-3.16:s=3;s=4"
GridOverrides parse_grids(const std::vector<std::string>& specs) {
  GridOverrides grids;
  for (const auto& spec : specs) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos) throw UsageError("--grid expects ID:name=value,...;..., got '" + spec + "'");
    const std::string id = find_identity(spec.substr(0, colon)).id;
    auto& list = grids[id];
    std::stringstream in(spec.substr(colon + 1));
    std::string point;
    while (std::getline(in, point, ';')) {
      list.push_back(point.empty() ? Params{} : parse_param_list(point));
    }
  }
  return grids;
}

std::vector<long> parse_longs(const std::string& text, const std::string& what) {
  std::vector<long> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stol(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError(what + " expects comma-separated integers, got '" + text + "'");
    }
  }
  return out;
}

CheckMethod method_flag(const Options& o) {
  try {
    return parse_check_method(o.method);
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
}

void write_output(const Options& o, const std::string& text, std::ostream& out) {
  if (o.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(o.out_path, std::ios::binary);
  if (!file || !(file << text)) throw std::ios_base::failure("cannot write " + o.out_path);
}

std::string render(const Options& o, const Report& report) {
  return o.format == "csv" ? to_csv(report) : to_json(report);
}

Report new_report(const Options& o, const PrecisionContext& ctx) {
  Report r;
  r.digits = o.digits;
  r.tolerance = ctx.target_tolerance();
  r.method = o.method;
  return r;
}

std::string summary_line(const SummaryCounts& c) {
  std::string line;
  for (const auto& [name, count] : c.verdicts) line += name + "=" + std::to_string(count) + " ";
  return line + "total=" + std::to_string(c.total);
}

// ---- subcommands ----

int cmd_eval(const Options& o, const PrecisionContext& ctx, std::ostream& out) {
  const Params p = params_from_flags(o);
  auto need = [&](const std::string& name) {
    if (!p.has(name)) throw UsageError("eval " + o.function + " needs --" + name);
    return Ball::from_rational(p.get(name), ctx.bits());
  };
  Ball v;
  if (o.function == "riemann") {
    v = riemann_zeta(need("s"), ctx);
  } else if (o.function == "hurwitz") {
    v = hurwitz_zeta(need("s"), need("q"), ctx);
  } else if (o.function == "zeta_minus_one") {
    v = zeta_minus_one(need("s"), ctx);
  } else if (o.function == "tail_sum") {
    v = hurwitz_tail_sum(need("s"), ctx);
  } else {
    throw UsageError("unknown function '" + o.function + "' (riemann, hurwitz, zeta_minus_one, tail_sum)");
  }
  if (o.out_path.empty() && !o.format_given) {
    out << format_ball(v, o.digits) << "\n";
    return 0;
  }
  Report report = new_report(o, ctx);
  report.results.push_back(EvalRecord{o.function, p, v});
  write_output(o, render(o, report), out);
  return 0;
}

int cmd_verify(const Options& o, const PrecisionContext& ctx, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const CheckMethod method = method_flag(o);
  if (o.all == !o.id.empty()) throw UsageError("verify needs an identity id or --all");
  GridOverrides grids = parse_grids(o.grid);
  Report report = new_report(o, ctx);
  if (o.all) {
    if (!o.params.empty()) throw UsageError("parameter flags apply to a single id; use --grid with --all");
    for (auto& r : verify_all(grids, ctx, method)) report.results.push_back(std::move(r));
  } else {
    const IdentitySpec& spec = find_identity(o.id);
    std::vector<Params> points;
    if (!o.params.empty()) {
      points.push_back(params_from_flags(o));
    } else if (grids.count(spec.id)) {
      points = grids[spec.id];
    } else {
      points = spec.default_grid;
    }
    for (const auto& p : points) report.results.push_back(check(spec.id, p, method, ctx));
  }
  report.wall_clock_seconds = seconds_since(t0);
  const SummaryCounts counts = summarize(report);
  write_output(o, render(o, report), out);
  if (!o.out_path.empty()) out << summary_line(counts) << "\n";
  return verify_exit_code(counts);
}

int cmd_probe(const Options& o, const PrecisionContext& ctx, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  if (o.values.empty() == o.zeta_family.empty()) throw UsageError("probe needs exactly one of --values or --zeta-family");
  Report report = new_report(o, ctx);
  if (!o.zeta_family.empty()) {
    for (auto& r : probe_zeta_family(parse_longs(o.zeta_family, "--zeta-family"), o.coeff_bound, ctx)) {
      report.results.push_back(std::move(r));
    }
  } else {
    std::vector<std::string> tokens;
    std::stringstream in(o.values);
    std::string item;
    while (std::getline(in, item, ',')) {
      item.erase(std::remove_if(item.begin(), item.end(), ::isspace), item.end());
      tokens.push_back(item);
    }
    for (const auto& t : tokens) {
      try {
        named_value(t, PrecisionContext(15));
      } catch (const DomainError&) {
        throw UsageError("--values: unknown value '" + t + "'");
      }
    }
    RelationQuery q;
    q.coeff_bound = o.coeff_bound;
    q.labels = tokens;
    q.reevaluate = [tokens](const PrecisionContext& c) {
      std::vector<Ball> v;
      for (const auto& t : tokens) v.push_back(named_value(t, c));
      return v;
    };
    q.values = q.reevaluate(ctx);
    report.results.push_back(find_integer_relation(q, ctx));
  }
  report.wall_clock_seconds = seconds_since(t0);
  write_output(o, render(o, report), out);
  return 0;
}

int cmd_trace(const Options& o, const PrecisionContext& ctx, std::ostream& out, std::ostream& err) {
  const IdentitySpec& spec = find_identity(o.id);
  SeriesSpec series = identity_series(spec.id, params_from_flags(o), ctx);
  CheckMethod method = method_flag(o);
  if (method == CheckMethod::AUTO) {
    method = CheckMethod::DIRECT;
    for (CheckMethod m : spec.allowed_methods) {
      if (m == CheckMethod::DIRECT || m == CheckMethod::PAIRING || m == CheckMethod::ZETA_SPLIT) {
        method = m;
        break;
      }
    }
  }
  SummationMethod sm;
  switch (method) {
    case CheckMethod::DIRECT: sm = SummationMethod::DIRECT; break;
    case CheckMethod::PAIRING: sm = SummationMethod::PAIRING; break;
    case CheckMethod::ZETA_SPLIT: sm = SummationMethod::ZETA_SPLIT; break;
    default: throw DomainError("trace supports DIRECT, PAIRING and ZETA_SPLIT");
  }
  TraceResult trace = trace_series(series, sm, parse_longs(o.counts, "--counts"), ctx);
  if (trace.verdict == SumVerdict::DIVERGENT_CLASSICAL || trace.verdict == SumVerdict::INCONCLUSIVE) {
    err << "zlab: " << spec.id << " under " << to_string(sm) << ": " << to_string(trace.verdict) << ": "
        << trace.diagnostics << "\n";
    return kDomain;
  }
  write_output(o, trace_to_csv(trace, o.digits), out);
  return 0;
}

int cmd_catalog(const Options& o, std::ostream& out) {
  if (o.format_given && o.format == "json") {
    nlohmann::json list = nlohmann::json::array();
    for (const auto& e : catalog()) {
      std::vector<std::string> methods;
      for (CheckMethod m : e.allowed_methods) methods.push_back(to_string(m));
      list.push_back({{"id", e.id},
                      {"short_id", e.short_id},
                      {"statement", e.statement},
                      {"params", e.param_names},
                      {"methods", methods},
                      {"regularization_sensitive", e.regularization_sensitive},
                      {"grid_points", e.default_grid.size()}});
    }
    write_output(o, list.dump(2) + "\n", out);
    return 0;
  }
  std::ostringstream text;
  for (const auto& e : catalog()) {
    std::string params, methods;
    for (const auto& n : e.param_names) params += (params.empty() ? "" : ",") + n;
    for (CheckMethod m : e.allowed_methods) methods += std::string(methods.empty() ? "" : ",") + to_string(m);
    text << e.id << "\tanchor " << e.short_id << "\tparams " << (params.empty() ? "-" : params) << "\tmethods "
         << methods << (e.regularization_sensitive ? "\tregularization-sensitive" : "") << "\n    " << e.statement
         << "\n";
  }
  write_output(o, text.str(), out);
  return 0;
}

}  // namespace

// 1, 0.5, 1/3, pi, pi4, zeta3, zeta2sq
Ball named_value(const std::string& token, const PrecisionContext& c) {
  static const std::regex zeta_re("zeta(\\d+)(sq)?");
  static const std::regex pi_re("pi(\\d*)");
  std::smatch m;
  if (std::regex_match(token, m, zeta_re)) {
    const long k = std::stol(m[1]);
    Ball z = riemann_zeta(Ball::from_int(k, c.bits()), c);
    return m[2].matched ? z * z : z;
  }
  if (std::regex_match(token, m, pi_re)) {
    const long k = m[1].length() ? std::stol(m[1]) : 1;
    return pow_int(Ball::pi(c.bits()), k);
  }
  return Ball::from_rational(parse_rational(token), c.bits());
}


int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  if (const char* env = std::getenv("ZLAB_DIGITS")) {
    try {
      o.digits = std::stoi(env);
    } catch (const std::exception&) {
      err << "zlab: ZLAB_DIGITS must be an integer, got '" << env << "'\n";
      return kUsage;
    }
  }

  CLI::App app{"Certified zeta-series identity checks, summation methods and integer-relation probes.", "zlab"};
  app.footer(kCsvHelp);
  app.require_subcommand(1);
  app.add_option("--digits", o.digits, "Working precision in decimal digits (>= 15; env ZLAB_DIGITS)");
  app.add_option("--method", o.method, "AUTO, DIRECT, ZETA_SPLIT, ABEL, PAIRING, QUADRATURE or ALL");
  auto* fmt = app.add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", o.out_path, "Write the report here instead of stdout");
  app.add_option("--coeff-bound", o.coeff_bound, "Relation search bound H");
  for (const char* name : {"s", "q", "t", "p", "j"}) {
    app.add_option_function<std::string>(
        std::string("--") + name, [&o, name](const std::string& v) { o.params[name] = v; },
        std::string("Parameter ") + name + " (integer, p/q or decimal)");
  }
  app.add_option("--grid", o.grid, "Grid override ID:name=value,...;name=value,... (repeatable)");

  auto* eval = app.add_subcommand("eval", "Evaluate riemann | hurwitz | zeta_minus_one | tail_sum");
  eval->add_option("function", o.function)->required();
  auto* verify = app.add_subcommand("verify", "Check catalog identities and write a report");
  verify->add_option("id", o.id, "Identity id (full or short)");
  verify->add_flag("--all", o.all, "Every identity on its grid");
  auto* probe = app.add_subcommand("probe", "Integer-relation search");
  probe->add_option("--values", o.values, "Comma list: numbers (1, 0.5, 1/3), pi, pi<k>, zeta<k>, zeta<k>sq");
  probe->add_option("--zeta-family", o.zeta_family, "Comma list of j >= 3");
  auto* trace = app.add_subcommand("trace", "CSV of partial sums and certified tails");
  trace->add_option("id", o.id)->required();
  trace->add_option("--counts", o.counts, "Comma list of term counts");
  auto* cat = app.add_subcommand("catalog", "List identity ids and anchors");
  for (auto* sub : {eval, verify, probe, trace, cat}) sub->fallthrough();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : kUsage;
  }
  o.format_given = fmt->count() > 0;

  try {
    if (o.digits < 15) throw UsageError("--digits must be at least 15");
    const PrecisionContext ctx(o.digits);
    if (eval->parsed()) return cmd_eval(o, ctx, out);
    if (verify->parsed()) return cmd_verify(o, ctx, out);
    if (probe->parsed()) return cmd_probe(o, ctx, out);
    if (trace->parsed()) return cmd_trace(o, ctx, out, err);
    return cmd_catalog(o, out);
  } catch (const UsageError& e) {
    err << "zlab: " << e.what() << "\n";
    return kUsage;
  } catch (const UnknownIdentity& e) {
    err << "zlab: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    err << "zlab: " << e.what() << "\n";
    return kDomain;
  } catch (const std::ios_base::failure& e) {
    err << "zlab: " << e.what() << "\n";
    return kCantCreate;
  }
}

}  // namespace zlab
