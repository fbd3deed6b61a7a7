#include <algorithm>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "zlab/errors.hpp"
#include "zlab/identities.hpp"

using namespace zlab;

namespace {

const NamedValue& value_named(const IdentityCheckResult& r, const std::string& name) {
  for (const auto& v : r.values) {
    if (v.name == name) return v;
  }
  FAIL("no value named " << name);
  return r.values.front();
}

Real rational_real(long num, long den) {
  Real r(400);
  mpfr_set_si(r.get(), num, MPFR_RNDN);
  mpfr_div_si(r.get(), r.get(), den, MPFR_RNDN);
  return r;
}

Real tol(double v) {
  Real r(64);
  mpfr_set_d(r.get(), v, MPFR_RNDN);
  return r;
}

}  // namespace

TEST_CASE("catalog") {
  const auto& cat = catalog();
  REQUIRE(cat.size() == 14);
  std::set<std::string> ids;
  std::size_t grid_points = 0;
  for (const auto& e : cat) {
    ids.insert(e.id);
    ids.insert(e.short_id);
    CHECK(!e.allowed_methods.empty());
    grid_points += e.default_grid.size();
    for (const auto& p : e.default_grid) CHECK_NOTHROW(e.domain_check(p));
  }
  // EQ-3.3 has no suffix, so its short id is its id.
  CHECK(ids.size() == 27);
  CHECK(grid_points == 67);
  CHECK(find_identity("EQ-3.16").id == "EQ-3.16-LADDER");
  CHECK(find_identity("EQ-4.1-LINFORM").regularization_sensitive);
  CHECK(find_identity("EQ-3.4-K1").regularization_sensitive);
  CHECK_THROWS_AS(find_identity("EQ-9.9"), UnknownIdentity);
}

TEST_CASE("parameter parsing") {
  CHECK(parse_rational("3") == 3);
  CHECK(parse_rational("-1/4") == Rational(-1, 4));
  CHECK(parse_rational("2/4") == Rational(1, 2));
  CHECK(parse_rational("0.75") == Rational(3, 4));
  CHECK(parse_rational("1.5e-1") == Rational(3, 20));
  CHECK(parse_rational("25e-2") == Rational(1, 4));
  CHECK_THROWS_AS(parse_rational("1/0"), DomainError);
  CHECK_THROWS_AS(parse_rational("abc"), DomainError);
  CHECK_THROWS_AS(parse_rational("1.2.3"), DomainError);
  CHECK(format_rational(Rational(6, 8)) == "3/4");
  Params p{{"s", 3}, {"q", Rational(1, 4)}};
  CHECK(p.to_string() == "s=3,q=1/4");
  CHECK(parse_check_method("zeta-split") == CheckMethod::ZETA_SPLIT);
  CHECK_THROWS_AS(parse_check_method("cesaro"), DomainError);
}

TEST_CASE("residual verdicts") {
  const Real t = tol(1e-40);
  CHECK(residual_verdict(Ball(tol(1e-45), tol(1e-45)), t) == Verdict::PASS);
  CHECK(residual_verdict(Ball(tol(1e-30), tol(1e-45)), t) == Verdict::FAIL);
  CHECK(residual_verdict(Ball(tol(5e-40), tol(1e-45)), t) == Verdict::INCONCLUSIVE);
  CHECK(residual_verdict(Ball(tol(1e-30), tol(1e-29)), t) == Verdict::INCONCLUSIVE);
  CHECK(residual_verdict(Ball(Real(64), Real::infinity()), t) == Verdict::INCONCLUSIVE);
}

TEST_CASE("domain errors") {
  const PrecisionContext ctx(30);
  for (const auto& e : catalog()) {
    if (std::find(e.param_names.begin(), e.param_names.end(), "s") == e.param_names.end()) continue;
    Params p = e.default_grid.front();
    p.set("s", 1);
    CHECK_THROWS_AS(check(e.id, p, CheckMethod::AUTO, ctx), DomainError);
  }
  CHECK_THROWS_AS(check("EQ-3.3", Params{{"s", 1}}, CheckMethod::AUTO, ctx), DomainError);
  CHECK_THROWS_AS(check("EQ-3.3", Params{{"x", 2}}, CheckMethod::AUTO, ctx), DomainError);
  CHECK_THROWS_AS(check("EQ-2.8", Params{{"s", 3}}, CheckMethod::AUTO, ctx), DomainError);
  CHECK_THROWS_AS(check("EQ-2.8", Params{{"s", 3}, {"q", 2}}, CheckMethod::AUTO, ctx), DomainError);
  CHECK_THROWS_AS(check("EQ-3.16", Params{{"s", 2}}, CheckMethod::AUTO, ctx), DomainError);
  CHECK_THROWS_AS(check("EQ-4.1", Params{{"j", 2}}, CheckMethod::AUTO, ctx), DomainError);
  CHECK_THROWS_AS(check("EQ-3.34", Params{{"t", Rational(3, 2)}}, CheckMethod::AUTO, ctx), DomainError);
  CHECK_THROWS_AS(check("EQ-3.16", Params{{"s", 3}}, CheckMethod::ABEL, ctx), DomainError);
  CHECK_THROWS_AS(check("EQ-0", Params{}, CheckMethod::AUTO, ctx), UnknownIdentity);
}

TEST_CASE("ladder against closed forms") {
  const PrecisionContext ctx(50);
  auto r = check("EQ-3.16", Params{{"s", 4}}, CheckMethod::AUTO, ctx);
  CHECK(r.verdict == Verdict::PASS);
  CHECK(r.method == CheckMethod::DIRECT);
  CHECK(r.certified_bound <= tol(1e-40));
  // zeta(3) - zeta(4), with zeta(4) = pi^4/90.
  Real expected(400);
  mpfr_sub(expected.get(), oracle::apery(400).get(), oracle::pi_power(4, 1, 90, 400).get(), MPFR_RNDN);
  CHECK(oracle::distance(value_named(r, "sum_{m>=2} zeta(s,m)").value, expected) < 1e-48);
}

TEST_CASE("series representation") {
  const PrecisionContext ctx(50);
  // zeta(2, 1/2) = 3 zeta(2) = pi^2/2, so the series is pi^2/2 - 4.
  auto r = check("EQ-2.8", Params{{"s", 2}, {"q", Rational(1, 2)}}, CheckMethod::DIRECT, ctx);
  CHECK(r.verdict == Verdict::PASS);
  Real expected(400);
  mpfr_sub_ui(expected.get(), oracle::pi_power(2, 1, 2, 400).get(), 4, MPFR_RNDN);
  CHECK(oracle::distance(value_named(r, "series").value, expected) < 1e-45);

  auto direct = check("EQ-2.8", Params{{"s", 2}, {"q", 1}}, CheckMethod::DIRECT, ctx);
  CHECK(direct.verdict == Verdict::DIVERGENT_CLASSICAL);
  CHECK(!direct.certified_bound.is_finite());

  auto autom = check("EQ-2.8", Params{{"s", 3}, {"q", 1}}, CheckMethod::AUTO, ctx);
  CHECK(autom.verdict == Verdict::PASS);
  CHECK(autom.method == CheckMethod::ZETA_SPLIT);
  REQUIRE(autom.rejected.size() == 1);
  CHECK(autom.rejected[0].method == CheckMethod::DIRECT);
  CHECK(autom.rejected[0].verdict == Verdict::DIVERGENT_CLASSICAL);
  // Part b is the Abel sum of the constant coefficients, 2^-s.
  CHECK(oracle::distance(value_named(autom, "series.part_b").value, rational_real(1, 8)) < 1e-30);
}

TEST_CASE("unit functional equation parts") {
  const PrecisionContext ctx(50);
  for (long s : {2, 3, 4}) {
    auto r = check("EQ-2.11", Params{{"s", s}}, CheckMethod::ZETA_SPLIT, ctx);
    CAPTURE(s);
    CHECK(r.verdict == Verdict::PASS);
    CHECK(r.certified_bound <= tol(1e-30));
    CHECK(oracle::distance(value_named(r, "series.part_a").value, rational_real(1, 1L << s)) < 1e-25);
    CHECK(oracle::distance(value_named(r, "series.part_b").value, rational_real((1L << s) - 1, 1L << s)) < 1e-25);
  }
  auto w = check("EQ-3.3", Params{}, CheckMethod::ZETA_SPLIT, ctx);
  CHECK(w.verdict == Verdict::PASS);
  CHECK(oracle::distance(value_named(w, "series.part_a").value, rational_real(1, 4)) < 1e-25);
  CHECK(oracle::distance(value_named(w, "series.part_b").value, rational_real(3, 4)) < 1e-25);
}

TEST_CASE("K(1) depends on the regularization") {
  const PrecisionContext ctx(50);
  auto r = check("EQ-3.4-K1", Params{}, CheckMethod::AUTO, ctx);
  CHECK(r.verdict == Verdict::REGULARIZATION_DEPENDENT);
  CHECK(r.method == CheckMethod::ALL);
  REQUIRE(r.by_method.size() == 3);
  const double expected[] = {0.5, 0.5, 1.0};
  const double within[] = {1e-30, 1e-30, 1e-10};
  for (std::size_t i = 0; i < 3; ++i) {
    CAPTURE(to_string(r.by_method[i].method));
    CHECK(oracle::distance(r.by_method[i].checks.at(0).lhs, rational_real(static_cast<long>(2 * expected[i]), 2)) <
          within[i]);
  }
  CHECK(r.by_method[0].verdict == Verdict::PASS);
  CHECK(r.by_method[2].verdict == Verdict::FAIL);

  auto pair = check("EQ-3.29", Params{}, CheckMethod::AUTO, ctx);
  CHECK(pair.verdict == Verdict::PASS);
}

TEST_CASE("A/B decomposition") {
  const PrecisionContext ctx(50);
  for (long t : {1, 2, 3}) {
    auto r = check("EQ-3.34", Params{{"t", t}}, CheckMethod::AUTO, ctx);
    CAPTURE(t);
    CHECK(r.verdict == Verdict::PASS);
    REQUIRE(r.checks.size() == 2);
    CHECK(r.checks[0].certified_bound <= tol(1e-30));
  }
}

TEST_CASE("linear forms") {
  const PrecisionContext ctx(40);
  auto r = check("EQ-4.1", Params{{"j", 3}}, CheckMethod::AUTO, ctx);
  CHECK(r.verdict == Verdict::REGULARIZATION_DEPENDENT);
  REQUIRE(r.by_method.size() == 3);
  const auto& abel = r.by_method[1];
  CHECK(abel.method == CheckMethod::ABEL);
  CHECK(abel.verdict == Verdict::PASS);
  // Under ZETA_SPLIT the P relation holds and Q is off by exactly 1/2.
  const auto& split = r.by_method[0];
  CHECK(split.checks[0].verdict == Verdict::PASS);
  CHECK(oracle::distance(split.checks[1].residual, rational_real(1, 2)) < 1e-25);
  // PAIRING cannot sum P_j.
  CHECK(r.by_method[2].checks[0].verdict == Verdict::DIVERGENT_CLASSICAL);
}

TEST_CASE("boundary limits and integrals") {
  const PrecisionContext ctx(40);
  for (long s : {3, 6}) {
    CAPTURE(s);
    auto lim = check("EQ-3.7", Params{{"s", s}}, CheckMethod::AUTO, ctx);
    CHECK(lim.verdict == Verdict::PASS);
    CHECK(lim.checks.size() == 2);
    auto ints = check("EQ-3.9", Params{{"s", s}}, CheckMethod::AUTO, ctx);
    CHECK(ints.verdict == Verdict::PASS);
    CHECK(ints.certified_bound <= tol(1e-25));
  }
  auto rep = check("EQ-2.5", Params{{"s", 3}, {"q", Rational(1, 2)}}, CheckMethod::QUADRATURE, ctx);
  CHECK(rep.verdict == Verdict::PASS);
  CHECK(rep.certified_bound <= tol(1e-25));
}

TEST_CASE("doubling precision keeps passing results inside their radii") {
  const PrecisionContext lo(50);
  const PrecisionContext hi(100);
  const std::vector<std::pair<std::string, Params>> cases = {
      {"EQ-3.22", Params{{"s", 3}}},
      {"EQ-2.8", Params{{"s", 4}, {"q", Rational(3, 4)}}},
      {"EQ-3.21", Params{{"s", 5}, {"p", 2}}},
  };
  for (const auto& [id, p] : cases) {
    CAPTURE(id);
    auto a = check(id, p, CheckMethod::AUTO, lo);
    auto b = check(id, p, CheckMethod::AUTO, hi);
    CHECK(a.verdict == Verdict::PASS);
    CHECK(b.verdict == Verdict::PASS);
    CHECK(b.certified_bound < a.certified_bound);
    REQUIRE(a.values.size() == b.values.size());
    for (std::size_t i = 0; i < a.values.size(); ++i) CHECK(a.values[i].value.overlaps(b.values[i].value));
  }
}

TEST_CASE("verify_all default grid") {
  const PrecisionContext ctx(50);
  auto results = verify_all({}, ctx);
  REQUIRE(results.size() == 67);
  std::set<std::string> dependent;
  for (const auto& r : results) {
    CAPTURE(r.id);
    CAPTURE(r.params.to_string());
    CHECK(r.verdict != Verdict::FAIL);
    if (r.verdict == Verdict::REGULARIZATION_DEPENDENT) {
      dependent.insert(r.id);
    } else {
      CHECK(r.verdict == Verdict::PASS);
    }
  }
  CHECK(dependent == std::set<std::string>{"EQ-3.4-K1", "EQ-4.1-LINFORM"});

  auto again = verify_all({}, ctx);
  REQUIRE(again.size() == results.size());
  for (std::size_t i = 0; i < results.size(); ++i) {
    CHECK(again[i].verdict == results[i].verdict);
    CHECK(again[i].residual.to_string(30) == results[i].residual.to_string(30));
  }
}

TEST_CASE("grid overrides and method selection") {
  const PrecisionContext ctx(30);
  GridOverrides grids;
  for (const auto& e : catalog()) grids[e.id] = {};
  grids.erase("EQ-3.16-LADDER");
  grids["EQ-3.16"] = {Params{{"s", 7}}};
  grids["EQ-2.9-FE"] = {Params{{"s", 3}}};
  auto results = verify_all(grids, ctx, CheckMethod::ABEL);
  REQUIRE(results.size() == 2);
  CHECK(results[0].id == "EQ-2.9-FE");
  CHECK(results[0].method == CheckMethod::ABEL);
  CHECK(results[1].id == "EQ-3.16-LADDER");
  CHECK(results[1].method == CheckMethod::DIRECT);

  grids["EQ-3.16"] = {Params{{"s", 1}}};
  auto bad = verify_all(grids, ctx);
  CHECK(bad[1].verdict == Verdict::INCONCLUSIVE);
  CHECK_THROWS_AS(verify_all({{"EQ-7", {}}}, ctx), UnknownIdentity);
}
