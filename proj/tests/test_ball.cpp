#include <random>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "zlab/ball.hpp"
#include "zlab/context.hpp"
#include "zlab/errors.hpp"

using namespace zlab;

namespace {

Ball widened(Ball b, double extra) {
  Real e(64);
  mpfr_set_d(e.get(), extra, MPFR_RNDU);
  b.add_error(e);
  return b;
}

// Random balls in [lo, hi] with a small radius, from a fixed seed.
std::vector<Ball> random_balls(std::mt19937_64& rng, int count, double lo, double hi, mpfr_prec_t prec) {
  std::uniform_real_distribution<double> value(lo, hi);
  std::uniform_int_distribution<int> rad_exp(-60, -20);
  std::vector<Ball> out;
  for (int i = 0; i < count; ++i) {
    Real mid(prec);
    mpfr_set_d(mid.get(), value(rng), MPFR_RNDN);
    Real rad(64);
    mpfr_set_ui_2exp(rad.get(), 1, rad_exp(rng), MPFR_RNDU);
    out.emplace_back(mid, rad);
  }
  return out;
}

}  // namespace

TEST_CASE("ball_arith examples") {
  const PrecisionContext ctx(30);
  const auto prec = ctx.bits();
  SUBCASE("exact integer addition") {
    Ball r = ball_arith(Ball::from_int(1, prec), Ball::from_int(1, prec), BallOp::add);
    CHECK(mpfr_cmp_si(r.mid().get(), 2) == 0);
    CHECK(r.rad().is_zero());
  }
  SUBCASE("zero annihilates") {
    Ball x = Ball::from_ratio(22, 7, prec);
    Ball r = x * Ball(prec);
    CHECK(r.mid().is_zero());
    CHECK(mpfr_cmp_d(r.rad().get(), 1e-200) < 0);
    Ball exact = Ball::from_int(5, prec) * Ball(prec);
    CHECK(exact.rad().is_zero());
  }
  SUBCASE("one third at 30 digits") {
    Ball r = ball_arith(Ball::from_int(1, prec), Ball::from_int(3, prec), BallOp::div);
    CHECK(mpfr_cmp_d(r.rad().get(), 1e-29) <= 0);
    // 50-digit reference
    const PrecisionContext fine(50);
    Ball ref = Ball::from_int(1, fine.bits()) / Ball::from_int(3, fine.bits());
    CHECK(r.overlaps(ref));
    Real third(400);
    mpfr_set_ui(third.get(), 1, MPFR_RNDN);
    mpfr_div_ui(third.get(), third.get(), 3, MPFR_RNDN);
    CHECK(oracle::encloses(r, third));
  }
}

TEST_CASE("ball_arith errors") {
  const auto prec = PrecisionContext(20).bits();
  Ball straddle = widened(Ball::from_int(0, prec), 0.5);
  CHECK_THROWS_AS(ball_arith(Ball::from_int(1, prec), straddle, BallOp::div), DomainError);
  CHECK_THROWS_AS(ball_arith(Ball::from_ratio(-1, 2, prec), Ball(prec), BallOp::log), DomainError);
  CHECK_NOTHROW(ball_arith(widened(Ball::from_int(2, prec), 0.25), Ball(prec), BallOp::log));
  // log(1 +/- 1/4) straddles zero: the checked path rejects total cancellation.
  CHECK_THROWS_AS(ball_arith(widened(Ball::from_int(1, prec), 0.25), Ball(prec), BallOp::log), PrecisionExhausted);
  Ball wide_one = widened(Ball::from_int(1, prec), 0.5);
  CHECK_THROWS_AS(ball_arith(wide_one, Ball::from_int(1, prec), BallOp::sub), PrecisionExhausted);
  CHECK_THROWS_AS(ball_arith(Ball::from_int(2, prec), Ball::from_ratio(1, 2, prec), BallOp::pow_int), DomainError);
}

TEST_CASE("pow_int and exp/log agree with MPFR") {
  const auto prec = PrecisionContext(40).bits();
  Ball two = Ball::from_int(2, prec);
  Ball r = ball_arith(two, Ball::from_int(10, prec), BallOp::pow_int);
  CHECK(mpfr_cmp_si(r.mid().get(), 1024) == 0);
  Ball inv = pow_int(two, -3);
  CHECK(mpfr_cmp_d(inv.mid().get(), 0.125) == 0);
  Ball e = ball_arith(Ball::from_int(1, prec), Ball(prec), BallOp::exp);
  Real ref(prec + 100);
  mpfr_set_ui(ref.get(), 1, MPFR_RNDN);
  mpfr_exp(ref.get(), ref.get(), MPFR_RNDN);
  CHECK(oracle::encloses(e, ref));
  Ball l = log(e);
  CHECK(oracle::encloses(l, Real(1, 64), 1e-45));
}

TEST_CASE("containment property on random inputs") {
  std::mt19937_64 rng(20240917);
  const auto coarse = PrecisionContext(20).bits();
  const auto fine = coarse + 200;
  auto xs = random_balls(rng, 60, 0.1, 40.0, coarse);
  auto ys = random_balls(rng, 60, -30.0, 30.0, coarse);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const Ball& x = xs[i];
    const Ball& y = ys[i];
    // The exact values at the ball midpoints, computed with far more bits,
    // must land inside the coarse results.
    Real xm(fine), ym(fine), t(fine);
    mpfr_set(xm.get(), x.mid().get(), MPFR_RNDN);
    mpfr_set(ym.get(), y.mid().get(), MPFR_RNDN);
    mpfr_add(t.get(), xm.get(), ym.get(), MPFR_RNDN);
    CHECK(oracle::encloses(x + y, t));
    mpfr_mul(t.get(), xm.get(), ym.get(), MPFR_RNDN);
    CHECK(oracle::encloses(x * y, t));
    mpfr_div(t.get(), ym.get(), xm.get(), MPFR_RNDN);
    CHECK(oracle::encloses(y / x, t));
    mpfr_log(t.get(), xm.get(), MPFR_RNDN);
    CHECK(oracle::encloses(log(x), t));
    mpfr_exp(t.get(), ym.get(), MPFR_RNDN);
    CHECK(oracle::encloses(exp(y), t));
    mpfr_pow(t.get(), xm.get(), ym.get(), MPFR_RNDN);
    CHECK(oracle::encloses(pow(x, y), t));
    mpfr_expm1(t.get(), ym.get(), MPFR_RNDN);
    CHECK(oracle::encloses(expm1(y), t));
    // Any point of the input ball maps inside the output ball.
    Real xe(fine);
    mpfr_add(xe.get(), xm.get(), x.rad().get(), MPFR_RNDN);
    mpfr_log(t.get(), xe.get(), MPFR_RNDN);
    CHECK(oracle::encloses(log(x), t));
    mpfr_sqr(t.get(), xe.get(), MPFR_RNDN);
    CHECK(oracle::encloses(x * x, t));
  }
}

TEST_CASE("widening an input never shrinks the output radius") {
  std::mt19937_64 rng(7);
  const auto prec = PrecisionContext(25).bits();
  auto xs = random_balls(rng, 40, 0.5, 5.0, prec);
  auto ys = random_balls(rng, 40, 0.5, 5.0, prec);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    Ball wx = widened(xs[i], 1e-10);
    for (BallOp op : {BallOp::add, BallOp::sub, BallOp::mul, BallOp::div, BallOp::exp, BallOp::log}) {
      Ball narrow = (op == BallOp::sub) ? xs[i] + ys[i] : ball_arith(xs[i], ys[i], op);
      Ball wide = (op == BallOp::sub) ? wx + ys[i] : ball_arith(wx, ys[i], op);
      CHECK(narrow.rad() <= wide.rad());
    }
  }
}

TEST_CASE("refinement: doubling the precision nests the result") {
  const PrecisionContext c1(30);
  const PrecisionContext c2 = c1.with_digits(60);
  for (long k = 1; k <= 12; ++k) {
    Ball a = exp(Ball::from_ratio(k, 7, c1.bits())) / Ball::from_int(k + 2, c1.bits());
    Ball b = exp(Ball::from_ratio(k, 7, c2.bits())) / Ball::from_int(k + 2, c2.bits());
    CHECK(a.overlaps(b));
    CHECK(b.rad() < a.rad());
  }
}

TEST_CASE("parsing") {
  const auto prec = PrecisionContext(30).bits();
  CHECK(mpfr_cmp_d(Ball::parse("0.5", prec).mid().get(), 0.5) == 0);
  CHECK(Ball::parse("0.5", prec).rad().is_zero());
  CHECK(!Ball::parse("0.1", prec).rad().is_zero());
  Ball third = Ball::parse("1/3", prec);
  CHECK(third.overlaps(Ball::from_ratio(1, 3, prec)));
  CHECK_THROWS_AS(Ball::parse("abc", prec), DomainError);
  CHECK_THROWS_AS(Ball::parse("1/0", prec), DomainError);
}

TEST_CASE("PrecisionContext invariants") {
  CHECK_THROWS_AS(PrecisionContext(14), DomainError);
  PrecisionContext ctx(30);
  CHECK(mpfr_cmp_d(ctx.target_tolerance().get(), 1.01e-20) < 0);
  CHECK(mpfr_cmp_d(ctx.target_tolerance().get(), 0.99e-20) > 0);
  CHECK_THROWS_AS(ctx.set_target_tolerance(Real::pow10(-31, 64, MPFR_RNDN)), DomainError);
  CHECK_THROWS_AS(ctx.set_target_tolerance(Real(0, 64)), DomainError);
  ctx.set_target_tolerance(Real::pow10(-25, 64, MPFR_RNDN));
  CHECK(ctx.bits() > 99);
}
