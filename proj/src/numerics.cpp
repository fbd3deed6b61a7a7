#include "zlab/numerics.hpp"

#include <mutex>
#include <vector>

#include "zlab/errors.hpp"

namespace zlab {
namespace {

std::mutex bernoulli_mutex;
std::vector<Rational> bernoulli_cache{Rational(1)};

}  // namespace

Rational bernoulli(unsigned k) {
  std::lock_guard<std::mutex> lock(bernoulli_mutex);
  while (bernoulli_cache.size() <= k) {
    const unsigned long m = bernoulli_cache.size();
    if (m > 1 && (m & 1) != 0) {
      bernoulli_cache.emplace_back(0);
      continue;
    }
    // B_m = -1/(m+1) * sum_{j<m} C(m+1, j) B_j
    Rational acc(0);
    mpz_class binom(1);  // C(m+1, 0)
    for (unsigned long j = 0; j < m; ++j) {
      if (bernoulli_cache[j] != 0) acc += Rational(binom) * bernoulli_cache[j];
      binom = binom * (m + 1 - j) / (j + 1);
    }
    Rational b = -acc / Rational(m + 1);
    b.canonicalize();
    bernoulli_cache.push_back(b);
  }
  return bernoulli_cache[k];
}

Ball pochhammer_ratio(const Ball& s, unsigned long n, const PrecisionContext& ctx) {
  const mpfr_prec_t prec = std::max(ctx.bits(), s.precision());
  Ball result = Ball::from_int(1, prec);
  Ball factor = s.with_precision(prec);
  for (unsigned long i = 0; i < n; ++i) {
    if (factor.contains_zero()) {
      throw PrecisionExhausted("pochhammer factor s+" + std::to_string(i) + " straddles zero");
    }
    result *= factor;
    factor.add_si(1);
  }
  return result;
}

Ball binomial_ball(unsigned long n, unsigned long k, mpfr_prec_t prec) {
  mpz_class c;
  mpz_bin_uiui(c.get_mpz_t(), n, k);
  return Ball::from_rational(Rational(c), prec);
}

}  // namespace zlab
