#include "zlab/real.hpp"

#include <cstdlib>
#include <string>

#include "zlab/errors.hpp"

namespace zlab {

std::string Real::to_string(int digits, mpfr_rnd_t rnd) const {
  char* buf = nullptr;
  const char fmt[] = {'%', '.', '*', 'R', static_cast<char>(rnd == MPFR_RNDU   ? 'U'
                                                           : rnd == MPFR_RNDD ? 'D'
                                                           : rnd == MPFR_RNDA ? 'Y'
                                                                              : 'N'),
                      'g', '\0'};
  if (mpfr_asprintf(&buf, fmt, digits, v_) < 0) return "nan";
  std::string out(buf);
  mpfr_free_str(buf);
  return out;
}

Real Real::parse(const std::string& text, mpfr_prec_t prec, mpfr_rnd_t rnd) {
  Real r(prec);
  if (text.empty() || mpfr_set_str(r.v_, text.c_str(), 10, rnd) != 0) {
    throw DomainError("not a decimal number: '" + text + "'");
  }
  return r;
}

Real Real::pow10(long exponent, mpfr_prec_t prec, mpfr_rnd_t rnd) {
  Real r(prec);
  Real ten(10, prec);
  mpfr_pow_si(r.v_, ten.v_, exponent, rnd);
  return r;
}

Real add_up(const Real& a, const Real& b) {
  Real r(64);
  mpfr_add(r.get(), a.get(), b.get(), MPFR_RNDU);
  return r;
}

Real mul_up(const Real& a, const Real& b) {
  Real r(64);
  mpfr_mul(r.get(), a.get(), b.get(), MPFR_RNDU);
  return r;
}

Real div_up(const Real& a, const Real& b) {
  Real r(64);
  mpfr_div(r.get(), a.get(), b.get(), MPFR_RNDU);
  return r;
}

Real max_of(const Real& a, const Real& b) { return a < b ? b : a; }

}  // namespace zlab
