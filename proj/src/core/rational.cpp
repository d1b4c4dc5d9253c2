#include "core/rational.hpp"

#include <cmath>

namespace cantorium {

Rational rat_parse(const std::string& text) {
  std::string s = text;
  // strip whitespace
  s.erase(0, s.find_first_not_of(" \t"));
  if (!s.empty()) s.erase(s.find_last_not_of(" \t") + 1);
  if (s.empty()) throw DomainError("empty rational literal");

  auto dot = s.find('.');
  if (dot != std::string::npos) {
    if (s.find('/') != std::string::npos)
      throw DomainError("rational literal mixes '.' and '/': " + text);
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    size_t frac_len = s.size() - dot - 1;
    Integer num(digits, 10);
    Integer den = int_pow(10, frac_len);
    Rational q(num, den);
    q.canonicalize();
    return q;
  }
  Rational q;
  if (q.set_str(s, 10) != 0) throw DomainError("bad rational literal: " + text);
  if (q.get_den() == 0) throw DomainError("zero denominator: " + text);
  q.canonicalize();
  return q;
}

std::string rat_str(const Rational& q) { return q.get_str(); }

Rational rat_from_double(double x) {
  if (!std::isfinite(x)) throw DomainError("non-finite double");
  Rational q;
  mpq_set_d(q.get_mpq_t(), x);
  return q;
}

Integer int_pow(unsigned long base, unsigned long exp) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), base, exp);
  return r;
}

Rational rat_pow(const Rational& base, long exp) {
  if (exp == 0) return rat(1);
  if (base == 0 && exp < 0) throw DomainError("0 raised to negative power");
  unsigned long e = static_cast<unsigned long>(exp < 0 ? -exp : exp);
  Integer num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num().get_mpz_t(), e);
  mpz_pow_ui(den.get_mpz_t(), base.get_den().get_mpz_t(), e);
  Rational r = exp > 0 ? Rational(num, den) : Rational(den, num);
  r.canonicalize();
  return r;
}

Rational rat_gcd(const Rational& a, const Rational& b) {
  if (a == 0) return rat_abs(b);
  if (b == 0) return rat_abs(a);
  // gcd(p1/q1, p2/q2) = gcd(p1*q2, p2*q1) / (q1*q2)
  Integer n1 = a.get_num() * b.get_den();
  Integer n2 = b.get_num() * a.get_den();
  Integer g;
  mpz_gcd(g.get_mpz_t(), n1.get_mpz_t(), n2.get_mpz_t());
  Rational r(g, a.get_den() * b.get_den());
  r.canonicalize();
  return r;
}

Integer rat_fdiv(const Rational& v, const Rational& m) {
  if (m <= 0) throw DomainError("modulus must be positive");
  // floor((vn * md) / (vd * mn))
  Integer num = v.get_num() * m.get_den();
  Integer den = v.get_den() * m.get_num();
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  return q;
}

Rational rat_mod(const Rational& v, const Rational& m) {
  Rational r = v - Rational(rat_fdiv(v, m)) * m;
  return r;
}

}  // namespace cantorium
