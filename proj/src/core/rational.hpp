#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace cantorium {

// Exact rational scalar backing every mass, coordinate and monodromy value.
using Rational = mpq_class;
using Integer = mpz_class;

struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline Rational rat(long num, long den = 1) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

// Parses "p/q", "p", or a plain decimal like "-0.25".
Rational rat_parse(const std::string& text);

std::string rat_str(const Rational& q);

inline double rat_d(const Rational& q) { return q.get_d(); }

// Exact conversion; every finite double is a dyadic rational.
Rational rat_from_double(double x);

Integer int_pow(unsigned long base, unsigned long exp);

// base^exp with exp possibly negative; base must be nonzero for exp < 0.
Rational rat_pow(const Rational& base, long exp);

inline Rational rat_abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

// gcd over Q: the generator of the group a*Z + b*Z.
Rational rat_gcd(const Rational& a, const Rational& b);

// Representative of v modulo m in [0, m); m > 0.
Rational rat_mod(const Rational& v, const Rational& m);

// floor(v / m) as an integer; m > 0.
Integer rat_fdiv(const Rational& v, const Rational& m);

}  // namespace cantorium
