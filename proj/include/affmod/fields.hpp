#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <complex>
#include <cstdint>
#include <sstream>
#include <string>

#include "affmod/errors.hpp"

namespace affmod {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// Exact rationals, reduced with positive denominator (cpp_rational keeps
// that normal form itself).
struct RationalField {
  using Elem = Rational;
  static Elem zero() { return Elem(0); }
  static Elem one() { return Elem(1); }
  static Elem from_long(long v) { return Elem(v); }
  static bool is_zero(const Elem& a) { return a == 0; }
  static bool eq(const Elem& a, const Elem& b) { return a == b; }
  static Elem add(const Elem& a, const Elem& b) { return a + b; }
  static Elem sub(const Elem& a, const Elem& b) { return a - b; }
  static Elem mul(const Elem& a, const Elem& b) { return a * b; }
  static Elem neg(const Elem& a) { return -a; }
  static Elem div(const Elem& a, const Elem& b) {
    if (b == 0) fail(ErrKind::InvalidInput, "division by zero");
    return a / b;
  }
  static Elem inv(const Elem& a) { return div(one(), a); }
  static std::string str(const Elem& a) {
    std::ostringstream os;
    os << a;
    return os.str();
  }
  static Elem from_literal(const BigInt& num, const BigInt& den) {
    return Elem(num, den);
  }
  static constexpr bool exact = true;
};

// Prime field F_q, q prime <= 2^16. Elements carry their modulus; mixing
// moduli is an error, never a coercion.
struct FpElem {
  uint32_t v = 0;
  uint32_t q = 2;
  bool operator==(const FpElem&) const = default;
};

struct PrimeField {
  using Elem = FpElem;

  static uint32_t common(const Elem& a, const Elem& b) {
    if (a.q != b.q)
      fail(ErrKind::FieldMismatch, "prime fields F_" + std::to_string(a.q) +
                                       " and F_" + std::to_string(b.q));
    return a.q;
  }
  static Elem make(long v, uint32_t q) {
    long r = v % (long)q;
    if (r < 0) r += q;
    return {(uint32_t)r, q};
  }
  static bool is_zero(const Elem& a) { return a.v == 0; }
  static bool eq(const Elem& a, const Elem& b) { return common(a, b), a.v == b.v; }
  static Elem add(const Elem& a, const Elem& b) {
    uint32_t q = common(a, b);
    return {(a.v + b.v) % q, q};
  }
  static Elem sub(const Elem& a, const Elem& b) {
    uint32_t q = common(a, b);
    return {(a.v + q - b.v) % q, q};
  }
  static Elem mul(const Elem& a, const Elem& b) {
    uint32_t q = common(a, b);
    return {(uint32_t)(((uint64_t)a.v * b.v) % q), q};
  }
  static Elem neg(const Elem& a) { return {(a.q - a.v) % a.q, a.q}; }
  static Elem pow(Elem a, uint64_t e) {
    Elem r{1u % a.q, a.q};
    while (e) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }
  static Elem inv(const Elem& a) {
    if (a.v == 0) fail(ErrKind::InvalidInput, "division by zero in F_q");
    return pow(a, a.q - 2);
  }
  static Elem div(const Elem& a, const Elem& b) { return mul(a, inv(b)); }
  static std::string str(const Elem& a) { return std::to_string(a.v); }
  static constexpr bool exact = true;
};

// Approximate complex scalars; equality is |a-b| < eps. Exists for steps
// that need irrational roots, never for the exactness claims.
struct ComplexField {
  using Elem = std::complex<double>;
  static constexpr double eps = 1e-9;
  static Elem zero() { return {0.0, 0.0}; }
  static Elem one() { return {1.0, 0.0}; }
  static Elem from_long(long v) { return {(double)v, 0.0}; }
  static bool is_zero(const Elem& a) { return std::abs(a) < eps; }
  static bool eq(const Elem& a, const Elem& b) { return std::abs(a - b) < eps; }
  static Elem add(const Elem& a, const Elem& b) { return a + b; }
  static Elem sub(const Elem& a, const Elem& b) { return a - b; }
  static Elem mul(const Elem& a, const Elem& b) { return a * b; }
  static Elem neg(const Elem& a) { return -a; }
  static Elem div(const Elem& a, const Elem& b) {
    if (is_zero(b)) fail(ErrKind::InvalidInput, "division by ~zero");
    return a / b;
  }
  static Elem inv(const Elem& a) { return div(one(), a); }
  static std::string str(const Elem& a) {
    std::ostringstream os;
    os << a.real();
    if (a.imag() != 0.0) os << (a.imag() > 0 ? "+" : "") << a.imag() << "i";
    return os.str();
  }
  static Elem from_literal(const BigInt& num, const BigInt& den) {
    return {(double)num / (double)den, 0.0};
  }
  static constexpr bool exact = false;
};

inline std::string rational_str(const Rational& r) { return RationalField::str(r); }

inline int bit_size(const Rational& r) {
  using boost::multiprecision::msb;
  BigInt n = numerator(r) < 0 ? BigInt(-numerator(r)) : numerator(r);
  BigInt d = denominator(r);
  int bn = n == 0 ? 0 : (int)msb(n) + 1;
  int bd = d == 0 ? 0 : (int)msb(d) + 1;
  return bn > bd ? bn : bd;
}

} // namespace affmod
