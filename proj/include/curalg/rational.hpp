#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>

#include "curalg/error.hpp"

namespace curalg {

/// Exact rational number, always held in canonical form: gcd(|num|, den) = 1
/// and den > 0. Backed by GMP so numerators and denominators are
/// arbitrary-precision.
class Rational {
 public:
  Rational() : v_(0) {}
  Rational(long long n) : v_(static_cast<long>(n)) {}
  Rational(int n) : v_(n) {}

  Rational(long long num, long long den) {
    if (den == 0) throw Error(errc::DIV_BY_ZERO, "rational with zero denominator");
    v_ = mpq_class(static_cast<long>(num), static_cast<long>(den));
    v_.canonicalize();
  }

  explicit Rational(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }

  /// Parses "p/q" or "p" (optional leading minus). Throws PARSE_ERROR.
  static Rational parse(const std::string& s) {
    if (s.empty()) throw Error(errc::PARSE_ERROR, "empty rational literal");
    const auto slash = s.find('/');
    try {
      mpq_class v;
      if (slash == std::string::npos) {
        v = mpq_class(mpz_class(s));
      } else {
        mpz_class num(s.substr(0, slash));
        mpz_class den(s.substr(slash + 1));
        if (den == 0) throw Error(errc::DIV_BY_ZERO, "zero denominator in " + s);
        v = mpq_class(num) / mpq_class(den);
      }
      return Rational(std::move(v));
    } catch (const std::invalid_argument&) {
      throw Error(errc::PARSE_ERROR, "bad rational literal: " + s);
    }
  }

  mpz_class numerator() const { return v_.get_num(); }
  mpz_class denominator() const { return v_.get_den(); }

  bool is_zero() const { return sgn(v_) == 0; }
  bool is_one() const { return v_ == 1; }
  int sign() const { return sgn(v_); }
  bool is_integer() const { return v_.get_den() == 1; }

  Rational operator-() const { return Rational(mpq_class(-v_)); }

  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw Error(errc::DIV_BY_ZERO, "rational division by zero");
    v_ /= o.v_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
  friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
  friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
  friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
  friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

  Rational inverse() const {
    if (is_zero()) throw Error(errc::DIV_BY_ZERO, "inverse of zero");
    return Rational(mpq_class(1) / v_);
  }

  Rational abs() const { return Rational(mpq_class(::abs(v_))); }

  /// Power with integer exponent >= 0 (0^0 = 1).
  Rational pow(unsigned e) const {
    mpq_class r(1), b(v_);
    for (unsigned k = e; k > 0; k >>= 1) {
      if (k & 1u) r *= b;
      if (k > 1) b *= b;
    }
    return Rational(std::move(r));
  }

  /// Serialized as "p" for integers, "p/q" otherwise.
  std::string str() const {
    if (v_.get_den() == 1) return v_.get_num().get_str();
    return v_.get_num().get_str() + "/" + v_.get_den().get_str();
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r);

 private:
  mpq_class v_;
};

inline std::ostream& operator<<(std::ostream& os, const Rational& r) {
  return os << r.str();
}

}  // namespace curalg
