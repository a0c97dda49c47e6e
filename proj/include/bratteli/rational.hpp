#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <string>
#include <string_view>

namespace bratteli {

using Integer = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

// "p/q" in lowest terms, or "p" when the denominator is one.
std::string to_string(const Rational& q);

// Accepts "p", "-p", "p/q". Throws Error(ParseError).
Rational parse_rational(std::string_view text);

Rational pow(const Rational& base, unsigned exponent);

// Closed interval of rationals. Exact values have lo == hi; interval
// values come from certified enclosures (irrational Perron data).
class Value {
public:
  Value() : lo_(0), hi_(0) {}
  Value(const Rational& q) : lo_(q), hi_(q) {}  // NOLINT: implicit on purpose
  Value(long long n) : lo_(n), hi_(n) {}        // NOLINT
  Value(Rational lo, Rational hi);

  const Rational& lo() const { return lo_; }
  const Rational& hi() const { return hi_; }
  bool exact() const { return lo_ == hi_; }
  Rational width() const { return hi_ - lo_; }
  Rational mid() const { return (lo_ + hi_) / 2; }
  // Throws Error(InvalidArgument) when the value is not exact.
  const Rational& rational() const;

  bool contains(const Rational& q) const { return lo_ <= q && q <= hi_; }
  bool overlaps(const Value& other) const { return lo_ <= other.hi_ && other.lo_ <= hi_; }
  bool is_zero() const { return exact() && lo_ == 0; }

  friend Value operator+(const Value& a, const Value& b);
  friend Value operator-(const Value& a, const Value& b);
  friend Value operator*(const Value& a, const Value& b);
  Value& operator+=(const Value& b) { return *this = *this + b; }
  Value& operator*=(const Value& b) { return *this = *this * b; }

  // Exact equality of the two enclosures (not of the enclosed numbers).
  friend bool operator==(const Value& a, const Value& b) { return a.lo_ == b.lo_ && a.hi_ == b.hi_; }

private:
  Rational lo_;
  Rational hi_;
};

Value pow(const Value& base, unsigned exponent);
Value max(const Value& a, const Value& b);
Value abs(const Value& v);

// Exact values print as rationals, intervals as "[lo,hi]".
std::string to_string(const Value& v);
// Decimal rendering with an explicit error bound, e.g. "0.3333333333 +- 4e-11".
std::string to_decimal_string(const Value& v, int digits = 12);

} // namespace bratteli
