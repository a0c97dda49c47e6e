#include "bratteli/rational.hpp"

#include "bratteli/error.hpp"

#include <cctype>
#include <iomanip>
#include <sstream>

namespace bratteli {

std::string to_string(const Rational& q) {
  return q.str();
}

Rational parse_rational(std::string_view text) {
  auto fail = [&] { return Error(ErrorCode::ParseError, "not a rational: \"" + std::string(text) + "\""); };
  auto parse_int = [&](std::string_view s) {
    std::size_t pos = 0;
    if (!s.empty() && (s[0] == '-' || s[0] == '+'))
      pos = 1;
    if (pos == s.size())
      throw fail();
    for (std::size_t i = pos; i < s.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(s[i])))
        throw fail();
    return Integer(std::string(s[0] == '+' ? s.substr(1) : s));
  };
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front())))
    text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back())))
    text.remove_suffix(1);
  auto slash = text.find('/');
  if (slash == std::string_view::npos)
    return Rational(parse_int(text));
  Integer num = parse_int(text.substr(0, slash));
  auto den_text = text.substr(slash + 1);
  if (!den_text.empty() && den_text[0] == '-')
    throw fail();
  Integer den = parse_int(den_text);
  if (den == 0)
    throw Error(ErrorCode::ParseError, "zero denominator in \"" + std::string(text) + "\"");
  return Rational(num, den);
}

Rational pow(const Rational& base, unsigned exponent) {
  Rational result(1);
  Rational b = base;
  while (exponent) {
    if (exponent & 1u)
      result *= b;
    exponent >>= 1u;
    if (exponent)
      b *= b;
  }
  return result;
}

Value::Value(Rational lo, Rational hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
  if (hi_ < lo_)
    throw Error(ErrorCode::InvalidArgument, "interval with lo > hi");
}

const Rational& Value::rational() const {
  if (!exact())
    throw Error(ErrorCode::InvalidArgument, "value " + to_string(*this) + " is not exact");
  return lo_;
}

Value operator+(const Value& a, const Value& b) {
  return Value(a.lo_ + b.lo_, a.hi_ + b.hi_);
}

Value operator-(const Value& a, const Value& b) {
  return Value(a.lo_ - b.hi_, a.hi_ - b.lo_);
}

Value operator*(const Value& a, const Value& b) {
  if (a.exact() && b.exact())
    return Value(a.lo_ * b.lo_);
  Rational c[4] = {a.lo_ * b.lo_, a.lo_ * b.hi_, a.hi_ * b.lo_, a.hi_ * b.hi_};
  Rational lo = c[0], hi = c[0];
  for (const auto& x : c) {
    if (x < lo)
      lo = x;
    if (x > hi)
      hi = x;
  }
  return Value(lo, hi);
}

Value pow(const Value& base, unsigned exponent) {
  if (base.exact())
    return Value(pow(base.lo(), exponent));
  if (base.lo() < 0)
    throw Error(ErrorCode::InvalidArgument, "interval power of a possibly negative base");
  return Value(pow(base.lo(), exponent), pow(base.hi(), exponent));
}

Value max(const Value& a, const Value& b) {
  return Value(a.lo() < b.lo() ? b.lo() : a.lo(), a.hi() < b.hi() ? b.hi() : a.hi());
}

Value abs(const Value& v) {
  if (v.lo() >= 0)
    return v;
  if (v.hi() <= 0)
    return Value(-v.hi(), -v.lo());
  Rational hi = -v.lo() > v.hi() ? Rational(-v.lo()) : v.hi();
  return Value(Rational(0), hi);
}

std::string to_string(const Value& v) {
  if (v.exact())
    return to_string(v.lo());
  return "[" + to_string(v.lo()) + "," + to_string(v.hi()) + "]";
}

namespace {

std::string decimal(const Rational& q, int digits) {
  Integer scale = 1;
  for (int i = 0; i < digits; ++i)
    scale *= 10;
  Rational scaled = q * scale;
  Integer num = numerator(scaled);
  Integer den = denominator(scaled);
  Integer rounded = (2 * num + (num >= 0 ? den : Integer(-den))) / (2 * den);
  bool negative = rounded < 0;
  if (negative)
    rounded = -rounded;
  std::string digits_str = rounded.str();
  if (static_cast<int>(digits_str.size()) <= digits)
    digits_str.insert(0, static_cast<std::size_t>(digits + 1) - digits_str.size(), '0');
  digits_str.insert(digits_str.size() - static_cast<std::size_t>(digits), ".");
  return (negative ? "-" : "") + digits_str;
}

} // namespace

std::string to_decimal_string(const Value& v, int digits) {
  // Rounding the midpoint costs at most half a unit in the last place.
  Rational err = v.width() / 2;
  Rational half_ulp(1, 2);
  for (int i = 0; i < digits; ++i)
    half_ulp /= 10;
  err += half_ulp;
  std::ostringstream os;
  os << decimal(v.mid(), digits) << " +- " << std::setprecision(3) << std::scientific
     << err.convert_to<double>();
  return os.str();
}

} // namespace bratteli
