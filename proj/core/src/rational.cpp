#include "halolab/rational.hpp"

#include <charconv>
#include <limits>

#include "halolab/errors.hpp"

namespace halolab {

namespace {

BigInt parse_integer(std::string_view digits, std::string_view whole) {
  if (digits.empty()) throw InvalidArgument("rational", "cannot parse '" + std::string(whole) + "'");
  BigInt out = 0;
  for (char ch : digits) {
    if (ch < '0' || ch > '9')
      throw InvalidArgument("rational", "cannot parse '" + std::string(whole) + "'");
    out = out * 10 + (ch - '0');
  }
  return out;
}

}  // namespace

Rational::Rational(const BigInt& num, const BigInt& den) {
  if (den == 0) throw InvalidArgument("rational", "zero denominator");
  value_ = den < 0 ? boost::multiprecision::cpp_rational(-num, -den) : boost::multiprecision::cpp_rational(num, den);
}

Rational Rational::parse(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  auto slash = body.find('/');
  BigInt num = parse_integer(body.substr(0, slash), text);
  BigInt den = slash == std::string_view::npos ? BigInt(1) : parse_integer(body.substr(slash + 1), text);
  if (negative) num = -num;
  return Rational(num, den);
}

BigInt Rational::num() const { return boost::multiprecision::numerator(value_); }
BigInt Rational::den() const { return boost::multiprecision::denominator(value_); }

BigInt Rational::floor() const {
  BigInt n = num(), d = den();
  BigInt q = n / d;  // truncates toward zero
  if (n < 0 && q * d != n) q -= 1;
  return q;
}

BigInt Rational::ceil() const {
  BigInt n = num(), d = den();
  BigInt q = n / d;
  if (n > 0 && q * d != n) q += 1;
  return q;
}

std::string Rational::decimal(int places) const {
  BigInt n = num(), d = den();
  bool negative = n < 0;
  if (negative) n = -n;
  BigInt scale = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(places));
  BigInt scaled = n * scale;
  BigInt q = scaled / d;
  BigInt rem2 = (scaled - q * d) * 2;
  if (rem2 > d || (rem2 == d && (q & 1) != 0)) q += 1;

  std::string digits = q.str();
  if (static_cast<int>(digits.size()) <= places)
    digits.insert(0, static_cast<std::size_t>(places) + 1 - digits.size(), '0');
  std::string out;
  if (negative && q != 0) out.push_back('-');
  out += digits.substr(0, digits.size() - static_cast<std::size_t>(places));
  if (places > 0) {
    out.push_back('.');
    out += digits.substr(digits.size() - static_cast<std::size_t>(places));
  }
  return out;
}

std::string Rational::str() const {
  BigInt d = den();
  if (d == 1) return num().str();
  return num().str() + "/" + d.str();
}

double Rational::to_double() const { return value_.convert_to<double>(); }

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw InvalidArgument("rational", "division by zero");
  value_ /= o.value_;
  return *this;
}

Rational pow(const Rational& base, unsigned exponent) {
  return Rational(boost::multiprecision::pow(base.num(), exponent),
                  boost::multiprecision::pow(base.den(), exponent));
}

std::optional<std::uint64_t> to_u64(const BigInt& value) {
  if (value < 0 || value > std::numeric_limits<std::uint64_t>::max()) return std::nullopt;
  return value.convert_to<std::uint64_t>();
}

}  // namespace halolab
