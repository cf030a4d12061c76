#include "sinai/fraction.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>

#include "sinai/errors.hpp"

namespace sinai {

namespace {

std::int64_t parse_int(std::string_view text, std::string_view whole) {
  std::int64_t value = 0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || text.empty()) {
    throw SinaiError(ErrorCode::ParseError, "not a fraction: '" + std::string(whole) + "'");
  }
  return value;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace

Fraction::Fraction(std::int64_t num, std::int64_t den) {
  if (den == 0) throw SinaiError(ErrorCode::InvalidArgument, "zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  if (num < 0) throw SinaiError(ErrorCode::InvalidArgument, "negative fraction");
  const std::int64_t g = std::gcd(num, den);
  num_ = g == 0 ? 0 : num / g;
  den_ = g == 0 ? 1 : den / g;
}

Fraction Fraction::parse(std::string_view text) {
  const std::string_view s = trim(text);
  if (!s.empty() && s.front() == '-') {
    throw SinaiError(ErrorCode::ParseError, "negative fraction: '" + std::string(text) + "'");
  }
  if (const auto slash = s.find('/'); slash != std::string_view::npos) {
    const std::int64_t den = parse_int(trim(s.substr(slash + 1)), text);
    if (den == 0) throw SinaiError(ErrorCode::ParseError, "zero denominator: '" + std::string(text) + "'");
    return Fraction(parse_int(trim(s.substr(0, slash)), text), den);
  }
  if (const auto dot = s.find('.'); dot != std::string_view::npos) {
    const std::string_view int_part = s.substr(0, dot);
    const std::string_view frac_part = s.substr(dot + 1);
    if (frac_part.size() > 15) {
      throw SinaiError(ErrorCode::ParseError, "too many decimals: '" + std::string(text) + "'");
    }
    std::int64_t den = 1;
    for (std::size_t i = 0; i < frac_part.size(); ++i) den *= 10;
    const std::int64_t whole = int_part.empty() ? 0 : parse_int(int_part, text);
    const std::int64_t frac = frac_part.empty() ? 0 : parse_int(frac_part, text);
    if (frac < 0) throw SinaiError(ErrorCode::ParseError, "bad decimal: '" + std::string(text) + "'");
    return Fraction(whole * den + frac, den);
  }
  return Fraction(parse_int(s, text), 1);
}

std::string Fraction::to_string() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Fraction Fraction::operator+(const Fraction& other) const {
  const std::int64_t l = std::lcm(den_, other.den_);
  return Fraction(num_ * (l / den_) + other.num_ * (l / other.den_), l);
}

std::strong_ordering Fraction::operator<=>(const Fraction& other) const noexcept {
  const Int128 lhs = static_cast<Int128>(num_) * other.den_;
  const Int128 rhs = static_cast<Int128>(other.num_) * den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::vector<Fraction> parse_fraction_range(std::string_view text) {
  const auto c1 = text.find(':');
  const auto c2 = c1 == std::string_view::npos ? c1 : text.find(':', c1 + 1);
  if (c2 == std::string_view::npos) {
    throw SinaiError(ErrorCode::ParseError, "expected a:b:step, got '" + std::string(text) + "'");
  }
  const Fraction lo = Fraction::parse(text.substr(0, c1));
  const Fraction hi = Fraction::parse(text.substr(c1 + 1, c2 - c1 - 1));
  const Fraction step = Fraction::parse(text.substr(c2 + 1));
  if (step.num() == 0) throw SinaiError(ErrorCode::ParseError, "zero step in range");
  std::vector<Fraction> out;
  for (Fraction f = lo; f <= hi; f = f + step) {
    out.push_back(f);
    if (out.size() > 100000) throw SinaiError(ErrorCode::TooLarge, "range has too many points");
  }
  return out;
}

bool CountRatio::at_least(const Fraction& f) const noexcept {
  // num/den >= p/q  <=>  num*q >= p*den
  return static_cast<UInt128>(num) * static_cast<std::uint64_t>(f.den()) >=
         static_cast<UInt128>(static_cast<std::uint64_t>(f.num())) * den;
}

double ExtendedCount::to_double() const noexcept {
  return value_ ? static_cast<double>(*value_) : std::numeric_limits<double>::infinity();
}

std::string ExtendedCount::to_string() const {
  return value_ ? std::to_string(*value_) : std::string("inf");
}

}  // namespace sinai
