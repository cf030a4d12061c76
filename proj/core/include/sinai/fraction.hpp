#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sinai {

__extension__ typedef __int128 Int128;
__extension__ typedef unsigned __int128 UInt128;

/// Exact nonnegative rational p/q in lowest terms. Thresholds such as beta
/// and delta are carried this way so that boundary comparisons are exact.
class Fraction {
 public:
  constexpr Fraction() = default;
  Fraction(std::int64_t num, std::int64_t den);

  /// Accepts "p/q", plain decimals ("0.9") and integers. No exponent form.
  static Fraction parse(std::string_view text);

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }
  double to_double() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string to_string() const;

  Fraction operator+(const Fraction& other) const;
  friend bool operator==(const Fraction&, const Fraction&) = default;
  std::strong_ordering operator<=>(const Fraction& other) const noexcept;

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

/// Parses "a:b:step" into the inclusive list a, a+step, ..., <= b.
std::vector<Fraction> parse_fraction_range(std::string_view text);

/// Exact ratio of counts, e.g. a window mass over n.
struct CountRatio {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  double to_double() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
  /// num/den >= f, evaluated exactly.
  bool at_least(const Fraction& f) const noexcept;
  friend bool operator==(const CountRatio& a, const CountRatio& b) noexcept {
    return static_cast<UInt128>(a.num) * b.den ==
           static_cast<UInt128>(b.num) * a.den;
  }
};

/// Nonnegative integer or +infinity (concentration radii, f(beta)).
class ExtendedCount {
 public:
  static constexpr ExtendedCount infinite() noexcept { return ExtendedCount{}; }
  static constexpr ExtendedCount finite(std::uint64_t v) noexcept { return ExtendedCount{v}; }

  constexpr bool is_finite() const noexcept { return value_.has_value(); }
  std::uint64_t value() const { return value_.value(); }
  double to_double() const noexcept;
  std::string to_string() const;

  friend constexpr bool operator==(const ExtendedCount&, const ExtendedCount&) = default;

 private:
  constexpr ExtendedCount() = default;
  constexpr explicit ExtendedCount(std::uint64_t v) : value_(v) {}
  std::optional<std::uint64_t> value_;
};

}  // namespace sinai
