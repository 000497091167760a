// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace epochsim {

// Fixed-point decimal with exactly three fractional digits.
//
// Every numeric value that flows through the ledger (samples, savings,
// model coefficients) is a signed count of thousandths. Addition and
// subtraction are exact; multiplication and division round the result to
// the nearest thousandth with ties to even. Formatting always emits three
// fractional digits, so serialized values round-trip byte for byte and
// results are identical on every platform.
class Fixed {
 public:
  static constexpr std::int64_t kScale = 1000;

  constexpr Fixed() = default;

  static constexpr Fixed from_millis(std::int64_t millis) {
    Fixed f;
    f.millis_ = millis;
    return f;
  }

  static constexpr Fixed from_int(std::int64_t units) {
    return from_millis(units * kScale);
  }

  // Accepts an optional sign, an integer part and up to three fractional
  // digits ("8149.419", "-0.001", "20.5"). Throws std::invalid_argument on
  // anything else.
  static Fixed parse(std::string_view text);

  constexpr std::int64_t millis() const { return millis_; }
  constexpr bool is_zero() const { return millis_ == 0; }
  constexpr bool is_negative() const { return millis_ < 0; }

  std::string str() const;

  friend constexpr Fixed operator+(Fixed a, Fixed b) {
    return from_millis(a.millis_ + b.millis_);
  }
  friend constexpr Fixed operator-(Fixed a, Fixed b) {
    return from_millis(a.millis_ - b.millis_);
  }
  constexpr Fixed operator-() const { return from_millis(-millis_); }

  Fixed& operator+=(Fixed o) {
    millis_ += o.millis_;
    return *this;
  }
  Fixed& operator-=(Fixed o) {
    millis_ -= o.millis_;
    return *this;
  }

  friend Fixed operator*(Fixed a, Fixed b);
  // Throws std::domain_error when dividing by zero.
  friend Fixed operator/(Fixed a, Fixed b);

  friend constexpr auto operator<=>(Fixed a, Fixed b) = default;

  static constexpr Fixed min(Fixed a, Fixed b) { return a < b ? a : b; }
  static constexpr Fixed max(Fixed a, Fixed b) { return a < b ? b : a; }
  constexpr Fixed abs() const { return millis_ < 0 ? -*this : *this; }

 private:
  std::int64_t millis_ = 0;
};

}  // namespace epochsim
