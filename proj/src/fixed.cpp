// SPDX-License-Identifier: Apache-2.0
#include "epochsim/fixed.hpp"

#include <cctype>
#include <stdexcept>

namespace epochsim {
namespace {

// Rounds num/den to the nearest integer, ties to even. den must be positive.
std::int64_t div_round_half_even(__int128 num, __int128 den) {
  __int128 q = num / den;
  __int128 r = num % den;
  if (r == 0) return static_cast<std::int64_t>(q);
  __int128 mag = r < 0 ? -r : r;
  __int128 sign = num < 0 ? -1 : 1;
  if (2 * mag > den) return static_cast<std::int64_t>(q + sign);
  if (2 * mag == den) {
    if (q % 2 != 0) return static_cast<std::int64_t>(q + sign);
    return static_cast<std::int64_t>(q);
  }
  return static_cast<std::int64_t>(q);
}

}  // namespace

Fixed operator*(Fixed a, Fixed b) {
  __int128 prod = static_cast<__int128>(a.millis_) * b.millis_;
  return Fixed::from_millis(div_round_half_even(prod, Fixed::kScale));
}

Fixed operator/(Fixed a, Fixed b) {
  if (b.millis_ == 0) throw std::domain_error("fixed-point division by zero");
  __int128 num = static_cast<__int128>(a.millis_) * Fixed::kScale;
  __int128 den = b.millis_;
  if (den < 0) {
    num = -num;
    den = -den;
  }
  return Fixed::from_millis(div_round_half_even(num, den));
}

Fixed Fixed::parse(std::string_view text) {
  const auto fail = [&] {
    throw std::invalid_argument("not a fixed-point decimal: '" +
                                std::string(text) + "'");
  };
  std::size_t i = 0;
  bool negative = false;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
    negative = text[i] == '-';
    ++i;
  }
  if (i >= text.size() || !std::isdigit(static_cast<unsigned char>(text[i])))
    fail();
  std::int64_t units = 0;
  while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
    units = units * 10 + (text[i] - '0');
    if (units > 1'000'000'000'000) fail();
    ++i;
  }
  std::int64_t frac = 0;
  if (i < text.size()) {
    if (text[i] != '.') fail();
    ++i;
    int digits = 0;
    while (i < text.size() &&
           std::isdigit(static_cast<unsigned char>(text[i]))) {
      frac = frac * 10 + (text[i] - '0');
      ++digits;
      if (digits > 3) fail();
      ++i;
    }
    if (digits == 0) fail();
    while (digits < 3) {
      frac *= 10;
      ++digits;
    }
  }
  if (i != text.size()) fail();
  std::int64_t millis = units * kScale + frac;
  return from_millis(negative ? -millis : millis);
}

std::string Fixed::str() const {
  std::int64_t m = millis_;
  std::string out;
  if (m < 0) {
    out.push_back('-');
    m = -m;
  }
  out += std::to_string(m / kScale);
  std::int64_t frac = m % kScale;
  out.push_back('.');
  out.push_back(static_cast<char>('0' + frac / 100));
  out.push_back(static_cast<char>('0' + frac / 10 % 10));
  out.push_back(static_cast<char>('0' + frac % 10));
  return out;
}

}  // namespace epochsim
