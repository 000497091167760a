// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "epochsim/fixed.hpp"

namespace epochsim {

// One weather observation: temperature tau in degC, pressure psi in hPa,
// relative humidity rho in %. A channel is empty when the source reported
// nothing for it.
struct SampleTriple {
  std::optional<Fixed> tau;
  std::optional<Fixed> psi;
  std::optional<Fixed> rho;

  friend bool operator==(const SampleTriple&, const SampleTriple&) = default;
};

class Value;
using ValueList = std::vector<Value>;

// Tagged union for contract arguments, return values and world state.
// Null is a first-class member, not an absent optional: contracts receive
// and store it, and only arithmetic or comparison on it faults.
class Value {
 public:
  Value() : rep_(std::monostate{}) {}
  Value(Fixed n) : rep_(n) {}
  Value(bool b) : rep_(b) {}
  Value(std::string t) : rep_(std::move(t)) {}
  Value(const char* t) : rep_(std::string(t)) {}
  Value(SampleTriple s) : rep_(std::move(s)) {}
  Value(ValueList l) : rep_(std::move(l)) {}

  static Value null() { return Value(); }

  bool is_null() const { return std::holds_alternative<std::monostate>(rep_); }
  bool is_number() const { return std::holds_alternative<Fixed>(rep_); }
  bool is_bool() const { return std::holds_alternative<bool>(rep_); }
  bool is_text() const { return std::holds_alternative<std::string>(rep_); }
  bool is_triple() const { return std::holds_alternative<SampleTriple>(rep_); }
  bool is_list() const { return std::holds_alternative<ValueList>(rep_); }

  Fixed number() const { return std::get<Fixed>(rep_); }
  bool boolean() const { return std::get<bool>(rep_); }
  const std::string& text() const { return std::get<std::string>(rep_); }
  const SampleTriple& triple() const { return std::get<SampleTriple>(rep_); }
  const ValueList& list() const { return std::get<ValueList>(rep_); }

  // Stable name of the held alternative ("null", "number", ...).
  std::string_view type_name() const;

  friend bool operator==(const Value&, const Value&) = default;

 private:
  std::variant<std::monostate, Fixed, bool, std::string, SampleTriple,
               ValueList>
      rep_;
};

}  // namespace epochsim
