// SPDX-License-Identifier: Apache-2.0
#include "epochsim/value.hpp"

namespace epochsim {

std::string_view Value::type_name() const {
  switch (rep_.index()) {
    case 0: return "null";
    case 1: return "number";
    case 2: return "bool";
    case 3: return "text";
    case 4: return "sample";
    default: return "list";
  }
}

}  // namespace epochsim
