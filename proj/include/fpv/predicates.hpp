#pragma once

#include <string_view>
#include <vector>

namespace fpv {

/// What a precondition predicate does with its arguments.
enum class PredicateRole {
  Encoded,   // becomes a solver constraint over value arguments
  Hint,      // profitability hint, always true for verification
  CodeFilter // restricts the condition-code enumeration
};

struct PredicateInfo {
  std::string_view name;
  unsigned arity;
  PredicateRole role;
};

/// isNormal, AnyZero, hasOneUse, WillNotOverflowSignedAdd, ordered,
/// unordered, swap.
const std::vector<PredicateInfo> &predicate_registry();
const PredicateInfo *find_predicate(std::string_view name);

} // namespace fpv
