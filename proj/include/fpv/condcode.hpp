#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace fpv {

/// fcmp condition codes, in LLVM order without the constant `false`/`true`.
enum class CondCode {
  oeq, ogt, oge, olt, ole, one, ord,
  uno, ueq, ugt, uge, ult, ule, une,
};

inline constexpr std::array<CondCode, 14> all_cond_codes{
    CondCode::oeq, CondCode::ogt, CondCode::oge, CondCode::olt, CondCode::ole,
    CondCode::one, CondCode::ord, CondCode::uno, CondCode::ueq, CondCode::ugt,
    CondCode::uge, CondCode::ult, CondCode::ule, CondCode::une,
};

std::string_view to_string(CondCode cc);
std::optional<CondCode> parse_cond_code(std::string_view s);

/// True for the codes that are false whenever an operand is NaN.
bool is_ordered(CondCode cc);

/// The code that gives the same answer with the operands exchanged.
CondCode swapped(CondCode cc);

/// The relation a code tests once NaN has been dealt with.
enum class Relation { Eq, Gt, Ge, Lt, Le, Ne, True };
Relation relation_of(CondCode cc);

/// Concrete code chosen for each symbolic code name of a transform.
using CcAssignment = std::map<std::string, CondCode>;

} // namespace fpv
