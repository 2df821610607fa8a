#include "fpv/condcode.hpp"

namespace fpv {

namespace {
constexpr std::array<std::string_view, 14> names{
    "oeq", "ogt", "oge", "olt", "ole", "one", "ord",
    "uno", "ueq", "ugt", "uge", "ult", "ule", "une",
};
}

std::string_view to_string(CondCode cc) {
  return names[static_cast<size_t>(cc)];
}

std::optional<CondCode> parse_cond_code(std::string_view s) {
  for (size_t i = 0; i < names.size(); ++i)
    if (names[i] == s)
      return static_cast<CondCode>(i);
  return std::nullopt;
}

bool is_ordered(CondCode cc) {
  switch (cc) {
  case CondCode::oeq:
  case CondCode::ogt:
  case CondCode::oge:
  case CondCode::olt:
  case CondCode::ole:
  case CondCode::one:
  case CondCode::ord:
    return true;
  default:
    return false;
  }
}

CondCode swapped(CondCode cc) {
  switch (cc) {
  case CondCode::ogt: return CondCode::olt;
  case CondCode::olt: return CondCode::ogt;
  case CondCode::oge: return CondCode::ole;
  case CondCode::ole: return CondCode::oge;
  case CondCode::ugt: return CondCode::ult;
  case CondCode::ult: return CondCode::ugt;
  case CondCode::uge: return CondCode::ule;
  case CondCode::ule: return CondCode::uge;
  default: return cc; // eq, ne, ord, uno are symmetric
  }
}

Relation relation_of(CondCode cc) {
  switch (cc) {
  case CondCode::oeq:
  case CondCode::ueq: return Relation::Eq;
  case CondCode::ogt:
  case CondCode::ugt: return Relation::Gt;
  case CondCode::oge:
  case CondCode::uge: return Relation::Ge;
  case CondCode::olt:
  case CondCode::ult: return Relation::Lt;
  case CondCode::ole:
  case CondCode::ule: return Relation::Le;
  case CondCode::one:
  case CondCode::une: return Relation::Ne;
  case CondCode::ord:
  case CondCode::uno: return Relation::True;
  }
  return Relation::True;
}

} // namespace fpv
