#include "fpv/predicates.hpp"

namespace fpv {

const std::vector<PredicateInfo> &predicate_registry() {
  static const std::vector<PredicateInfo> registry{
      {"isNormal", 1, PredicateRole::Encoded},
      {"AnyZero", 1, PredicateRole::Encoded},
      {"hasOneUse", 1, PredicateRole::Hint},
      {"WillNotOverflowSignedAdd", 2, PredicateRole::Encoded},
      {"ordered", 1, PredicateRole::CodeFilter},
      {"unordered", 1, PredicateRole::CodeFilter},
      {"swap", 2, PredicateRole::CodeFilter},
  };
  return registry;
}

const PredicateInfo *find_predicate(std::string_view name) {
  for (auto &p : predicate_registry())
    if (p.name == name)
      return &p;
  return nullptr;
}

} // namespace fpv
