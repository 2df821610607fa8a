#pragma once

#include "fpv/format.hpp"
#include "fpv/transform.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace fpv {

class TypeError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// One equivalence class of type variables (every node owns one variable;
/// equality constraints merge them).
struct TypeClass {
  enum class Kind { Any, Float, Int, Bool };
  Kind kind = Kind::Any;
  std::optional<Type> pinned; // from an inline annotation
  std::vector<NodeId> members;
};

/// Format of class `narrow` must be strictly narrower than that of `wide`.
struct Ordering {
  size_t narrow = 0;
  size_t wide = 0;
};

struct TypeConstraints {
  std::vector<size_t> class_of; // indexed by NodeId
  std::vector<TypeClass> classes;
  std::vector<Ordering> orderings;
};

struct TypeAssignment {
  std::vector<Type> node_types; // indexed by NodeId

  const Type &of(NodeId id) const { return node_types[id]; }
  friend bool operator==(const TypeAssignment &, const TypeAssignment &) =
      default;
};

/// Throws `TypeError` when the transform cannot be typed at all (kind
/// clash, conflicting annotations, a strict width ordering over a single
/// variable or between two conflicting annotations).
TypeConstraints gen_constraints(const Transform &t);

/// All solutions over `cfg`, FP classes varying slowest and formats/widths
/// ascending. Bool classes are fixed to i1; annotated classes are fixed to
/// their annotation and dropped when it lies outside `cfg`.
std::vector<TypeAssignment> enumerate_assignments(const TypeConstraints &c,
                                                  const WidthConfig &cfg);

/// "%x:i16 %a:half ..." over inputs, constants and registers.
std::string describe(const Transform &t, const TypeAssignment &ta);

/// Named values and their types, in node order.
std::vector<std::pair<std::string, std::string>>
named_types(const Transform &t, const TypeAssignment &ta);

} // namespace fpv
