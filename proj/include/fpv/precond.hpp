#pragma once

#include "fpv/condcode.hpp"
#include "fpv/term.hpp"
#include "fpv/transform.hpp"

#include <functional>
#include <stdexcept>
#include <vector>

namespace fpv {

class PrecondError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Value predicates and constant-expression equalities become a Bool term;
/// condition-code predicates and usage hints become `true`.
Term encode_predicate(const PredExpr &p,
                      const std::function<Term(NodeId)> &env);

/// Every assignment of concrete codes to the transform's symbolic codes that
/// satisfies its `ordered`, `unordered` and `swap` predicates, in
/// lexicographic order of code index. A transform without symbolic codes
/// gets one empty assignment.
std::vector<CcAssignment> enumerate_cc(const Transform &t);

/// True when `cca` satisfies every condition-code predicate of `p`.
bool codes_admitted(const PredExpr &p, const CcAssignment &cca);

/// The concrete code of an fcmp node under `cca`.
CondCode resolve_cond(const ExprNode &n, const CcAssignment &cca);

} // namespace fpv
