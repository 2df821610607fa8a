#pragma once

#include "fpv/condcode.hpp"
#include "fpv/minifloat.hpp"
#include "fpv/transform.hpp"
#include "fpv/typer.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fpv {

/// Bit pattern per node. For inputs and constants this is the node's value;
/// for undef, fast-math and conversion nodes it is the value of the node's
/// fresh variable, consulted only when the node actually produces undef.
using Assignment = std::vector<std::optional<uint64_t>>;

/// Thrown when evaluation reaches a fresh variable with no value yet.
struct NeedChoice {
  NodeId node;
};

class MissingBinding : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class BudgetExceeded : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Concrete semantics of one typed instance, built on MiniFloat.
class Interpreter {
public:
  Interpreter(const Transform &t, const TypeAssignment &ta,
              const CcAssignment &cca);

  const Transform &transform() const { return t_; }
  const Type &type_of(NodeId id) const { return ta_.of(id); }

  /// Value of `id`. Throws `NeedChoice` or `MissingBinding`.
  uint64_t eval(NodeId id, const Assignment &env) const;
  bool precondition(const Assignment &env) const;
  /// precondition /\ source and target differ (zero signs ignored under a
  /// root nsz).
  bool counterexample(const Assignment &env) const;

  /// Inputs and constant symbols, in node order.
  const std::vector<NodeId> &value_nodes() const { return values_; }
  /// Source-side fresh variables are universal; all others are free.
  bool universal(NodeId id) const {
    const ExprNode &n = t_.node(id);
    return n.side == Side::Source && n.kind != NodeKind::Input &&
           n.kind != NodeKind::ConstSymbol;
  }

  /// Every value of a type, NaN once. Throws `BudgetExceeded` above `limit`.
  static std::vector<uint64_t> domain(const Type &ty, uint64_t limit);

private:
  friend class Evaluation;
  const Transform &t_;
  const TypeAssignment &ta_;
  const CcAssignment &cca_;
  std::vector<NodeId> values_;
  bool nsz_ = false;
};

enum class OracleVerdict { Valid, Invalid };

struct BruteForceResult {
  OracleVerdict verdict = OracleVerdict::Valid;
  /// Inputs, constants and free fresh choices of the first counterexample.
  Assignment witness;
  uint64_t evaluations = 0;
};

inline constexpr uint64_t default_oracle_budget = uint64_t{1} << 24;

/// Decides `exists inputs, free choices . forall source choices .
/// counterexample` by enumeration. Throws `BudgetExceeded`.
BruteForceResult brute_force_verify(const Transform &t,
                                    const TypeAssignment &ta,
                                    const CcAssignment &cca,
                                    uint64_t budget = default_oracle_budget);

enum class ReplayStatus { Confirmed, Refuted, Unsupported };

std::string_view to_string(ReplayStatus s);

struct ReplayResult {
  ReplayStatus status = ReplayStatus::Unsupported;
  std::optional<uint64_t> source; // absent when it depends on source undef
  std::optional<uint64_t> target;
  std::string note;
};

/// Checks a solver model (values of inputs, constants and free fresh
/// variables, keyed by node) against the oracle, searching source-side
/// choices exhaustively.
ReplayResult replay(const Transform &t, const TypeAssignment &ta,
                    const CcAssignment &cca,
                    const std::map<NodeId, uint64_t> &model,
                    uint64_t budget = default_oracle_budget);

/// "-0.0" / "-4095" style rendering of a bit pattern of `ty`.
std::string format_value(uint64_t bits, const Type &ty);
/// Sign/exponent/trailing fields for FP, plain binary for integers.
std::string format_bits(uint64_t bits, const Type &ty);

} // namespace fpv
