#pragma once

#include "fpv/format.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fpv {

using NodeId = uint32_t;

enum class Opcode {
  fadd, fsub, fmul, fdiv, frem,
  fabs, fcmp, select,
  fptrunc, fpext, fptosi, fptoui, sitofp, uitofp,
  add, sub,
};

std::string_view to_string(Opcode op);
std::optional<Opcode> parse_opcode(std::string_view s);

bool is_fp_binop(Opcode op);     // fadd fsub fmul fdiv frem
bool is_conversion(Opcode op);   // fptrunc .. uitofp
bool accepts_fast_math(Opcode op);
unsigned arity(Opcode op);

/// Constant functions, evaluated symbolically like the matching conversion.
enum class ConstFn { fptosi, sitofp, fpext, fptrunc };

std::string_view to_string(ConstFn fn);
std::optional<ConstFn> parse_const_fn(std::string_view s);
Opcode conversion_of(ConstFn fn);

/// Fast-math flag set. Printed in the order nnan ninf nsz.
struct FastMath {
  bool nnan = false;
  bool ninf = false;
  bool nsz = false;

  bool empty() const { return !nnan && !ninf && !nsz; }
  std::string to_string() const;
  friend bool operator==(const FastMath &, const FastMath &) = default;
};

enum class Side { Source, Target, Precondition };

enum class NodeKind { Input, Literal, ConstSymbol, Undef, Instr, ConstExpr };

/// One value of a template DAG.
///
/// Inputs and constant symbols are shared across both templates; literal and
/// `undef` occurrences each get their own node. Registers are bindings onto
/// nodes (see `Binding`), so a copy `%b = %a` aliases `%a`'s node.
struct ExprNode {
  NodeKind kind = NodeKind::Input;
  /// Input register (`%x`), constant (`C1`) or literal token (`-0.0`).
  std::string name;
  Side side = Side::Source;

  Opcode op = Opcode::fadd; // Instr
  ConstFn fn = ConstFn::fptosi; // ConstExpr
  FastMath flags;
  /// Concrete code name or a symbolic code (`C1`); fcmp only.
  std::string cond;
  /// Result type annotation.
  std::optional<Type> type;
  /// Operand type annotation (fcmp and conversions, LLVM style).
  std::optional<Type> operand_type;
  std::vector<NodeId> operands;

  friend bool operator==(const ExprNode &, const ExprNode &) = default;
};

struct Binding {
  std::string reg;
  NodeId node = 0;
  friend bool operator==(const Binding &, const Binding &) = default;
};

/// Precondition tree. An empty conjunction is the trivially true predicate.
struct PredExpr {
  enum class Kind { And, Call, Equal };
  struct Arg {
    /// Either a value node or, for condition-code predicates, a code name.
    std::optional<NodeId> node;
    std::string code;
    friend bool operator==(const Arg &, const Arg &) = default;
  };

  Kind kind = Kind::And;
  std::string name; // Call
  std::vector<Arg> args; // Call; Equal uses exactly two value args
  std::vector<PredExpr> children; // And

  bool is_true() const { return kind == Kind::And && children.empty(); }
  friend bool operator==(const PredExpr &, const PredExpr &) = default;
};

struct Transform {
  std::string name;
  PredExpr pre;
  std::vector<ExprNode> nodes;
  std::vector<Binding> source;
  std::vector<Binding> target;
  std::string root;

  const ExprNode &node(NodeId id) const { return nodes[id]; }
  NodeId source_root() const { return source.back().node; }
  NodeId target_root() const { return target.back().node; }

  /// Symbolic condition-code names, in order of first appearance.
  std::vector<std::string> symbolic_codes() const;

  friend bool operator==(const Transform &, const Transform &) = default;
};

} // namespace fpv
