#pragma once

#include "fpv/condcode.hpp"
#include "fpv/term.hpp"
#include "fpv/transform.hpp"
#include "fpv/typer.hpp"

#include <functional>
#include <string>
#include <vector>

namespace fpv {

/// Supplies a fresh unconstrained variable of the given sort.
using FreshFn = std::function<Term(const Sort &)>;

/// fadd, fsub, fmul, fdiv under RNE.
Term encode_binop(Opcode op, const Term &a, const Term &b);

/// C fmod: IEEE remainder of the magnitudes, moved into [0, |y|) and given
/// the sign of x.
Term encode_frem(const Term &x, const Term &y);

/// 1-bit result.
Term encode_fcmp(CondCode cc, const Term &a, const Term &b);

/// fp->int truncates toward zero; NaN, infinities and out-of-range values
/// produce `fresh`. int->fp rounds RNE and produces `fresh` on overflow.
Term encode_conversion(Opcode op, const Term &a, const Type &dst,
                       const FreshFn &fresh);

/// fabs, select, add, sub.
Term encode_misc(Opcode op, const std::vector<Term> &operands);

/// nnan/ninf: the result becomes a fresh value whenever an operand (or an FP
/// result) is NaN, respectively infinite. One fresh variable serves both
/// flags. nsz is ignored here.
Term apply_fastmath(const FastMath &flags, const std::vector<Term> &operands,
                    const Term &raw, const FreshFn &fresh);

enum class VarRole { Input, Constant, Fresh };

struct QueryVar {
  std::string name;
  Sort sort;
  VarRole role = VarRole::Input;
  NodeId node = 0;
  Side side = Side::Source;
};

/// One verification instance. The instance is incorrect iff
/// `exists free_vars . forall universal_vars . assertion` holds.
struct QueryScript {
  std::string transform_name;
  TypeAssignment types;
  std::string type_summary;
  CcAssignment codes;

  /// Inputs and constants (node order), then free fresh variables.
  std::vector<QueryVar> free_vars;
  /// Fresh variables introduced by the source template.
  std::vector<QueryVar> universal_vars;

  Term precondition;
  Term source;
  Term target;
  Term disagreement;
  Term assertion; // precondition /\ disagreement, unquantified

  /// One term per ExprNode.
  std::vector<Term> node_terms;

  bool quantified() const { return !universal_vars.empty(); }
  const QueryVar *find_var(const std::string &name) const;
};

/// Throws `std::invalid_argument` on an unresolved condition code or a
/// malformed literal.
QueryScript build_query(const Transform &t, const TypeAssignment &ta,
                        const CcAssignment &cca);

/// Bit-precise difference, relaxed to ignore zero signs when `nsz`.
Term disagree(const Term &src, const Term &tgt, bool nsz);

/// Value of a literal token at `ty`, as a bit pattern.
uint64_t literal_bits(const std::string &text, const Type &ty);

} // namespace fpv
