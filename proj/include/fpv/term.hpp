#pragma once

#include "fpv/format.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace fpv {

struct Sort {
  enum class Kind { Bool, BitVec, Float };

  Kind kind = Kind::Bool;
  unsigned width = 0;        // BitVec
  unsigned ebits = 0, sbits = 0; // Float

  static Sort boolean() { return {}; }
  static Sort bv(unsigned w) { return {Kind::BitVec, w, 0, 0}; }
  static Sort fp(const FPFormat &f) { return {Kind::Float, 0, f.ebits, f.sbits}; }
  static Sort of(const Type &t) {
    return t.is_fp() ? fp(t.fmt) : bv(t.int_width);
  }

  bool is_bool() const { return kind == Kind::Bool; }
  bool is_bv() const { return kind == Kind::BitVec; }
  bool is_fp() const { return kind == Kind::Float; }
  unsigned bit_width() const { return is_fp() ? ebits + sbits : width; }
  FPFormat format() const { return {ebits, sbits, ""}; }

  /// SMT-LIB spelling: Bool, (_ BitVec 8), (_ FloatingPoint 5 11).
  std::string to_smt() const;

  friend bool operator==(const Sort &, const Sort &) = default;
};

enum class RoundingMode { None, RNE, RTZ };

enum class TermOp {
  Var, BoolConst, BVConst, FPConst,
  Not, And, Or, Xor, Ite, Eq,
  FPAdd, FPSub, FPMul, FPDiv, FPRem, FPAbs, FPNeg,
  FPEq, FPLt, FPLeq, FPGt, FPGeq,
  FPIsNaN, FPIsInf, FPIsZero, FPIsNeg, FPIsNormal, FPIsSubnormal,
  FPRoundToIntegral, FPToFP, FPFromSBV, FPFromUBV, FPToSBV, FPToUBV,
  BVAdd, BVSub, BVSLt,
};

struct TermNode;
using Term = std::shared_ptr<const TermNode>;

/// Immutable, sort-checked term. Sharing between parents is by pointer, and
/// emission preserves it.
struct TermNode {
  TermOp op = TermOp::Var;
  Sort sort;
  RoundingMode rm = RoundingMode::None;
  std::vector<Term> args;
  std::string name;  // Var
  uint64_t bits = 0; // BoolConst (0/1), BVConst, FPConst
};

namespace term {

Term var(const std::string &name, const Sort &s);
Term boolean(bool v);
Term bv(uint64_t bits, unsigned width);
Term fp(uint64_t bits, const FPFormat &f);
Term fp(uint64_t bits, const Sort &s);

Term not_(Term a);
Term and_(std::vector<Term> xs);
Term or_(std::vector<Term> xs);
Term xor_(Term a, Term b);
Term ite(Term c, Term t, Term e);
/// Structural equality; for FP this is the single-NaN identity, so it
/// distinguishes -0.0 from +0.0.
Term eq(Term a, Term b);

Term fp_add(Term a, Term b);
Term fp_sub(Term a, Term b);
Term fp_mul(Term a, Term b);
Term fp_div(Term a, Term b);
Term fp_rem(Term a, Term b); // IEEE remainder
Term fp_abs(Term a);
Term fp_neg(Term a);
Term fp_eq(Term a, Term b);
Term fp_lt(Term a, Term b);
Term fp_leq(Term a, Term b);
Term fp_gt(Term a, Term b);
Term fp_geq(Term a, Term b);
Term is_nan(Term a);
Term is_inf(Term a);
Term is_zero(Term a);
Term is_negative(Term a);
Term is_normal(Term a);
Term is_subnormal(Term a);
Term round_to_integral_rtz(Term a);
Term fp_to_fp(Term a, const FPFormat &dst);
Term sbv_to_fp(Term a, const FPFormat &dst);
Term ubv_to_fp(Term a, const FPFormat &dst);
Term fp_to_sbv_rtz(Term a, unsigned width);
Term fp_to_ubv_rtz(Term a, unsigned width);
Term bv_add(Term a, Term b);
Term bv_sub(Term a, Term b);
Term bv_slt(Term a, Term b);

} // namespace term

/// Distinct nodes reachable from `roots`, children before parents.
std::vector<const TermNode *> post_order(const std::vector<Term> &roots);

} // namespace fpv
