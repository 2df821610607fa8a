#include "fpv/term.hpp"

#include <functional>
#include <stdexcept>
#include <unordered_set>

namespace fpv {

std::string Sort::to_smt() const {
  switch (kind) {
  case Kind::Bool:
    return "Bool";
  case Kind::BitVec:
    return "(_ BitVec " + std::to_string(width) + ")";
  case Kind::Float:
    return "(_ FloatingPoint " + std::to_string(ebits) + " " +
           std::to_string(sbits) + ")";
  }
  return "";
}

namespace term {

namespace {

Term make(TermOp op, Sort s, std::vector<Term> args,
          RoundingMode rm = RoundingMode::None) {
  auto n = std::make_shared<TermNode>();
  n->op = op;
  n->sort = s;
  n->rm = rm;
  n->args = std::move(args);
  return n;
}

void require(bool ok, const char *what) {
  if (!ok)
    throw std::logic_error(std::string("ill-sorted term: ") + what);
}

void same_fp(const Term &a, const Term &b, const char *what) {
  require(a->sort.is_fp() && a->sort == b->sort, what);
}

Term fp_binary(TermOp op, Term a, Term b, RoundingMode rm, const char *what) {
  same_fp(a, b, what);
  Sort s = a->sort;
  return make(op, s, {std::move(a), std::move(b)}, rm);
}

Term fp_pred(TermOp op, Term a, Term b, const char *what) {
  same_fp(a, b, what);
  return make(op, Sort::boolean(), {std::move(a), std::move(b)});
}

Term fp_class(TermOp op, Term a, const char *what) {
  require(a->sort.is_fp(), what);
  return make(op, Sort::boolean(), {std::move(a)});
}

} // namespace

Term var(const std::string &name, const Sort &s) {
  auto n = std::make_shared<TermNode>();
  n->op = TermOp::Var;
  n->sort = s;
  n->name = name;
  return n;
}

Term boolean(bool v) {
  auto n = std::make_shared<TermNode>();
  n->op = TermOp::BoolConst;
  n->bits = v;
  return n;
}

Term bv(uint64_t bits, unsigned width) {
  auto n = std::make_shared<TermNode>();
  n->op = TermOp::BVConst;
  n->sort = Sort::bv(width);
  n->bits = width >= 64 ? bits : bits & ((uint64_t{1} << width) - 1);
  return n;
}

Term fp(uint64_t bits, const FPFormat &f) { return fp(bits, Sort::fp(f)); }

Term fp(uint64_t bits, const Sort &s) {
  require(s.is_fp(), "fp literal");
  auto n = std::make_shared<TermNode>();
  n->op = TermOp::FPConst;
  n->sort = s;
  n->bits = bits;
  return n;
}

Term not_(Term a) {
  require(a->sort.is_bool(), "not");
  return make(TermOp::Not, Sort::boolean(), {std::move(a)});
}

Term and_(std::vector<Term> xs) {
  std::vector<Term> kept;
  for (auto &x : xs) {
    require(x->sort.is_bool(), "and");
    if (x->op == TermOp::BoolConst) {
      if (!x->bits)
        return boolean(false);
      continue;
    }
    kept.push_back(x);
  }
  if (kept.empty())
    return boolean(true);
  if (kept.size() == 1)
    return kept[0];
  return make(TermOp::And, Sort::boolean(), std::move(kept));
}

Term or_(std::vector<Term> xs) {
  std::vector<Term> kept;
  for (auto &x : xs) {
    require(x->sort.is_bool(), "or");
    if (x->op == TermOp::BoolConst) {
      if (x->bits)
        return boolean(true);
      continue;
    }
    kept.push_back(x);
  }
  if (kept.empty())
    return boolean(false);
  if (kept.size() == 1)
    return kept[0];
  return make(TermOp::Or, Sort::boolean(), std::move(kept));
}

Term xor_(Term a, Term b) {
  require(a->sort.is_bool() && b->sort.is_bool(), "xor");
  return make(TermOp::Xor, Sort::boolean(), {std::move(a), std::move(b)});
}

Term ite(Term c, Term t, Term e) {
  require(c->sort.is_bool() && t->sort == e->sort, "ite");
  Sort s = t->sort;
  return make(TermOp::Ite, s, {std::move(c), std::move(t), std::move(e)});
}

Term eq(Term a, Term b) {
  require(a->sort == b->sort, "=");
  return make(TermOp::Eq, Sort::boolean(), {std::move(a), std::move(b)});
}

Term fp_add(Term a, Term b) {
  return fp_binary(TermOp::FPAdd, a, b, RoundingMode::RNE, "fp.add");
}
Term fp_sub(Term a, Term b) {
  return fp_binary(TermOp::FPSub, a, b, RoundingMode::RNE, "fp.sub");
}
Term fp_mul(Term a, Term b) {
  return fp_binary(TermOp::FPMul, a, b, RoundingMode::RNE, "fp.mul");
}
Term fp_div(Term a, Term b) {
  return fp_binary(TermOp::FPDiv, a, b, RoundingMode::RNE, "fp.div");
}
Term fp_rem(Term a, Term b) {
  return fp_binary(TermOp::FPRem, a, b, RoundingMode::None, "fp.rem");
}

Term fp_abs(Term a) {
  require(a->sort.is_fp(), "fp.abs");
  Sort s = a->sort;
  return make(TermOp::FPAbs, s, {std::move(a)});
}

Term fp_neg(Term a) {
  require(a->sort.is_fp(), "fp.neg");
  Sort s = a->sort;
  return make(TermOp::FPNeg, s, {std::move(a)});
}

Term fp_eq(Term a, Term b) { return fp_pred(TermOp::FPEq, a, b, "fp.eq"); }
Term fp_lt(Term a, Term b) { return fp_pred(TermOp::FPLt, a, b, "fp.lt"); }
Term fp_leq(Term a, Term b) { return fp_pred(TermOp::FPLeq, a, b, "fp.leq"); }
Term fp_gt(Term a, Term b) { return fp_pred(TermOp::FPGt, a, b, "fp.gt"); }
Term fp_geq(Term a, Term b) { return fp_pred(TermOp::FPGeq, a, b, "fp.geq"); }

Term is_nan(Term a) { return fp_class(TermOp::FPIsNaN, a, "fp.isNaN"); }
Term is_inf(Term a) { return fp_class(TermOp::FPIsInf, a, "fp.isInfinite"); }
Term is_zero(Term a) { return fp_class(TermOp::FPIsZero, a, "fp.isZero"); }
Term is_negative(Term a) {
  return fp_class(TermOp::FPIsNeg, a, "fp.isNegative");
}
Term is_normal(Term a) { return fp_class(TermOp::FPIsNormal, a, "fp.isNormal"); }
Term is_subnormal(Term a) {
  return fp_class(TermOp::FPIsSubnormal, a, "fp.isSubnormal");
}

Term round_to_integral_rtz(Term a) {
  require(a->sort.is_fp(), "fp.roundToIntegral");
  Sort s = a->sort;
  return make(TermOp::FPRoundToIntegral, s, {std::move(a)}, RoundingMode::RTZ);
}

Term fp_to_fp(Term a, const FPFormat &dst) {
  require(a->sort.is_fp(), "to_fp");
  return make(TermOp::FPToFP, Sort::fp(dst), {std::move(a)}, RoundingMode::RNE);
}

Term sbv_to_fp(Term a, const FPFormat &dst) {
  require(a->sort.is_bv(), "to_fp (signed)");
  return make(TermOp::FPFromSBV, Sort::fp(dst), {std::move(a)},
              RoundingMode::RNE);
}

Term ubv_to_fp(Term a, const FPFormat &dst) {
  require(a->sort.is_bv(), "to_fp_unsigned");
  return make(TermOp::FPFromUBV, Sort::fp(dst), {std::move(a)},
              RoundingMode::RNE);
}

Term fp_to_sbv_rtz(Term a, unsigned width) {
  require(a->sort.is_fp(), "fp.to_sbv");
  return make(TermOp::FPToSBV, Sort::bv(width), {std::move(a)},
              RoundingMode::RTZ);
}

Term fp_to_ubv_rtz(Term a, unsigned width) {
  require(a->sort.is_fp(), "fp.to_ubv");
  return make(TermOp::FPToUBV, Sort::bv(width), {std::move(a)},
              RoundingMode::RTZ);
}

Term bv_add(Term a, Term b) {
  require(a->sort.is_bv() && a->sort == b->sort, "bvadd");
  Sort s = a->sort;
  return make(TermOp::BVAdd, s, {std::move(a), std::move(b)});
}

Term bv_sub(Term a, Term b) {
  require(a->sort.is_bv() && a->sort == b->sort, "bvsub");
  Sort s = a->sort;
  return make(TermOp::BVSub, s, {std::move(a), std::move(b)});
}

Term bv_slt(Term a, Term b) {
  require(a->sort.is_bv() && a->sort == b->sort, "bvslt");
  return make(TermOp::BVSLt, Sort::boolean(), {std::move(a), std::move(b)});
}

} // namespace term

std::vector<const TermNode *> post_order(const std::vector<Term> &roots) {
  std::vector<const TermNode *> out;
  std::unordered_set<const TermNode *> seen;
  // Iterative DFS: DAGs from wide transforms can be deep.
  struct Frame {
    const TermNode *node;
    size_t next;
  };
  std::vector<Frame> stack;
  for (auto &r : roots) {
    if (!seen.insert(r.get()).second)
      continue;
    stack.push_back({r.get(), 0});
    while (!stack.empty()) {
      Frame &f = stack.back();
      if (f.next < f.node->args.size()) {
        const TermNode *child = f.node->args[f.next++].get();
        if (seen.insert(child).second)
          stack.push_back({child, 0});
        continue;
      }
      out.push_back(f.node);
      stack.pop_back();
    }
  }
  return out;
}

} // namespace fpv
