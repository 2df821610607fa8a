#include "fpv/fpsem.hpp"

#include "fpv/minifloat.hpp"
#include "fpv/precond.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace fpv {

namespace {

/// +-2^k in `f`, or the matching infinity when it does not fit.
Term power_of_two(const FPFormat &f, unsigned k, bool negative) {
  BigInt v = BigInt(1) << k;
  return term::fp(MiniFloat::from_integer(f, negative ? BigInt(-v) : v).bits(),
                  f);
}

Term bit(bool b) { return term::bv(b ? 1 : 0, 1); }

} // namespace

Term encode_binop(Opcode op, const Term &a, const Term &b) {
  switch (op) {
  case Opcode::fadd: return term::fp_add(a, b);
  case Opcode::fsub: return term::fp_sub(a, b);
  case Opcode::fmul: return term::fp_mul(a, b);
  case Opcode::fdiv: return term::fp_div(a, b);
  case Opcode::frem: return encode_frem(a, b);
  default:
    throw std::invalid_argument("not an FP binary operator: " +
                                std::string(to_string(op)));
  }
}

Term encode_frem(const Term &x, const Term &y) {
  Term abs_y = term::fp_abs(y);
  Term r = term::fp_rem(term::fp_abs(x), abs_y);
  Term shifted = term::ite(term::is_negative(r), term::fp_add(r, abs_y), r);
  return term::ite(
      term::xor_(term::is_negative(x), term::is_negative(shifted)),
      term::fp_neg(shifted), shifted);
}

Term encode_fcmp(CondCode cc, const Term &a, const Term &b) {
  Term na = term::is_nan(a), nb = term::is_nan(b);
  Term rel;
  switch (relation_of(cc)) {
  case Relation::Eq: rel = term::fp_eq(a, b); break;
  case Relation::Gt: rel = term::fp_gt(a, b); break;
  case Relation::Ge: rel = term::fp_geq(a, b); break;
  case Relation::Lt: rel = term::fp_lt(a, b); break;
  case Relation::Le: rel = term::fp_leq(a, b); break;
  case Relation::Ne: rel = term::not_(term::fp_eq(a, b)); break;
  case Relation::True: rel = term::boolean(true); break;
  }
  Term holds;
  if (cc == CondCode::ord)
    holds = term::and_({term::not_(na), term::not_(nb)});
  else if (cc == CondCode::uno)
    holds = term::or_({na, nb});
  else if (is_ordered(cc))
    holds = term::and_({term::not_(na), term::not_(nb), rel});
  else
    holds = term::or_({na, nb, rel});
  return term::ite(holds, bit(true), bit(false));
}

Term encode_conversion(Opcode op, const Term &a, const Type &dst,
                       const FreshFn &fresh) {
  switch (op) {
  case Opcode::fpext:
  case Opcode::fptrunc:
    return term::fp_to_fp(a, dst.fmt);
  case Opcode::fptosi:
  case Opcode::fptoui: {
    bool is_signed = op == Opcode::fptosi;
    unsigned w = dst.int_width;
    FPFormat f = a->sort.format();
    Term t = term::round_to_integral_rtz(a);
    Term below = is_signed ? term::fp_lt(t, power_of_two(f, w - 1, true))
                           : term::fp_lt(t, term::fp(0, f));
    Term above = term::fp_geq(t, power_of_two(f, is_signed ? w - 1 : w, false));
    Term bad = term::or_({term::is_nan(a), term::is_inf(a), below, above});
    Term conv = is_signed ? term::fp_to_sbv_rtz(a, w) : term::fp_to_ubv_rtz(a, w);
    return term::ite(bad, fresh(conv->sort), conv);
  }
  case Opcode::sitofp:
  case Opcode::uitofp: {
    Term r = op == Opcode::sitofp ? term::sbv_to_fp(a, dst.fmt)
                                  : term::ubv_to_fp(a, dst.fmt);
    return term::ite(term::is_inf(r), fresh(r->sort), r);
  }
  default:
    throw std::invalid_argument("not a conversion: " +
                                std::string(to_string(op)));
  }
}

Term encode_misc(Opcode op, const std::vector<Term> &xs) {
  switch (op) {
  case Opcode::fabs: return term::fp_abs(xs.at(0));
  case Opcode::select:
    return term::ite(term::eq(xs.at(0), bit(true)), xs.at(1), xs.at(2));
  case Opcode::add: return term::bv_add(xs.at(0), xs.at(1));
  case Opcode::sub: return term::bv_sub(xs.at(0), xs.at(1));
  default:
    throw std::invalid_argument("not a miscellaneous operator: " +
                                std::string(to_string(op)));
  }
}

Term apply_fastmath(const FastMath &flags, const std::vector<Term> &operands,
                    const Term &raw, const FreshFn &fresh) {
  if (!flags.nnan && !flags.ninf)
    return raw;
  std::vector<Term> checked = operands;
  if (raw->sort.is_fp())
    checked.push_back(raw);
  std::vector<Term> guards;
  for (auto &x : checked) {
    if (flags.nnan)
      guards.push_back(term::is_nan(x));
    if (flags.ninf)
      guards.push_back(term::is_inf(x));
  }
  return term::ite(term::or_(std::move(guards)), fresh(raw->sort), raw);
}

Term disagree(const Term &src, const Term &tgt, bool nsz) {
  Term differ = term::not_(term::eq(src, tgt));
  if (!nsz || !src->sort.is_fp())
    return differ;
  return term::and_(
      {differ, term::not_(term::and_({term::is_zero(src), term::is_zero(tgt)}))});
}

uint64_t literal_bits(const std::string &text, const Type &ty) {
  if (ty.is_fp()) {
    auto v = MiniFloat::from_decimal(ty.fmt, text);
    if (!v)
      throw std::invalid_argument("malformed floating-point literal '" + text +
                                  "'");
    return v->bits();
  }
  BigInt v;
  try {
    v = BigInt(text);
  } catch (const std::exception &) {
    throw std::invalid_argument("malformed integer literal '" + text + "'");
  }
  BigInt m = BigInt(1) << ty.int_width;
  v %= m;
  if (v < 0)
    v += m;
  return static_cast<uint64_t>(v);
}

const QueryVar *QueryScript::find_var(const std::string &name) const {
  for (auto *vs : {&free_vars, &universal_vars})
    for (auto &v : *vs)
      if (v.name == name)
        return &v;
  return nullptr;
}

namespace {

class Encoder {
public:
  Encoder(const Transform &t, const TypeAssignment &ta, const CcAssignment &cca)
      : t_(t), ta_(ta), cca_(cca), terms_(t.nodes.size()) {
    for (auto *side : {&t.source, &t.target})
      for (auto &b : *side)
        regs_.emplace(b.node, b.reg);
  }

  QueryScript run() {
    QueryScript q;
    q.transform_name = t_.name;
    q.types = ta_;
    q.type_summary = describe(t_, ta_);
    q.codes = cca_;

    q.source = encode(t_.source_root());
    q.target = encode(t_.target_root());
    q.precondition =
        encode_predicate(t_.pre, [this](NodeId id) { return encode(id); });
    for (NodeId id = 0; id < t_.nodes.size(); ++id)
      encode(id);

    bool nsz = t_.node(t_.source_root()).flags.nsz ||
               t_.node(t_.target_root()).flags.nsz;
    q.disagreement = disagree(q.source, q.target, nsz);
    q.assertion = term::and_({q.precondition, q.disagreement});

    auto by_node = [](const QueryVar &a, const QueryVar &b) {
      return a.node < b.node;
    };
    std::stable_sort(values_.begin(), values_.end(), by_node);
    std::stable_sort(free_fresh_.begin(), free_fresh_.end(), by_node);
    std::stable_sort(universal_.begin(), universal_.end(), by_node);
    q.free_vars = values_;
    q.free_vars.insert(q.free_vars.end(), free_fresh_.begin(),
                       free_fresh_.end());
    q.universal_vars = universal_;
    q.node_terms = terms_;
    return q;
  }

private:
  Sort sort_of(NodeId id) const { return Sort::of(ta_.of(id)); }

  FreshFn fresh_for(NodeId id) {
    return [this, id](const Sort &s) {
      const ExprNode &n = t_.node(id);
      const char *prefix = n.side == Side::Source   ? "src"
                           : n.side == Side::Target ? "tgt"
                                                    : "pre";
      std::string label;
      if (auto it = regs_.find(id); it != regs_.end())
        label = it->second;
      else
        label = n.kind == NodeKind::Undef ? "undef" : "cexpr";
      QueryVar v{std::string(prefix) + "!" + label + "!" + std::to_string(id),
                 s, VarRole::Fresh, id, n.side};
      Term x = term::var(v.name, s);
      (n.side == Side::Source ? universal_ : free_fresh_).push_back(v);
      return x;
    };
  }

  Term encode(NodeId id) {
    if (terms_[id])
      return terms_[id];
    const ExprNode &n = t_.node(id);
    Term r;
    switch (n.kind) {
    case NodeKind::Input:
    case NodeKind::ConstSymbol: {
      QueryVar v{n.name, sort_of(id),
                 n.kind == NodeKind::Input ? VarRole::Input : VarRole::Constant,
                 id, n.side};
      values_.push_back(v);
      r = term::var(v.name, v.sort);
      break;
    }
    case NodeKind::Literal: {
      const Type &ty = ta_.of(id);
      uint64_t bits = literal_bits(n.name, ty);
      r = ty.is_fp() ? term::fp(bits, ty.fmt) : term::bv(bits, ty.int_width);
      break;
    }
    case NodeKind::Undef:
      r = fresh_for(id)(sort_of(id));
      break;
    case NodeKind::ConstExpr:
      r = encode_conversion(conversion_of(n.fn), encode(n.operands[0]),
                            ta_.of(id), fresh_for(id));
      break;
    case NodeKind::Instr:
      r = encode_instr(id, n);
      break;
    }
    terms_[id] = r;
    return r;
  }

  Term encode_instr(NodeId id, const ExprNode &n) {
    std::vector<Term> ops;
    for (NodeId o : n.operands)
      ops.push_back(encode(o));
    Term raw;
    if (is_fp_binop(n.op))
      raw = encode_binop(n.op, ops[0], ops[1]);
    else if (n.op == Opcode::fcmp)
      raw = encode_fcmp(resolve_cond(n, cca_), ops[0], ops[1]);
    else if (is_conversion(n.op))
      return encode_conversion(n.op, ops[0], ta_.of(id), fresh_for(id));
    else
      raw = encode_misc(n.op, ops);
    if (!accepts_fast_math(n.op))
      return raw;
    return apply_fastmath(n.flags, ops, raw, fresh_for(id));
  }

  const Transform &t_;
  const TypeAssignment &ta_;
  const CcAssignment &cca_;
  std::vector<Term> terms_;
  std::map<NodeId, std::string> regs_;
  std::vector<QueryVar> values_, free_fresh_, universal_;
};

} // namespace

QueryScript build_query(const Transform &t, const TypeAssignment &ta,
                        const CcAssignment &cca) {
  return Encoder(t, ta, cca).run();
}

} // namespace fpv
