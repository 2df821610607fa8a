#include "fpv/precond.hpp"

#include "fpv/predicates.hpp"

#include <algorithm>

namespace fpv {

namespace {

void check_call(const PredExpr &p) {
  const PredicateInfo *info = find_predicate(p.name);
  if (!info)
    throw PrecondError("unknown predicate '" + p.name + "'");
  if (p.args.size() != info->arity)
    throw PrecondError("'" + p.name + "' takes " +
                       std::to_string(info->arity) + " argument(s), got " +
                       std::to_string(p.args.size()));
  bool wants_code = info->role == PredicateRole::CodeFilter;
  for (auto &a : p.args)
    if (wants_code == a.node.has_value())
      throw PrecondError("'" + p.name + "' expects " +
                         (wants_code ? "condition-code" : "value") +
                         " arguments");
}

void collect_code_preds(const PredExpr &p, std::vector<const PredExpr *> &out) {
  if (p.kind == PredExpr::Kind::And) {
    for (auto &c : p.children)
      collect_code_preds(c, out);
  } else if (p.kind == PredExpr::Kind::Call) {
    check_call(p);
    if (find_predicate(p.name)->role == PredicateRole::CodeFilter)
      out.push_back(&p);
  }
}

bool admits(const PredExpr &p, const CcAssignment &cca) {
  auto code = [&](size_t i) {
    auto it = cca.find(p.args[i].code);
    if (it == cca.end())
      throw PrecondError("'" + p.args[i].code +
                         "' is not a condition code of this transform");
    return it->second;
  };
  if (p.name == "ordered")
    return is_ordered(code(0));
  if (p.name == "unordered")
    return !is_ordered(code(0));
  return swapped(code(0)) == code(1);
}

Term no_signed_add_overflow(const Term &a, const Term &b) {
  unsigned w = a->sort.width;
  Term zero = term::bv(0, w);
  Term sa = term::bv_slt(a, zero), sb = term::bv_slt(b, zero);
  Term ss = term::bv_slt(term::bv_add(a, b), zero);
  return term::not_(
      term::and_({term::eq(sa, sb), term::not_(term::eq(ss, sa))}));
}

} // namespace

Term encode_predicate(const PredExpr &p,
                      const std::function<Term(NodeId)> &env) {
  switch (p.kind) {
  case PredExpr::Kind::And: {
    std::vector<Term> parts;
    for (auto &c : p.children)
      parts.push_back(encode_predicate(c, env));
    return term::and_(std::move(parts));
  }
  case PredExpr::Kind::Equal:
    if (p.args.size() != 2 || !p.args[0].node || !p.args[1].node)
      throw PrecondError("equality needs two value operands");
    return term::eq(env(*p.args[0].node), env(*p.args[1].node));
  case PredExpr::Kind::Call:
    break;
  }
  check_call(p);
  const PredicateInfo *info = find_predicate(p.name);
  if (info->role != PredicateRole::Encoded)
    return term::boolean(true);

  std::vector<Term> args;
  for (auto &a : p.args)
    args.push_back(env(*a.node));
  if (p.name == "isNormal" || p.name == "AnyZero") {
    if (!args[0]->sort.is_fp())
      throw PrecondError("'" + p.name + "' needs a floating-point argument");
    return p.name == "isNormal" ? term::is_normal(args[0])
                                : term::is_zero(args[0]);
  }
  if (!args[0]->sort.is_bv() || !(args[0]->sort == args[1]->sort))
    throw PrecondError("'" + p.name + "' needs two integers of one width");
  return no_signed_add_overflow(args[0], args[1]);
}

bool codes_admitted(const PredExpr &p, const CcAssignment &cca) {
  std::vector<const PredExpr *> preds;
  collect_code_preds(p, preds);
  return std::all_of(preds.begin(), preds.end(),
                     [&](const PredExpr *q) { return admits(*q, cca); });
}

std::vector<CcAssignment> enumerate_cc(const Transform &t) {
  std::vector<std::string> names = t.symbolic_codes();
  std::vector<const PredExpr *> preds;
  collect_code_preds(t.pre, preds);
  for (auto *q : preds)
    for (auto &a : q->args)
      if (std::find(names.begin(), names.end(), a.code) == names.end())
        throw PrecondError("'" + a.code +
                           "' is not a condition code of this transform");

  std::vector<CcAssignment> out;
  std::vector<size_t> idx(names.size(), 0);
  for (;;) {
    CcAssignment cca;
    for (size_t i = 0; i < names.size(); ++i)
      cca[names[i]] = all_cond_codes[idx[i]];
    if (std::all_of(preds.begin(), preds.end(),
                    [&](const PredExpr *q) { return admits(*q, cca); }))
      out.push_back(std::move(cca));
    size_t i = names.size();
    while (i > 0 && ++idx[i - 1] == all_cond_codes.size())
      idx[--i] = 0;
    if (i == 0)
      break;
  }
  return out;
}

CondCode resolve_cond(const ExprNode &n, const CcAssignment &cca) {
  if (auto cc = parse_cond_code(n.cond))
    return *cc;
  auto it = cca.find(n.cond);
  if (it == cca.end())
    throw std::invalid_argument("condition code '" + n.cond +
                                "' has no assignment");
  return it->second;
}

} // namespace fpv
