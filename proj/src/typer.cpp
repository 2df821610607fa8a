#include "fpv/typer.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

namespace fpv {

namespace {

using Kind = TypeClass::Kind;

const char *kind_name(Kind k) {
  switch (k) {
  case Kind::Any: return "any";
  case Kind::Float: return "floating-point";
  case Kind::Int: return "integer";
  case Kind::Bool: return "i1";
  }
  return "?";
}

class ConstraintBuilder {
public:
  explicit ConstraintBuilder(const Transform &t)
      : t_(t), parent_(t.nodes.size()), kind_(t.nodes.size(), Kind::Any),
        pin_(t.nodes.size()) {
    std::iota(parent_.begin(), parent_.end(), 0);
    for (auto *side : {&t.source, &t.target})
      for (auto &b : *side)
        names_.emplace(b.node, b.reg);
  }

  TypeConstraints build() {
    for (NodeId id = 0; id < t_.nodes.size(); ++id)
      visit(id);
    unify(t_.source_root(), t_.target_root());
    pred(t_.pre);

    TypeConstraints c;
    c.class_of.resize(t_.nodes.size());
    std::map<size_t, size_t> index;
    for (NodeId id = 0; id < t_.nodes.size(); ++id) {
      size_t r = find(id);
      auto [it, fresh] = index.emplace(r, c.classes.size());
      if (fresh) {
        TypeClass tc;
        tc.kind = kind_[r];
        tc.pinned = pin_[r];
        c.classes.push_back(tc);
      }
      c.class_of[id] = it->second;
      c.classes[it->second].members.push_back(id);
    }
    for (auto [n, w] : orderings_) {
      Ordering o{c.class_of[n], c.class_of[w]};
      if (o.narrow == o.wide)
        throw TypeError(label(w) + " must be strictly wider than " + label(n) +
                        " but both share one type");
      auto &pn = c.classes[o.narrow].pinned, &pw = c.classes[o.wide].pinned;
      if (pn && pw && pn->fmt.width() >= pw->fmt.width())
        throw TypeError(label(w) + " (" + pw->to_string() +
                        ") is not wider than " + label(n) + " (" +
                        pn->to_string() + ")");
      c.orderings.push_back(o);
    }
    return c;
  }

private:
  std::string label(NodeId id) const {
    const ExprNode &n = t_.node(id);
    if (n.kind == NodeKind::Input || n.kind == NodeKind::ConstSymbol ||
        n.kind == NodeKind::Literal)
      return "'" + n.name + "'";
    if (auto it = names_.find(id); it != names_.end())
      return "'" + it->second + "'";
    return n.kind == NodeKind::Undef ? "'undef'" : "constant expression";
  }

  size_t find(size_t x) {
    while (parent_[x] != x)
      x = parent_[x] = parent_[parent_[x]];
    return x;
  }

  static Kind merge_kinds(Kind a, Kind b, bool &ok) {
    ok = true;
    if (a == b || b == Kind::Any)
      return a;
    if (a == Kind::Any)
      return b;
    if ((a == Kind::Int && b == Kind::Bool) ||
        (a == Kind::Bool && b == Kind::Int))
      return Kind::Bool;
    ok = false;
    return a;
  }

  void require(NodeId id, Kind k) {
    size_t r = find(id);
    bool ok;
    Kind m = merge_kinds(kind_[r], k, ok);
    if (!ok)
      throw TypeError(label(id) + " must be both " + kind_name(kind_[r]) +
                      " and " + kind_name(k));
    kind_[r] = m;
    check_pin(r, id);
  }

  void pin(NodeId id, const Type &ty) {
    size_t r = find(id);
    if (pin_[r] && !(*pin_[r] == ty))
      throw TypeError(label(id) + " is annotated both " +
                      pin_[r]->to_string() + " and " + ty.to_string());
    pin_[r] = ty;
    require(id, ty.is_fp() ? Kind::Float
                           : (ty.int_width == 1 ? Kind::Bool : Kind::Int));
  }

  void check_pin(size_t r, NodeId id) {
    if (!pin_[r])
      return;
    const Type &ty = *pin_[r];
    bool ok = kind_[r] == Kind::Any || (ty.is_fp() && kind_[r] == Kind::Float) ||
              (ty.is_int() && kind_[r] == Kind::Int) ||
              (ty.is_int() && ty.int_width == 1 && kind_[r] == Kind::Bool);
    if (!ok)
      throw TypeError(label(id) + " is annotated " + ty.to_string() +
                      " but must be " + kind_name(kind_[r]));
  }

  void unify(NodeId a, NodeId b) {
    size_t ra = find(a), rb = find(b);
    if (ra == rb)
      return;
    bool ok;
    Kind m = merge_kinds(kind_[ra], kind_[rb], ok);
    if (!ok)
      throw TypeError(label(a) + " (" + kind_name(kind_[ra]) + ") and " +
                      label(b) + " (" + kind_name(kind_[rb]) +
                      ") must have the same type");
    if (pin_[ra] && pin_[rb] && !(*pin_[ra] == *pin_[rb]))
      throw TypeError(label(a) + " is annotated " + pin_[ra]->to_string() +
                      " but " + label(b) + " is annotated " +
                      pin_[rb]->to_string());
    parent_[rb] = ra;
    kind_[ra] = m;
    if (!pin_[ra])
      pin_[ra] = pin_[rb];
    check_pin(ra, a);
  }

  void conversion(NodeId id, Opcode op, NodeId arg) {
    switch (op) {
    case Opcode::fptrunc:
      require(id, Kind::Float);
      require(arg, Kind::Float);
      orderings_.push_back({id, arg});
      break;
    case Opcode::fpext:
      require(id, Kind::Float);
      require(arg, Kind::Float);
      orderings_.push_back({arg, id});
      break;
    case Opcode::fptosi:
    case Opcode::fptoui:
      require(id, Kind::Int);
      require(arg, Kind::Float);
      break;
    case Opcode::sitofp:
    case Opcode::uitofp:
      require(id, Kind::Float);
      require(arg, Kind::Int);
      break;
    default:
      break;
    }
  }

  void visit(NodeId id) {
    const ExprNode &n = t_.node(id);
    switch (n.kind) {
    case NodeKind::Input:
    case NodeKind::ConstSymbol:
    case NodeKind::Undef:
      return;
    case NodeKind::Literal: {
      bool integer = n.name.find_first_of(".eEni") == std::string::npos;
      require(id, integer ? Kind::Int : Kind::Float);
      return;
    }
    case NodeKind::ConstExpr:
      conversion(id, conversion_of(n.fn), n.operands[0]);
      return;
    case NodeKind::Instr:
      break;
    }
    const auto &ops = n.operands;
    switch (n.op) {
    case Opcode::fadd:
    case Opcode::fsub:
    case Opcode::fmul:
    case Opcode::fdiv:
    case Opcode::frem:
    case Opcode::fabs:
      require(id, Kind::Float);
      for (NodeId o : ops)
        unify(id, o);
      break;
    case Opcode::add:
    case Opcode::sub:
      require(id, Kind::Int);
      for (NodeId o : ops)
        unify(id, o);
      break;
    case Opcode::fcmp:
      require(id, Kind::Bool);
      require(ops[0], Kind::Float);
      unify(ops[0], ops[1]);
      break;
    case Opcode::select:
      require(ops[0], Kind::Bool);
      unify(id, ops[1]);
      unify(id, ops[2]);
      break;
    default:
      conversion(id, n.op, ops[0]);
      break;
    }
    if (n.type)
      pin(id, *n.type);
    if (n.operand_type)
      pin(ops[0], *n.operand_type);
  }

  void pred(const PredExpr &p) {
    switch (p.kind) {
    case PredExpr::Kind::And:
      for (auto &c : p.children)
        pred(c);
      return;
    case PredExpr::Kind::Equal:
      unify(*p.args[0].node, *p.args[1].node);
      return;
    case PredExpr::Kind::Call:
      break;
    }
    if (p.name == "isNormal" || p.name == "AnyZero") {
      require(*p.args[0].node, Kind::Float);
    } else if (p.name == "WillNotOverflowSignedAdd") {
      require(*p.args[0].node, Kind::Int);
      unify(*p.args[0].node, *p.args[1].node);
    }
  }

  const Transform &t_;
  std::vector<size_t> parent_;
  std::vector<Kind> kind_;
  std::vector<std::optional<Type>> pin_;
  std::vector<std::pair<NodeId, NodeId>> orderings_; // (narrow, wide)
  std::map<NodeId, std::string> names_;
};

int group_rank(Kind k) {
  switch (k) {
  case Kind::Float: return 0;
  case Kind::Any: return 1;
  case Kind::Int: return 2;
  case Kind::Bool: return 3;
  }
  return 4;
}

} // namespace

TypeConstraints gen_constraints(const Transform &t) {
  return ConstraintBuilder(t).build();
}

std::vector<TypeAssignment> enumerate_assignments(const TypeConstraints &c,
                                                  const WidthConfig &cfg_in) {
  WidthConfig cfg = cfg_in;
  cfg.normalize();

  std::vector<Type> fps, ints;
  for (auto &f : cfg.fp_formats)
    fps.push_back(Type::fp(f));
  for (auto w : cfg.int_widths)
    ints.push_back(Type::integer(w));

  std::vector<std::vector<Type>> domains(c.classes.size());
  for (size_t i = 0; i < c.classes.size(); ++i) {
    const TypeClass &tc = c.classes[i];
    std::vector<Type> all;
    switch (tc.kind) {
    case Kind::Bool: all = {Type::integer(1)}; break;
    case Kind::Float: all = fps; break;
    case Kind::Int: all = ints; break;
    case Kind::Any:
      all = fps;
      all.insert(all.end(), ints.begin(), ints.end());
      break;
    }
    if (tc.pinned) {
      bool allowed = tc.kind == Kind::Bool ||
                     std::find(all.begin(), all.end(), *tc.pinned) != all.end();
      all.clear();
      if (allowed)
        all.push_back(*tc.pinned);
    }
    domains[i] = std::move(all);
  }

  std::vector<size_t> order(c.classes.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return group_rank(c.classes[a].kind) < group_rank(c.classes[b].kind);
  });

  std::vector<TypeAssignment> out;
  std::vector<Type> chosen(c.classes.size());
  std::function<void(size_t)> rec = [&](size_t depth) {
    if (depth == order.size()) {
      for (auto &o : c.orderings)
        if (chosen[o.narrow].fmt.width() >= chosen[o.wide].fmt.width())
          return;
      TypeAssignment ta;
      ta.node_types.reserve(c.class_of.size());
      for (size_t cls : c.class_of)
        ta.node_types.push_back(chosen[cls]);
      out.push_back(std::move(ta));
      return;
    }
    size_t cls = order[depth];
    for (auto &ty : domains[cls]) {
      chosen[cls] = ty;
      rec(depth + 1);
    }
  };
  rec(0);
  return out;
}

std::vector<std::pair<std::string, std::string>>
named_types(const Transform &t, const TypeAssignment &ta) {
  std::vector<std::pair<std::string, std::string>> out;
  std::map<NodeId, std::string> regs;
  for (auto *side : {&t.source, &t.target})
    for (auto &b : *side)
      regs.emplace(b.node, b.reg);
  for (NodeId id = 0; id < t.nodes.size(); ++id) {
    const ExprNode &n = t.node(id);
    std::string name;
    if (n.kind == NodeKind::Input || n.kind == NodeKind::ConstSymbol)
      name = n.name;
    else if (auto it = regs.find(id); it != regs.end())
      name = it->second;
    else
      continue;
    bool dup = std::any_of(out.begin(), out.end(),
                           [&](auto &p) { return p.first == name; });
    if (!dup)
      out.emplace_back(name, ta.of(id).to_string());
  }
  return out;
}

std::string describe(const Transform &t, const TypeAssignment &ta) {
  std::string s;
  for (auto &[name, ty] : named_types(t, ta))
    s += (s.empty() ? "" : " ") + name + ":" + ty;
  return s;
}

} // namespace fpv
