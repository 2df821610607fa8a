#include "fpv/oracle.hpp"

#include "fpv/fpsem.hpp"
#include "fpv/precond.hpp"

#include <algorithm>

namespace fpv {

Interpreter::Interpreter(const Transform &t, const TypeAssignment &ta,
                         const CcAssignment &cca)
    : t_(t), ta_(ta), cca_(cca) {
  for (NodeId id = 0; id < t.nodes.size(); ++id) {
    auto k = t.node(id).kind;
    if (k == NodeKind::Input || k == NodeKind::ConstSymbol)
      values_.push_back(id);
  }
  nsz_ = t.node(t.source_root()).flags.nsz || t.node(t.target_root()).flags.nsz;
}

std::vector<uint64_t> Interpreter::domain(const Type &ty, uint64_t limit) {
  std::vector<uint64_t> out;
  if (ty.is_fp()) {
    if (ty.fmt.width() > 24)
      throw BudgetExceeded("domain of " + ty.to_string() + " is too large");
    for (auto &v : all_values(ty.fmt))
      out.push_back(v.bits());
  } else {
    if (ty.int_width > 24 || (uint64_t{1} << ty.int_width) > limit)
      throw BudgetExceeded("domain of " + ty.to_string() + " is too large");
    for (uint64_t v = 0; v < (uint64_t{1} << ty.int_width); ++v)
      out.push_back(v);
  }
  if (out.size() > limit)
    throw BudgetExceeded("domain of " + ty.to_string() + " is too large");
  return out;
}

/// One bottom-up evaluation under a fixed assignment.
class Evaluation {
public:
  Evaluation(const Interpreter &in, const Assignment &env)
      : in_(in), env_(env), memo_(in.t_.nodes.size()) {}

  uint64_t value(NodeId id) {
    if (!memo_[id])
      memo_[id] = compute(id);
    return *memo_[id];
  }

  bool pred(const PredExpr &p) {
    switch (p.kind) {
    case PredExpr::Kind::And:
      return std::all_of(p.children.begin(), p.children.end(),
                         [&](const PredExpr &c) { return pred(c); });
    case PredExpr::Kind::Equal:
      return value(*p.args[0].node) == value(*p.args[1].node);
    case PredExpr::Kind::Call:
      break;
    }
    if (p.name == "isNormal")
      return fp(*p.args[0].node).is_normal();
    if (p.name == "AnyZero")
      return fp(*p.args[0].node).is_zero();
    if (p.name == "WillNotOverflowSignedAdd") {
      NodeId a = *p.args[0].node, b = *p.args[1].node;
      unsigned w = in_.type_of(a).int_width;
      BigInt sum = int_value(value(a), w, true) + int_value(value(b), w, true);
      return sum >= -(BigInt(1) << (w - 1)) && sum < (BigInt(1) << (w - 1));
    }
    // Usage hints and condition-code filters.
    return true;
  }

private:
  MiniFloat fp(NodeId id) { return {in_.type_of(id).fmt, value(id)}; }

  uint64_t choice(NodeId id) {
    if (!env_[id])
      throw NeedChoice{id};
    return *env_[id];
  }

  uint64_t convert(Opcode op, NodeId self, NodeId arg) {
    const Type &dst = in_.type_of(self);
    const Type &src = in_.type_of(arg);
    switch (op) {
    case Opcode::fpext:
    case Opcode::fptrunc:
      return mf_convert(fp(arg), dst.fmt).bits();
    case Opcode::fptosi:
    case Opcode::fptoui: {
      auto r = mf_to_int(fp(arg), dst.int_width, op == Opcode::fptosi);
      return r ? *r : choice(self);
    }
    case Opcode::sitofp:
    case Opcode::uitofp: {
      auto r = mf_from_int(value(arg), src.int_width, op == Opcode::sitofp,
                           dst.fmt);
      return r ? r->bits() : choice(self);
    }
    default:
      return 0;
    }
  }

  uint64_t compute(NodeId id) {
    const ExprNode &n = in_.t_.node(id);
    switch (n.kind) {
    case NodeKind::Input:
    case NodeKind::ConstSymbol:
      if (!env_[id])
        throw MissingBinding("no value for " + n.name);
      return *env_[id];
    case NodeKind::Literal:
      return literal_bits(n.name, in_.type_of(id));
    case NodeKind::Undef:
      return choice(id);
    case NodeKind::ConstExpr:
      return convert(conversion_of(n.fn), id, n.operands[0]);
    case NodeKind::Instr:
      break;
    }
    const auto &ops = n.operands;
    switch (n.op) {
    case Opcode::select:
      return value(ops[0]) & 1 ? value(ops[1]) : value(ops[2]);
    case Opcode::add:
    case Opcode::sub: {
      uint64_t a = value(ops[0]), b = value(ops[1]);
      return (n.op == Opcode::add ? a + b : a - b) &
             width_mask(in_.type_of(id).int_width);
    }
    case Opcode::fabs:
      return mf_abs(fp(ops[0])).bits();
    case Opcode::fcmp: {
      MiniFloat a = fp(ops[0]), b = fp(ops[1]);
      bool r = mf_cmp(resolve_cond(n, in_.cca_), a, b);
      if (violates(n.flags, {a, b}))
        return choice(id);
      return r ? 1 : 0;
    }
    default:
      break;
    }
    if (is_conversion(n.op))
      return convert(n.op, id, ops[0]);

    MiniFloat a = fp(ops[0]), b = fp(ops[1]);
    MiniFloat r = a;
    switch (n.op) {
    case Opcode::fadd: r = mf_add(a, b); break;
    case Opcode::fsub: r = mf_sub(a, b); break;
    case Opcode::fmul: r = mf_mul(a, b); break;
    case Opcode::fdiv: r = mf_div(a, b); break;
    case Opcode::frem: r = mf_rem(a, b); break;
    default: break;
    }
    if (violates(n.flags, {a, b, r}))
      return choice(id);
    return r.bits();
  }

  static bool violates(const FastMath &f, std::initializer_list<MiniFloat> xs) {
    for (auto &x : xs)
      if ((f.nnan && x.is_nan()) || (f.ninf && x.is_inf()))
        return true;
    return false;
  }

  const Interpreter &in_;
  const Assignment &env_;
  std::vector<std::optional<uint64_t>> memo_;
};

uint64_t Interpreter::eval(NodeId id, const Assignment &env) const {
  return Evaluation(*this, env).value(id);
}

bool Interpreter::precondition(const Assignment &env) const {
  return Evaluation(*this, env).pred(t_.pre);
}

bool Interpreter::counterexample(const Assignment &env) const {
  Evaluation ev(*this, env);
  if (!ev.pred(t_.pre))
    return false;
  NodeId s = t_.source_root(), g = t_.target_root();
  uint64_t src = ev.value(s), tgt = ev.value(g);
  if (src == tgt)
    return false;
  const Type &ty = ta_.of(s);
  if (nsz_ && ty.is_fp() && MiniFloat(ty.fmt, src).is_zero() &&
      MiniFloat(ty.fmt, tgt).is_zero())
    return false;
  return true;
}

namespace {

struct NeedFree {
  NodeId node;
};

/// Shared search for brute force and replay.
class Search {
public:
  Search(const Interpreter &in, uint64_t budget) : in_(in), budget_(budget) {}

  uint64_t evaluations() const { return evals_; }

  /// forall source choices not yet in `env` . counterexample(env).
  /// Throws `NeedFree` when a free choice is missing.
  bool holds(Assignment &env) {
    if (++evals_ > budget_)
      throw BudgetExceeded("oracle budget of " + std::to_string(budget_) +
                           " evaluations exceeded");
    try {
      return in_.counterexample(env);
    } catch (const NeedChoice &c) {
      if (!in_.universal(c.node))
        throw NeedFree{c.node};
      for (uint64_t v : domain(c.node)) {
        env[c.node] = v;
        if (!holds(env)) {
          env[c.node].reset();
          return false;
        }
      }
      env[c.node].reset();
      return true;
    }
  }

  /// exists choices for the free fresh variables not fixed by `env` such
  /// that `holds`. On success `env` keeps the choices.
  bool exists(Assignment &env) {
    Assignment base = env;
    std::vector<NodeId> free;
    for (;;) {
      try {
        if (odometer(env, free, 0))
          return true;
        env = base;
        return false;
      } catch (const NeedFree &f) {
        env = base;
        free.push_back(f.node);
      }
    }
  }

  const std::vector<uint64_t> &domain(NodeId id) {
    auto it = domains_.find(id);
    if (it == domains_.end())
      it = domains_.emplace(id, Interpreter::domain(in_.type_of(id), budget_))
               .first;
    return it->second;
  }

private:
  bool odometer(Assignment &env, const std::vector<NodeId> &free, size_t i) {
    if (i == free.size())
      return holds(env);
    for (uint64_t v : domain(free[i])) {
      env[free[i]] = v;
      if (odometer(env, free, i + 1))
        return true;
    }
    return false;
  }

  const Interpreter &in_;
  uint64_t budget_;
  uint64_t evals_ = 0;
  std::map<NodeId, std::vector<uint64_t>> domains_;
};

} // namespace

BruteForceResult brute_force_verify(const Transform &t,
                                    const TypeAssignment &ta,
                                    const CcAssignment &cca, uint64_t budget) {
  Interpreter in(t, ta, cca);
  Search search(in, budget);
  const auto &vals = in.value_nodes();

  uint64_t combos = 1;
  for (NodeId id : vals) {
    combos *= search.domain(id).size();
    if (combos > budget)
      throw BudgetExceeded("input space of " + t.name +
                           " exceeds the oracle budget");
  }

  BruteForceResult result;
  Assignment env(t.nodes.size());
  std::vector<size_t> idx(vals.size(), 0);
  for (;;) {
    for (size_t i = 0; i < vals.size(); ++i)
      env[vals[i]] = search.domain(vals[i])[idx[i]];
    if (search.exists(env)) {
      result.verdict = OracleVerdict::Invalid;
      result.witness = env;
      break;
    }
    size_t i = vals.size();
    while (i > 0 && ++idx[i - 1] == search.domain(vals[i - 1]).size())
      idx[--i] = 0;
    if (i == 0)
      break;
  }
  result.evaluations = search.evaluations();
  return result;
}

std::string_view to_string(ReplayStatus s) {
  switch (s) {
  case ReplayStatus::Confirmed: return "confirmed";
  case ReplayStatus::Refuted: return "refuted";
  case ReplayStatus::Unsupported: return "unsupported";
  }
  return "?";
}

ReplayResult replay(const Transform &t, const TypeAssignment &ta,
                    const CcAssignment &cca,
                    const std::map<NodeId, uint64_t> &model, uint64_t budget) {
  Interpreter in(t, ta, cca);
  Assignment env(t.nodes.size());
  for (auto &[id, bits] : model)
    if (id < env.size() && !in.universal(id))
      env[id] = bits;

  ReplayResult r;
  try {
    r.target = in.eval(t.target_root(), env);
  } catch (const NeedChoice &) {
  } catch (const MissingBinding &e) {
    r.note = e.what();
    return r;
  }
  try {
    r.source = in.eval(t.source_root(), env);
  } catch (const NeedChoice &) {
  }

  Search search(in, budget);
  try {
    bool ok = search.exists(env);
    r.status = ok ? ReplayStatus::Confirmed : ReplayStatus::Refuted;
    if (!ok)
      r.note = "the oracle finds source and target equal under this model";
  } catch (const BudgetExceeded &e) {
    r.status = ReplayStatus::Unsupported;
    r.note = e.what();
  }
  return r;
}

std::string format_value(uint64_t bits, const Type &ty) {
  if (ty.is_fp())
    return MiniFloat(ty.fmt, bits).to_string();
  if (ty.int_width == 1)
    return bits & 1 ? "1" : "0";
  return int_value(bits, ty.int_width, true).str();
}

std::string format_bits(uint64_t bits, const Type &ty) {
  if (ty.is_fp())
    return MiniFloat(ty.fmt, bits).bit_string();
  std::string s;
  for (unsigned i = ty.int_width; i-- > 0;)
    s += ((bits >> i) & 1) ? '1' : '0';
  return s;
}

} // namespace fpv
