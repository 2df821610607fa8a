#include "fpv/parser.hpp"
#include "fpv/typer.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace fpv {
namespace {

Transform one(const std::string &text) {
  auto ts = parse_corpus(text);
  EXPECT_EQ(ts.size(), 1u);
  return ts.at(0);
}

WidthConfig widths(std::vector<FPFormat> fp, std::vector<unsigned> ints) {
  WidthConfig w;
  w.fp_formats = std::move(fp);
  w.int_widths = std::move(ints);
  return w;
}

/// Instruction signatures checked directly on a per-node type vector.
bool well_typed(const Transform &t, const std::vector<Type> &ty) {
  auto is_bool = [](const Type &x) { return x.is_int() && x.int_width == 1; };
  for (NodeId id = 0; id < t.nodes.size(); ++id) {
    const ExprNode &n = t.nodes[id];
    const Type &r = ty[id];
    if (n.type && !(*n.type == r))
      return false;
    if (n.kind != NodeKind::Instr)
      continue;
    auto op = [&](size_t i) -> const Type & { return ty[n.operands[i]]; };
    if (n.operand_type)
      for (size_t i = 0; i < n.operands.size(); ++i)
        if (n.op != Opcode::select && !(op(i) == *n.operand_type))
          return false;
    switch (n.op) {
    case Opcode::fadd:
    case Opcode::fsub:
    case Opcode::fmul:
    case Opcode::fdiv:
    case Opcode::frem:
      if (!r.is_fp() || !(op(0) == r) || !(op(1) == r))
        return false;
      break;
    case Opcode::fabs:
      if (!r.is_fp() || !(op(0) == r))
        return false;
      break;
    case Opcode::fcmp:
      if (!is_bool(r) || !op(0).is_fp() || !(op(0) == op(1)))
        return false;
      break;
    case Opcode::select:
      if (!is_bool(op(0)) || !(op(1) == r) || !(op(2) == r))
        return false;
      break;
    case Opcode::fptrunc:
    case Opcode::fpext:
      if (!r.is_fp() || !op(0).is_fp())
        return false;
      if (n.op == Opcode::fptrunc ? r.fmt.width() >= op(0).fmt.width()
                                  : r.fmt.width() <= op(0).fmt.width())
        return false;
      break;
    case Opcode::fptosi:
    case Opcode::fptoui:
      if (!r.is_int() || !op(0).is_fp())
        return false;
      break;
    case Opcode::sitofp:
    case Opcode::uitofp:
      if (!r.is_fp() || !op(0).is_int())
        return false;
      break;
    case Opcode::add:
    case Opcode::sub:
      if (!r.is_int() || !(op(0) == r) || !(op(1) == r))
        return false;
      break;
    }
  }
  if (!(ty[t.source_root()] == ty[t.target_root()]))
    return false;
  // Precondition argument kinds.
  std::vector<const PredExpr *> stack{&t.pre};
  while (!stack.empty()) {
    const PredExpr *p = stack.back();
    stack.pop_back();
    for (auto &c : p->children)
      stack.push_back(&c);
    if (p->kind != PredExpr::Kind::Call)
      continue;
    if (p->name == "isNormal" || p->name == "AnyZero") {
      if (!ty[*p->args[0].node].is_fp())
        return false;
    } else if (p->name == "WillNotOverflowSignedAdd") {
      const Type &a = ty[*p->args[0].node], &b = ty[*p->args[1].node];
      if (!a.is_int() || !(a == b))
        return false;
    }
  }
  return true;
}

/// Every per-node type vector over `domain` that passes `well_typed`.
std::set<std::vector<std::string>> brute_force(const Transform &t,
                                               const std::vector<Type> &domain) {
  std::set<std::vector<std::string>> out;
  std::vector<size_t> idx(t.nodes.size(), 0);
  std::vector<Type> ty(t.nodes.size(), domain[0]);
  for (;;) {
    for (size_t i = 0; i < idx.size(); ++i)
      ty[i] = domain[idx[i]];
    if (well_typed(t, ty)) {
      std::vector<std::string> names;
      for (auto &x : ty)
        names.push_back(x.to_string());
      out.insert(names);
    }
    size_t k = 0;
    while (k < idx.size() && ++idx[k] == domain.size())
      idx[k++] = 0;
    if (k == idx.size())
      break;
  }
  return out;
}

std::set<std::vector<std::string>> enumerated(const Transform &t,
                                              const WidthConfig &w) {
  std::set<std::vector<std::string>> out;
  for (auto &ta : enumerate_assignments(gen_constraints(t), w)) {
    std::vector<std::string> names;
    for (auto &x : ta.node_types)
      names.push_back(x.to_string());
    EXPECT_TRUE(out.insert(names).second) << "duplicate assignment";
  }
  return out;
}

TEST(TyperTest, BinopSharesOneVariable) {
  auto t = one("%r = fadd %x, %y\n=>\n%r = fadd %y, %x\n");
  auto c = gen_constraints(t);
  std::set<size_t> classes(c.class_of.begin(), c.class_of.end());
  EXPECT_EQ(classes.size(), 1u);
  EXPECT_EQ(enumerate_assignments(c, WidthConfig{}).size(), 3u);
  EXPECT_EQ(enumerate_assignments(c, widths({fp8_format()}, {})).size(), 1u);
}

TEST(TyperTest, SitofpAddShape) {
  auto t = one("%a = sitofp %x\n%b = sitofp %y\n%r = fadd %a, %b\n=>\n"
               "%c = add %x, %y\n%r = sitofp %c\n");
  auto c = gen_constraints(t);
  std::set<size_t> classes(c.class_of.begin(), c.class_of.end());
  EXPECT_EQ(classes.size(), 2u);
  auto all = enumerate_assignments(c, WidthConfig{});
  ASSERT_EQ(all.size(), 12u);
  // FP varies slowest, both ascending.
  EXPECT_EQ(describe(t, all[0]).find("%x:i8"), 0u) << describe(t, all[0]);
  EXPECT_NE(describe(t, all[0]).find("%a:half"), std::string::npos);
  EXPECT_NE(describe(t, all[11]).find("%x:i64"), std::string::npos);
  EXPECT_NE(describe(t, all[11]).find("%a:double"), std::string::npos);
}

TEST(TyperTest, StrictNarrowingViolated) {
  auto t = one("%b = fptrunc half %a to half\n=>\n%b = %a\n");
  EXPECT_THROW(gen_constraints(t), TypeError);
}

TEST(TyperTest, KindClash) {
  auto t = one("%r = fadd %x, %y\n=>\n%r = add %x, %y\n");
  EXPECT_THROW(gen_constraints(t), TypeError);
}

TEST(TyperTest, WideningNeedsTwoFormats) {
  auto t = one("%a = fpext %x\n%r = fptrunc %a\n=>\n%r = %x\n");
  auto c = gen_constraints(t);
  EXPECT_TRUE(enumerate_assignments(c, widths({half_format()}, {8})).empty());
  // half<single, half<double, single<double.
  EXPECT_EQ(enumerate_assignments(c, WidthConfig{}).size(), 3u);
}

TEST(TyperTest, PinnedTypeOutsideConfigIsDropped) {
  auto t = one("%r = fadd double %x, %y\n=>\n%r = fadd %y, %x\n");
  auto c = gen_constraints(t);
  EXPECT_EQ(enumerate_assignments(c, WidthConfig{}).size(), 1u);
  EXPECT_TRUE(enumerate_assignments(c, widths({fp8_format()}, {8})).empty());
}

TEST(TyperTest, FcmpResultIsBoolean) {
  auto t = one("%c = fcmp olt %x, %y\n%r = select %c, %x, %y\n=>\n"
               "%d = fcmp ogt %y, %x\n%r = select %d, %x, %y\n");
  auto all = enumerate_assignments(gen_constraints(t), WidthConfig{});
  ASSERT_EQ(all.size(), 3u);
  for (auto &ta : all)
    EXPECT_EQ(ta.of(t.source[0].node).to_string(), "i1");
}

TEST(TyperTest, MatchesBruteForceProduct) {
  std::vector<Transform> cases;
  for (auto &e : std::filesystem::directory_iterator(FPV_CORPUS_DIR)) {
    std::ifstream in(e.path());
    std::stringstream ss;
    ss << in.rdbuf();
    for (auto &t : parse_corpus(ss.str()))
      cases.push_back(t);
  }
  for (const char *text : {
           "%a = fpext %x\n%r = fptrunc %a\n=>\n%r = %x\n",
           "%a = fptosi %x\n%r = sitofp %a\n=>\n%r = %x\n",
           "%c = fcmp oeq %x, %y\n%r = select %c, %a, %b\n=>\n%r = %b\n",
           "%r = fadd half %x, %y\n=>\n%r = fadd %y, %x\n",
           "%a = fptrunc %x to half\n=>\n%a = fptrunc %x\n",
       })
    cases.push_back(one(text));

  const WidthConfig w =
      widths({fp8_format(), half_format(), single_format()}, {1, 8, 16});
  std::vector<Type> domain;
  for (auto &f : w.fp_formats)
    domain.push_back(Type::fp(f));
  for (unsigned i : w.int_widths)
    domain.push_back(Type::integer(i));

  size_t checked = 0;
  for (auto &t : cases) {
    bool has_const_expr = false;
    for (auto &n : t.nodes)
      has_const_expr |= n.kind == NodeKind::ConstExpr;
    if (has_const_expr || t.nodes.size() > 7)
      continue;
    TypeConstraints c;
    try {
      c = gen_constraints(t);
    } catch (const TypeError &) {
      EXPECT_TRUE(brute_force(t, domain).empty()) << t.name;
      continue;
    }
    std::set<size_t> classes(c.class_of.begin(), c.class_of.end());
    if (classes.size() > 3)
      continue;
    EXPECT_EQ(enumerated(t, w), brute_force(t, domain)) << t.name;
    ++checked;
  }
  EXPECT_GE(checked, 20u);
}

} // namespace
} // namespace fpv
