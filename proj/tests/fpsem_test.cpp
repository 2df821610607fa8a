#include "differential.hpp"

#include "fpv/fpsem.hpp"
#include "fpv/minifloat.hpp"
#include "fpv/parser.hpp"
#include "fpv/precond.hpp"
#include "fpv/typer.hpp"

#include <gtest/gtest.h>

namespace fpv {
namespace {

const FPFormat H = half_format();

Term lit(const char *text, const FPFormat &f = H) {
  return term::fp(MiniFloat::from_decimal(f, text)->bits(), f);
}

bool proves(const Term &t) {
  auto r = testing::solver_proves(t, testing::test_solver());
  EXPECT_TRUE(r.has_value());
  return r.value_or(false);
}

/// Bit-precise equality, NaN equal to NaN.
bool same(const Term &a, const Term &b) { return proves(term::eq(a, b)); }

Transform one(const std::string &text) {
  auto ts = parse_corpus(text);
  EXPECT_EQ(ts.size(), 1u);
  return ts.at(0);
}

TypeAssignment first_assignment(const Transform &t, const WidthConfig &w) {
  auto all = enumerate_assignments(gen_constraints(t), w);
  EXPECT_FALSE(all.empty());
  return all.at(0);
}

WidthConfig only(const FPFormat &f, std::vector<unsigned> ints = {8}) {
  WidthConfig w;
  w.fp_formats = {f};
  w.int_widths = std::move(ints);
  return w;
}

TEST(FpsemTest, BinopExamples) {
  EXPECT_TRUE(same(encode_binop(Opcode::fadd, lit("-0.0"), lit("-0.0")),
                   lit("-0.0")));
  EXPECT_TRUE(same(encode_binop(Opcode::fdiv, lit("1.0"), lit("-0.0")),
                   lit("-inf")));
  auto f8 = fp8_format();
  Term max = term::fp(MiniFloat::largest_finite(f8, false).bits(), f8);
  EXPECT_TRUE(same(encode_binop(Opcode::fadd, max, max), lit("inf", f8)));
  EXPECT_TRUE(same(encode_binop(Opcode::fmul, lit("3.0"), lit("0.5")),
                   lit("1.5")));
}

TEST(FpsemTest, FremExamples) {
  EXPECT_TRUE(same(encode_frem(lit("5.0"), lit("2.0")), lit("1.0")));
  EXPECT_TRUE(same(encode_frem(lit("-5.0"), lit("2.0")), lit("-1.0")));
  EXPECT_TRUE(same(encode_frem(lit("5.0"), lit("3.0")), lit("2.0")));
  EXPECT_TRUE(same(encode_frem(lit("inf"), lit("2.0")), lit("nan")));
  // Every finite x: frem(x, 0) is NaN.
  Term x = term::var("x", Sort::fp(H));
  EXPECT_TRUE(proves(term::or_(
      {term::not_(term::and_({term::not_(term::is_nan(x)),
                              term::not_(term::is_inf(x))})),
       term::is_nan(encode_frem(x, lit("0.0")))})));
}

TEST(FpsemTest, FcmpExamples) {
  auto one_bit = term::bv(1, 1), zero_bit = term::bv(0, 1);
  EXPECT_TRUE(same(encode_fcmp(CondCode::oeq, lit("nan"), lit("nan")),
                   zero_bit));
  EXPECT_TRUE(same(encode_fcmp(CondCode::uno, lit("nan"), lit("1.0")),
                   one_bit));
  EXPECT_TRUE(same(encode_fcmp(CondCode::oeq, lit("-0.0"), lit("0.0")),
                   one_bit));
  EXPECT_TRUE(same(encode_fcmp(CondCode::une, lit("nan"), lit("nan")),
                   one_bit));
  EXPECT_TRUE(same(encode_fcmp(CondCode::ord, lit("inf"), lit("1.0")),
                   one_bit));
}

TEST(FpsemTest, ConversionExamples) {
  std::vector<Term> fresh_vars;
  FreshFn fresh = [&](const Sort &s) {
    fresh_vars.push_back(
        term::var("u" + std::to_string(fresh_vars.size()), s));
    return fresh_vars.back();
  };
  Term r = encode_conversion(Opcode::fptosi, lit("nan"), Type::integer(8),
                             fresh);
  ASSERT_EQ(fresh_vars.size(), 1u);
  EXPECT_TRUE(same(r, fresh_vars[0]));
  r = encode_conversion(Opcode::fptosi, lit("-2.75"), Type::integer(8), fresh);
  EXPECT_TRUE(same(r, term::bv(0xFE, 8)));
  r = encode_conversion(Opcode::fptosi, lit("128.0"), Type::integer(8), fresh);
  EXPECT_TRUE(same(r, fresh_vars.back()));
  r = encode_conversion(Opcode::fptosi, lit("-128.0"), Type::integer(8), fresh);
  EXPECT_TRUE(same(r, term::bv(0x80, 8)));

  r = encode_conversion(Opcode::fpext, lit("1.5"),
                        Type::fp(double_format()), fresh);
  EXPECT_TRUE(same(r, lit("1.5", double_format())));

  Term m4095 = term::bv(static_cast<uint64_t>(-4095) & 0xFFFF, 16);
  r = encode_conversion(Opcode::sitofp, m4095, Type::fp(H), fresh);
  auto oracle = mf_from_int(static_cast<uint64_t>(-4095) & 0xFFFF, 16, true, H);
  ASSERT_TRUE(oracle);
  EXPECT_NE(oracle->to_double(), -4095.0);
  EXPECT_TRUE(same(r, term::fp(oracle->bits(), H)));

  r = encode_conversion(Opcode::uitofp, term::bv(0xFFFF, 16), Type::fp(H),
                        fresh);
  EXPECT_TRUE(same(r, fresh_vars.back()));
}

TEST(FpsemTest, MiscExamples) {
  EXPECT_TRUE(same(encode_misc(Opcode::fabs, {lit("-0.0")}), lit("0.0")));
  Term a = term::var("a", Sort::fp(H)), b = term::var("b", Sort::fp(H));
  EXPECT_TRUE(same(encode_misc(Opcode::select, {term::bv(1, 1), a, b}), a));
  EXPECT_TRUE(same(encode_misc(Opcode::select, {term::bv(0, 1), a, b}), b));
  EXPECT_TRUE(same(encode_misc(Opcode::add, {term::bv(255, 8), term::bv(1, 8)}),
                   term::bv(0, 8)));
  EXPECT_TRUE(same(encode_misc(Opcode::sub, {term::bv(0, 8), term::bv(1, 8)}),
                   term::bv(255, 8)));
}

TEST(FpsemTest, FastMathExamples) {
  Term u;
  FreshFn fresh = [&](const Sort &s) { return u = term::var("u", s); };
  FastMath nnan{true, false, false}, ninf{false, true, false};
  Term raw = encode_binop(Opcode::fadd, lit("nan"), lit("1.0"));
  EXPECT_TRUE(same(apply_fastmath(nnan, {lit("nan"), lit("1.0")}, raw, fresh),
                   u));
  raw = encode_binop(Opcode::fmul, lit("inf"), lit("2.0"));
  EXPECT_TRUE(same(apply_fastmath(ninf, {lit("inf"), lit("2.0")}, raw, fresh),
                   u));
  raw = encode_binop(Opcode::fadd, lit("1.0"), lit("2.0"));
  EXPECT_TRUE(same(apply_fastmath(nnan, {lit("1.0"), lit("2.0")}, raw, fresh),
                   lit("3.0")));
  // Overflowing result of finite operands.
  raw = encode_binop(Opcode::fmul, lit("60000"), lit("2.0"));
  EXPECT_TRUE(same(
      apply_fastmath(ninf, {lit("60000"), lit("2.0")}, raw, fresh), u));
  // No flags: no wrapper at all.
  EXPECT_EQ(apply_fastmath(FastMath{}, {lit("1.0")}, raw, fresh), raw);
}

TEST(FpsemTest, FastMathIsIdentityAwayFromNaNAndInf) {
  Sort s = Sort::fp(H);
  Term a = term::var("a", s), b = term::var("b", s);
  FreshFn fresh = [&](const Sort &so) { return term::var("u", so); };
  for (Opcode op : {Opcode::fadd, Opcode::fsub, Opcode::fmul, Opcode::fdiv}) {
    Term raw = encode_binop(op, a, b);
    Term wrapped = apply_fastmath({true, true, false}, {a, b}, raw, fresh);
    std::vector<Term> guards;
    for (const Term &v : {a, b, raw})
      guards.push_back(term::or_({term::is_nan(v), term::is_inf(v)}));
    EXPECT_TRUE(proves(term::or_({term::or_(guards), term::eq(wrapped, raw)})))
        << to_string(op);
  }
}

TEST(FpsemTest, DisagreeIsBitPrecise) {
  EXPECT_TRUE(proves(disagree(lit("0.0"), lit("-0.0"), false)));
  EXPECT_TRUE(proves(term::not_(disagree(lit("0.0"), lit("-0.0"), true))));
  EXPECT_TRUE(proves(term::not_(disagree(lit("nan"), lit("nan"), false))));
  EXPECT_TRUE(proves(disagree(lit("1.0"), lit("-1.0"), true)));
  Term x = term::var("x", Sort::fp(H));
  EXPECT_TRUE(proves(term::not_(disagree(x, x, false))));
}

TEST(FpsemTest, EveryNodeHasOneTermAndSizeIsLinear) {
  for (const char *text : {
           "%a = fsub -0.0, %x\n%r = fsub 0.0, %a\n=>\n%r = %x\n",
           "%a = fadd nnan ninf %x, %y\n%b = fmul nnan %a, %a\n"
           "%r = fdiv %b, %b\n=>\n%r = fdiv %a, %a\n",
           "%a = sitofp %x\n%b = sitofp %y\n%r = fadd %a, %b\n=>\n"
           "%c = add %x, %y\n%r = sitofp %c\n",
       }) {
    Transform t = one(text);
    auto ta = first_assignment(t, only(H, {16}));
    auto q = build_query(t, ta, {});
    EXPECT_EQ(q.node_terms.size(), t.nodes.size());
    size_t dag = post_order({q.assertion}).size();
    EXPECT_LE(dag, 40 * t.nodes.size()) << text;
  }
}

TEST(FpsemTest, SharingIsPreservedUnderDeepChains) {
  // Each instruction uses the previous one twice: a tree copy would be 2^n.
  std::string text = "%a0 = fadd %x, %x\n";
  for (int i = 1; i < 40; ++i)
    text += "%a" + std::to_string(i) + " = fadd %a" + std::to_string(i - 1) +
            ", %a" + std::to_string(i - 1) + "\n";
  text += "%r = fmul %a39, %a39\n=>\n%r = fmul %a39, %a39\n";
  Transform t = one(text);
  auto q = build_query(t, first_assignment(t, only(H)), {});
  EXPECT_LE(post_order({q.assertion}).size(), 40 * t.nodes.size());
}

TEST(FpsemTest, ArithmeticCarriesRoundToNearestEven) {
  Transform t = one("%a = fadd %x, %y\n%b = fmul %a, %y\n%c = fdiv %b, %x\n"
                    "%d = fsub %c, %a\n%e = frem %d, %x\n%i = fptosi %e\n"
                    "%r = sitofp %i\n=>\n%r = %x\n");
  auto q = build_query(t, first_assignment(t, only(H, {16})), {});
  size_t arith = 0;
  for (const TermNode *n : post_order({q.assertion})) {
    switch (n->op) {
    case TermOp::FPAdd:
    case TermOp::FPSub:
    case TermOp::FPMul:
    case TermOp::FPDiv:
    case TermOp::FPFromSBV:
    case TermOp::FPFromUBV:
      EXPECT_EQ(n->rm, RoundingMode::RNE);
      ++arith;
      break;
    case TermOp::FPToSBV:
    case TermOp::FPToUBV:
    case TermOp::FPRoundToIntegral:
      EXPECT_EQ(n->rm, RoundingMode::RTZ);
      break;
    default:
      break;
    }
  }
  EXPECT_GE(arith, 5u);
}

TEST(FpsemTest, QuantifierPolarity) {
  Transform src_undef = one("%r = fadd %x, undef\n=>\n%r = nan\n");
  auto q = build_query(src_undef, first_assignment(src_undef, only(H)), {});
  EXPECT_EQ(q.universal_vars.size(), 1u);
  EXPECT_TRUE(q.quantified());
  ASSERT_EQ(q.free_vars.size(), 1u);
  EXPECT_EQ(q.free_vars[0].role, VarRole::Input);

  Transform tgt_undef = one("%r = fadd %x, 0.0\n=>\n%r = undef\n");
  q = build_query(tgt_undef, first_assignment(tgt_undef, only(H)), {});
  EXPECT_FALSE(q.quantified());
  ASSERT_EQ(q.free_vars.size(), 2u);
  EXPECT_EQ(q.free_vars[1].role, VarRole::Fresh);
  EXPECT_EQ(q.free_vars[1].side, Side::Target);

  Transform fm = one("%r = fadd nnan %x, %y\n=>\n%r = fadd nnan %y, %x\n");
  q = build_query(fm, first_assignment(fm, only(H)), {});
  EXPECT_EQ(q.universal_vars.size(), 1u);
  EXPECT_EQ(q.free_vars.size(), 3u);
}

TEST(FpsemTest, ConstantsAreFreeVariables) {
  Transform t = one("Pre: AnyZero(C)\n%r = fadd %x, C\n=>\n%r = %x\n");
  auto q = build_query(t, first_assignment(t, only(H)), {});
  ASSERT_EQ(q.free_vars.size(), 2u);
  EXPECT_EQ(q.free_vars[0].role, VarRole::Input);
  EXPECT_EQ(q.free_vars[1].role, VarRole::Constant);
}

TEST(FpsemTest, LiteralBits) {
  EXPECT_EQ(literal_bits("-0.0", Type::fp(H)), 0x8000u);
  EXPECT_EQ(literal_bits("nan", Type::fp(H)), MiniFloat::nan(H).bits());
  EXPECT_EQ(literal_bits("-1", Type::integer(8)), 0xFFu);
  EXPECT_EQ(literal_bits("300", Type::integer(8)), 300u & 0xFF);
  EXPECT_THROW(literal_bits("abc", Type::fp(H)), std::invalid_argument);
}

TEST(FpsemTest, UnresolvedCodeIsRejected) {
  Transform t = one("%r = fcmp C1 %x, %y\n=>\n%r = fcmp C1 %x, %y\n");
  auto ta = first_assignment(t, only(H));
  EXPECT_THROW(build_query(t, ta, {}), std::invalid_argument);
  EXPECT_NO_THROW(build_query(t, ta, {{"C1", CondCode::oeq}}));
}

TEST(FpsemTest, SampledDifferentialAgainstOracle) {
  // The exhaustive version runs in the acceptance binary.
  testing::EncodingDifferential d(fp8_format(), default_solver_command());
  auto pairs = testing::sample_pairs(8, 2000, 3);
  for (Opcode op : {Opcode::fadd, Opcode::fsub, Opcode::fmul, Opcode::fdiv,
                    Opcode::frem}) {
    auto r = d.binary(op, std::nullopt, pairs);
    EXPECT_TRUE(r.ok()) << to_string(op) << ": " << r.error << " "
                        << (r.examples.empty() ? "" : r.examples[0]);
    EXPECT_EQ(r.pairs, 2000u);
  }
  for (CondCode cc : all_cond_codes) {
    auto r = d.binary(Opcode::fcmp, cc, pairs);
    EXPECT_TRUE(r.ok()) << to_string(cc) << ": " << r.error;
  }
  auto r = d.fabs();
  EXPECT_TRUE(r.ok()) << r.error;
  for (Opcode op : {Opcode::fptosi, Opcode::fptoui}) {
    r = d.to_int(op, 4);
    EXPECT_TRUE(r.ok()) << to_string(op) << ": " << r.error;
  }
  for (Opcode op : {Opcode::sitofp, Opcode::uitofp}) {
    r = d.from_int(op, 8);
    EXPECT_TRUE(r.ok()) << to_string(op) << ": " << r.error << " "
                        << r.pairs << " " << r.mismatches << " "
                        << (r.examples.empty() ? "" : r.examples[0]);
  }
}

} // namespace
} // namespace fpv
