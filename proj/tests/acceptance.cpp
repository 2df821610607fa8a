// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero when any fails.

#include "differential.hpp"

#include "fpv/driver.hpp"
#include "fpv/fpsem.hpp"
#include "fpv/minifloat.hpp"
#include "fpv/oracle.hpp"
#include "fpv/parser.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <thread>

using namespace fpv;

namespace {

// Wall-clock limits per criterion, in seconds.
constexpr double bug_limit_s = 300;
constexpr double nsz_limit_s = 60;
constexpr double cross_check_limit_s = 600;
// Slack allowed past the solver timeout before a stub solver is abandoned.
constexpr double timeout_slack_s = 1.0;
constexpr unsigned min_cross_checked = 20;
constexpr size_t min_sampled_pairs = 2000;

const std::string corpus_dir = FPV_CORPUS_DIR;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

std::string slurp(const std::string &path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> corpus_files() {
  std::vector<std::string> out;
  for (auto &e : std::filesystem::directory_iterator(corpus_dir))
    if (e.path().extension() == ".opt")
      out.push_back(e.path().string());
  std::sort(out.begin(), out.end());
  return out;
}

unsigned default_jobs() {
  return std::max(1u, std::min(8u, std::thread::hardware_concurrency()));
}

VerifyConfig config(std::vector<FPFormat> fp, std::vector<unsigned> ints) {
  VerifyConfig cfg;
  cfg.widths.fp_formats = std::move(fp);
  cfg.widths.int_widths = std::move(ints);
  cfg.solver.command = default_solver_command();
  cfg.jobs = default_jobs();
  return cfg;
}

/// Collects failure reasons for one criterion.
struct Check {
  std::vector<std::string> problems;
  std::string note;
  void expect(bool ok, const std::string &what) {
    if (!ok)
      problems.push_back(what);
  }
};

const TransformReport *find(const Report &r, const std::string &name) {
  for (auto &f : r.files)
    for (auto &t : f.transforms)
      if (t.name == name)
        return &t;
  return nullptr;
}

const CexValue *input(const Counterexample &c, const std::string &name) {
  for (auto &v : c.inputs)
    if (v.name == name)
      return &v;
  return nullptr;
}

/// The invalid instances of `t`, each with a counterexample.
std::vector<const InstanceResult *> invalid(const TransformReport &t) {
  std::vector<const InstanceResult *> out;
  for (auto &i : t.instances)
    if (i.status == InstanceStatus::Invalid && i.counterexample)
      out.push_back(&i);
  return out;
}

bool all_confirmed(const TransformReport &t) {
  auto inv = invalid(t);
  if (inv.empty())
    return false;
  for (auto *i : inv)
    if (i->counterexample->replay != "confirmed")
      return false;
  return true;
}

std::string type_of(const InstanceResult &i, const std::string &node) {
  for (auto &[n, ty] : i.types)
    if (n == node)
      return ty;
  return "";
}

FPFormat format_named(const std::string &name) {
  for (auto &f : {fp8_format(), half_format(), single_format(),
                  double_format()})
    if (Type::fp(f).to_string() == name)
      return f;
  throw std::runtime_error("unknown format " + name);
}

// Bug reconstruction ---------------------------------------------------------

Report bug_report;

void bug_reconstruction(Check &c) {
  auto t0 = std::chrono::steady_clock::now();
  std::vector<std::string> paths;
  for (const char *n : {"pr26746", "pr26958", "pr26943", "pr27036"})
    paths.push_back(corpus_dir + "/" + n + ".opt");
  bug_report = verify_files(paths, config({half_format()}, {8, 16, 32, 64}));
  double elapsed = seconds_since(t0);

  for (const char *n : {"PR26746", "PR26958", "PR26943", "PR27036"}) {
    const TransformReport *t = find(bug_report, n);
    c.expect(t && t->status == TransformStatus::Incorrect,
             std::string(n) + " not incorrect");
    if (t)
      c.expect(all_confirmed(*t), std::string(n) + " replay not confirmed");
  }

  if (auto *t = find(bug_report, "PR26746")) {
    bool neg_zero = false;
    for (auto *i : invalid(*t))
      if (auto *x = input(*i->counterexample, "%x"))
        neg_zero |= x->value == "-0.0";
    c.expect(neg_zero, "PR26746 counterexample without %x = -0.0");
  }
  if (auto *t = find(bug_report, "PR26958")) {
    bool special = !invalid(*t).empty();
    for (auto *i : invalid(*t)) {
      auto *x = input(*i->counterexample, "%x");
      special &= x && (x->value == "nan" || x->value == "inf" ||
                       x->value == "-inf");
    }
    c.expect(special, "PR26958 counterexample %x is not NaN or infinite");
  }
  if (auto *t = find(bug_report, "PR26943")) {
    // The select picks 0.0, so the source is frem by zero.
    bool by_zero = !invalid(*t).empty();
    for (auto *i : invalid(*t)) {
      auto *sel = input(*i->counterexample, "%c");
      auto &src = i->counterexample->source;
      by_zero &= sel && sel->value == "1" && src && src->value == "nan";
    }
    c.expect(by_zero, "PR26943 counterexample is not frem by zero");
  }
  if (auto *t = find(bug_report, "PR27036")) {
    // Some conversion in the counterexample must round.
    bool rounds = !invalid(*t).empty();
    for (auto *i : invalid(*t)) {
      auto *x = input(*i->counterexample, "%x");
      auto *y = input(*i->counterexample, "%y");
      if (!x || !y) {
        rounds = false;
        continue;
      }
      unsigned w = std::stoul(x->type.substr(1));
      FPFormat f = format_named(type_of(*i, "%a"));
      auto inexact = [&](const BigInt &v) {
        uint64_t bits = static_cast<uint64_t>(v & BigInt(width_mask(w)));
        auto r = mf_from_int(bits, w, true, f);
        return !r || BigInt(r->to_double()) != v;
      };
      BigInt vx(x->value), vy(y->value);
      rounds &= inexact(vx) || inexact(vy) || inexact(vx + vy);
    }
    c.expect(rounds, "PR27036 counterexample has no rounding conversion");

    // The documented input, through the oracle alone.
    auto src = parse_corpus(slurp(corpus_dir + "/pr27036.opt")).at(0);
    WidthConfig w;
    w.fp_formats = {half_format()};
    w.int_widths = {16};
    auto ta = enumerate_assignments(gen_constraints(src), w).at(0);
    CcAssignment cca;
    Interpreter it(src, ta, cca);
    Assignment env(src.nodes.size());
    for (NodeId id : it.value_nodes()) {
      if (src.nodes[id].name == "%x")
        env[id] = static_cast<uint64_t>(-4095) & 0xFFFF;
      if (src.nodes[id].name == "%y")
        env[id] = 17;
    }
    auto conv = mf_from_int(static_cast<uint64_t>(-4095) & 0xFFFF, 16, true,
                            half_format());
    c.expect(conv && conv->to_double() != -4095.0,
             "sitofp(-4095) at half is exact");
    c.expect(it.counterexample(env), "-4095 + 17 is not a counterexample");
  }
  c.expect(elapsed < bug_limit_s,
           "took " + std::to_string(elapsed) + " s at half");
}

// Undef rule ------------------------------------------------------------------

void undef_rule(Check &c) {
  Report r = verify_files({corpus_dir + "/undef.opt"},
                          config({half_format(), single_format(),
                                  double_format()},
                                 {8}));
  auto *bad = find(r, "undef-invalid");
  auto *good = find(r, "undef-to-nan");
  c.expect(bad && bad->status == TransformStatus::Incorrect,
           "undef-invalid not incorrect");
  // Replay searches every source undef choice, which the oracle budget
  // allows at half only; wider instances may be unsupported, never refuted.
  if (bad) {
    for (auto *i : invalid(*bad)) {
      const std::string &rp = i->counterexample->replay;
      bool narrow = type_of(*i, "%x") == "half";
      c.expect(narrow ? rp == "confirmed" : rp != "refuted",
               "undef-invalid at " + type_of(*i, "%x") + " replay " + rp);
    }
  }
  c.expect(good && good->status == TransformStatus::Correct,
           "undef-to-nan not correct");
}

// Fast-math differential ------------------------------------------------------

Report nsz_report;

void fast_math(Check &c) {
  auto t0 = std::chrono::steady_clock::now();
  nsz_report = verify_files(
      {corpus_dir + "/fastmath.opt"},
      config({half_format(), single_format(), double_format()}, {8}));
  double elapsed = seconds_since(t0);
  auto *with = find(nsz_report, "fadd-nsz-anyzero");
  auto *without = find(nsz_report, "fadd-anyzero");
  c.expect(with && with->status == TransformStatus::Correct,
           "nsz variant not correct");
  if (with) {
    std::set<std::string> formats;
    for (auto &i : with->instances)
      if (i.status == InstanceStatus::Valid)
        formats.insert(type_of(i, "%x"));
    c.expect(formats.size() == 3, "nsz variant not valid at all three widths");
  }
  c.expect(without && without->status == TransformStatus::Incorrect,
           "variant without nsz not incorrect");
  if (without) {
    c.expect(all_confirmed(*without), "signed-zero replay not confirmed");
    for (auto *i : invalid(*without)) {
      auto &s = i->counterexample->source, &t = i->counterexample->target;
      bool zeros = s && t &&
                   ((s->value == "0.0" && t->value == "-0.0") ||
                    (s->value == "-0.0" && t->value == "0.0"));
      c.expect(zeros, "counterexample is not a signed-zero disagreement");
    }
  }
  c.expect(elapsed < nsz_limit_s, "took " + std::to_string(elapsed) + " s");
}

// Oracle and solver verdicts --------------------------------------------------

void verdict_equivalence(Check &c) {
  auto t0 = std::chrono::steady_clock::now();
  VerifyConfig cfg = config({fp8_format()}, {4, 8});
  cfg.brute_force = true;
  Report r = verify_files(corpus_files(), cfg);
  double elapsed = seconds_since(t0);
  unsigned checked = 0, instances = 0;
  for (auto &f : r.files)
    for (auto &t : f.transforms) {
      if (!t.cross_check)
        continue;
      instances += t.cross_check->instances;
      for (auto &d : t.cross_check->disagreements)
        c.expect(false, t.name + ": " + d);
      if (t.cross_check->instances > 0 &&
          t.cross_check->agreed == t.cross_check->instances)
        ++checked;
    }
  c.note = std::to_string(checked) + " transforms, " +
           std::to_string(instances) + " instances";
  c.expect(checked >= min_cross_checked,
           std::to_string(checked) + " transforms fully cross-checked");
  c.expect(elapsed < cross_check_limit_s,
           "took " + std::to_string(elapsed) + " s");
}

// Encoding differential -------------------------------------------------------

void report_diff(Check &c, const std::string &what,
                 const testing::DiffResult &d, uint64_t min_pairs) {
  c.expect(d.error.empty(), what + ": " + d.error);
  c.expect(d.mismatches == 0,
           what + ": " + std::to_string(d.mismatches) + " mismatches" +
               (d.examples.empty() ? "" : " e.g. " + d.examples[0]));
  c.expect(d.pairs >= min_pairs,
           what + ": only " + std::to_string(d.pairs) + " cases");
}

void encoding_differential(Check &c) {
  const FPFormat f = fp8_format();
  testing::EncodingDifferential d(f, default_solver_command());
  // Every pattern pair, well above the sampled minimum.
  for (Opcode op : {Opcode::fadd, Opcode::frem, Opcode::fsub, Opcode::fmul,
                    Opcode::fdiv})
    report_diff(c, std::string(to_string(op)), d.binary(op), 65536);
  report_diff(c, "fabs", d.fabs(), 256);
  for (unsigned w : {4u, 8u}) {
    report_diff(c, "fptosi i" + std::to_string(w), d.to_int(Opcode::fptosi, w),
                256);
    report_diff(c, "fptoui i" + std::to_string(w), d.to_int(Opcode::fptoui, w),
                256);
  }
  report_diff(c, "sitofp i8", d.from_int(Opcode::sitofp, 8), 256);
  report_diff(c, "uitofp i8", d.from_int(Opcode::uitofp, 8), 256);
  report_diff(c, "fpext half", d.resize(Opcode::fpext, half_format()), 256);

  testing::EncodingDifferential h(half_format(), default_solver_command());
  report_diff(c, "fptrunc fp8", h.resize(Opcode::fptrunc, f), 65536);
  report_diff(c, "sitofp i16 half", h.from_int(Opcode::sitofp, 16), 65536);
  report_diff(c, "fadd half sampled",
              h.binary(Opcode::fadd, std::nullopt,
                       testing::sample_pairs(16, min_sampled_pairs, 11)),
              min_sampled_pairs);
  report_diff(c, "frem half sampled",
              h.binary(Opcode::frem, std::nullopt,
                       testing::sample_pairs(16, min_sampled_pairs, 12)),
              min_sampled_pairs);
}

// fcmp table -----------------------------------------------------------------

/// Condition codes from their definition: an ordered code holds when neither
/// operand is NaN and the relation holds; an unordered one when either is
/// NaN or the relation holds.
bool by_definition(CondCode cc, double a, double b) {
  bool nan = std::isnan(a) || std::isnan(b);
  switch (cc) {
  case CondCode::oeq: return !nan && a == b;
  case CondCode::ogt: return !nan && a > b;
  case CondCode::oge: return !nan && a >= b;
  case CondCode::olt: return !nan && a < b;
  case CondCode::ole: return !nan && a <= b;
  case CondCode::one: return !nan && a != b;
  case CondCode::ord: return !nan;
  case CondCode::ueq: return nan || a == b;
  case CondCode::ugt: return nan || a > b;
  case CondCode::uge: return nan || a >= b;
  case CondCode::ult: return nan || a < b;
  case CondCode::ule: return nan || a <= b;
  case CondCode::une: return nan || a != b;
  case CondCode::uno: return nan;
  }
  return false;
}

void fcmp_table(Check &c) {
  const FPFormat f = fp8_format();
  // The oracle against the definition, all pattern pairs.
  for (CondCode cc : all_cond_codes) {
    uint64_t wrong = 0;
    for (uint64_t a = 0; a < 256; ++a)
      for (uint64_t b = 0; b < 256; ++b) {
        MiniFloat x(f, a), y(f, b);
        wrong += mf_cmp(cc, x, y) !=
                 by_definition(cc, x.to_double(), y.to_double());
      }
    c.expect(wrong == 0, std::string(to_string(cc)) + ": oracle differs on " +
                             std::to_string(wrong) + " pairs");
  }
  // The encoding against the oracle, all pattern pairs.
  testing::EncodingDifferential d(f, default_solver_command());
  for (CondCode cc : all_cond_codes)
    report_diff(c, "fcmp " + std::string(to_string(cc)),
                d.binary(Opcode::fcmp, cc), 65536);
  // Named cases, through the solver.
  auto lit = [&](uint64_t bits) { return term::fp(bits, f); };
  Term nan = lit(MiniFloat::nan(f).bits());
  Term pz = lit(MiniFloat::zero(f, false).bits());
  Term nz = lit(MiniFloat::zero(f, true).bits());
  Term one = lit(MiniFloat::from_decimal(f, "1.0")->bits());
  auto solver = testing::test_solver();
  auto holds = [&](const Term &t, const std::string &what) {
    auto r = testing::solver_proves(t, solver);
    c.expect(r.has_value() && *r, what);
  };
  Term f0 = term::bv(0, 1), t1 = term::bv(1, 1);
  holds(term::eq(encode_fcmp(CondCode::oeq, nan, nan), f0),
        "oeq(NaN, NaN) is not false");
  holds(term::eq(encode_fcmp(CondCode::uno, nan, one), t1),
        "uno(NaN, 1.0) is not true");
  holds(term::eq(encode_fcmp(CondCode::oeq, nz, pz), t1),
        "oeq(-0.0, +0.0) is not true");
}

// Timeout handling ------------------------------------------------------------

Report timeout_report;

void timeout_handling(Check &c) {
  VerifyConfig cfg = config({half_format()}, {8});
  cfg.solver.command = "sleep 30";
  cfg.solver.timeout_s = 1;
  cfg.jobs = 1;
  auto t0 = std::chrono::steady_clock::now();
  timeout_report = verify_text(
      "stub", "Name: stub\n%r = fadd %x, -0.0\n=>\n%r = %x\n", cfg);
  double elapsed = seconds_since(t0);
  auto *t = find(timeout_report, "stub");
  c.expect(t && t->instances.size() == 1 &&
               t->instances[0].status == InstanceStatus::Timeout,
           "instance not a timeout");
  c.expect(t && t->status == TransformStatus::Unverified,
           "transform not unverified");
  c.expect(elapsed < cfg.solver.timeout_s + timeout_slack_s,
           "took " + std::to_string(elapsed) + " s");
}

// Round trips and exit codes --------------------------------------------------

void round_trips(Check &c) {
  size_t n = 0;
  for (auto &path : corpus_files()) {
    auto first = parse_corpus(slurp(path));
    auto second = parse_corpus(pretty_print(first));
    c.expect(first == second, path + ": parse/print/parse differs");
    n += first.size();
  }
  c.expect(n >= 30, "only " + std::to_string(n) + " corpus transforms");

  for (const Report *r : {&bug_report, &nsz_report, &timeout_report}) {
    std::string json = render(*r, ReportFormat::Json);
    try {
      c.expect(parse_report_json(json) == *r, "JSON round trip differs");
    } catch (const std::exception &e) {
      c.expect(false, std::string("JSON parse: ") + e.what());
    }
  }

  c.expect(exit_code(bug_report) == 1, "bug corpus exit code not 1");
  c.expect(exit_code(nsz_report) == 1, "fast-math corpus exit code not 1");
  c.expect(exit_code(timeout_report) == 2, "timeout exit code not 2");
  Report fixed = verify_text(
      "fixed", "Name: fixed\n%r = fadd nsz %x, 0.0\n=>\n%r = %x\n",
      config({half_format()}, {8}));
  c.expect(exit_code(fixed) == 0, "valid corpus exit code not 0");
  Report broken = verify_text("broken", "Name: broken\n%r = fadd %x\n=>\n",
                              config({half_format()}, {8}));
  c.expect(exit_code(broken) == 3, "parse error exit code not 3");
}

} // namespace

int main() {
  struct Criterion {
    const char *name;
    std::function<void(Check &)> run;
  } criteria[] = {
      {"1 bug reconstruction", bug_reconstruction},
      {"2 undef rule", undef_rule},
      {"3 fast-math differential", fast_math},
      {"4 oracle/solver verdict equivalence", verdict_equivalence},
      {"5 encoding differential", encoding_differential},
      {"6 fcmp table", fcmp_table},
      {"7 timeout handling", timeout_handling},
      {"8 parser/report round trips", round_trips},
  };
  int failed = 0;
  for (auto &cr : criteria) {
    Check c;
    auto t0 = std::chrono::steady_clock::now();
    try {
      cr.run(c);
    } catch (const std::exception &e) {
      c.problems.push_back(std::string("exception: ") + e.what());
    }
    double s = seconds_since(t0);
    std::printf("%s: %s (%.1f s%s%s)\n", c.problems.empty() ? "PASS" : "FAIL",
                cr.name, s, c.note.empty() ? "" : ", ", c.note.c_str());
    for (auto &p : c.problems)
      std::printf("    %s\n", p.c_str());
    std::fflush(stdout);
    failed += !c.problems.empty();
  }
  return failed == 0 ? 0 : 1;
}
