#include "fpv/transform.hpp"
#include "fpv/condcode.hpp"

#include <algorithm>
#include <array>

namespace fpv {

namespace {
constexpr std::array<std::string_view, 16> opcode_names{
    "fadd",    "fsub",  "fmul",   "fdiv",   "frem",   "fabs",
    "fcmp",    "select", "fptrunc", "fpext", "fptosi", "fptoui",
    "sitofp",  "uitofp", "add",    "sub",
};
constexpr std::array<std::string_view, 4> const_fn_names{
    "fptosi", "sitofp", "fpext", "fptrunc"};
} // namespace

std::string_view to_string(Opcode op) {
  return opcode_names[static_cast<size_t>(op)];
}

std::optional<Opcode> parse_opcode(std::string_view s) {
  for (size_t i = 0; i < opcode_names.size(); ++i)
    if (opcode_names[i] == s)
      return static_cast<Opcode>(i);
  return std::nullopt;
}

bool is_fp_binop(Opcode op) {
  return op == Opcode::fadd || op == Opcode::fsub || op == Opcode::fmul ||
         op == Opcode::fdiv || op == Opcode::frem;
}

bool is_conversion(Opcode op) {
  return op == Opcode::fptrunc || op == Opcode::fpext ||
         op == Opcode::fptosi || op == Opcode::fptoui ||
         op == Opcode::sitofp || op == Opcode::uitofp;
}

bool accepts_fast_math(Opcode op) {
  return is_fp_binop(op) || op == Opcode::fcmp;
}

unsigned arity(Opcode op) {
  if (op == Opcode::select)
    return 3;
  if (op == Opcode::fabs || is_conversion(op))
    return 1;
  return 2;
}

std::string_view to_string(ConstFn fn) {
  return const_fn_names[static_cast<size_t>(fn)];
}

std::optional<ConstFn> parse_const_fn(std::string_view s) {
  for (size_t i = 0; i < const_fn_names.size(); ++i)
    if (const_fn_names[i] == s)
      return static_cast<ConstFn>(i);
  return std::nullopt;
}

Opcode conversion_of(ConstFn fn) {
  switch (fn) {
  case ConstFn::fptosi: return Opcode::fptosi;
  case ConstFn::sitofp: return Opcode::sitofp;
  case ConstFn::fpext: return Opcode::fpext;
  case ConstFn::fptrunc: return Opcode::fptrunc;
  }
  return Opcode::fptosi;
}

std::string FastMath::to_string() const {
  std::string s;
  auto add = [&](bool on, const char *name) {
    if (!on)
      return;
    if (!s.empty())
      s += ' ';
    s += name;
  };
  add(nnan, "nnan");
  add(ninf, "ninf");
  add(nsz, "nsz");
  return s;
}

std::vector<std::string> Transform::symbolic_codes() const {
  std::vector<std::string> out;
  for (auto &n : nodes) {
    if (n.kind != NodeKind::Instr || n.op != Opcode::fcmp)
      continue;
    if (parse_cond_code(n.cond))
      continue;
    if (std::find(out.begin(), out.end(), n.cond) == out.end())
      out.push_back(n.cond);
  }
  return out;
}

} // namespace fpv
