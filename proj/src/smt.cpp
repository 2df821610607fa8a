#include "fpv/smt.hpp"

#include "fpv/minifloat.hpp"

#include <cerrno>
#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fcntl.h>
#include <mutex>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>
#include <unordered_map>

namespace fpv {

namespace {

std::string binary(uint64_t bits, unsigned width) {
  std::string s = "#b";
  for (unsigned i = width; i-- > 0;)
    s += ((bits >> i) & 1) ? '1' : '0';
  return s;
}

std::string fp_literal(uint64_t bits, unsigned ebits, unsigned sbits) {
  unsigned t = sbits - 1;
  return "(fp " + binary(bits >> (ebits + t), 1) + " " +
         binary(bits >> t, ebits) + " " + binary(bits, t) + ")";
}

std::string quote(const std::string &name) { return "|" + name + "|"; }

const char *head_of(TermOp op) {
  switch (op) {
  case TermOp::Not: return "not";
  case TermOp::And: return "and";
  case TermOp::Or: return "or";
  case TermOp::Xor: return "xor";
  case TermOp::Ite: return "ite";
  case TermOp::Eq: return "=";
  case TermOp::FPAdd: return "fp.add";
  case TermOp::FPSub: return "fp.sub";
  case TermOp::FPMul: return "fp.mul";
  case TermOp::FPDiv: return "fp.div";
  case TermOp::FPRem: return "fp.rem";
  case TermOp::FPAbs: return "fp.abs";
  case TermOp::FPNeg: return "fp.neg";
  case TermOp::FPEq: return "fp.eq";
  case TermOp::FPLt: return "fp.lt";
  case TermOp::FPLeq: return "fp.leq";
  case TermOp::FPGt: return "fp.gt";
  case TermOp::FPGeq: return "fp.geq";
  case TermOp::FPIsNaN: return "fp.isNaN";
  case TermOp::FPIsInf: return "fp.isInfinite";
  case TermOp::FPIsZero: return "fp.isZero";
  case TermOp::FPIsNeg: return "fp.isNegative";
  case TermOp::FPIsNormal: return "fp.isNormal";
  case TermOp::FPIsSubnormal: return "fp.isSubnormal";
  case TermOp::FPRoundToIntegral: return "fp.roundToIntegral";
  case TermOp::BVAdd: return "bvadd";
  case TermOp::BVSub: return "bvsub";
  case TermOp::BVSLt: return "bvslt";
  default: return nullptr;
  }
}

std::string indexed_head(const TermNode &n) {
  switch (n.op) {
  case TermOp::FPToFP:
  case TermOp::FPFromSBV:
    return "(_ to_fp " + std::to_string(n.sort.ebits) + " " +
           std::to_string(n.sort.sbits) + ")";
  case TermOp::FPFromUBV:
    return "(_ to_fp_unsigned " + std::to_string(n.sort.ebits) + " " +
           std::to_string(n.sort.sbits) + ")";
  case TermOp::FPToSBV:
    return "(_ fp.to_sbv " + std::to_string(n.sort.width) + ")";
  case TermOp::FPToUBV:
    return "(_ fp.to_ubv " + std::to_string(n.sort.width) + ")";
  default:
    return head_of(n.op);
  }
}

std::string leaf_text(const TermNode &n) {
  switch (n.op) {
  case TermOp::Var: return quote(n.name);
  case TermOp::BoolConst: return n.bits ? "true" : "false";
  case TermOp::BVConst: return binary(n.bits, n.sort.width);
  case TermOp::FPConst: return fp_literal(n.bits, n.sort.ebits, n.sort.sbits);
  default: return "";
  }
}

bool is_leaf(const TermNode &n) { return n.args.empty(); }

} // namespace

std::string render_term(const Term &root) {
  std::vector<const TermNode *> order = post_order({root});
  std::unordered_map<const TermNode *, int> uses;
  for (auto *n : order)
    for (auto &a : n->args)
      ++uses[a.get()];

  std::unordered_map<const TermNode *, std::string> text;
  std::vector<std::pair<std::string, std::string>> lets;
  for (auto *n : order) {
    std::string s;
    if (is_leaf(*n)) {
      s = leaf_text(*n);
    } else {
      s = "(" + indexed_head(*n);
      if (n->rm == RoundingMode::RNE)
        s += " RNE";
      else if (n->rm == RoundingMode::RTZ)
        s += " RTZ";
      for (auto &a : n->args)
        s += " " + text.at(a.get());
      s += ")";
    }
    if (!is_leaf(*n) && uses[n] > 1 && n != root.get()) {
      std::string name = "?t" + std::to_string(lets.size());
      lets.emplace_back(name, std::move(s));
      s = name;
    }
    text[n] = std::move(s);
  }
  std::string out;
  for (auto &[name, def] : lets)
    out += "(let ((" + name + " " + def + "))\n";
  out += text.at(root.get());
  out.append(lets.size(), ')');
  return out;
}

std::string logic_of(const QueryScript &q) {
  return q.quantified() ? "FPBV" : "QF_FPBV";
}

std::string emit(const QueryScript &q) {
  std::string s = "; transform: " + q.transform_name + "\n";
  if (!q.type_summary.empty())
    s += "; types: " + q.type_summary + "\n";
  if (!q.codes.empty()) {
    s += "; codes:";
    for (auto &[name, cc] : q.codes)
      s += " " + name + "=" + std::string(to_string(cc));
    s += "\n";
  }
  s += "(set-logic " + logic_of(q) + ")\n";
  s += "(set-option :produce-models true)\n";
  for (auto &v : q.free_vars)
    s += "(declare-const " + quote(v.name) + " " + v.sort.to_smt() + ")\n";
  std::string body = render_term(q.assertion);
  if (q.quantified()) {
    std::string binders;
    for (auto &v : q.universal_vars)
      binders += (binders.empty() ? "(" : " (") + quote(v.name) + " " +
                 v.sort.to_smt() + ")";
    body = "(forall (" + binders + ")\n" + body + ")";
  }
  s += "(assert\n" + body + ")\n";
  s += "(check-sat)\n";
  if (!q.free_vars.empty()) {
    s += "(get-value (";
    for (size_t i = 0; i < q.free_vars.size(); ++i)
      s += (i ? " " : "") + quote(q.free_vars[i].name);
    s += "))\n";
  }
  return s;
}

namespace {

/// Bits and width of `#b...`, `#x...` or `(_ bvN w)`.
std::optional<std::pair<uint64_t, unsigned>> bv_literal(const SExpr &e) {
  if (!e.is_list) {
    const std::string &a = e.atom;
    if (a.size() > 2 && a[0] == '#' && (a[1] == 'b' || a[1] == 'x')) {
      bool bin = a[1] == 'b';
      unsigned width = (a.size() - 2) * (bin ? 1 : 4);
      if (width > 64)
        throw SExprError("bit-vector literal wider than 64 bits: " + a);
      uint64_t v = 0;
      for (size_t i = 2; i < a.size(); ++i) {
        int d;
        char c = static_cast<char>(std::tolower(static_cast<unsigned char>(a[i])));
        if (c >= '0' && c <= '9')
          d = c - '0';
        else if (!bin && c >= 'a' && c <= 'f')
          d = c - 'a' + 10;
        else
          throw SExprError("bad bit-vector literal: " + a);
        if (bin && d > 1)
          throw SExprError("bad bit-vector literal: " + a);
        v = (v << (bin ? 1 : 4)) | static_cast<uint64_t>(d);
      }
      return std::pair{v, width};
    }
    return std::nullopt;
  }
  if (e.items.size() == 3 && e.items[0].is("_") && !e.items[1].is_list &&
      e.items[1].atom.rfind("bv", 0) == 0) {
    unsigned width = std::stoul(e.items[2].atom);
    BigInt v(e.items[1].atom.substr(2));
    return std::pair{static_cast<uint64_t>(v & width_mask(width)), width};
  }
  return std::nullopt;
}

unsigned number(const SExpr &e) {
  if (e.is_list)
    throw SExprError("expected a numeral, got " + e.to_string());
  return std::stoul(e.atom);
}

} // namespace

ModelValue parse_value(const SExpr &e, const Sort &expected) {
  auto fail = [&]() -> ModelValue {
    throw SExprError("cannot read '" + e.to_string() + "' as " +
                     expected.to_smt());
  };
  if (expected.is_bool()) {
    if (e.is("true"))
      return {expected, 1};
    if (e.is("false"))
      return {expected, 0};
    return fail();
  }
  if (expected.is_bv()) {
    auto lit = bv_literal(e);
    if (!lit || lit->second != expected.width)
      return fail();
    return {expected, lit->first};
  }

  FPFormat f = expected.format();
  auto canonical = [&](uint64_t bits) {
    return ModelValue{expected, MiniFloat(f, bits).bits()};
  };
  if (!e.is_list)
    return fail();
  const auto &it = e.items;
  if (it.size() == 4 && it[0].is("fp")) {
    auto s = bv_literal(it[1]), ex = bv_literal(it[2]), t = bv_literal(it[3]);
    if (!s || !ex || !t || s->second != 1 || ex->second != f.ebits ||
        t->second != f.trailing_bits())
      return fail();
    return canonical((s->first << (f.width() - 1)) |
                     (ex->first << f.trailing_bits()) | t->first);
  }
  if (it.size() == 4 && it[0].is("_") && !it[1].is_list) {
    if (number(it[2]) != f.ebits || number(it[3]) != f.sbits)
      return fail();
    const std::string &k = it[1].atom;
    if (k == "+zero" || k == "-zero")
      return canonical(MiniFloat::zero(f, k[0] == '-').bits());
    if (k == "+oo" || k == "-oo")
      return canonical(MiniFloat::infinity(f, k[0] == '-').bits());
    if (k == "NaN")
      return canonical(MiniFloat::nan(f).bits());
    return fail();
  }
  if (it.size() == 2 && it[0].is_list && it[0].items.size() == 4 &&
      it[0].items[0].is("_") && it[0].items[1].is("to_fp")) {
    if (number(it[0].items[2]) != f.ebits || number(it[0].items[3]) != f.sbits)
      return fail();
    auto lit = bv_literal(it[1]);
    if (!lit || lit->second != f.width())
      return fail();
    return canonical(lit->first);
  }
  return fail();
}

std::string render_value(const ModelValue &v) {
  switch (v.sort.kind) {
  case Sort::Kind::Bool: return v.bits ? "true" : "false";
  case Sort::Kind::BitVec: return binary(v.bits, v.sort.width);
  case Sort::Kind::Float:
    return fp_literal(v.bits, v.sort.ebits, v.sort.sbits);
  }
  return "";
}

std::string_view to_string(SolverStatus s) {
  switch (s) {
  case SolverStatus::Sat: return "sat";
  case SolverStatus::Unsat: return "unsat";
  case SolverStatus::Unknown: return "unknown";
  case SolverStatus::Timeout: return "timeout";
  case SolverStatus::Error: return "solver-error";
  }
  return "?";
}

std::string default_solver_command() {
  const char *env = std::getenv("FPV_SOLVER");
  return env && *env ? env : "z3 -in";
}

// ---------------------------------------------------------------------------

SolverProcess::SolverProcess(const std::string &command) {
  static std::once_flag ignore_sigpipe;
  std::call_once(ignore_sigpipe, [] { std::signal(SIGPIPE, SIG_IGN); });

  int in[2], out[2];
  if (pipe2(in, O_CLOEXEC) != 0)
    throw std::runtime_error(std::string("pipe: ") + std::strerror(errno));
  if (pipe2(out, O_CLOEXEC) != 0) {
    ::close(in[0]);
    ::close(in[1]);
    throw std::runtime_error(std::string("pipe: ") + std::strerror(errno));
  }
  std::string script = "exec " + command;
  pid_ = fork();
  if (pid_ < 0) {
    for (int fd : {in[0], in[1], out[0], out[1]})
      ::close(fd);
    throw std::runtime_error(std::string("fork: ") + std::strerror(errno));
  }
  if (pid_ == 0) {
    setpgid(0, 0);
    dup2(in[0], 0);
    dup2(out[1], 1);
    dup2(out[1], 2);
    execl("/bin/sh", "sh", "-c", script.c_str(), static_cast<char *>(nullptr));
    _exit(127);
  }
  setpgid(pid_, pid_);
  ::close(in[0]);
  ::close(out[1]);
  in_ = in[1];
  out_fd_ = out[0];
  fcntl(in_, F_SETFL, fcntl(in_, F_GETFL) | O_NONBLOCK);
  fcntl(out_fd_, F_SETFL, fcntl(out_fd_, F_GETFL) | O_NONBLOCK);
}

SolverProcess::~SolverProcess() {
  kill();
  if (in_ >= 0)
    ::close(in_);
  if (out_fd_ >= 0)
    ::close(out_fd_);
}

bool SolverProcess::pump(Clock::time_point deadline, bool want_write) {
  auto now = Clock::now();
  if (now >= deadline)
    return false;
  int ms = static_cast<int>(
      std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now)
          .count()) +
           1;
  pollfd fds[2];
  int n = 0;
  if (!eof_)
    fds[n++] = {out_fd_, POLLIN, 0};
  bool writing = want_write && in_ >= 0 && !pending_.empty();
  if (writing)
    fds[n++] = {in_, POLLOUT, 0};
  if (n == 0)
    return false;
  int rc = poll(fds, n, ms);
  if (rc < 0)
    return errno == EINTR;
  if (rc == 0)
    return Clock::now() < deadline;
  for (int i = 0; i < n; ++i) {
    if (fds[i].fd == out_fd_ && (fds[i].revents & (POLLIN | POLLHUP | POLLERR))) {
      char buf[65536];
      ssize_t got = ::read(out_fd_, buf, sizeof buf);
      if (got > 0)
        out_.append(buf, static_cast<size_t>(got));
      else if (got == 0 || (errno != EAGAIN && errno != EINTR))
        eof_ = true;
    }
    if (fds[i].fd == in_ && (fds[i].revents & (POLLOUT | POLLERR | POLLHUP))) {
      ssize_t put = ::write(in_, pending_.data(), pending_.size());
      if (put > 0)
        pending_.erase(0, static_cast<size_t>(put));
      else if (put < 0 && errno != EAGAIN && errno != EINTR) {
        pending_.clear();
        close_input();
        return false;
      }
    }
  }
  return true;
}

bool SolverProcess::write(const std::string &text, Clock::time_point deadline) {
  if (in_ < 0)
    return false;
  pending_ += text;
  while (!pending_.empty())
    if (!pump(deadline, true))
      return false;
  return true;
}

std::optional<std::string> SolverProcess::read_datum(Clock::time_point deadline) {
  for (;;) {
    if (auto end = datum_end(out_, consumed_)) {
      std::string d = out_.substr(consumed_, *end - consumed_);
      consumed_ = *end;
      size_t b = d.find_first_not_of(" \t\r\n");
      return b == std::string::npos ? d : d.substr(b);
    }
    if (eof_) {
      std::string rest = out_.substr(consumed_);
      consumed_ = out_.size();
      size_t b = rest.find_first_not_of(" \t\r\n");
      if (b == std::string::npos)
        return std::nullopt;
      size_t e = rest.find_last_not_of(" \t\r\n");
      return rest.substr(b, e - b + 1);
    }
    if (!pump(deadline, false))
      return std::nullopt;
  }
}

void SolverProcess::close_input() {
  if (in_ >= 0) {
    ::close(in_);
    in_ = -1;
  }
}

std::optional<int> SolverProcess::finish(Clock::time_point deadline) {
  close_input();
  while (!reaped_) {
    int status = 0;
    pid_t r = waitpid(pid_, &status, WNOHANG);
    if (r == pid_) {
      reaped_ = true;
      // Stray grandchildren of a shell command would hold the pipe open.
      ::killpg(pid_, SIGKILL);
      while (!eof_ && pump(deadline, false)) {
      }
      if (WIFEXITED(status))
        return WEXITSTATUS(status);
      return 128 + (WIFSIGNALED(status) ? WTERMSIG(status) : 0);
    }
    if (Clock::now() >= deadline)
      break;
    if (!eof_)
      pump(std::min(deadline, Clock::now() + std::chrono::milliseconds(20)),
           false);
    else
      usleep(2000);
  }
  kill();
  return std::nullopt;
}

void SolverProcess::kill() {
  if (pid_ <= 0 || reaped_)
    return;
  ::killpg(pid_, SIGKILL);
  ::kill(pid_, SIGKILL);
  int status;
  while (waitpid(pid_, &status, 0) < 0 && errno == EINTR) {
  }
  reaped_ = true;
}

// ---------------------------------------------------------------------------

namespace {

bool is_status(const std::string &d) {
  return d == "sat" || d == "unsat" || d == "unknown";
}

void read_model(const std::string &datum,
                const std::map<std::string, Sort> &vars, SolverResult &r) {
  auto parsed = parse_sexprs(datum);
  if (parsed.size() != 1 || !parsed[0].is_list)
    throw SExprError("malformed model: " + datum);
  for (auto &pair : parsed[0].items) {
    if (!pair.is_list || pair.items.size() != 2 || pair.items[0].is_list)
      throw SExprError("malformed model entry: " + pair.to_string());
    auto it = vars.find(pair.items[0].atom);
    if (it == vars.end())
      throw SExprError("model names unknown variable " + pair.items[0].atom);
    r.model[it->first] = parse_value(pair.items[1], it->second);
  }
  for (auto &[name, sort] : vars)
    if (!r.model.count(name))
      throw SExprError("model lacks a value for " + name);
}

void set_status(SolverResult &r, const std::string &d) {
  r.status = d == "sat"     ? SolverStatus::Sat
             : d == "unsat" ? SolverStatus::Unsat
                            : SolverStatus::Unknown;
}

SolverResult run_stdin(const std::string &text,
                       const std::map<std::string, Sort> &vars,
                       const SolverConfig &cfg,
                       SolverProcess::Clock::time_point deadline) {
  SolverResult r;
  const std::string marker = "(check-sat)\n";
  size_t cut = text.find(marker);
  std::string first =
      cut == std::string::npos ? text : text.substr(0, cut + marker.size());
  std::string rest = cut == std::string::npos ? "" : text.substr(cut + marker.size());

  SolverProcess p(cfg.command);
  auto timed_out = [&] {
    p.kill();
    r.status = SolverStatus::Timeout;
    r.transcript = p.output();
    return r;
  };
  if (!p.write(first, deadline) && SolverProcess::Clock::now() >= deadline)
    return timed_out();
  std::string errors;
  for (;;) {
    auto d = p.read_datum(deadline);
    if (!d) {
      if (SolverProcess::Clock::now() >= deadline)
        return timed_out();
      r.status = SolverStatus::Error;
      auto code = p.finish(deadline);
      r.error = errors.empty() ? "solver exited without an answer" : errors;
      if (code)
        r.error += " (exit status " + std::to_string(*code) + ")";
      r.transcript = p.output();
      return r;
    }
    if (is_status(*d)) {
      set_status(r, *d);
      break;
    }
    errors += (errors.empty() ? "" : "\n") + *d;
  }
  if (!errors.empty()) {
    r.status = SolverStatus::Error;
    r.error = errors;
  } else if (r.status == SolverStatus::Sat && !vars.empty()) {
    if (!p.write(rest, deadline))
      return timed_out();
    auto d = p.read_datum(deadline);
    if (!d) {
      if (SolverProcess::Clock::now() >= deadline)
        return timed_out();
      r.status = SolverStatus::Error;
      r.error = "solver exited before reporting the model";
    } else {
      try {
        read_model(*d, vars, r);
      } catch (const SExprError &e) {
        r.status = SolverStatus::Error;
        r.error = e.what();
        r.model.clear();
      }
    }
  }
  p.write("(exit)\n", deadline);
  p.finish(std::min(deadline, SolverProcess::Clock::now() +
                                  std::chrono::seconds(1)));
  r.transcript = p.output();
  return r;
}

SolverResult run_file(const std::string &text,
                      const std::map<std::string, Sort> &vars,
                      const SolverConfig &cfg,
                      SolverProcess::Clock::time_point deadline) {
  SolverResult r;
  char path[] = "/tmp/fpv-query-XXXXXX.smt2";
  int fd = mkstemps(path, 5);
  if (fd < 0) {
    r.error = std::string("cannot create query file: ") + std::strerror(errno);
    return r;
  }
  std::string full = text + "(exit)\n";
  bool ok = ::write(fd, full.data(), full.size()) ==
            static_cast<ssize_t>(full.size());
  ::close(fd);
  if (!ok) {
    ::unlink(path);
    r.error = "cannot write query file";
    return r;
  }
  {
    SolverProcess p(cfg.command + " " + path);
    p.close_input();
    auto exit_code = p.finish(deadline);
    r.transcript = p.output();
    if (!exit_code) {
      ::unlink(path);
      r.status = SolverStatus::Timeout;
      return r;
    }
  }
  ::unlink(path);
  std::vector<SExpr> out;
  try {
    out = parse_sexprs(r.transcript);
  } catch (const SExprError &e) {
    r.error = e.what();
    return r;
  }
  size_t i = 0;
  std::string errors;
  while (i < out.size() && !(out[i].is("sat") || out[i].is("unsat") ||
                             out[i].is("unknown")))
    errors += (errors.empty() ? "" : "\n") + out[i++].to_string();
  if (i == out.size() || !errors.empty()) {
    r.error = errors.empty() ? "solver printed no answer" : errors;
    return r;
  }
  set_status(r, out[i].atom);
  if (r.status == SolverStatus::Sat && !vars.empty()) {
    try {
      if (i + 1 >= out.size())
        throw SExprError("solver printed no model");
      read_model(out[i + 1].to_string(), vars, r);
    } catch (const SExprError &e) {
      r.status = SolverStatus::Error;
      r.error = e.what();
      r.model.clear();
    }
  }
  return r;
}

} // namespace

SolverResult solve_text(const std::string &text,
                        const std::map<std::string, Sort> &vars,
                        const SolverConfig &cfg) {
  auto start = SolverProcess::Clock::now();
  auto deadline = start + std::chrono::duration_cast<SolverProcess::Clock::duration>(
                              std::chrono::duration<double>(cfg.timeout_s));
  SolverResult r;
  try {
    r = cfg.input == SolverConfig::Input::Stdin
            ? run_stdin(text, vars, cfg, deadline)
            : run_file(text, vars, cfg, deadline);
  } catch (const std::exception &e) {
    r.status = SolverStatus::Error;
    r.error = e.what();
  }
  if (r.status != SolverStatus::Sat)
    r.model.clear();
  r.seconds =
      std::chrono::duration<double>(SolverProcess::Clock::now() - start).count();
  return r;
}

SolverResult solve(const QueryScript &q, const SolverConfig &cfg) {
  std::map<std::string, Sort> vars;
  for (auto &v : q.free_vars)
    vars.emplace(v.name, v.sort);
  return solve_text(emit(q), vars, cfg);
}

} // namespace fpv
