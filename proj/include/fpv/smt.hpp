#pragma once

#include "fpv/fpsem.hpp"
#include "fpv/sexpr.hpp"
#include "fpv/term.hpp"

#include <chrono>
#include <map>
#include <optional>
#include <string>
#include <sys/types.h>

namespace fpv {

/// SMT-LIB text of a term; variables are written `|name|`, and subterms
/// with several parents are bound once by `let`.
std::string render_term(const Term &t);

/// Complete solver script: header comments, logic, declarations, one
/// assertion, `(check-sat)` and, when there are free variables,
/// `(get-value ...)`. Byte-identical for identical queries.
std::string emit(const QueryScript &q);

/// Logic the script declares: QF_FPBV, or FPBV once quantifiers appear.
std::string logic_of(const QueryScript &q);

struct ModelValue {
  Sort sort;
  uint64_t bits = 0;
  friend bool operator==(const ModelValue &, const ModelValue &) = default;
};

/// Accepts `(fp #b. #b.. #b...)`, `(_ +zero e s)` and the other named FP
/// constants, `((_ to_fp e s) #x..)`, `#b..`, `#x..`, `(_ bvN w)`, `true`
/// and `false`. NaNs come back canonical. Throws `SExprError`.
ModelValue parse_value(const SExpr &e, const Sort &expected);

/// `(fp #b0 #b01111 #b0000000000)`, `#b00010010`, `true`.
std::string render_value(const ModelValue &v);

enum class SolverStatus { Sat, Unsat, Unknown, Timeout, Error };

std::string_view to_string(SolverStatus s);

struct SolverResult {
  SolverStatus status = SolverStatus::Error;
  std::map<std::string, ModelValue> model; // non-empty only when Sat
  std::string transcript;
  std::string error;
  double seconds = 0;
};

struct SolverConfig {
  /// Run through `/bin/sh -c`. In file mode the script path is appended.
  std::string command = "z3 -in";
  double timeout_s = 300;
  enum class Input { Stdin, File } input = Input::Stdin;
};

/// $FPV_SOLVER if set, else "z3 -in".
std::string default_solver_command();

/// Runs one query in a fresh solver process. On sat the model of every
/// variable declared in `q` is parsed.
SolverResult solve(const QueryScript &q, const SolverConfig &cfg);

/// Same for raw text. `vars` gives the sorts of the variables whose values
/// `text` requests.
SolverResult solve_text(const std::string &text,
                        const std::map<std::string, Sort> &vars,
                        const SolverConfig &cfg);

/// A child process talking over pipes, killed with its whole process group
/// on destruction.
class SolverProcess {
public:
  using Clock = std::chrono::steady_clock;

  explicit SolverProcess(const std::string &command);
  ~SolverProcess();
  SolverProcess(const SolverProcess &) = delete;
  SolverProcess &operator=(const SolverProcess &) = delete;

  /// False on deadline expiry or a closed pipe.
  bool write(const std::string &text, Clock::time_point deadline);
  /// The next top-level datum of the output; nullopt on deadline expiry or
  /// end of output.
  std::optional<std::string> read_datum(Clock::time_point deadline);
  void close_input();
  /// Waits for exit until `deadline`, then kills. Returns the exit status
  /// when the process exited by itself.
  std::optional<int> finish(Clock::time_point deadline);
  void kill();

  bool eof() const { return eof_; }
  const std::string &output() const { return out_; }

private:
  bool pump(Clock::time_point deadline, bool want_write);

  pid_t pid_ = -1;
  int in_ = -1, out_fd_ = -1;
  std::string out_;
  size_t consumed_ = 0;
  std::string pending_;
  bool eof_ = false;
  bool reaped_ = false;
};

} // namespace fpv
