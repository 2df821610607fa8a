#pragma once

#include "fpv/format.hpp"
#include "fpv/oracle.hpp"
#include "fpv/report.hpp"
#include "fpv/smt.hpp"

#include <string>
#include <vector>

namespace fpv {

struct VerifyConfig {
  WidthConfig widths;
  SolverConfig solver;
  unsigned jobs = 1;
  /// Also rerun every transform at fp8 with i4/i8 through the oracle.
  bool brute_force = false;
  /// Write each query and its solver transcript here when non-empty.
  std::string dump_dir;
  uint64_t oracle_budget = default_oracle_budget;
};

/// Widths of the oracle cross-check.
WidthConfig brute_force_widths();

/// Verifies every transform of every file. Instances run on `cfg.jobs`
/// threads; the report does not depend on scheduling.
Report verify_files(const std::vector<std::string> &paths,
                    const VerifyConfig &cfg);

/// One file's section of `verify_files`.
FileReport verify_file(const std::string &path, const VerifyConfig &cfg);

/// Same for in-memory corpus text, reported under `label`.
Report verify_text(const std::string &label, const std::string &text,
                   const VerifyConfig &cfg);

} // namespace fpv
