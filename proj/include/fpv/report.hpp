#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace fpv {

enum class InstanceStatus { Valid, Invalid, Timeout, Unknown, Error };
enum class TransformStatus { Correct, Incorrect, Unverified, Unknown, Error };

std::string_view to_string(InstanceStatus s);
std::string_view to_string(TransformStatus s);
std::optional<InstanceStatus> parse_instance_status(std::string_view s);
std::optional<TransformStatus> parse_transform_status(std::string_view s);

/// One named value of a counterexample, as decimal and as bit fields.
struct CexValue {
  std::string name;
  std::string type;
  std::string value;
  std::string bits;
  friend bool operator==(const CexValue &, const CexValue &) = default;
};

struct Counterexample {
  std::vector<CexValue> inputs;  // inputs and constants
  std::vector<CexValue> choices; // free undef/fast-math choices
  std::optional<CexValue> source; // absent when it depends on source undef
  std::optional<CexValue> target;
  std::string replay; // confirmed | refuted | unsupported
  std::string replay_note;
  friend bool operator==(const Counterexample &, const Counterexample &) =
      default;
};

struct InstanceResult {
  std::vector<std::pair<std::string, std::string>> types;
  std::map<std::string, std::string> codes;
  InstanceStatus status = InstanceStatus::Error;
  double seconds = 0;
  bool quantified = false;
  std::optional<Counterexample> counterexample;
  std::string error;
  friend bool operator==(const InstanceResult &, const InstanceResult &) =
      default;
};

/// Solver verdicts at the small widths compared with the brute-force oracle.
struct CrossCheck {
  unsigned instances = 0;
  unsigned agreed = 0;
  std::vector<std::string> skipped;
  std::vector<std::string> disagreements;
  friend bool operator==(const CrossCheck &, const CrossCheck &) = default;
};

struct TransformReport {
  std::string name;
  int line = 0;
  TransformStatus status = TransformStatus::Error;
  std::string error;
  std::vector<InstanceResult> instances;
  std::optional<CrossCheck> cross_check;
  friend bool operator==(const TransformReport &, const TransformReport &) =
      default;
};

struct FileReport {
  std::string path;
  std::string error; // unreadable file
  std::vector<TransformReport> transforms;
  friend bool operator==(const FileReport &, const FileReport &) = default;
};

struct ReportConfig {
  double timeout_s = 300;
  std::string solver;
  std::vector<std::string> fp_formats;
  std::vector<unsigned> int_widths;
  bool brute_force = false;
  friend bool operator==(const ReportConfig &, const ReportConfig &) = default;
};

struct Report {
  int schema_version = 1;
  std::string tool = "fpv";
  std::string version = "0.1.0";
  ReportConfig config;
  std::vector<FileReport> files;
  friend bool operator==(const Report &, const Report &) = default;
};

struct Counts {
  unsigned correct = 0, incorrect = 0, unverified = 0, unknown = 0, errors = 0;
  unsigned valid = 0, invalid = 0, timeout = 0, unknown_instances = 0,
           error_instances = 0;

  unsigned transforms() const {
    return correct + incorrect + unverified + unknown + errors;
  }
  Counts &operator+=(const Counts &o);
};

Counts count(const FileReport &f);
Counts count(const Report &r);

/// Transform status from its instances: any Invalid makes it incorrect,
/// then errors, then timeouts (unverified), then unknowns; correct needs at
/// least one instance and all of them Valid.
TransformStatus summarize(const std::vector<InstanceResult> &instances);

enum class ReportFormat { Text, Json };

std::string render(const Report &r, ReportFormat format);

/// Inverse of the JSON rendering. Throws `std::runtime_error`.
Report parse_report_json(std::string_view text);

/// 0 when everything verified; 1 when some instance is Invalid; 3 on any
/// error (solver, parse, typing, oracle disagreement); 2 when the only
/// shortfall is timeouts or unknown answers. Invalid takes precedence.
int exit_code(const Report &r);

} // namespace fpv
