#pragma once

#include "fpv/transform.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fpv {

/// Syntax or semantic error, located at a 1-based line and column.
class ParseError : public std::runtime_error {
public:
  ParseError(int line, int column, const std::string &message);

  int line() const { return line_; }
  int column() const { return column_; }
  const std::string &message() const { return message_; }

private:
  int line_;
  int column_;
  std::string message_;
};

/// Outcome of parsing one blank-line-separated block.
struct ParsedBlock {
  std::string name;
  int first_line = 0;
  std::optional<Transform> transform;
  std::optional<ParseError> error;
};

/// Parses every block independently, so one bad transform does not hide the
/// rest of the file.
std::vector<ParsedBlock> parse_blocks(std::string_view text);

/// Parses a whole corpus; throws the first `ParseError`.
std::vector<Transform> parse_corpus(std::string_view text);

/// Canonical DSL text for one transform (no trailing blank line).
std::string pretty_print(const Transform &t);

/// Transforms separated by blank lines.
std::string pretty_print(const std::vector<Transform> &ts);

} // namespace fpv
