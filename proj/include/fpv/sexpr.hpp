#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fpv {

/// Solver-output datum. Quoted symbols `|x|` are stored without the bars.
struct SExpr {
  bool is_list = false;
  std::string atom;
  std::vector<SExpr> items;

  bool is(std::string_view a) const { return !is_list && atom == a; }
  std::string to_string() const;
};

class SExprError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Every top-level datum in `text`; throws `SExprError` when unbalanced.
std::vector<SExpr> parse_sexprs(std::string_view text);

/// Index one past the first complete datum at or after `pos`, or nullopt if
/// the text ends before one is complete.
std::optional<size_t> datum_end(std::string_view text, size_t pos = 0);

} // namespace fpv
