#include "fpv/sexpr.hpp"

#include <cctype>

namespace fpv {

namespace {

bool is_delim(char c) {
  return std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' ||
         c == ';' || c == '"' || c == '|';
}

/// Skips whitespace and comments. Returns false at end of text.
bool skip_blank(std::string_view s, size_t &i) {
  while (i < s.size()) {
    if (std::isspace(static_cast<unsigned char>(s[i]))) {
      ++i;
    } else if (s[i] == ';') {
      while (i < s.size() && s[i] != '\n')
        ++i;
    } else {
      return true;
    }
  }
  return false;
}

/// Scans one token (not a paren) starting at i. Returns false if cut off.
bool scan_token(std::string_view s, size_t &i, std::string *out) {
  if (s[i] == '|') {
    size_t close = s.find('|', i + 1);
    if (close == std::string_view::npos)
      return false;
    if (out)
      *out = std::string(s.substr(i + 1, close - i - 1));
    i = close + 1;
    return true;
  }
  if (s[i] == '"') {
    size_t j = i + 1;
    for (;;) {
      if (j >= s.size())
        return false;
      if (s[j] == '"') {
        if (j + 1 < s.size() && s[j + 1] == '"') {
          j += 2;
          continue;
        }
        break;
      }
      ++j;
    }
    if (out)
      *out = std::string(s.substr(i, j + 1 - i));
    i = j + 1;
    return true;
  }
  size_t j = i;
  while (j < s.size() && !is_delim(s[j]))
    ++j;
  if (out)
    *out = std::string(s.substr(i, j - i));
  i = j;
  return true;
}

} // namespace

std::string SExpr::to_string() const {
  if (!is_list)
    return atom;
  std::string s = "(";
  for (size_t i = 0; i < items.size(); ++i)
    s += (i ? " " : "") + items[i].to_string();
  return s + ")";
}

std::optional<size_t> datum_end(std::string_view s, size_t i) {
  if (!skip_blank(s, i))
    return std::nullopt;
  int depth = 0;
  do {
    if (!skip_blank(s, i))
      return std::nullopt;
    char c = s[i];
    if (c == '(') {
      ++depth;
      ++i;
    } else if (c == ')') {
      --depth;
      ++i;
    } else {
      size_t before = i;
      if (!scan_token(s, i, nullptr))
        return std::nullopt;
      // A bare atom at top level is complete only once a delimiter follows.
      if (depth == 0 && s[before] != '|' && s[before] != '"' && i == s.size())
        return std::nullopt;
    }
  } while (depth > 0);
  return i;
}

std::vector<SExpr> parse_sexprs(std::string_view s) {
  std::vector<SExpr> top;
  std::vector<SExpr> stack;
  size_t i = 0;
  while (skip_blank(s, i)) {
    char c = s[i];
    if (c == '(') {
      stack.push_back(SExpr{true, {}, {}});
      ++i;
      continue;
    }
    SExpr done;
    if (c == ')') {
      if (stack.empty())
        throw SExprError("unbalanced ')' at offset " + std::to_string(i));
      done = std::move(stack.back());
      stack.pop_back();
      ++i;
    } else {
      std::string tok;
      if (!scan_token(s, i, &tok))
        throw SExprError("unterminated token at offset " + std::to_string(i));
      done.atom = std::move(tok);
    }
    (stack.empty() ? top : stack.back().items).push_back(std::move(done));
  }
  if (!stack.empty())
    throw SExprError("unbalanced '(' at end of input");
  return top;
}

} // namespace fpv
