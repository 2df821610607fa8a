#include "fpv/parser.hpp"
#include "fpv/condcode.hpp"
#include "fpv/minifloat.hpp"
#include "fpv/predicates.hpp"

#include <cctype>
#include <map>
#include <set>
#include <sstream>

namespace fpv {

ParseError::ParseError(int line, int column, const std::string &message)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) +
                         ": " + message),
      line_(line), column_(column), message_(message) {}

namespace {

enum class Tok { Reg, Ident, Number, Comma, LParen, RParen, EqEq, AndAnd,
                 Assign, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int column = 0;
};

struct Line {
  int number = 0;
  std::string text; // comment stripped
};

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
}
bool digit(char c) { return c >= '0' && c <= '9'; }

std::vector<Token> tokenize(const Line &line) {
  std::vector<Token> out;
  const std::string &s = line.text;
  size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    int col = int(i) + 1;
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '%') {
      size_t j = i + 1;
      while (j < s.size() && ident_char(s[j]))
        ++j;
      if (j == i + 1)
        throw ParseError(line.number, col, "expected register name after '%'");
      out.push_back({Tok::Reg, s.substr(i, j - i), col});
      i = j;
      continue;
    }
    bool signed_num = (c == '-' || c == '+') && i + 1 < s.size() &&
                      (digit(s[i + 1]) || s[i + 1] == '.' ||
                       s.compare(i + 1, 3, "inf") == 0 ||
                       s.compare(i + 1, 3, "nan") == 0);
    if (digit(c) || (c == '.' && i + 1 < s.size() && digit(s[i + 1])) ||
        signed_num) {
      size_t j = i + (signed_num ? 1 : 0);
      if (s.compare(j, 3, "inf") == 0 || s.compare(j, 3, "nan") == 0) {
        j += 3;
      } else {
        while (j < s.size() && (digit(s[j]) || s[j] == '.'))
          ++j;
        if (j < s.size() && (s[j] == 'e' || s[j] == 'E')) {
          size_t k = j + 1;
          if (k < s.size() && (s[k] == '-' || s[k] == '+'))
            ++k;
          if (k < s.size() && digit(s[k])) {
            j = k;
            while (j < s.size() && digit(s[j]))
              ++j;
          }
        }
      }
      if (j < s.size() && ident_char(s[j]))
        throw ParseError(line.number, col, "malformed number");
      out.push_back({Tok::Number, s.substr(i, j - i), col});
      i = j;
      continue;
    }
    if (ident_start(c)) {
      size_t j = i;
      while (j < s.size() && ident_char(s[j]))
        ++j;
      out.push_back({Tok::Ident, s.substr(i, j - i), col});
      i = j;
      continue;
    }
    if (c == ',') {
      out.push_back({Tok::Comma, ",", col});
    } else if (c == '(') {
      out.push_back({Tok::LParen, "(", col});
    } else if (c == ')') {
      out.push_back({Tok::RParen, ")", col});
    } else if (c == '=' && i + 1 < s.size() && s[i + 1] == '=') {
      out.push_back({Tok::EqEq, "==", col});
      ++i;
    } else if (c == '&' && i + 1 < s.size() && s[i + 1] == '&') {
      out.push_back({Tok::AndAnd, "&&", col});
      ++i;
    } else if (c == '=') {
      out.push_back({Tok::Assign, "=", col});
    } else {
      std::string shown = std::isprint(static_cast<unsigned char>(c))
                              ? std::string(1, c)
                              : "\\x" + std::to_string(int(uint8_t(c)));
      throw ParseError(line.number, col, "unexpected character '" + shown + "'");
    }
    ++i;
  }
  out.push_back({Tok::End, "", int(s.size()) + 1});
  return out;
}

bool is_integer_literal(std::string_view t) {
  if (!t.empty() && (t[0] == '-' || t[0] == '+'))
    t.remove_prefix(1);
  if (t.empty())
    return false;
  for (char c : t)
    if (!digit(c))
      return false;
  return true;
}

bool is_const_name(std::string_view s) { return !s.empty() && s[0] == 'C'; }

bool is_code_symbol(std::string_view s) {
  if (s.size() < 2 || s[0] != 'C')
    return false;
  for (size_t i = 1; i < s.size(); ++i)
    if (!digit(s[i]))
      return false;
  return true;
}

bool is_flag(std::string_view s) {
  return s == "nnan" || s == "ninf" || s == "nsz";
}

// Cursor over one line's tokens.
struct Cursor {
  const std::vector<Token> &toks;
  int line;
  size_t pos = 0;

  const Token &peek(size_t ahead = 0) const {
    size_t i = std::min(pos + ahead, toks.size() - 1);
    return toks[i];
  }
  const Token &next() {
    const Token &t = peek();
    if (pos < toks.size() - 1)
      ++pos;
    return t;
  }
  bool accept(Tok k) {
    if (peek().kind != k)
      return false;
    next();
    return true;
  }
  const Token &expect(Tok k, const char *what) {
    if (peek().kind != k)
      fail(peek(), std::string("expected ") + what);
    return next();
  }
  [[noreturn]] void fail(const Token &t, const std::string &msg) const {
    throw ParseError(line, t.column, msg);
  }
};

// Constant expression as written, resolved once every register is known.
struct RawExpr {
  Token head;            // operand token or function name
  bool call = false;
  std::vector<RawExpr> args;
};

struct RawPred {
  PredExpr::Kind kind = PredExpr::Kind::And;
  Token head;
  std::vector<RawExpr> args;
  std::vector<RawPred> children;
};

class BlockParser {
public:
  explicit BlockParser(const std::vector<Line> &lines) : lines_(lines) {}

  Transform parse() {
    size_t i = 0;
    std::optional<Line> pre_line;
    for (; i < lines_.size(); ++i) {
      auto header = header_of(lines_[i]);
      if (!header)
        break;
      if (header->first == "Name") {
        t_.name = header->second;
      } else {
        if (pre_line)
          throw ParseError(lines_[i].number, 1, "duplicate precondition");
        pre_line = Line{lines_[i].number, header->second};
        pre_offset_ = int(lines_[i].text.size() - header->second.size());
      }
    }

    size_t arrow = i;
    while (arrow < lines_.size() && trim(lines_[arrow].text) != "=>")
      ++arrow;
    if (arrow == lines_.size())
      throw ParseError(lines_.back().number, 1, "missing '=>' delimiter");
    if (arrow == i)
      throw ParseError(lines_[arrow].number, 1, "empty source template");
    if (arrow + 1 == lines_.size())
      throw ParseError(lines_[arrow].number, 1, "empty target template");

    for (size_t k = i; k < arrow; ++k)
      declared_source_.insert(first_register(lines_[k]));
    for (size_t k = i; k < arrow; ++k)
      parse_binding(lines_[k], Side::Source);
    for (size_t k = arrow + 1; k < lines_.size(); ++k)
      parse_binding(lines_[k], Side::Target);

    t_.root = t_.source.back().reg;
    if (t_.target.back().reg != t_.root)
      throw ParseError(last_target_line_, 1,
                       "target root '" + t_.target.back().reg +
                           "' does not match source root '" + t_.root + "'");

    if (pre_line)
      t_.pre = parse_precondition(*pre_line);
    return std::move(t_);
  }

private:
  static std::string trim(std::string_view s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
      return "";
    size_t e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
  }

  static std::optional<std::pair<std::string, std::string>>
  header_of(const Line &l) {
    std::string s = trim(l.text);
    for (auto key : {"Name:", "Pre:", "Precondition:"}) {
      std::string k = key;
      if (s.compare(0, k.size(), k) == 0) {
        std::string rest = trim(std::string_view(s).substr(k.size()));
        return std::make_pair(k == "Name:" ? std::string("Name")
                                           : std::string("Pre"),
                              rest);
      }
    }
    return std::nullopt;
  }

  static std::string first_register(const Line &l) {
    std::string s = trim(l.text);
    if (s.empty() || s[0] != '%')
      return "";
    size_t j = 1;
    while (j < s.size() && ident_char(s[j]))
      ++j;
    return s.substr(0, j);
  }

  NodeId add_node(ExprNode n) {
    t_.nodes.push_back(std::move(n));
    return NodeId(t_.nodes.size() - 1);
  }

  NodeId named_leaf(NodeKind kind, const std::string &name) {
    auto &table = kind == NodeKind::Input ? inputs_ : constants_;
    if (auto it = table.find(name); it != table.end())
      return it->second;
    ExprNode n;
    n.kind = kind;
    n.name = name;
    NodeId id = add_node(std::move(n));
    table.emplace(name, id);
    return id;
  }

  NodeId literal(const Token &tok, Cursor &c) {
    if (!is_integer_literal(tok.text) &&
        !MiniFloat::from_decimal(double_format(), tok.text))
      c.fail(tok, "malformed literal '" + tok.text + "'");
    ExprNode n;
    n.kind = NodeKind::Literal;
    n.name = tok.text;
    return add_node(std::move(n));
  }

  NodeId resolve_register(const Token &tok, Side side, Cursor &c) {
    const std::string &r = tok.text;
    if (side == Side::Source) {
      if (auto it = source_regs_.find(r); it != source_regs_.end())
        return it->second;
      if (declared_source_.count(r))
        c.fail(tok, "register '" + r + "' used before its definition");
      return named_leaf(NodeKind::Input, r);
    }
    if (side == Side::Target) {
      if (auto it = target_regs_.find(r); it != target_regs_.end())
        return it->second;
    } else {
      if (auto it = source_regs_.find(r); it != source_regs_.end())
        return it->second;
      if (auto it = target_regs_.find(r); it != target_regs_.end())
        return it->second;
    }
    if (auto it = source_regs_.find(r); it != source_regs_.end())
      return it->second;
    if (auto it = inputs_.find(r); it != inputs_.end())
      return it->second;
    c.fail(tok, "register '" + r + "' is not defined");
  }

  // Operand: register, constant, literal or undef.
  NodeId operand(Cursor &c, Side side) {
    const Token &tok = c.next();
    switch (tok.kind) {
    case Tok::Reg:
      return resolve_register(tok, side, c);
    case Tok::Number:
      return literal(tok, c);
    case Tok::Ident:
      if (tok.text == "nan" || tok.text == "inf")
        return literal(tok, c);
      if (tok.text == "undef") {
        if (side == Side::Precondition)
          c.fail(tok, "undef is not allowed in a precondition");
        ExprNode n;
        n.kind = NodeKind::Undef;
        n.side = side;
        return add_node(std::move(n));
      }
      if (is_const_name(tok.text))
        return named_leaf(NodeKind::ConstSymbol, tok.text);
      c.fail(tok, "unknown operand '" + tok.text + "'");
    default:
      c.fail(tok, "expected operand");
    }
  }

  RawExpr raw_expr(Cursor &c) {
    RawExpr e;
    e.head = c.peek();
    if (e.head.kind == Tok::Ident && c.peek(1).kind == Tok::LParen) {
      c.next();
      c.next();
      e.call = true;
      if (c.peek().kind != Tok::RParen) {
        do {
          e.args.push_back(raw_expr(c));
        } while (c.accept(Tok::Comma));
      }
      c.expect(Tok::RParen, "')'");
      return e;
    }
    if (e.head.kind != Tok::Reg && e.head.kind != Tok::Number &&
        e.head.kind != Tok::Ident)
      c.fail(e.head, "expected constant expression");
    c.next();
    return e;
  }

  NodeId resolve_expr(const RawExpr &e, Side side, Cursor &c) {
    if (!e.call) {
      std::vector<Token> one{e.head, Token{Tok::End, "", e.head.column}};
      Cursor sub{one, c.line};
      return operand(sub, side);
    }
    auto fn = parse_const_fn(e.head.text);
    if (!fn)
      c.fail(e.head, "unknown constant function '" + e.head.text + "'");
    if (e.args.size() != 1)
      c.fail(e.head, "constant function '" + e.head.text +
                         "' takes 1 argument");
    ExprNode n;
    n.kind = NodeKind::ConstExpr;
    n.fn = *fn;
    n.side = side;
    for (auto &a : e.args)
      n.operands.push_back(resolve_expr(a, side, c));
    return add_node(std::move(n));
  }

  void parse_binding(const Line &line, Side side) {
    auto toks = tokenize(line);
    Cursor c{toks, line.number};
    const Token &reg = c.expect(Tok::Reg, "register definition '%name = ...'");
    c.expect(Tok::Assign, "'='");

    auto &regs = side == Side::Source ? source_regs_ : target_regs_;
    if (regs.count(reg.text))
      c.fail(reg, "duplicate definition of '" + reg.text + "'");
    if (side == Side::Target) {
      last_target_line_ = line.number;
      if (inputs_.count(reg.text))
        c.fail(reg, "target redefines input '" + reg.text + "'");
    }

    NodeId id;
    const Token &head = c.peek();
    if (head.kind == Tok::Ident && c.peek(1).kind == Tok::LParen &&
        parse_const_fn(head.text)) {
      if (side == Side::Source)
        c.fail(head, "constant expressions are only allowed in the target");
      id = resolve_expr(raw_expr(c), side, c);
    } else if (head.kind == Tok::Ident && parse_opcode(head.text)) {
      id = instruction(c, side);
    } else if (head.kind == Tok::Ident && c.peek(1).kind != Tok::End &&
               !is_const_name(head.text)) {
      c.fail(head, "unknown opcode '" + head.text + "'");
    } else {
      id = operand(c, side);
    }
    if (c.peek().kind != Tok::End)
      c.fail(c.peek(), "unexpected '" + c.peek().text + "'");

    regs.emplace(reg.text, id);
    (side == Side::Source ? t_.source : t_.target).push_back({reg.text, id});
  }

  NodeId instruction(Cursor &c, Side side) {
    const Token &op_tok = c.next();
    ExprNode n;
    n.kind = NodeKind::Instr;
    n.side = side;
    n.op = *parse_opcode(op_tok.text);

    while (c.peek().kind == Tok::Ident && is_flag(c.peek().text)) {
      const Token &f = c.next();
      if (!accepts_fast_math(n.op))
        c.fail(f, "fast-math flag '" + f.text + "' is not allowed on " +
                      op_tok.text);
      (f.text == "nnan" ? n.flags.nnan
                        : f.text == "ninf" ? n.flags.ninf : n.flags.nsz) = true;
    }

    auto try_type = [&](std::optional<Type> &slot) {
      if (c.peek().kind != Tok::Ident)
        return false;
      auto ty = parse_type(c.peek().text);
      if (!ty)
        return false;
      if (slot)
        c.fail(c.peek(), "duplicate type annotation");
      slot = ty;
      c.next();
      return true;
    };
    bool operand_typed = n.op == Opcode::fcmp || is_conversion(n.op);

    if (n.op == Opcode::fcmp) {
      try_type(n.operand_type);
      const Token &cc = c.peek();
      if (cc.kind != Tok::Ident ||
          (!parse_cond_code(cc.text) && !is_code_symbol(cc.text)))
        c.fail(cc, "expected condition code after fcmp");
      n.cond = cc.text;
      c.next();
      try_type(n.operand_type);
    } else {
      try_type(operand_typed ? n.operand_type : n.type);
    }

    if (c.peek().kind == Tok::Ident && !is_const_name(c.peek().text) &&
        c.peek().text != "undef" && c.peek().text != "nan" &&
        c.peek().text != "inf")
      c.fail(c.peek(), is_flag(c.peek().text) || parse_type(c.peek().text)
                           ? "misplaced '" + c.peek().text + "'"
                           : "unknown flag '" + c.peek().text + "'");

    if (c.peek().kind != Tok::End) {
      do {
        n.operands.push_back(operand(c, side));
      } while (c.accept(Tok::Comma));
    }
    if (is_conversion(n.op) && c.peek().kind == Tok::Ident &&
        c.peek().text == "to") {
      c.next();
      if (!try_type(n.type))
        c.fail(c.peek(), "expected type after 'to'");
    }
    if (n.operands.size() != arity(n.op))
      c.fail(op_tok, std::string(op_tok.text) + " expects " +
                         std::to_string(arity(n.op)) + " operand(s), got " +
                         std::to_string(n.operands.size()));
    return add_node(std::move(n));
  }

  RawPred raw_conjunction(Cursor &c) {
    RawPred p;
    do {
      RawPred atom = raw_atom(c);
      if (atom.kind == PredExpr::Kind::And)
        for (auto &ch : atom.children)
          p.children.push_back(std::move(ch));
      else
        p.children.push_back(std::move(atom));
    } while (c.accept(Tok::AndAnd));
    return p;
  }

  RawPred raw_atom(Cursor &c) {
    if (c.accept(Tok::LParen)) {
      RawPred inner = raw_conjunction(c);
      c.expect(Tok::RParen, "')'");
      return inner;
    }
    const Token &head = c.peek();
    if (head.kind == Tok::Ident && find_predicate(head.text)) {
      RawPred p;
      p.kind = PredExpr::Kind::Call;
      p.head = c.next();
      c.expect(Tok::LParen, "'('");
      if (c.peek().kind != Tok::RParen) {
        do {
          p.args.push_back(raw_expr(c));
        } while (c.accept(Tok::Comma));
      }
      c.expect(Tok::RParen, "')'");
      return p;
    }
    if (head.kind == Tok::Ident && c.peek(1).kind == Tok::LParen &&
        !parse_const_fn(head.text))
      c.fail(head, "unknown predicate '" + head.text + "'");
    RawPred p;
    p.kind = PredExpr::Kind::Equal;
    p.head = head;
    p.args.push_back(raw_expr(c));
    c.expect(Tok::EqEq, "'==' or a predicate call");
    p.args.push_back(raw_expr(c));
    return p;
  }

  PredExpr resolve_pred(const RawPred &raw, Cursor &c) {
    PredExpr p;
    p.kind = raw.kind;
    if (raw.kind == PredExpr::Kind::And) {
      for (auto &ch : raw.children)
        p.children.push_back(resolve_pred(ch, c));
      return p;
    }
    if (raw.kind == PredExpr::Kind::Equal) {
      for (auto &a : raw.args)
        p.args.push_back({resolve_expr(a, Side::Precondition, c), ""});
      return p;
    }
    const PredicateInfo *info = find_predicate(raw.head.text);
    p.name = raw.head.text;
    if (raw.args.size() != info->arity)
      c.fail(raw.head, p.name + " expects " + std::to_string(info->arity) +
                           " argument(s), got " +
                           std::to_string(raw.args.size()));
    auto codes = t_.symbolic_codes();
    for (auto &a : raw.args) {
      if (info->role == PredicateRole::CodeFilter) {
        if (a.call || a.head.kind != Tok::Ident ||
            std::find(codes.begin(), codes.end(), a.head.text) == codes.end())
          c.fail(a.head, p.name + " expects a symbolic condition code, got '" +
                             a.head.text + "'");
        p.args.push_back({std::nullopt, a.head.text});
      } else {
        p.args.push_back({resolve_expr(a, Side::Precondition, c), ""});
      }
    }
    return p;
  }

  PredExpr parse_precondition(const Line &line) {
    Line shifted = line;
    auto toks = tokenize(shifted);
    for (auto &t : toks)
      t.column += pre_offset_;
    Cursor c{toks, line.number};
    if (c.peek().kind == Tok::End)
      return {};
    RawPred raw = raw_conjunction(c);
    if (c.peek().kind != Tok::End)
      c.fail(c.peek(), "unexpected '" + c.peek().text + "' in precondition");
    PredExpr p = resolve_pred(raw, c);
    if (p.children.size() == 1 && p.children[0].kind != PredExpr::Kind::And) {
      PredExpr wrapped;
      wrapped.children.push_back(std::move(p.children[0]));
      return wrapped;
    }
    return p;
  }

  const std::vector<Line> &lines_;
  Transform t_;
  std::map<std::string, NodeId> inputs_, constants_, source_regs_,
      target_regs_;
  std::set<std::string> declared_source_;
  int last_target_line_ = 0;
  int pre_offset_ = 0;
};

std::vector<std::vector<Line>> split_blocks(std::string_view text) {
  std::vector<std::vector<Line>> blocks(1);
  int number = 0;
  size_t start = 0;
  while (start <= text.size()) {
    size_t end = text.find('\n', start);
    if (end == std::string_view::npos)
      end = text.size();
    std::string raw(text.substr(start, end - start));
    ++number;
    start = end + 1;

    bool blank = raw.find_first_not_of(" \t\r") == std::string::npos;
    if (blank) {
      if (!blocks.back().empty())
        blocks.emplace_back();
    } else {
      std::string body = raw.substr(0, raw.find(';'));
      if (body.find_first_not_of(" \t\r") != std::string::npos)
        blocks.back().push_back({number, body});
    }
    if (end == text.size())
      break;
  }
  if (blocks.back().empty())
    blocks.pop_back();
  return blocks;
}

// Reference to a node as it appears in operand position.
class Printer {
public:
  explicit Printer(const Transform &t) : t_(t) {
    for (auto *side : {&t.source, &t.target})
      for (auto &b : *side)
        canonical_.emplace(b.node, b.reg);
  }

  std::string ref(NodeId id) const {
    const ExprNode &n = t_.node(id);
    if (n.kind == NodeKind::Input || n.kind == NodeKind::ConstSymbol)
      return n.name;
    if (auto it = canonical_.find(id); it != canonical_.end())
      return it->second;
    return definition(id);
  }

  std::string definition(NodeId id) const {
    const ExprNode &n = t_.node(id);
    switch (n.kind) {
    case NodeKind::Input:
    case NodeKind::ConstSymbol:
    case NodeKind::Literal:
      return n.name;
    case NodeKind::Undef:
      return "undef";
    case NodeKind::ConstExpr: {
      std::string s = std::string(to_string(n.fn)) + "(";
      for (size_t i = 0; i < n.operands.size(); ++i)
        s += (i ? ", " : "") + ref(n.operands[i]);
      return s + ")";
    }
    case NodeKind::Instr:
      break;
    }
    std::string s(to_string(n.op));
    if (!n.flags.empty())
      s += " " + n.flags.to_string();
    if (n.op == Opcode::fcmp) {
      s += " " + n.cond;
      if (n.operand_type)
        s += " " + n.operand_type->to_string();
    } else if (is_conversion(n.op)) {
      if (n.operand_type)
        s += " " + n.operand_type->to_string();
    } else if (n.type) {
      s += " " + n.type->to_string();
    }
    for (size_t i = 0; i < n.operands.size(); ++i)
      s += (i ? ", " : " ") + ref(n.operands[i]);
    if (is_conversion(n.op) && n.type)
      s += " to " + n.type->to_string();
    return s;
  }

  std::string binding(const Binding &b) const {
    auto it = canonical_.find(b.node);
    const ExprNode &n = t_.node(b.node);
    bool defines = n.kind != NodeKind::Input &&
                   n.kind != NodeKind::ConstSymbol && it->second == b.reg;
    return b.reg + " = " + (defines ? definition(b.node) : ref(b.node));
  }

  std::string pred(const PredExpr &p) const {
    switch (p.kind) {
    case PredExpr::Kind::And: {
      std::string s;
      for (size_t i = 0; i < p.children.size(); ++i)
        s += (i ? " && " : "") + pred(p.children[i]);
      return s;
    }
    case PredExpr::Kind::Equal:
      return arg(p.args[0]) + " == " + arg(p.args[1]);
    case PredExpr::Kind::Call: {
      std::string s = p.name + "(";
      for (size_t i = 0; i < p.args.size(); ++i)
        s += (i ? ", " : "") + arg(p.args[i]);
      return s + ")";
    }
    }
    return "";
  }

private:
  std::string arg(const PredExpr::Arg &a) const {
    return a.node ? ref(*a.node) : a.code;
  }

  const Transform &t_;
  std::map<NodeId, std::string> canonical_;
};

} // namespace

std::vector<ParsedBlock> parse_blocks(std::string_view text) {
  std::vector<ParsedBlock> out;
  for (auto &lines : split_blocks(text)) {
    ParsedBlock pb;
    pb.first_line = lines.front().number;
    for (auto &l : lines) {
      auto s = l.text;
      auto b = s.find_first_not_of(" \t");
      if (b != std::string::npos && s.compare(b, 5, "Name:") == 0) {
        auto rest = s.substr(b + 5);
        auto rb = rest.find_first_not_of(" \t");
        auto re = rest.find_last_not_of(" \t\r");
        pb.name = rb == std::string::npos ? "" : rest.substr(rb, re - rb + 1);
        break;
      }
    }
    try {
      pb.transform = BlockParser(lines).parse();
    } catch (const ParseError &e) {
      pb.error = e;
    }
    out.push_back(std::move(pb));
  }
  return out;
}

std::vector<Transform> parse_corpus(std::string_view text) {
  std::vector<Transform> out;
  for (auto &b : parse_blocks(text)) {
    if (b.error)
      throw *b.error;
    out.push_back(std::move(*b.transform));
  }
  return out;
}

std::string pretty_print(const Transform &t) {
  Printer pr(t);
  std::ostringstream os;
  if (!t.name.empty())
    os << "Name: " << t.name << "\n";
  if (!t.pre.is_true())
    os << "Pre: " << pr.pred(t.pre) << "\n";
  for (auto &b : t.source)
    os << pr.binding(b) << "\n";
  os << "=>\n";
  for (auto &b : t.target)
    os << pr.binding(b) << "\n";
  return os.str();
}

std::string pretty_print(const std::vector<Transform> &ts) {
  std::string out;
  for (size_t i = 0; i < ts.size(); ++i) {
    if (i)
      out += "\n";
    out += pretty_print(ts[i]);
  }
  return out;
}

} // namespace fpv
