#include "wcfg/io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "wcfg/errors.hpp"

namespace wcfg {

namespace {

bool is_bare_stop(char c) {
  return std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' ||
         c == '/' || c == '#' || c == '\'' || c == '~' || c == ':';
}

void append_quoted(std::string& out, const std::string& name) {
  out += '\'';
  for (char c : name) {
    if (c == '\'' || c == '\\') out += '\\';
    out += c;
  }
  out += '\'';
}

void symbol_text(const Symbol& s, bool with_ids, std::string& out);

// Composite operands are parenthesized so nested transforms stay unambiguous.
void part_text(const Symbol& s, bool with_ids, std::string& out) {
  if (s.kind() == Symbol::Kind::frozen || s.kind() == Symbol::Kind::slashed) {
    out += '(';
    symbol_text(s, with_ids, out);
    out += ')';
  } else {
    symbol_text(s, with_ids, out);
  }
}

void symbol_text(const Symbol& s, bool with_ids, std::string& out) {
  switch (s.kind()) {
    case Symbol::Kind::terminal:
      append_quoted(out, s.name());
      return;
    case Symbol::Kind::nonterminal:
      out += s.name();
      return;
    case Symbol::Kind::frozen:
      out += '~';
      part_text(s.base(), with_ids, out);
      break;
    case Symbol::Kind::slashed:
      part_text(s.numerator(), with_ids, out);
      out += '/';
      part_text(s.denominator(), with_ids, out);
      break;
  }
  if (with_ids) {
    out += '#';
    out += std::to_string(s.transform_id());
  }
}

class SymbolParser {
 public:
  SymbolParser(const std::string& text, SymbolTextContext& ctx)
      : text_(text), ctx_(ctx) {}

  Symbol parse() {
    Symbol s = parse_symbol_expr();
    skip_space();
    if (pos_ != text_.size()) fail("trailing characters after symbol");
    return s;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) {
    raise(Errc::parse_error,
          "symbol '" + text_ + "': " + msg + " at offset " +
              std::to_string(pos_));
  }

  void skip_space() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  TransformId parse_optional_id() {
    if (peek() != '#') return ctx_.default_or_fresh();
    ++pos_;
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
    if (pos_ == start) fail("expected digits after '#'");
    TransformId id =
        static_cast<TransformId>(std::stoul(text_.substr(start, pos_ - start)));
    note_transform_id(id);
    return id;
  }

  Symbol parse_symbol_expr() {
    if (peek() == '~') {
      ++pos_;
      Symbol base = parse_part();
      TransformId id = parse_optional_id();
      if (base.is_terminal()) return base;
      return Symbol::frozen(base, id);
    }
    Symbol first = parse_part();
    if (peek() == '/') {
      ++pos_;
      Symbol den = parse_part();
      TransformId id = parse_optional_id();
      return Symbol::slashed(first, den, id);
    }
    return first;
  }

  Symbol parse_part() {
    char c = peek();
    if (c == '(') {
      ++pos_;
      Symbol inner = parse_symbol_expr();
      if (peek() != ')') fail("expected ')'");
      ++pos_;
      return inner;
    }
    if (c == '\'') return Symbol::terminal(parse_quoted());
    if (c == '~') {
      // ~ inside an operand position: parse a nested frozen symbol.
      ++pos_;
      Symbol base = parse_part();
      TransformId id = parse_optional_id();
      if (base.is_terminal()) return base;
      return Symbol::frozen(base, id);
    }
    if (c == '<') return Symbol::nonterminal(parse_angle_token());
    std::size_t start = pos_;
    while (pos_ < text_.size() && !is_bare_stop(text_[pos_])) ++pos_;
    if (pos_ == start) fail("expected a symbol");
    return Symbol::nonterminal(text_.substr(start, pos_ - start));
  }

  std::string parse_quoted() {
    ++pos_;  // opening '
    std::string name;
    while (pos_ < text_.size()) {
      char c = text_[pos_++];
      if (c == '\\' && pos_ < text_.size()) {
        name += text_[pos_++];
      } else if (c == '\'') {
        return name;
      } else {
        name += c;
      }
    }
    fail("unterminated quoted terminal");
  }

  // Angle-quoted names (emitted by the binarizer) are taken verbatim,
  // including the brackets, up to the matching '>'.
  std::string parse_angle_token() {
    std::size_t start = pos_;
    int depth = 0;
    while (pos_ < text_.size()) {
      char c = text_[pos_++];
      if (c == '<') ++depth;
      if (c == '>' && --depth == 0) {
        return text_.substr(start, pos_ - start);
      }
    }
    fail("unterminated '<' token");
  }

  const std::string& text_;
  SymbolTextContext& ctx_;
  std::size_t pos_ = 0;
};

}  // namespace

TransformId SymbolTextContext::default_or_fresh() {
  if (default_id == 0) default_id = fresh_transform_id();
  return default_id;
}

std::string symbol_to_string(const Symbol& s, bool with_ids) {
  std::string out;
  symbol_text(s, with_ids, out);
  return out;
}

Symbol parse_symbol(const std::string& text, SymbolTextContext& ctx) {
  return SymbolParser(text, ctx).parse();
}

std::string weight_to_string(Weight w) {
  if (std::isinf(w)) return w > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), w);
  (void)ec;
  return std::string(buf, end);
}

Weight parse_weight(const std::string& text) {
  Weight w = 0;
  const char* first = text.data();
  const char* last = first + text.size();
  auto [ptr, ec] = std::from_chars(first, last, w);
  if (ec != std::errc() || ptr != last) {
    raise(Errc::parse_error, "bad weight: '" + text + "'");
  }
  return w;
}

namespace {

void collect_ids(const Symbol& s, std::set<TransformId>& ids) {
  switch (s.kind()) {
    case Symbol::Kind::terminal:
    case Symbol::Kind::nonterminal:
      return;
    case Symbol::Kind::frozen:
      ids.insert(s.transform_id());
      collect_ids(s.base(), ids);
      return;
    case Symbol::Kind::slashed:
      ids.insert(s.transform_id());
      collect_ids(s.numerator(), ids);
      collect_ids(s.denominator(), ids);
      return;
  }
}

}  // namespace

std::string write_wcfg(const Grammar& g) {
  std::set<TransformId> ids;
  collect_ids(g.start(), ids);
  for (const Rule& r : g.rules()) {
    collect_ids(r.lhs, ids);
    for (const Symbol& s : r.rhs) collect_ids(s, ids);
  }
  bool with_ids = ids.size() > 1;

  std::string out;
  out += "start: " + symbol_to_string(g.start(), with_ids) + "\n";
  for (const Rule& r : g.rules()) {
    out += weight_to_string(r.weight);
    out += ": ";
    out += symbol_to_string(r.lhs, with_ids);
    out += " ->";
    if (r.rhs.empty()) {
      out += " ε";
    } else {
      for (const Symbol& s : r.rhs) {
        out += ' ';
        out += symbol_to_string(s, with_ids);
      }
    }
    out += '\n';
  }
  return out;
}

namespace {

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

}  // namespace

Grammar parse_wcfg(const std::string& text, const Semiring& semiring) {
  SymbolTextContext ctx;
  std::optional<Symbol> start;
  std::vector<Rule> rules;

  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t i = line.find_first_not_of(" \t\r");
    if (i == std::string::npos) continue;
    if (line[i] == '#') continue;
    std::string body = line.substr(i);
    if (!body.empty() && body.back() == '\r') body.pop_back();

    auto fail = [&](const std::string& msg) {
      raise(Errc::parse_error, "line " + std::to_string(lineno) + ": " + msg);
    };

    if (body.rfind("start:", 0) == 0) {
      if (start) fail("duplicate start header");
      std::string tok = body.substr(6);
      std::size_t b = tok.find_first_not_of(" \t");
      if (b == std::string::npos) fail("missing start symbol");
      start = parse_symbol(tok.substr(b), ctx);
      continue;
    }

    std::size_t arrow = body.find(" -> ");
    std::size_t arrow_len = 4;
    if (arrow == std::string::npos) {
      // allow a rule ending in "->" with empty tail
      if (body.size() >= 3 && body.compare(body.size() - 3, 3, " ->") == 0) {
        arrow = body.size() - 3;
        arrow_len = 3;
      } else {
        fail("expected '->' in rule");
      }
    }
    std::string head = body.substr(0, arrow);
    std::string tail = body.substr(arrow + arrow_len);

    Rule rule;
    rule.weight = semiring.one();
    std::size_t colon = head.find(':');
    if (colon != std::string::npos) {
      rule.weight = parse_weight(head.substr(0, colon));
      head = head.substr(colon + 1);
    }
    auto head_toks = split_ws(head);
    if (head_toks.size() != 1) fail("expected a single left-hand symbol");
    rule.lhs = parse_symbol(head_toks[0], ctx);
    if (!rule.lhs.is_nonterminal()) fail("left-hand side is a terminal");

    for (const std::string& tok : split_ws(tail)) {
      if (tok == "ε") {
        if (!rule.rhs.empty()) fail("ε must stand alone");
        break;
      }
      rule.rhs.push_back(parse_symbol(tok, ctx));
    }
    rules.push_back(std::move(rule));
  }
  if (!start) raise(Errc::parse_error, "missing 'start:' header");
  return Grammar(semiring, *start, std::move(rules));
}

Grammar read_wcfg_file(const std::string& path, const Semiring& semiring) {
  return parse_wcfg(slurp_file(path), semiring);
}

// --- s-expressions ----------------------------------------------------------

namespace {

struct SexpToken {
  enum Type { open, close, atom, quoted } type;
  std::string text;
  int line, col;
};

class SexpLexer {
 public:
  explicit SexpLexer(const std::string& text) : text_(text) {}

  std::optional<SexpToken> next() {
    skip_space();
    if (pos_ >= text_.size()) return std::nullopt;
    int line = line_, col = col_;
    char c = text_[pos_];
    if (c == '(') {
      advance();
      return SexpToken{SexpToken::open, "(", line, col};
    }
    if (c == ')') {
      advance();
      return SexpToken{SexpToken::close, ")", line, col};
    }
    if (c == '\'') {
      advance();
      std::string name;
      while (pos_ < text_.size()) {
        char d = text_[pos_];
        advance();
        if (d == '\\' && pos_ < text_.size()) {
          name += text_[pos_];
          advance();
        } else if (d == '\'') {
          return SexpToken{SexpToken::quoted, name, line, col};
        } else {
          name += d;
        }
      }
      fail(line, col, "unterminated quoted atom");
    }
    std::string tok;
    while (pos_ < text_.size()) {
      char d = text_[pos_];
      if (d == '(' || d == ')' || d == '\'' ||
          std::isspace(static_cast<unsigned char>(d))) {
        break;
      }
      tok += d;
      advance();
    }
    return SexpToken{SexpToken::atom, tok, line, col};
  }

  [[noreturn]] void fail(int line, int col, const std::string& msg) {
    raise(Errc::parse_error, "line " + std::to_string(line) + ", col " +
                                 std::to_string(col) + ": " + msg);
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      advance();
    }
  }
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;
};

class SexpParser {
 public:
  explicit SexpParser(const std::string& text) : lexer_(text) { shift(); }

  bool at_end() const { return !tok_.has_value(); }

  LabeledTree parse_tree() {
    if (!tok_) lexer_.fail(0, 0, "unexpected end of input");
    SexpToken t = *tok_;
    if (t.type == SexpToken::quoted || t.type == SexpToken::atom) {
      shift();
      LabeledTree leaf;
      leaf.label = t.text;
      leaf.leaf = true;
      return leaf;
    }
    if (t.type != SexpToken::open) lexer_.fail(t.line, t.col, "expected '('");
    shift();
    if (!tok_ || (tok_->type != SexpToken::atom &&
                  tok_->type != SexpToken::quoted)) {
      lexer_.fail(t.line, t.col, "expected a node label after '('");
    }
    LabeledTree node;
    node.label = tok_->text;
    shift();
    while (tok_ && tok_->type != SexpToken::close) {
      if (tok_->type == SexpToken::atom && tok_->text == "ε") {
        shift();  // explicit nullary marker
        continue;
      }
      node.children.push_back(parse_tree());
    }
    if (!tok_) lexer_.fail(t.line, t.col, "unbalanced '('");
    shift();  // ')'
    return node;
  }

 private:
  void shift() { tok_ = lexer_.next(); }
  SexpLexer lexer_;
  std::optional<SexpToken> tok_;
};

void sexp_text(const LabeledTree& t, std::string& out) {
  if (t.leaf) {
    append_quoted(out, t.label);
    return;
  }
  out += '(';
  out += t.label;
  if (t.children.empty()) {
    out += " ε";
  } else {
    for (const LabeledTree& c : t.children) {
      out += ' ';
      sexp_text(c, out);
    }
  }
  out += ')';
}

}  // namespace

LabeledTree parse_sexp(const std::string& text) {
  SexpParser parser(text);
  LabeledTree t = parser.parse_tree();
  if (!parser.at_end()) {
    raise(Errc::parse_error, "trailing content after s-expression");
  }
  return t;
}

std::vector<LabeledTree> parse_sexp_stream(const std::string& text) {
  SexpParser parser(text);
  std::vector<LabeledTree> trees;
  while (!parser.at_end()) trees.push_back(parser.parse_tree());
  return trees;
}

std::string sexp_to_string(const LabeledTree& t) {
  std::string out;
  sexp_text(t, out);
  return out;
}

std::string slurp_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(Errc::io_error, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) raise(Errc::io_error, "cannot write " + tmp);
    out << content;
    if (!out.flush()) raise(Errc::io_error, "short write to " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    raise(Errc::io_error, "cannot rename " + tmp + " to " + path);
  }
}

}  // namespace wcfg
