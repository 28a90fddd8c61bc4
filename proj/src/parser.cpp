#include <cctype>
#include <set>

#include "solsem/surface.hpp"

namespace solsem {

namespace {

struct Token {
  enum class Kind { Ident, Number, Punct, End };
  Kind kind = Kind::End;
  std::string text;
  SrcPos pos;
};

std::string hex_to_decimal(const std::string& digits, SrcPos at) {
  if (digits.empty() || digits.size() > 16) throw FrontendError(at, "hex literal out of range");
  return std::to_string(std::stoull(digits, nullptr, 16));
}

std::vector<Token> lex(const std::string& src) {
  static const char* const two_char[] = {"==", "!=", "<=", ">=", "&&", "||", "=>", "+=", "-=",
                                         "*=", "/=", "%=", "++", "--"};
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (src.compare(i, 2, "//") == 0) {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (src.compare(i, 2, "/*") == 0) {
      const SrcPos start{line, col};
      advance(2);
      while (i < src.size() && src.compare(i, 2, "*/") != 0) advance(1);
      if (i >= src.size()) throw FrontendError(start, "unterminated comment");
      advance(2);
      continue;
    }
    const SrcPos at{line, col};
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_' || src[j] == '$')) ++j;
      out.push_back({Token::Kind::Ident, src.substr(i, j - i), at});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      std::string text;
      if (src.compare(i, 2, "0x") == 0 || src.compare(i, 2, "0X") == 0) {
        j = i + 2;
        while (j < src.size() && std::isxdigit(static_cast<unsigned char>(src[j]))) ++j;
        text = hex_to_decimal(src.substr(i + 2, j - i - 2), at);
      } else {
        while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
        text = src.substr(i, j - i);
      }
      if (j < src.size() && (std::isalpha(static_cast<unsigned char>(src[j])) || src[j] == '_'))
        throw FrontendError(at, "malformed number");
      out.push_back({Token::Kind::Number, text, at});
      advance(j - i);
      continue;
    }
    std::string punct;
    for (const char* p : two_char)
      if (src.compare(i, 2, p) == 0) punct = p;
    if (punct.empty()) {
      if (std::string("{}()[];,.=<>+-*/%!?:").find(c) == std::string::npos)
        throw FrontendError(at, std::string("unexpected character '") + c + "'");
      punct = std::string(1, c);
    }
    out.push_back({Token::Kind::Punct, punct, at});
    advance(punct.size());
  }
  out.push_back({Token::Kind::End, "", SrcPos{line, col}});
  return out;
}

bool int_keyword(const std::string& s, IntType* out) {
  std::string digits;
  bool is_signed;
  if (s.rfind("uint", 0) == 0) {
    digits = s.substr(4);
    is_signed = false;
  } else if (s.rfind("int", 0) == 0) {
    digits = s.substr(3);
    is_signed = true;
  } else {
    return false;
  }
  if (digits.empty()) {
    *out = IntType{64, is_signed};
    return true;
  }
  for (char ch : digits)
    if (!std::isdigit(static_cast<unsigned char>(ch))) return false;
  if (digits.size() > 3) return false;
  const int w = std::stoi(digits);
  const IntType t{static_cast<std::uint16_t>(w), is_signed};
  if (!t.valid()) return false;
  *out = t;
  return true;
}

const std::set<std::string> kVisibility = {"public", "private", "internal", "external", "payable",
                                           "view",   "pure",    "constant", "memory",   "storage"};

class Parser {
 public:
  explicit Parser(const std::string& text) : toks_(lex(text)) {}

  SourceProgram program() {
    SourceProgram p;
    while (!at_end()) p.contracts.push_back(contract());
    return p;
  }

  std::vector<SStmt> statements() {
    std::vector<SStmt> out;
    while (!at_end()) out.push_back(statement());
    return out;
  }

  SExpr lone_expression() {
    SExpr e = expression();
    if (!at_end()) fail("unexpected '" + peek().text + "' after expression");
    return e;
  }

 private:
  std::vector<Token> toks_;
  std::size_t i_ = 0;

  const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(i_ + ahead, toks_.size() - 1)]; }
  bool at_end() const { return peek().kind == Token::Kind::End; }
  [[noreturn]] void fail(const std::string& why) const { throw FrontendError(peek().pos, why); }

  bool is(const char* text, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.kind != Token::Kind::End && t.kind != Token::Kind::Number && t.text == text;
  }
  bool accept(const char* text) {
    if (!is(text)) return false;
    ++i_;
    return true;
  }
  void expect(const char* text) {
    if (!accept(text)) fail(std::string("expected '") + text + "'" + (at_end() ? " before end of input" : ", found '" + peek().text + "'"));
  }
  std::string ident() {
    if (peek().kind != Token::Kind::Ident) fail("expected an identifier" + (at_end() ? std::string(" before end of input") : ", found '" + peek().text + "'"));
    return toks_[i_++].text;
  }

  bool type_keyword(std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    if (t.kind != Token::Kind::Ident) return false;
    IntType dummy;
    return t.text == "bool" || t.text == "address" || t.text == "mapping" || int_keyword(t.text, &dummy);
  }

  bool declaration_start() const {
    if (type_keyword()) return true;
    if (peek().kind != Token::Kind::Ident) return false;
    // Named type followed by a name, possibly through array brackets.
    std::size_t k = 1;
    while (is("[", k) && peek(k + 1).kind == Token::Kind::Number && is("]", k + 2)) k += 3;
    return peek(k).kind == Token::Kind::Ident && !kVisibility.count(peek(k).text);
  }

  SType type() {
    SType t;
    t.pos = peek().pos;
    const std::string name = ident();
    IntType it;
    if (name == "bool") {
      t.kind = SType::Kind::Bool;
    } else if (name == "address") {
      t.kind = SType::Kind::Address;
    } else if (int_keyword(name, &it)) {
      t.kind = SType::Kind::Int;
      t.int_type = it;
    } else if (name == "mapping") {
      t.kind = SType::Kind::Mapping;
      expect("(");
      t.children.push_back(type());
      expect("=>");
      t.children.push_back(type());
      expect(")");
    } else if (name == "string" || name == "bytes" || name == "fixed" || name == "ufixed") {
      throw FrontendError(t.pos, "type " + name + " is not supported");
    } else {
      t.kind = SType::Kind::Named;
      t.name = name;
    }
    std::vector<std::uint64_t> dims;
    while (is("[")) {
      const SrcPos at = peek().pos;
      ++i_;
      if (peek().kind != Token::Kind::Number) throw FrontendError(at, "array dimensions must be constant");
      const std::uint64_t n = std::stoull(toks_[i_++].text);
      if (n == 0) throw FrontendError(at, "array dimension must be positive");
      dims.push_back(n);
      expect("]");
    }
    for (auto it2 = dims.rbegin(); it2 != dims.rend(); ++it2) {
      SType arr;
      arr.kind = SType::Kind::Array;
      arr.length = *it2;
      arr.pos = t.pos;
      arr.children.push_back(std::move(t));
      t = std::move(arr);
    }
    return t;
  }

  SContract contract() {
    SContract c;
    c.pos = peek().pos;
    if (!accept("contract")) fail("expected 'contract'");
    c.name = ident();
    if (accept("is")) {
      c.bases.push_back(ident());
      while (accept(",")) c.bases.push_back(ident());
    }
    expect("{");
    while (!accept("}")) {
      if (at_end()) fail("expected '}' to close contract " + c.name);
      c.members.push_back(member());
    }
    return c;
  }

  std::vector<SParam> params() {
    std::vector<SParam> out;
    expect("(");
    if (accept(")")) return out;
    do {
      SParam p;
      p.pos = peek().pos;
      p.type = type();
      while (peek().kind == Token::Kind::Ident && kVisibility.count(peek().text)) ++i_;
      if (peek().kind == Token::Kind::Ident) p.name = ident();
      out.push_back(std::move(p));
    } while (accept(","));
    expect(")");
    return out;
  }

  std::vector<SExpr> call_args() {
    std::vector<SExpr> out;
    expect("(");
    if (accept(")")) return out;
    do out.push_back(expression());
    while (accept(","));
    expect(")");
    return out;
  }

  SMember member() {
    const SrcPos at = peek().pos;
    if (accept("struct")) {
      SStruct s{ident(), {}, at};
      expect("{");
      while (!accept("}")) {
        if (at_end()) fail("expected '}' to close struct " + s.name);
        SParam m;
        m.pos = peek().pos;
        m.type = type();
        m.name = ident();
        expect(";");
        s.members.push_back(std::move(m));
      }
      return s;
    }
    if (accept("event")) {
      SEvent e{ident(), at};
      expect("(");
      int depth = 1;
      while (depth > 0) {
        if (at_end()) fail("unterminated event declaration");
        if (is("(")) ++depth;
        if (is(")")) --depth;
        ++i_;
      }
      expect(";");
      return e;
    }
    if (is("function") || is("Function") || is("modifier")) {
      SFunction f;
      f.pos = at;
      f.is_modifier = toks_[i_++].text == "modifier";
      f.name = ident();
      if (!f.is_modifier || is("(")) f.params = params();
      while (!is("{")) {
        if (at_end()) fail("expected a function body");
        if (accept("returns")) {
          for (const auto& p : params()) f.returns.push_back(p.type);
          continue;
        }
        if (peek().kind == Token::Kind::Ident && kVisibility.count(peek().text)) {
          ++i_;
          continue;
        }
        if (f.is_modifier) fail("unexpected '" + peek().text + "' in modifier header");
        SModifierUse use;
        use.pos = peek().pos;
        use.name = ident();
        if (is("(")) use.args = call_args();
        f.modifiers.push_back(std::move(use));
      }
      f.body = block();
      return f;
    }
    if (is("constructor")) fail("constructors are not supported");
    SStateVar v;
    v.pos = at;
    v.type = type();
    while (peek().kind == Token::Kind::Ident && kVisibility.count(peek().text)) {
      const std::string kw = toks_[i_++].text;
      if (kw == "public") v.access = Access::Public;
      if (kw == "private") v.access = Access::Private;
      if (kw == "internal") v.access = Access::Internal;
    }
    v.name = ident();
    if (accept("=")) v.init = expression();
    expect(";");
    return v;
  }

  std::vector<SStmt> block() {
    expect("{");
    std::vector<SStmt> out;
    while (!accept("}")) {
      if (at_end()) fail("expected '}' before end of input");
      out.push_back(statement());
    }
    return out;
  }

  std::vector<SStmt> body_of(SStmt s) {
    if (s.kind == SStmt::Kind::Block) return std::move(s.body);
    std::vector<SStmt> out;
    out.push_back(std::move(s));
    return out;
  }

  SStmt var_decl() {
    SStmt s;
    s.kind = SStmt::Kind::VarDecl;
    s.pos = peek().pos;
    s.type = type();
    while (peek().kind == Token::Kind::Ident && kVisibility.count(peek().text)) ++i_;
    s.name = ident();
    if (accept("=")) s.expr = expression();
    return s;
  }

  // Assignment, increment or call, without the trailing ';'.
  SStmt simple() {
    if (declaration_start()) return var_decl();
    SStmt s;
    s.pos = peek().pos;
    SExpr e = expression();
    static const std::pair<const char*, BinOp> compound[] = {
        {"+=", BinOp::Add}, {"-=", BinOp::Sub}, {"*=", BinOp::Mul}, {"/=", BinOp::Div}, {"%=", BinOp::Mod}};
    if (accept("=")) {
      s.kind = SStmt::Kind::Assign;
      s.target = std::move(e);
      s.expr = expression();
      return s;
    }
    for (const auto& [text, op] : compound) {
      if (accept(text)) {
        s.kind = SStmt::Kind::CompoundAssign;
        s.op = op;
        s.target = std::move(e);
        s.expr = expression();
        return s;
      }
    }
    if (is("++") || is("--")) {
      s.kind = SStmt::Kind::CompoundAssign;
      s.op = toks_[i_++].text == "++" ? BinOp::Add : BinOp::Sub;
      SExpr one;
      one.kind = SExpr::Kind::Number;
      one.text = "1";
      one.pos = s.pos;
      s.target = std::move(e);
      s.expr = std::move(one);
      return s;
    }
    if (e.kind != SExpr::Kind::Call) throw FrontendError(s.pos, "expression statement must be a call or an assignment");
    s.kind = SStmt::Kind::Call;
    s.expr = std::move(e);
    return s;
  }

  SStmt statement() {
    SStmt s;
    s.pos = peek().pos;
    if (is("{")) {
      s.kind = SStmt::Kind::Block;
      s.body = block();
      return s;
    }
    if (accept(";")) return s;
    if (accept("if")) {
      s.kind = SStmt::Kind::If;
      expect("(");
      s.expr = expression();
      expect(")");
      s.body = body_of(statement());
      if (accept("else")) s.orelse = body_of(statement());
      return s;
    }
    if (accept("while")) {
      s.kind = SStmt::Kind::While;
      expect("(");
      s.expr = expression();
      expect(")");
      s.body = body_of(statement());
      return s;
    }
    if (accept("for")) {
      s.kind = SStmt::Kind::For;
      expect("(");
      if (!is(";")) s.init.push_back(simple());
      expect(";");
      if (!is(";")) s.expr = expression();
      expect(";");
      if (!is(")")) s.post.push_back(simple());
      expect(")");
      s.body = body_of(statement());
      return s;
    }
    if (accept("return")) {
      s.kind = SStmt::Kind::Return;
      if (!is(";")) s.expr = expression();
      expect(";");
      return s;
    }
    if (accept("throw")) {
      s.kind = SStmt::Kind::Throw;
      expect(";");
      return s;
    }
    if (is("revert") && is("(", 1)) {
      i_ += 2;
      expect(")");
      expect(";");
      s.kind = SStmt::Kind::Throw;
      return s;
    }
    if (is("require") && is("(", 1)) {
      i_ += 2;
      s.kind = SStmt::Kind::Require;
      s.expr = expression();
      expect(")");
      expect(";");
      return s;
    }
    if (is("_") && is(";", 1)) {
      i_ += 2;
      s.kind = SStmt::Kind::Placeholder;
      return s;
    }
    if (accept("emit")) {
      s.kind = SStmt::Kind::Emit;
      s.expr = expression();
      expect(";");
      return s;
    }
    s = simple();
    expect(";");
    return s;
  }

  SExpr binary(SExpr lhs, BinOp op, SExpr rhs, SrcPos at) {
    SExpr e;
    e.kind = SExpr::Kind::Binary;
    e.pos = at;
    e.bop = op;
    e.kids.push_back(std::move(lhs));
    e.kids.push_back(std::move(rhs));
    return e;
  }

  SExpr expression() { return or_expr(); }

  SExpr or_expr() {
    SExpr e = and_expr();
    while (is("||")) {
      const SrcPos at = peek().pos;
      ++i_;
      e = binary(std::move(e), BinOp::Or, and_expr(), at);
    }
    return e;
  }

  SExpr and_expr() {
    SExpr e = eq_expr();
    while (is("&&")) {
      const SrcPos at = peek().pos;
      ++i_;
      e = binary(std::move(e), BinOp::And, eq_expr(), at);
    }
    return e;
  }

  SExpr eq_expr() {
    SExpr e = rel_expr();
    while (is("==") || is("!=")) {
      const SrcPos at = peek().pos;
      const BinOp op = toks_[i_++].text == "==" ? BinOp::Eq : BinOp::Ne;
      e = binary(std::move(e), op, rel_expr(), at);
    }
    return e;
  }

  SExpr rel_expr() {
    SExpr e = add_expr();
    while (is("<") || is(">") || is("<=") || is(">=")) {
      const SrcPos at = peek().pos;
      const std::string t = toks_[i_++].text;
      const BinOp op = t == "<" ? BinOp::Lt : t == ">" ? BinOp::Gt : t == "<=" ? BinOp::Le : BinOp::Ge;
      e = binary(std::move(e), op, add_expr(), at);
    }
    return e;
  }

  SExpr add_expr() {
    SExpr e = mul_expr();
    while (is("+") || is("-")) {
      const SrcPos at = peek().pos;
      const BinOp op = toks_[i_++].text == "+" ? BinOp::Add : BinOp::Sub;
      e = binary(std::move(e), op, mul_expr(), at);
    }
    return e;
  }

  SExpr mul_expr() {
    SExpr e = unary();
    while (is("*") || is("/") || is("%")) {
      const SrcPos at = peek().pos;
      const std::string t = toks_[i_++].text;
      const BinOp op = t == "*" ? BinOp::Mul : t == "/" ? BinOp::Div : BinOp::Mod;
      e = binary(std::move(e), op, unary(), at);
    }
    return e;
  }

  SExpr unary() {
    if (is("!") || is("-")) {
      SExpr e;
      e.kind = SExpr::Kind::Unary;
      e.pos = peek().pos;
      e.uop = toks_[i_++].text == "!" ? UnOp::Not : UnOp::Neg;
      e.kids.push_back(unary());
      return e;
    }
    return postfix();
  }

  SExpr postfix() {
    SExpr e = primary();
    while (true) {
      const SrcPos at = peek().pos;
      if (accept("[")) {
        SExpr idx;
        idx.kind = SExpr::Kind::Index;
        idx.pos = at;
        idx.kids.push_back(std::move(e));
        idx.kids.push_back(expression());
        expect("]");
        e = std::move(idx);
      } else if (accept(".")) {
        SExpr m;
        m.kind = SExpr::Kind::Member;
        m.pos = at;
        m.text = ident();
        m.kids.push_back(std::move(e));
        e = std::move(m);
      } else if (is("(")) {
        SExpr c;
        c.kind = SExpr::Kind::Call;
        c.pos = at;
        c.kids.push_back(std::move(e));
        for (auto& a : call_args()) c.kids.push_back(std::move(a));
        e = std::move(c);
      } else {
        return e;
      }
    }
  }

  SExpr primary() {
    SExpr e;
    e.pos = peek().pos;
    if (peek().kind == Token::Kind::Number) {
      e.kind = SExpr::Kind::Number;
      e.text = toks_[i_++].text;
      return e;
    }
    if (accept("(")) {
      SExpr first = expression();
      if (!is(",")) {
        expect(")");
        return first;
      }
      e.kind = SExpr::Kind::Tuple;
      e.kids.push_back(std::move(first));
      while (accept(",")) e.kids.push_back(expression());
      expect(")");
      return e;
    }
    if (peek().kind != Token::Kind::Ident) {
      fail(at_end() ? "expected an expression before end of input" : "expected an expression, found '" + peek().text + "'");
    }
    const std::string name = toks_[i_++].text;
    if (name == "true" || name == "false") {
      e.kind = SExpr::Kind::Bool;
      e.bit = name == "true";
    } else if (name == "this") {
      e.kind = SExpr::Kind::This;
    } else {
      e.kind = SExpr::Kind::Ident;
      e.text = name;
    }
    return e;
  }
};

}  // namespace

SourceProgram parse_source(const std::string& text) { return Parser(text).program(); }
std::vector<SStmt> parse_statements(const std::string& text) { return Parser(text).statements(); }
SExpr parse_expression(const std::string& text) { return Parser(text).lone_expression(); }

}  // namespace solsem
