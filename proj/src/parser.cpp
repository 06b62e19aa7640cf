#include "lucretia/parser.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

namespace lucretia {

namespace {

// -- lexer ---------------------------------------------------------------------

enum class Tok {
  End,
  Ident,
  Int,
  Real,
  String,
  // keywords
  KwLet,
  KwIn,
  KwIf,
  KwThen,
  KwElse,
  KwIfHasAttr,
  KwFunc,
  KwNew,
  KwTrue,
  KwFalse,
  KwNot,
  // punctuation
  LParen,
  RParen,
  LBrace,
  RBrace,
  LBracket,
  RBracket,
  Semi,
  Comma,
  Dot,
  Colon,
  Caret,
  Amp,
  Pipe,
  Eq,
  EqEq,
  Lt,
  LtHash,
  Plus,
  Minus,
  Star,
  FatArrow,
};

const char* tok_name(Tok t) {
  switch (t) {
    case Tok::End: return "end of input";
    case Tok::Ident: return "identifier";
    case Tok::Int: return "integer literal";
    case Tok::Real: return "real literal";
    case Tok::String: return "string literal";
    case Tok::KwLet: return "'let'";
    case Tok::KwIn: return "'in'";
    case Tok::KwIf: return "'if'";
    case Tok::KwThen: return "'then'";
    case Tok::KwElse: return "'else'";
    case Tok::KwIfHasAttr: return "'ifhasattr'";
    case Tok::KwFunc: return "'func'";
    case Tok::KwNew: return "'new'";
    case Tok::KwTrue: return "'true'";
    case Tok::KwFalse: return "'false'";
    case Tok::KwNot: return "'not'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::Semi: return "';'";
    case Tok::Comma: return "','";
    case Tok::Dot: return "'.'";
    case Tok::Colon: return "':'";
    case Tok::Caret: return "'^'";
    case Tok::Amp: return "'&'";
    case Tok::Pipe: return "'|'";
    case Tok::Eq: return "'='";
    case Tok::EqEq: return "'=='";
    case Tok::Lt: return "'<'";
    case Tok::LtHash: return "'<#'";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::Star: return "'*'";
    case Tok::FatArrow: return "'=>'";
  }
  return "?";
}

struct Token {
  Tok kind = Tok::End;
  std::string text;
  SourceSpan span;
  std::int64_t int_value = 0;
  double real_value = 0;

  Token() = default;
  explicit Token(Tok k) : kind(k) {}
};

struct ParseError {
  Diagnostic diagnostic;
};

[[noreturn]] void fail(SourceSpan span, std::string message, std::string code = "E-PARSE") {
  throw ParseError{make_error(std::move(code), std::move(message), span)};
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> tokens;
    while (true) {
      skip_trivia();
      Token t = next_token();
      bool end = t.kind == Tok::End;
      tokens.push_back(std::move(t));
      if (end) break;
    }
    return tokens;
  }

 private:
  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;

  bool eof() const { return pos_ >= src_.size(); }
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }
  char advance() {
    char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skip_trivia() {
    while (!eof()) {
      char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '/' && peek(1) == '/') {
        while (!eof() && peek() != '\n') advance();
      } else {
        break;
      }
    }
  }

  SourceSpan start_span() const {
    SourceSpan s;
    s.begin = pos_;
    s.end = pos_;
    s.line = line_;
    s.column = col_;
    s.end_line = line_;
    s.end_column = col_;
    return s;
  }

  Token finish(Token t, SourceSpan start) {
    start.end = pos_;
    start.end_line = line_;
    start.end_column = col_;
    t.span = start;
    return t;
  }

  Token next_token() {
    SourceSpan start = start_span();
    if (eof()) return finish(Token{Tok::End}, start);
    char c = advance();
    switch (c) {
      case '(': return finish(Token{Tok::LParen}, start);
      case ')': return finish(Token{Tok::RParen}, start);
      case '{': return finish(Token{Tok::LBrace}, start);
      case '}': return finish(Token{Tok::RBrace}, start);
      case '[': return finish(Token{Tok::LBracket}, start);
      case ']': return finish(Token{Tok::RBracket}, start);
      case ';': return finish(Token{Tok::Semi}, start);
      case ',': return finish(Token{Tok::Comma}, start);
      case '.': return finish(Token{Tok::Dot}, start);
      case ':': return finish(Token{Tok::Colon}, start);
      case '^': return finish(Token{Tok::Caret}, start);
      case '&': return finish(Token{Tok::Amp}, start);
      case '|': return finish(Token{Tok::Pipe}, start);
      case '+': return finish(Token{Tok::Plus}, start);
      case '-': return finish(Token{Tok::Minus}, start);
      case '*': return finish(Token{Tok::Star}, start);
      case '<':
        if (peek() == '#') {
          advance();
          return finish(Token{Tok::LtHash}, start);
        }
        return finish(Token{Tok::Lt}, start);
      case '=':
        if (peek() == '=') {
          advance();
          return finish(Token{Tok::EqEq}, start);
        }
        if (peek() == '>') {
          advance();
          return finish(Token{Tok::FatArrow}, start);
        }
        return finish(Token{Tok::Eq}, start);
      case '"': return lex_string(start);
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return lex_number(start, c);
    if (c == '$')
      fail(finish(Token{}, start).span,
           "identifiers starting with '$' are reserved for lowering temporaries");
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return lex_ident(start, c);
    fail(finish(Token{}, start).span, std::string("unexpected character '") + c + "'");
  }

  Token lex_string(SourceSpan start) {
    std::string value;
    while (true) {
      if (eof()) fail(finish(Token{}, start).span, "unterminated string literal");
      char c = advance();
      if (c == '"') break;
      if (c == '\n') fail(finish(Token{}, start).span, "unterminated string literal");
      if (c == '\\') {
        if (eof()) fail(finish(Token{}, start).span, "unterminated escape");
        char esc = advance();
        switch (esc) {
          case 'n': value += '\n'; break;
          case 't': value += '\t'; break;
          case '"': value += '"'; break;
          case '\\': value += '\\'; break;
          default:
            fail(finish(Token{}, start).span, std::string("unknown escape '\\") + esc + "'");
        }
      } else {
        value += c;
      }
    }
    Token t{Tok::String};
    t.text = std::move(value);
    return finish(std::move(t), start);
  }

  Token lex_number(SourceSpan start, char first) {
    std::string digits(1, first);
    while (std::isdigit(static_cast<unsigned char>(peek()))) digits += advance();
    bool real = false;
    if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
      real = true;
      digits += advance();
      while (std::isdigit(static_cast<unsigned char>(peek()))) digits += advance();
    }
    if (peek() == 'e' || peek() == 'E') {
      char sign = peek(1);
      std::size_t digit_at = (sign == '+' || sign == '-') ? 2 : 1;
      if (std::isdigit(static_cast<unsigned char>(peek(digit_at)))) {
        real = true;
        digits += advance();
        if (!std::isdigit(static_cast<unsigned char>(peek()))) digits += advance();
        while (std::isdigit(static_cast<unsigned char>(peek()))) digits += advance();
      }
    }
    Token t{real ? Tok::Real : Tok::Int};
    t.text = digits;
    if (real) {
      t.real_value = std::strtod(digits.c_str(), nullptr);
    } else {
      auto [ptr, ec] =
          std::from_chars(digits.data(), digits.data() + digits.size(), t.int_value);
      if (ec != std::errc())
        fail(finish(Token{}, start).span, "integer literal out of 64-bit range");
    }
    return finish(std::move(t), start);
  }

  Token lex_ident(SourceSpan start, char first) {
    std::string name(1, first);
    while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')
      name += advance();
    static const std::map<std::string, Tok> keywords = {
        {"let", Tok::KwLet},   {"in", Tok::KwIn},     {"if", Tok::KwIf},
        {"then", Tok::KwThen}, {"else", Tok::KwElse}, {"ifhasattr", Tok::KwIfHasAttr},
        {"func", Tok::KwFunc}, {"new", Tok::KwNew},   {"true", Tok::KwTrue},
        {"false", Tok::KwFalse}, {"not", Tok::KwNot}};
    auto it = keywords.find(name);
    Token t{it == keywords.end() ? Tok::Ident : it->second};
    t.text = std::move(name);
    return finish(std::move(t), start);
  }
};

// -- contract assembly -----------------------------------------------------------

struct ConstraintItem {
  std::string var;
  bool nonlocal = false;
  std::optional<std::string> field;  // bare variable when absent
  FieldType type;
  SourceSpan span;
};

struct SurfaceContract {
  std::vector<Type> args;
  std::vector<ConstraintItem> pre_items;
  Type result;
  std::vector<ConstraintItem> post_items;
  SourceSpan span;
};

// -- parser ------------------------------------------------------------------------

class Parser {
 public:
  explicit Parser(std::string_view src) : tokens_(Lexer(src).run()) {}

  ExprPtr program() {
    ExprPtr e = seq();
    expect(Tok::End, "expected end of input");
    return lower_program(e);
  }

  FunctionContract single_contract() {
    FunctionContract c = contract();
    expect(Tok::End, "expected end of contract");
    return c;
  }

  ConstraintSet constraint_set_literal() {
    ConstraintSet psi = display_constraints();
    expect(Tok::End, "expected end of constraint set");
    return psi;
  }

  Type type_literal() {
    Type t = type(true).first;
    expect(Tok::End, "expected end of type");
    return t;
  }

 private:
  std::vector<Token> tokens_;
  std::size_t index_ = 0;
  int next_temp_ = 0;

  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = index_ + ahead;
    return i < tokens_.size() ? tokens_[i] : tokens_.back();
  }
  const Token& advance() { return tokens_[index_ < tokens_.size() - 1 ? index_++ : index_]; }
  bool at(Tok k) const { return peek().kind == k; }
  bool accept(Tok k) {
    if (!at(k)) return false;
    advance();
    return true;
  }
  const Token& expect(Tok k, const std::string& what) {
    if (!at(k))
      fail(peek().span, what + "; got " + tok_name(peek().kind) + ", expected " + tok_name(k));
    return advance();
  }

  std::string fresh_temp() { return "$t" + std::to_string(next_temp_++); }

  // sequencing: item (';' seq)?; `e; es` desugars to `let $t = e in es`
  ExprPtr seq() {
    ExprPtr first = item();
    if (accept(Tok::Semi)) {
      ExprPtr rest = seq();
      SourceSpan span = SourceSpan::join(first->span, rest->span);
      return let_expr(fresh_temp(), first, rest, span);
    }
    return first;
  }

  bool at_seq_end() const {
    switch (peek().kind) {
      case Tok::End:
      case Tok::RParen:
      case Tok::RBrace:
      case Tok::KwElse:
      case Tok::KwIn: return true;
      default: return false;
    }
  }

  ExprPtr item() {
    if (at(Tok::KwLet)) return let_item();
    if (at(Tok::Ident) && peek(1).kind == Tok::Colon && peek(2).kind == Tok::LBracket)
      return named_function();
    if (at(Tok::KwFunc) && peek(1).kind == Tok::Ident) return named_function();
    return expr();
  }

  ExprPtr let_item() {
    SourceSpan start = expect(Tok::KwLet, "expected 'let'").span;
    const Token& name = expect(Tok::Ident, "expected a variable name after 'let'");
    expect(Tok::Eq, "expected '=' in let binding");
    ExprPtr bound = expr();
    if (!accept(Tok::KwIn) && !accept(Tok::Semi))
      fail(peek().span, "expected 'in' or ';' after let binding");
    ExprPtr body = seq();
    return let_expr(name.text, bound, body, SourceSpan::join(start, body->span));
  }

  // `f : CONTRACT` lines followed by `func f(params) { body }`, then the rest
  // of the sequence; desugars to `let f = func(...) : C1 & ... { body } in rest`.
  ExprPtr named_function() {
    std::vector<FunctionContract> contracts;
    std::string name;
    SourceSpan start = peek().span;
    while (at(Tok::Ident) && peek(1).kind == Tok::Colon && peek(2).kind == Tok::LBracket) {
      const Token& n = advance();
      if (name.empty())
        name = n.text;
      else if (name != n.text)
        fail(n.span, "contract for '" + n.text + "' while declaring '" + name + "'");
      expect(Tok::Colon, "expected ':'");
      contracts.push_back(contract());
    }
    const Token& kw = expect(Tok::KwFunc, "expected 'func' after contract lines");
    const Token& fn = expect(Tok::Ident, "expected function name");
    if (name.empty())
      name = fn.text;
    else if (name != fn.text)
      fail(fn.span, "function '" + fn.text + "' does not match contracts for '" + name + "'");
    FunctionLit lit = function_tail(std::move(contracts));
    SourceSpan span = SourceSpan::join(start, kw.span);
    ExprPtr literal = func_expr(std::move(lit), span);
    if (!accept(Tok::Semi)) accept(Tok::KwIn);
    if (at_seq_end()) return literal;
    ExprPtr rest = seq();
    return let_expr(name, literal, rest, SourceSpan::join(span, rest->span));
  }

  // parameter list, optional inline `: C1 & C2`, and `{ body }`
  FunctionLit function_tail(std::vector<FunctionContract> contracts) {
    FunctionLit lit;
    expect(Tok::LParen, "expected '(' before parameter list");
    if (!at(Tok::RParen)) {
      do {
        const Token& p = expect(Tok::Ident, "expected a parameter name");
        lit.params.push_back(p.text);
      } while (accept(Tok::Comma));
    }
    expect(Tok::RParen, "expected ')' after parameter list");
    if (accept(Tok::Colon)) {
      do {
        contracts.push_back(contract());
      } while (accept(Tok::Amp));
    }
    lit.contracts = std::move(contracts);
    expect(Tok::LBrace, "expected '{' before function body");
    lit.body = seq();
    expect(Tok::RBrace, "expected '}' after function body");
    return lit;
  }

  // expressions -----------------------------------------------------------------

  ExprPtr expr() { return assignment(); }

  ExprPtr assignment() {
    ExprPtr lhs = comparison();
    if (at(Tok::Eq)) {
      auto* get = std::get_if<Expr::GetField>(&lhs->node);
      if (!get) fail(peek().span, "only fields can be assigned (use '==' to compare)");
      advance();
      ExprPtr value = assignment();
      return setfield_expr(get->object, get->field, value,
                           SourceSpan::join(lhs->span, value->span));
    }
    return lhs;
  }

  ExprPtr comparison() {
    ExprPtr lhs = additive();
    if (at(Tok::EqEq) || at(Tok::Lt)) {
      std::string op = at(Tok::EqEq) ? "==" : "<";
      advance();
      ExprPtr rhs = additive();
      return primop_expr(op, {lhs, rhs}, SourceSpan::join(lhs->span, rhs->span));
    }
    return lhs;
  }

  ExprPtr additive() {
    ExprPtr lhs = multiplicative();
    while (at(Tok::Plus) || at(Tok::Minus)) {
      std::string op = at(Tok::Plus) ? "+" : "-";
      advance();
      ExprPtr rhs = multiplicative();
      lhs = primop_expr(op, {lhs, rhs}, SourceSpan::join(lhs->span, rhs->span));
    }
    return lhs;
  }

  ExprPtr multiplicative() {
    ExprPtr lhs = unary();
    while (at(Tok::Star)) {
      advance();
      ExprPtr rhs = unary();
      lhs = primop_expr("*", {lhs, rhs}, SourceSpan::join(lhs->span, rhs->span));
    }
    return lhs;
  }

  ExprPtr unary() {
    if (at(Tok::KwNot)) {
      SourceSpan start = advance().span;
      ExprPtr operand = unary();
      return primop_expr("not", {operand}, SourceSpan::join(start, operand->span));
    }
    if (at(Tok::Minus)) {
      SourceSpan start = advance().span;
      ExprPtr operand = unary();
      if (auto* c = std::get_if<Expr::ConstAtom>(&operand->node)) {
        if (auto* i = std::get_if<std::int64_t>(&c->value.value))
          return const_expr(Const::integer(-*i), SourceSpan::join(start, operand->span));
        if (auto* r = std::get_if<double>(&c->value.value))
          return const_expr(Const::real(-*r), SourceSpan::join(start, operand->span));
      }
      return primop_expr("-", {const_expr(Const::integer(0), start), operand},
                         SourceSpan::join(start, operand->span));
    }
    return postfix();
  }

  ExprPtr postfix() {
    ExprPtr e = primary();
    while (true) {
      if (at(Tok::Dot)) {
        advance();
        const Token& field = expect(Tok::Ident, "expected a field name after '.'");
        e = getfield_expr(e, field.text, SourceSpan::join(e->span, field.span));
        continue;
      }
      if (at(Tok::LParen)) {
        advance();
        std::vector<ExprPtr> args;
        if (!at(Tok::RParen)) {
          do {
            args.push_back(expr());
          } while (accept(Tok::Comma));
        }
        SourceSpan end = expect(Tok::RParen, "expected ')' after arguments").span;
        e = app_expr(e, std::move(args), SourceSpan::join(e->span, end));
        continue;
      }
      break;
    }
    return e;
  }

  ExprPtr primary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Int: {
        advance();
        return const_expr(Const::integer(t.int_value), t.span);
      }
      case Tok::Real: {
        advance();
        return const_expr(Const::real(t.real_value), t.span);
      }
      case Tok::String: {
        advance();
        return const_expr(Const::text(t.text), t.span);
      }
      case Tok::KwTrue: advance(); return const_expr(Const::boolean(true), t.span);
      case Tok::KwFalse: advance(); return const_expr(Const::boolean(false), t.span);
      case Tok::KwNew: advance(); return new_expr(t.span);
      case Tok::Ident: {
        advance();
        return var_expr(t.text, t.span);
      }
      case Tok::LParen: {
        advance();
        if (at(Tok::RParen)) {
          SourceSpan end = advance().span;
          return const_expr(Const::unit(), SourceSpan::join(t.span, end));
        }
        ExprPtr inner = seq();
        expect(Tok::RParen, "expected ')'");
        return inner;
      }
      case Tok::KwIf: {
        advance();
        ExprPtr cond = expr();
        expect(Tok::KwThen, "expected 'then'");
        ExprPtr then_branch = seq();
        expect(Tok::KwElse, "expected 'else'");
        ExprPtr else_branch = seq();
        return if_expr(cond, then_branch, else_branch,
                       SourceSpan::join(t.span, else_branch->span));
      }
      case Tok::KwIfHasAttr: {
        advance();
        expect(Tok::LParen, "expected '(' after 'ifhasattr'");
        ExprPtr object = expr();
        expect(Tok::Comma, "expected ',' in ifhasattr");
        const Token& field = expect(Tok::Ident, "expected a field name in ifhasattr");
        expect(Tok::RParen, "expected ')'");
        expect(Tok::KwThen, "expected 'then'");
        ExprPtr then_branch = seq();
        expect(Tok::KwElse, "expected 'else'");
        ExprPtr else_branch = seq();
        return ifhasattr_expr(object, field.text, then_branch, else_branch,
                              SourceSpan::join(t.span, else_branch->span));
      }
      case Tok::KwFunc: {
        advance();
        FunctionLit lit = function_tail({});
        return func_expr(std::move(lit), t.span);
      }
      case Tok::KwLet: return let_item();
      default:
        fail(t.span, std::string("expected an expression, got ") + tok_name(t.kind));
    }
  }

  // contract / type syntax ---------------------------------------------------------

  static bool is_base_name(const std::string& name, BaseType& out) {
    if (name == "int") out = BaseType::Int;
    else if (name == "bool") out = BaseType::Bool;
    else if (name == "string" || name == "str") out = BaseType::String;
    else if (name == "real") out = BaseType::Real;
    else if (name == "unit") out = BaseType::Unit;
    else return false;
    return true;
  }

  // Returns (type, plain-variable-name when the type is a bare variable).
  // `bot` is not a type; field_type handles it.
  std::pair<Type, std::optional<std::string>> type(bool allow_union) {
    std::pair<Type, std::optional<std::string>> first = type_atom();
    if (!allow_union || !at(Tok::Pipe)) return first;
    std::vector<Type> members{first.first};
    while (accept(Tok::Pipe)) members.push_back(type_atom().first);
    return {Type::union_of(std::move(members)), std::nullopt};
  }

  std::pair<Type, std::optional<std::string>> type_atom() {
    if (accept(Tok::Caret)) {
      const Token& name = expect(Tok::Ident, "expected a type variable after '^'");
      note_nonlocal(name.text);
      note_mention(name.text);
      return {Type::var(name.text), name.text};
    }
    if (at(Tok::LParen)) {
      advance();
      std::vector<FunctionContract> contracts;
      do {
        contracts.push_back(contract());
      } while (accept(Tok::Amp));
      expect(Tok::RParen, "expected ')' after function type");
      return {Type::functions(std::move(contracts)), std::nullopt};
    }
    const Token& name = expect(Tok::Ident, "expected a type");
    BaseType base;
    if (is_base_name(name.text, base)) return {Type::base(base), std::nullopt};
    if (name.text == "bot") fail(name.span, "'bot' is only valid as a field type disjunct");
    note_mention(name.text);
    return {Type::var(name.text), name.text};
  }

  FieldType field_type() {
    bool bot = false;
    std::vector<Type> members;
    do {
      if (at(Tok::Ident) && peek().text == "bot") {
        advance();
        bot = true;
      } else {
        members.push_back(type(false).first);
      }
    } while (accept(Tok::Pipe));
    if (members.empty()) {
      if (!bot) fail(peek().span, "expected a field type");
      return FieldType::absent();
    }
    Type payload = members.size() == 1 ? members[0] : Type::union_of(std::move(members));
    return bot ? FieldType::maybe(payload) : FieldType::present(payload);
  }

  // Contract parsing keeps per-contract mention bookkeeping on a stack so
  // nested function types quantify their own variables.
  struct Mentions {
    std::vector<std::string> order;
    std::set<std::string> seen;
    std::set<std::string> nonlocal;
  };
  std::vector<Mentions> mentions_;

  void note_mention(const std::string& name) {
    if (mentions_.empty()) return;
    auto& m = mentions_.back();
    if (m.seen.insert(name).second) m.order.push_back(name);
  }
  void note_nonlocal(const std::string& name) {
    if (mentions_.empty()) return;
    mentions_.back().nonlocal.insert(name);
  }

  ConstraintItem constraint_item() {
    ConstraintItem item;
    item.span = peek().span;
    if (accept(Tok::Caret)) item.nonlocal = true;
    const Token& var = expect(Tok::Ident, "expected a type variable in constraint");
    BaseType base;
    if (is_base_name(var.text, base) || var.text == "bot")
      fail(var.span, "'" + var.text + "' cannot be constrained");
    item.var = var.text;
    if (item.nonlocal) note_nonlocal(var.text);
    note_mention(var.text);
    if (accept(Tok::Dot)) {
      const Token& field = expect(Tok::Ident, "expected a field name in constraint");
      expect(Tok::Colon, "expected ':' in constraint");
      item.field = field.text;
      item.type = field_type();
    }
    return item;
  }

  FunctionContract contract() {
    mentions_.push_back({});
    SurfaceContract sc;
    sc.span = expect(Tok::LBracket, "expected '[' to start a contract").span;
    if (!at(Tok::Semi) && !at(Tok::RBracket)) {
      do {
        // Distinguish `X.m:q` constraint items from argument types: an
        // argument type never contains '.'.
        if (at(Tok::Ident) && peek(1).kind == Tok::Dot) break;
        if (at(Tok::Caret) && peek(2).kind == Tok::Dot) break;
        sc.args.push_back(type(true).first);
      } while (accept(Tok::Comma));
    }
    if (accept(Tok::Semi) || (at(Tok::Ident) && peek(1).kind == Tok::Dot) ||
        (at(Tok::Caret) && peek(2).kind == Tok::Dot)) {
      if (!at(Tok::RBracket)) {
        do {
          sc.pre_items.push_back(constraint_item());
        } while (accept(Tok::Comma));
      }
    }
    expect(Tok::RBracket, "expected ']' in contract");
    expect(Tok::FatArrow, "expected '=>' in contract");
    expect(Tok::LBracket, "expected '[' after '=>'");
    sc.result = type(true).first;
    if (accept(Tok::Semi)) {
      if (!at(Tok::RBracket)) {
        do {
          sc.post_items.push_back(constraint_item());
        } while (accept(Tok::Comma));
      }
    }
    SourceSpan end = expect(Tok::RBracket, "expected ']' to close the contract").span;
    sc.span = SourceSpan::join(sc.span, end);
    Mentions m = std::move(mentions_.back());
    mentions_.pop_back();
    // A variable free in a nested contract (^-marked there) is a plain
    // mention for the enclosing contract, which may quantify it itself.
    if (!mentions_.empty()) {
      for (const auto& name : m.order)
        if (m.nonlocal.count(name)) note_mention(name);
    }
    return assemble(sc, m);
  }

  FunctionContract assemble(const SurfaceContract& sc, const Mentions& m) {
    // Groups one section's items into records over `base`. Duplicates are
    // detected within the section; post entries may overwrite carried
    // precondition fields (`base` there is the completed precondition).
    auto group = [&](const std::vector<ConstraintItem>& items, ConstraintSet base,
                     const char* where) {
      std::set<std::string> bare;
      std::set<std::pair<std::string, std::string>> seen;
      for (const auto& item : items) {
        if (!item.field) {
          if (!bare.insert(item.var).second)
            fail(item.span, "duplicate constraint for '" + item.var + "' in " + where);
          if (!base.has(item.var)) base.set(item.var, RecordType{});
          continue;
        }
        if (!seen.emplace(item.var, *item.field).second)
          fail(item.span, "duplicate field '" + *item.field + "' for '" + item.var + "' in " +
                              where);
        RecordType rec = base.find(item.var) ? *base.find(item.var) : RecordType{};
        rec.fields[*item.field] = item.type;
        base.set(item.var, std::move(rec));
      }
      return base;
    };

    // Argument-list variables without a constraint entry get X <# {} first,
    // in argument order; explicitly constrained variables follow in item
    // order; the postcondition carries the precondition, updated.
    ConstraintSet pre;
    for (const auto& a : sc.args) {
      if (const std::string* v = a.as_var()) {
        if (!pre.has(*v)) pre.set(*v, RecordType{});
      }
    }
    pre = group(sc.pre_items, std::move(pre), "precondition");
    ConstraintSet post = group(sc.post_items, pre, "postcondition");

    std::vector<std::string> quantified;
    for (const auto& name : m.order)
      if (!m.nonlocal.count(name)) quantified.push_back(name);
    return make_contract(std::move(quantified), std::move(pre), sc.args, sc.result,
                         std::move(post));
  }

 public:
  // display-syntax helpers -----------------------------------------------------

  ConstraintSet display_constraints() {
    ConstraintSet psi;
    if (at(Tok::End)) return psi;
    do {
      const Token& var = expect(Tok::Ident, "expected a type variable");
      expect(Tok::LtHash, "expected '<#'");
      expect(Tok::LBrace, "expected '{'");
      RecordType rec;
      if (!at(Tok::RBrace)) {
        do {
          const Token& field = expect(Tok::Ident, "expected a field name");
          expect(Tok::Colon, "expected ':'");
          FieldType q = field_type();
          if (!rec.fields.emplace(field.text, q).second)
            fail(field.span, "duplicate field '" + field.text + "'");
        } while (accept(Tok::Comma));
      }
      expect(Tok::RBrace, "expected '}'");
      if (psi.has(var.text)) fail(var.span, "duplicate variable '" + var.text + "'");
      psi.set(var.text, std::move(rec));
    } while (accept(Tok::Comma));
    return psi;
  }

 private:
  // ANF lowering ------------------------------------------------------------------

  struct Binding {
    std::string name;
    ExprPtr bound;
  };

  ExprPtr lower_program(const ExprPtr& e) { return lower(e); }

  ExprPtr wrap(std::vector<Binding>& binds, ExprPtr core) {
    for (auto it = binds.rbegin(); it != binds.rend(); ++it)
      core = let_expr(it->name, it->bound, core, SourceSpan::join(it->bound->span, core->span));
    return core;
  }

  ExprPtr lower_atom(const ExprPtr& e, std::vector<Binding>& binds) {
    if (std::holds_alternative<Expr::VarAtom>(e->node) ||
        std::holds_alternative<Expr::ConstAtom>(e->node) ||
        std::holds_alternative<Expr::LocAtom>(e->node))
      return e;
    if (auto* f = std::get_if<Expr::FuncAtom>(&e->node)) {
      FunctionLit lit = f->fn;
      lit.body = lower(lit.body);
      return func_expr(std::move(lit), e->span);
    }
    ExprPtr full = lower(e);
    // Hoist temporary lets produced by inner lowering; $t names are unique
    // per parse and never referenced by user code, so this cannot capture.
    while (auto* let = std::get_if<Expr::Let>(&full->node)) {
      if (let->name.rfind("$t", 0) != 0) break;
      binds.push_back({let->name, let->bound});
      full = let->body;
    }
    if (is_atom(*full)) return full;
    std::string name = fresh_temp();
    binds.push_back({name, full});
    return var_expr(name, e->span);
  }

  ExprPtr lower(const ExprPtr& e) {
    struct Visitor {
      Parser& p;
      const ExprPtr& e;

      ExprPtr operator()(const Expr::VarAtom&) const { return e; }
      ExprPtr operator()(const Expr::ConstAtom&) const { return e; }
      ExprPtr operator()(const Expr::LocAtom&) const { return e; }
      ExprPtr operator()(const Expr::FuncAtom& f) const {
        FunctionLit lit = f.fn;
        lit.body = p.lower(lit.body);
        return func_expr(std::move(lit), e->span);
      }
      ExprPtr operator()(const Expr::PrimOp& op) const {
        std::vector<Binding> binds;
        std::vector<ExprPtr> args;
        args.reserve(op.args.size());
        for (const auto& a : op.args) args.push_back(p.lower_atom(a, binds));
        return p.wrap(binds, primop_expr(op.op, std::move(args), e->span));
      }
      ExprPtr operator()(const Expr::New&) const { return e; }
      ExprPtr operator()(const Expr::GetField& g) const {
        std::vector<Binding> binds;
        ExprPtr obj = p.lower_atom(g.object, binds);
        return p.wrap(binds, getfield_expr(obj, g.field, e->span));
      }
      ExprPtr operator()(const Expr::SetField& s) const {
        std::vector<Binding> binds;
        ExprPtr obj = p.lower_atom(s.object, binds);
        ExprPtr value = p.lower_atom(s.value, binds);
        return p.wrap(binds, setfield_expr(obj, s.field, value, e->span));
      }
      ExprPtr operator()(const Expr::Let& l) const {
        return let_expr(l.name, p.lower(l.bound), p.lower(l.body), e->span);
      }
      ExprPtr operator()(const Expr::If& i) const {
        std::vector<Binding> binds;
        ExprPtr cond = p.lower_atom(i.cond, binds);
        return p.wrap(binds, if_expr(cond, p.lower(i.then_branch), p.lower(i.else_branch),
                                     e->span));
      }
      ExprPtr operator()(const Expr::IfHasAttr& i) const {
        std::vector<Binding> binds;
        ExprPtr obj = p.lower_atom(i.object, binds);
        return p.wrap(binds, ifhasattr_expr(obj, i.field, p.lower(i.then_branch),
                                            p.lower(i.else_branch), e->span));
      }
      ExprPtr operator()(const Expr::App& a) const {
        std::vector<Binding> binds;
        ExprPtr callee = p.lower_atom(a.callee, binds);
        std::vector<ExprPtr> args;
        args.reserve(a.args.size());
        for (const auto& arg : a.args) args.push_back(p.lower_atom(arg, binds));
        return p.wrap(binds, app_expr(callee, std::move(args), e->span));
      }
    };
    return std::visit(Visitor{*this, e}, e->node);
  }
};

}  // namespace

ParseResult parse_program(std::string_view src) {
  ParseResult result;
  try {
    Parser p(src);
    result.expr = p.program();
  } catch (const ParseError& err) {
    result.diagnostics.push_back(err.diagnostic);
    result.expr = nullptr;
    return result;
  }
  Diagnostics post = validate(result.expr);
  if (!post.empty()) {
    result.diagnostics.insert(result.diagnostics.end(), post.begin(), post.end());
    result.expr = nullptr;
  }
  return result;
}

std::variant<FunctionContract, Diagnostic> parse_contract(std::string_view src) {
  try {
    Parser p(src);
    return p.single_contract();
  } catch (const ParseError& err) {
    return err.diagnostic;
  }
}

ConstraintSet parse_constraint_set(std::string_view src) {
  try {
    Parser p(src);
    return p.constraint_set_literal();
  } catch (const ParseError& err) {
    throw std::invalid_argument("bad constraint set literal: " + err.diagnostic.message);
  }
}

Type parse_type(std::string_view src) {
  try {
    Parser p(src);
    return p.type_literal();
  } catch (const ParseError& err) {
    throw std::invalid_argument("bad type literal: " + err.diagnostic.message);
  }
}

}  // namespace lucretia
