#pragma once

#include <cctype>
#include <sstream>
#include <string>
#include <vector>

#include "asc1/script.hpp"

namespace asc1 {

struct ScriptParseError : std::runtime_error {
  explicit ScriptParseError(const std::string& what) : std::runtime_error(what) {}
};

// Infix surface syntax for scripts:
//
//   or > and > not > comparisons > additive > multiplicative > atoms
//
//   atoms: 123, 0xdeadbeef, true, false, txlen, txpos, txid, txid(n),
//          tx.f, tx(n).f, arg(n), sha256(e), versig(e1, e2, e3),
//          if e0 then e1 else e2, (e)
//
// if-then-else is sugar and is printed in its desugared form.
namespace script_text {

namespace detail {

struct Token {
  enum class Kind { Ident, Number, Hex, Symbol, End };
  Kind kind;
  std::string text;
  u64 number = 0;
  Bytes bytes;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) { advance(); }

  const Token& peek() const { return tok_; }

  Token next() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    if (pos_ >= src_.size()) {
      tok_ = {Token::Kind::End, "", 0, {}};
      return;
    }
    char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      if (c == '0' && pos_ + 1 < src_.size() && src_[pos_ + 1] == 'x') {
        std::size_t start = pos_ + 2;
        std::size_t end = start;
        while (end < src_.size() && hexNibble(src_[end]) >= 0) ++end;
        tok_ = {Token::Kind::Hex, src_.substr(pos_, end - pos_), 0,
                hexDecode(src_.substr(start, end - start))};
        pos_ = end;
        return;
      }
      std::size_t end = pos_;
      u64 v = 0;
      while (end < src_.size() && std::isdigit(static_cast<unsigned char>(src_[end]))) {
        v = v * 10 + static_cast<u64>(src_[end] - '0');
        ++end;
      }
      tok_ = {Token::Kind::Number, src_.substr(pos_, end - pos_), v, {}};
      pos_ = end;
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t end = pos_;
      while (end < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[end])) || src_[end] == '_'))
        ++end;
      tok_ = {Token::Kind::Ident, src_.substr(pos_, end - pos_), 0, {}};
      pos_ = end;
      return;
    }
    static const char* twoChar[] = {"<=", ">="};
    for (const char* s : twoChar) {
      if (src_.compare(pos_, 2, s) == 0) {
        tok_ = {Token::Kind::Symbol, s, 0, {}};
        pos_ += 2;
        return;
      }
    }
    tok_ = {Token::Kind::Symbol, std::string(1, c), 0, {}};
    ++pos_;
  }

  const std::string& src_;
  std::size_t pos_ = 0;
  Token tok_;
};

class Parser {
 public:
  explicit Parser(const std::string& src) : lex_(src) {}

  ExprPtr parse() {
    ExprPtr e = parseOr();
    if (lex_.peek().kind != Token::Kind::End)
      throw ScriptParseError("trailing input after expression: " + lex_.peek().text);
    return e;
  }

 private:
  Lexer lex_;

  bool acceptSymbol(const std::string& s) {
    if (lex_.peek().kind == Token::Kind::Symbol && lex_.peek().text == s) {
      lex_.next();
      return true;
    }
    return false;
  }

  bool acceptIdent(const std::string& s) {
    if (lex_.peek().kind == Token::Kind::Ident && lex_.peek().text == s) {
      lex_.next();
      return true;
    }
    return false;
  }

  void expectSymbol(const std::string& s) {
    if (!acceptSymbol(s)) throw ScriptParseError("expected '" + s + "'");
  }

  u64 expectNumber() {
    if (lex_.peek().kind != Token::Kind::Number) throw ScriptParseError("expected a number");
    return lex_.next().number;
  }

  ExprPtr parseOr() {
    ExprPtr e = parseAnd();
    while (acceptIdent("or")) e = expr::orE(e, parseAnd());
    return e;
  }

  ExprPtr parseAnd() {
    ExprPtr e = parseNot();
    while (acceptIdent("and")) e = expr::andE(e, parseNot());
    return e;
  }

  ExprPtr parseNot() {
    if (acceptIdent("not")) return expr::notE(parseNot());
    return parseCmp();
  }

  ExprPtr parseCmp() {
    ExprPtr e = parseAdd();
    if (acceptSymbol("<=")) return expr::le(e, parseAdd());
    if (acceptSymbol(">=")) return expr::ge(e, parseAdd());
    if (acceptSymbol("<")) return expr::lt(e, parseAdd());
    if (acceptSymbol(">")) return expr::gt(e, parseAdd());
    if (acceptSymbol("=")) return expr::eq(e, parseAdd());
    return e;
  }

  ExprPtr parseAdd() {
    ExprPtr e = parseMul();
    while (true) {
      if (acceptSymbol("+")) {
        e = expr::add(e, parseMul());
      } else if (acceptSymbol("-")) {
        e = expr::sub(e, parseMul());
      } else {
        return e;
      }
    }
  }

  ExprPtr parseMul() {
    ExprPtr e = parseAtom();
    while (true) {
      if (acceptSymbol("*")) {
        e = expr::mul(e, parseAtom());
      } else if (acceptSymbol("/")) {
        e = expr::div(e, parseAtom());
      } else if (acceptSymbol("%")) {
        e = expr::mod(e, parseAtom());
      } else {
        return e;
      }
    }
  }

  TxFieldKind parseField() {
    if (lex_.peek().kind != Token::Kind::Ident)
      throw ScriptParseError("expected a transaction field");
    std::string name = lex_.next().text;
    for (int i = 0; i <= static_cast<int>(TxFieldKind::Lx); ++i) {
      auto f = static_cast<TxFieldKind>(i);
      if (name == txFieldName(f)) return f;
    }
    throw ScriptParseError("unknown transaction field: " + name);
  }

  ExprPtr parseAtom() {
    const Token& t = lex_.peek();
    if (t.kind == Token::Kind::Number) return expr::natConst(lex_.next().number);
    if (t.kind == Token::Kind::Hex) return expr::bytesConst(lex_.next().bytes);
    if (acceptSymbol("(")) {
      ExprPtr e = parseOr();
      expectSymbol(")");
      return e;
    }
    if (t.kind != Token::Kind::Ident) throw ScriptParseError("unexpected token: " + t.text);
    std::string name = lex_.next().text;
    if (name == "true") return expr::trueE();
    if (name == "false") return expr::falseE();
    if (name == "txlen") return expr::txLen();
    if (name == "txpos") return expr::txPos();
    if (name == "txid") {
      if (acceptSymbol("(")) {
        u64 n = expectNumber();
        expectSymbol(")");
        return expr::txIdAt(n);
      }
      return expr::txId();
    }
    if (name == "tx") {
      if (acceptSymbol("(")) {
        u64 n = expectNumber();
        expectSymbol(")");
        expectSymbol(".");
        return expr::txFieldAt(n, parseField());
      }
      expectSymbol(".");
      return expr::txField(parseField());
    }
    if (name == "arg") {
      expectSymbol("(");
      u64 n = expectNumber();
      expectSymbol(")");
      return expr::arg(n);
    }
    if (name == "sha256") {
      expectSymbol("(");
      ExprPtr e = parseOr();
      expectSymbol(")");
      return expr::hash(e);
    }
    if (name == "versig") {
      expectSymbol("(");
      ExprPtr e1 = parseOr();
      expectSymbol(",");
      ExprPtr e2 = parseOr();
      expectSymbol(",");
      ExprPtr e3 = parseOr();
      expectSymbol(")");
      return expr::versig(e1, e2, e3);
    }
    if (name == "if") {
      ExprPtr cond = parseOr();
      if (!acceptIdent("then")) throw ScriptParseError("expected 'then'");
      ExprPtr thenE = parseOr();
      if (!acceptIdent("else")) throw ScriptParseError("expected 'else'");
      ExprPtr elseE = parseOr();
      return expr::ifE(cond, thenE, elseE);
    }
    throw ScriptParseError("unexpected identifier: " + name);
  }
};

inline int precedence(const ScriptExpr& e) {
  switch (e.kind) {
    case ScriptExpr::Kind::BinOp:
      switch (e.op) {
        case BinOpKind::Or: return 1;
        case BinOpKind::And: return 2;
        case BinOpKind::Lt: case BinOpKind::Le: case BinOpKind::Eq:
        case BinOpKind::Ge: case BinOpKind::Gt: return 4;
        case BinOpKind::Add: case BinOpKind::Sub: return 5;
        default: return 6;
      }
    case ScriptExpr::Kind::Not: return 3;
    default: return 7;
  }
}

inline const char* opToken(BinOpKind op) {
  switch (op) {
    case BinOpKind::Add: return "+";
    case BinOpKind::Sub: return "-";
    case BinOpKind::Lt: return "<";
    case BinOpKind::Le: return "<=";
    case BinOpKind::Eq: return "=";
    case BinOpKind::Ge: return ">=";
    case BinOpKind::Gt: return ">";
    case BinOpKind::Mul: return "*";
    case BinOpKind::Div: return "/";
    case BinOpKind::Mod: return "%";
    case BinOpKind::And: return "and";
    case BinOpKind::Or: return "or";
  }
  return "?";
}

inline void print(std::ostream& out, const ScriptExpr& e, int minPrec) {
  int prec = precedence(e);
  bool parens = prec < minPrec;
  if (parens) out << "(";
  switch (e.kind) {
    case ScriptExpr::Kind::Const:
      if (e.constant.isNat()) {
        out << e.constant.asNat();
      } else {
        out << "0x" << hexEncode(e.constant.asBytes());
      }
      break;
    case ScriptExpr::Kind::BinOp: {
      bool comparison = prec == 4;
      print(out, *e.operands[0], comparison ? prec + 1 : prec);
      out << " " << opToken(e.op) << " ";
      print(out, *e.operands[1], prec + 1);
      break;
    }
    case ScriptExpr::Kind::Not:
      out << "not ";
      print(out, *e.operands[0], precedence(e));
      break;
    case ScriptExpr::Kind::TxLen: out << "txlen"; break;
    case ScriptExpr::Kind::TxPos: out << "txpos"; break;
    case ScriptExpr::Kind::TxId:
      out << "txid";
      if (!e.selector.current) out << "(" << e.selector.index << ")";
      break;
    case ScriptExpr::Kind::TxField:
      out << "tx";
      if (!e.selector.current) out << "(" << e.selector.index << ")";
      out << "." << txFieldName(e.field);
      break;
    case ScriptExpr::Kind::Arg: out << "arg(" << e.argIndex << ")"; break;
    case ScriptExpr::Kind::Hash:
      out << "sha256(";
      print(out, *e.operands[0], 0);
      out << ")";
      break;
    case ScriptExpr::Kind::Versig:
      out << "versig(";
      print(out, *e.operands[0], 0);
      out << ", ";
      print(out, *e.operands[1], 0);
      out << ", ";
      print(out, *e.operands[2], 0);
      out << ")";
      break;
  }
  if (parens) out << ")";
}

}  // namespace detail

}  // namespace script_text

inline ExprPtr parseScript(const std::string& src) {
  script_text::detail::Parser p(src);
  return p.parse();
}

inline std::string printScript(const ScriptExpr& e) {
  std::ostringstream out;
  script_text::detail::print(out, e, 0);
  return out.str();
}

inline std::string printScript(const ExprPtr& e) { return printScript(*e); }

}  // namespace asc1
