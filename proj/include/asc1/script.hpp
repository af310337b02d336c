#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "asc1/bytes.hpp"

namespace asc1 {

// Tagged value domain produced by script evaluation: unsigned 64-bit
// numbers, byte strings, or the failure value Bottom. Addresses, type
// tags, transaction ids, hashes, signatures and witness arguments are
// carried as Bytes; numeric fields and literals are Nat64.
class ScriptValue {
 public:
  enum class Tag { Nat, Bytes, Bottom };

  ScriptValue() : tag_(Tag::Bottom) {}
  static ScriptValue nat(u64 v) {
    ScriptValue s;
    s.tag_ = Tag::Nat;
    s.nat_ = v;
    return s;
  }
  static ScriptValue bytes(Bytes b) {
    ScriptValue s;
    s.tag_ = Tag::Bytes;
    s.bytes_ = std::move(b);
    return s;
  }
  static ScriptValue bottom() { return ScriptValue(); }

  Tag tag() const { return tag_; }
  bool isNat() const { return tag_ == Tag::Nat; }
  bool isBytes() const { return tag_ == Tag::Bytes; }
  bool isBottom() const { return tag_ == Tag::Bottom; }

  u64 asNat() const {
    if (!isNat()) throw std::logic_error("ScriptValue is not Nat64");
    return nat_;
  }
  const Bytes& asBytes() const {
    if (!isBytes()) throw std::logic_error("ScriptValue is not Bytes");
    return bytes_;
  }

  bool operator==(const ScriptValue& o) const {
    if (tag_ != o.tag_) return false;
    switch (tag_) {
      case Tag::Nat: return nat_ == o.nat_;
      case Tag::Bytes: return bytes_ == o.bytes_;
      case Tag::Bottom: return true;
    }
    return false;
  }
  bool operator!=(const ScriptValue& o) const { return !(*this == o); }

 private:
  Tag tag_;
  u64 nat_ = 0;
  Bytes bytes_;
};

// Binary operators, in the order they are listed in the script grammar.
enum class BinOpKind : std::uint8_t {
  Add = 0, Sub, Lt, Le, Eq, Ge, Gt, Mul, Div, Mod, And, Or
};

enum class TxFieldKind : std::uint8_t {
  Type = 0, Snd, Rcv, Val, Asst, Fv, Lv, Lx
};

inline const char* txFieldName(TxFieldKind f) {
  switch (f) {
    case TxFieldKind::Type: return "type";
    case TxFieldKind::Snd: return "snd";
    case TxFieldKind::Rcv: return "rcv";
    case TxFieldKind::Val: return "val";
    case TxFieldKind::Asst: return "asst";
    case TxFieldKind::Fv: return "fv";
    case TxFieldKind::Lv: return "lv";
    case TxFieldKind::Lx: return "lx";
  }
  return "?";
}

// Group position selector of txid/tx(n).f accessors: either the literal
// index n, or the transaction currently being evaluated (txpos).
struct TxSelector {
  bool current = true;
  u64 index = 0;

  static TxSelector self() { return TxSelector{}; }
  static TxSelector at(u64 n) { return TxSelector{false, n}; }

  bool operator==(const TxSelector& o) const {
    return current == o.current && (current || index == o.index);
  }
};

class ScriptExpr;
using ExprPtr = std::shared_ptr<const ScriptExpr>;

class ScriptExpr {
 public:
  enum class Kind : std::uint8_t {
    Const = 0, BinOp, Not, TxLen, TxPos, TxId, TxField, Arg, Hash, Versig
  };

  Kind kind;
  ScriptValue constant;            // Const
  BinOpKind op = BinOpKind::Add;   // BinOp
  TxSelector selector;             // TxId, TxField
  TxFieldKind field = TxFieldKind::Type;  // TxField
  u64 argIndex = 0;                // Arg
  std::vector<ExprPtr> operands;
};

namespace expr {

inline ExprPtr make(ScriptExpr e) { return std::make_shared<const ScriptExpr>(std::move(e)); }

inline ExprPtr constant(ScriptValue v) {
  ScriptExpr e;
  e.kind = ScriptExpr::Kind::Const;
  e.constant = std::move(v);
  return make(std::move(e));
}
inline ExprPtr natConst(u64 v) { return constant(ScriptValue::nat(v)); }
inline ExprPtr bytesConst(Bytes b) { return constant(ScriptValue::bytes(std::move(b))); }

inline ExprPtr binOp(BinOpKind op, ExprPtr a, ExprPtr b) {
  ScriptExpr e;
  e.kind = ScriptExpr::Kind::BinOp;
  e.op = op;
  e.operands = {std::move(a), std::move(b)};
  return make(std::move(e));
}
inline ExprPtr add(ExprPtr a, ExprPtr b) { return binOp(BinOpKind::Add, std::move(a), std::move(b)); }
inline ExprPtr sub(ExprPtr a, ExprPtr b) { return binOp(BinOpKind::Sub, std::move(a), std::move(b)); }
inline ExprPtr mul(ExprPtr a, ExprPtr b) { return binOp(BinOpKind::Mul, std::move(a), std::move(b)); }
inline ExprPtr div(ExprPtr a, ExprPtr b) { return binOp(BinOpKind::Div, std::move(a), std::move(b)); }
inline ExprPtr mod(ExprPtr a, ExprPtr b) { return binOp(BinOpKind::Mod, std::move(a), std::move(b)); }
inline ExprPtr lt(ExprPtr a, ExprPtr b) { return binOp(BinOpKind::Lt, std::move(a), std::move(b)); }
inline ExprPtr le(ExprPtr a, ExprPtr b) { return binOp(BinOpKind::Le, std::move(a), std::move(b)); }
inline ExprPtr eq(ExprPtr a, ExprPtr b) { return binOp(BinOpKind::Eq, std::move(a), std::move(b)); }
inline ExprPtr ge(ExprPtr a, ExprPtr b) { return binOp(BinOpKind::Ge, std::move(a), std::move(b)); }
inline ExprPtr gt(ExprPtr a, ExprPtr b) { return binOp(BinOpKind::Gt, std::move(a), std::move(b)); }
inline ExprPtr andE(ExprPtr a, ExprPtr b) { return binOp(BinOpKind::And, std::move(a), std::move(b)); }
inline ExprPtr orE(ExprPtr a, ExprPtr b) { return binOp(BinOpKind::Or, std::move(a), std::move(b)); }

inline ExprPtr notE(ExprPtr a) {
  ScriptExpr e;
  e.kind = ScriptExpr::Kind::Not;
  e.operands = {std::move(a)};
  return make(std::move(e));
}

inline ExprPtr txLen() {
  ScriptExpr e;
  e.kind = ScriptExpr::Kind::TxLen;
  return make(std::move(e));
}
inline ExprPtr txPos() {
  ScriptExpr e;
  e.kind = ScriptExpr::Kind::TxPos;
  return make(std::move(e));
}
inline ExprPtr txIdSel(TxSelector sel) {
  ScriptExpr e;
  e.kind = ScriptExpr::Kind::TxId;
  e.selector = sel;
  return make(std::move(e));
}
inline ExprPtr txId() { return txIdSel(TxSelector::self()); }
inline ExprPtr txIdAt(u64 n) { return txIdSel(TxSelector::at(n)); }

inline ExprPtr txFieldSel(TxSelector sel, TxFieldKind f) {
  ScriptExpr e;
  e.kind = ScriptExpr::Kind::TxField;
  e.selector = sel;
  e.field = f;
  return make(std::move(e));
}
inline ExprPtr txField(TxFieldKind f) { return txFieldSel(TxSelector::self(), f); }
inline ExprPtr txFieldAt(u64 n, TxFieldKind f) { return txFieldSel(TxSelector::at(n), f); }

inline ExprPtr arg(u64 n) {
  ScriptExpr e;
  e.kind = ScriptExpr::Kind::Arg;
  e.argIndex = n;
  return make(std::move(e));
}

inline ExprPtr hash(ExprPtr a) {
  ScriptExpr e;
  e.kind = ScriptExpr::Kind::Hash;
  e.operands = {std::move(a)};
  return make(std::move(e));
}

inline ExprPtr versig(ExprPtr data, ExprPtr sig, ExprPtr key) {
  ScriptExpr e;
  e.kind = ScriptExpr::Kind::Versig;
  e.operands = {std::move(data), std::move(sig), std::move(key)};
  return make(std::move(e));
}

// Syntactic sugar; these produce only core constructors.
inline ExprPtr trueE() { return eq(natConst(1), natConst(1)); }
inline ExprPtr falseE() { return eq(natConst(1), natConst(0)); }
inline ExprPtr ifE(ExprPtr cond, ExprPtr thenE, ExprPtr elseE) {
  return orE(andE(cond, std::move(thenE)), andE(notE(cond), std::move(elseE)));
}

}  // namespace expr

// Canonical encoding of script values and expressions. Expression
// constructors use tags 0x20 and up in grammar order; a value is a
// tagged Nat64 or length-prefixed byte string.
namespace codec {

constexpr std::uint8_t kTagValueNat = 0x30;
constexpr std::uint8_t kTagValueBytes = 0x31;

inline void writeScriptValue(ByteWriter& w, const ScriptValue& v) {
  if (v.isNat()) {
    w.byte(kTagValueNat);
    w.u64be(v.asNat());
  } else if (v.isBytes()) {
    w.byte(kTagValueBytes);
    w.lengthPrefixed(v.asBytes());
  } else {
    throw std::invalid_argument("Bottom has no canonical encoding");
  }
}

inline ScriptValue readScriptValue(ByteReader& r) {
  auto tag = r.byte();
  if (tag == kTagValueNat) return ScriptValue::nat(r.u64be());
  if (tag == kTagValueBytes) return ScriptValue::bytes(r.lengthPrefixed());
  throw DecodeError("unknown script value tag");
}

inline void writeSelector(ByteWriter& w, const TxSelector& sel) {
  if (sel.current) {
    w.byte(0x00);
  } else {
    w.byte(0x01);
    w.u64be(sel.index);
  }
}

inline TxSelector readSelector(ByteReader& r) {
  auto tag = r.byte();
  if (tag == 0x00) return TxSelector::self();
  if (tag == 0x01) return TxSelector::at(r.u64be());
  throw DecodeError("unknown tx selector tag");
}

constexpr std::uint8_t kTagExprBase = 0x20;

inline void writeExpr(ByteWriter& w, const ScriptExpr& e) {
  w.byte(static_cast<std::uint8_t>(kTagExprBase + static_cast<std::uint8_t>(e.kind)));
  switch (e.kind) {
    case ScriptExpr::Kind::Const:
      writeScriptValue(w, e.constant);
      break;
    case ScriptExpr::Kind::BinOp:
      w.byte(static_cast<std::uint8_t>(e.op));
      writeExpr(w, *e.operands[0]);
      writeExpr(w, *e.operands[1]);
      break;
    case ScriptExpr::Kind::Not:
      writeExpr(w, *e.operands[0]);
      break;
    case ScriptExpr::Kind::TxLen:
    case ScriptExpr::Kind::TxPos:
      break;
    case ScriptExpr::Kind::TxId:
      writeSelector(w, e.selector);
      break;
    case ScriptExpr::Kind::TxField:
      writeSelector(w, e.selector);
      w.byte(static_cast<std::uint8_t>(e.field));
      break;
    case ScriptExpr::Kind::Arg:
      w.u64be(e.argIndex);
      break;
    case ScriptExpr::Kind::Hash:
      writeExpr(w, *e.operands[0]);
      break;
    case ScriptExpr::Kind::Versig:
      writeExpr(w, *e.operands[0]);
      writeExpr(w, *e.operands[1]);
      writeExpr(w, *e.operands[2]);
      break;
  }
}

inline ExprPtr readExpr(ByteReader& r, int depth = 0) {
  if (depth > 512) throw DecodeError("script expression too deep");
  auto tag = r.byte();
  if (tag < kTagExprBase || tag > kTagExprBase + 9) throw DecodeError("unknown expression tag");
  auto kind = static_cast<ScriptExpr::Kind>(tag - kTagExprBase);
  ScriptExpr e;
  e.kind = kind;
  switch (kind) {
    case ScriptExpr::Kind::Const:
      e.constant = readScriptValue(r);
      break;
    case ScriptExpr::Kind::BinOp: {
      auto op = r.byte();
      if (op > static_cast<std::uint8_t>(BinOpKind::Or)) throw DecodeError("unknown operator");
      e.op = static_cast<BinOpKind>(op);
      e.operands.push_back(readExpr(r, depth + 1));
      e.operands.push_back(readExpr(r, depth + 1));
      break;
    }
    case ScriptExpr::Kind::Not:
      e.operands.push_back(readExpr(r, depth + 1));
      break;
    case ScriptExpr::Kind::TxLen:
    case ScriptExpr::Kind::TxPos:
      break;
    case ScriptExpr::Kind::TxId:
      e.selector = readSelector(r);
      break;
    case ScriptExpr::Kind::TxField: {
      e.selector = readSelector(r);
      auto f = r.byte();
      if (f > static_cast<std::uint8_t>(TxFieldKind::Lx)) throw DecodeError("unknown field");
      e.field = static_cast<TxFieldKind>(f);
      break;
    }
    case ScriptExpr::Kind::Arg:
      e.argIndex = r.u64be();
      break;
    case ScriptExpr::Kind::Hash:
      e.operands.push_back(readExpr(r, depth + 1));
      break;
    case ScriptExpr::Kind::Versig:
      e.operands.push_back(readExpr(r, depth + 1));
      e.operands.push_back(readExpr(r, depth + 1));
      e.operands.push_back(readExpr(r, depth + 1));
      break;
  }
  return expr::make(std::move(e));
}

}  // namespace codec

inline Bytes encodeExpr(const ScriptExpr& e) {
  ByteWriter w;
  codec::writeExpr(w, e);
  return w.take();
}
inline Bytes encodeExpr(const ExprPtr& e) { return encodeExpr(*e); }

inline ExprPtr decodeExpr(const Bytes& b) {
  ByteReader r(b);
  auto e = codec::readExpr(r);
  r.expectEnd();
  return e;
}

// Structural equality via the injective canonical encoding.
inline bool exprEqual(const ExprPtr& a, const ExprPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return encodeExpr(a) == encodeExpr(b);
}

}  // namespace asc1
