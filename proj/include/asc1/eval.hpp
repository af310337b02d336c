#pragma once

#include <optional>
#include <vector>

#include "asc1/codec.hpp"
#include "asc1/crypto.hpp"
#include "asc1/ledger.hpp"
#include "asc1/script.hpp"

namespace asc1 {

// Script evaluation parameters: the atomic group, the index of the
// transaction whose script is being evaluated, and the witness
// arguments supplied with it.
struct EvalContext {
  std::vector<Transaction> group;
  u64 index = 0;
  std::vector<Bytes> args;
  const SignatureProvider* provider = &ed25519Provider();
};

namespace detail {

// Witnesses ride the network as raw byte strings. An argument of
// exactly 8 bytes is the canonical u64 encoding of a numeric witness
// and is read back as one; every other length stays a byte string.
inline ScriptValue argValue(const Bytes& w) {
  if (w.size() == 8) {
    u64 v = 0;
    for (auto b : w) v = (v << 8) | b;
    return ScriptValue::nat(v);
  }
  return ScriptValue::bytes(w);
}

// Numeric reading of an operand of the arithmetic and ordering
// operators. Byte operands are read as big-endian integers truncated to
// their low 32 bits, which keeps any single sum or product of two
// coerced operands inside the 64-bit range.
inline std::optional<u64> coerceNat(const ScriptValue& v) {
  if (v.isNat()) return v.asNat();
  if (v.isBytes()) {
    const Bytes& b = v.asBytes();
    u64 out = 0;
    std::size_t start = b.size() > 4 ? b.size() - 4 : 0;
    for (std::size_t i = start; i < b.size(); ++i) out = (out << 8) | b[i];
    return out;
  }
  return std::nullopt;
}

inline Bytes valueBytes(const ScriptValue& v) {
  if (v.isNat()) return u64beBytes(v.asNat());
  return v.asBytes();
}

inline ScriptValue boolValue(bool b) { return ScriptValue::nat(b ? 1 : 0); }

inline ScriptValue applyStrictBinOp(BinOpKind op, const ScriptValue& v0, const ScriptValue& v1) {
  if (op == BinOpKind::Eq) {
    // Defined only when both operands share a tag; type confusion in a
    // contract fails loudly instead of silently rejecting.
    if (v0.isBottom() || v1.isBottom()) return ScriptValue::bottom();
    if (v0.tag() != v1.tag()) return ScriptValue::bottom();
    if (v0.isNat()) return boolValue(v0.asNat() == v1.asNat());
    return boolValue(v0.asBytes() == v1.asBytes());
  }
  auto a = coerceNat(v0);
  auto b = coerceNat(v1);
  if (!a || !b) return ScriptValue::bottom();
  switch (op) {
    case BinOpKind::Add:
      if (*a > ~u64{0} - *b) return ScriptValue::bottom();
      return ScriptValue::nat(*a + *b);
    case BinOpKind::Sub:
      if (*a < *b) return ScriptValue::bottom();
      return ScriptValue::nat(*a - *b);
    case BinOpKind::Mul:
      if (*b != 0 && *a > ~u64{0} / *b) return ScriptValue::bottom();
      return ScriptValue::nat(*a * *b);
    case BinOpKind::Div:
      if (*b == 0) return ScriptValue::bottom();
      return ScriptValue::nat(*a / *b);
    case BinOpKind::Mod:
      if (*b == 0) return ScriptValue::bottom();
      return ScriptValue::nat(*a % *b);
    case BinOpKind::Lt: return boolValue(*a < *b);
    case BinOpKind::Le: return boolValue(*a <= *b);
    case BinOpKind::Ge: return boolValue(*a >= *b);
    case BinOpKind::Gt: return boolValue(*a > *b);
    default: return ScriptValue::bottom();
  }
}

}  // namespace detail

// Total, terminating evaluation; failure is the Bottom value, never an
// exception. and/or short-circuit on the left operand, every other
// operator is strict.
inline ScriptValue evalScript(const EvalContext& ctx, const ScriptExpr& e) {
  using detail::argValue;
  using detail::boolValue;
  using detail::valueBytes;

  switch (e.kind) {
    case ScriptExpr::Kind::Const:
      return e.constant;

    case ScriptExpr::Kind::BinOp: {
      if (e.op == BinOpKind::And || e.op == BinOpKind::Or) {
        ScriptValue v0 = evalScript(ctx, *e.operands[0]);
        if (!v0.isNat()) return ScriptValue::bottom();
        if (e.op == BinOpKind::And) {
          if (v0.asNat() == 0) return ScriptValue::nat(0);
          return evalScript(ctx, *e.operands[1]);
        }
        if (v0.asNat() != 0) return ScriptValue::nat(1);
        return evalScript(ctx, *e.operands[1]);
      }
      ScriptValue v0 = evalScript(ctx, *e.operands[0]);
      ScriptValue v1 = evalScript(ctx, *e.operands[1]);
      return detail::applyStrictBinOp(e.op, v0, v1);
    }

    case ScriptExpr::Kind::Not: {
      ScriptValue v = evalScript(ctx, *e.operands[0]);
      if (!v.isNat()) return ScriptValue::bottom();
      return boolValue(v.asNat() == 0);
    }

    case ScriptExpr::Kind::TxLen:
      return ScriptValue::nat(static_cast<u64>(ctx.group.size()));

    case ScriptExpr::Kind::TxPos:
      return ScriptValue::nat(ctx.index);

    case ScriptExpr::Kind::TxId: {
      u64 n = e.selector.current ? ctx.index : e.selector.index;
      if (n >= ctx.group.size()) return ScriptValue::bottom();
      return ScriptValue::bytes(txId(ctx.group[n]));
    }

    case ScriptExpr::Kind::TxField: {
      u64 n = e.selector.current ? ctx.index : e.selector.index;
      if (n >= ctx.group.size()) return ScriptValue::bottom();
      const Transaction& t = ctx.group[n];
      switch (e.field) {
        case TxFieldKind::Type: return ScriptValue::bytes(txTypeTagBytes(t.type));
        case TxFieldKind::Snd: return ScriptValue::bytes(t.snd.encoding());
        case TxFieldKind::Rcv: return ScriptValue::bytes(t.rcv.encoding());
        case TxFieldKind::Val: return ScriptValue::nat(t.val);
        case TxFieldKind::Asst: return ScriptValue::nat(t.asst);
        case TxFieldKind::Fv: return ScriptValue::nat(t.fv);
        case TxFieldKind::Lv: return ScriptValue::nat(t.lv);
        case TxFieldKind::Lx: return ScriptValue::nat(t.lx);
      }
      return ScriptValue::bottom();
    }

    case ScriptExpr::Kind::Arg:
      if (e.argIndex >= ctx.args.size()) return ScriptValue::bottom();
      return argValue(ctx.args[e.argIndex]);

    case ScriptExpr::Kind::Hash: {
      ScriptValue v = evalScript(ctx, *e.operands[0]);
      if (v.isBottom()) return ScriptValue::bottom();
      return ScriptValue::bytes(sha256(valueBytes(v)));
    }

    case ScriptExpr::Kind::Versig: {
      ScriptValue data = evalScript(ctx, *e.operands[0]);
      ScriptValue sig = evalScript(ctx, *e.operands[1]);
      ScriptValue key = evalScript(ctx, *e.operands[2]);
      if (data.isBottom() || !sig.isBytes() || !key.isBytes()) return ScriptValue::bottom();
      Bytes msg = versigMessage(ctx.group[ctx.index].snd, data);
      return boolValue(ctx.provider->verify(key.asBytes(), msg, sig.asBytes()));
    }
  }
  return ScriptValue::bottom();
}

inline ScriptValue evalScript(const EvalContext& ctx, const ExprPtr& e) {
  return evalScript(ctx, *e);
}

// A script accepts when it evaluates to a nonzero number; Bytes results
// and Bottom reject, matching the compilation target.
inline bool accepts(const EvalContext& ctx, const ScriptExpr& e) {
  ScriptValue v = evalScript(ctx, e);
  return v.isNat() && v.asNat() != 0;
}

inline bool accepts(const EvalContext& ctx, const ExprPtr& e) { return accepts(ctx, *e); }

}  // namespace asc1
