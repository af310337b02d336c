#pragma once

#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "asc1/codec.hpp"
#include "asc1/eval.hpp"
#include "asc1/ledger.hpp"
#include "asc1/script.hpp"

namespace asc1::teal {

using ConcreteTx = nlohmann::ordered_json;

struct TranslateError : std::runtime_error {
  explicit TranslateError(const std::string& what) : std::runtime_error(what) {}
};

// ---------------------------------------------------------------------------
// Programs

struct Instr {
  enum class Op {
    Int, ByteConst, Arg, Txn, Gtxn, Global,
    Add, Sub, Mul, Div, Mod, Lt, Gt, Le, Ge, Eq, Not,
    Bnz, Pop, Dup, Store, Load, Sha256, Ed25519Verify, Err, Label
  };
  Op op;
  u64 num = 0;        // Int value, Arg index, Gtxn group index, Store/Load slot
  Bytes data;         // ByteConst
  std::string field;  // Txn/Gtxn/Global field
  std::string label;  // Bnz target / Label name
};

struct Program {
  std::vector<Instr> code;
  int requiredVersion = 1;
};

namespace detail {

inline Instr op0(Instr::Op op) {
  Instr i;
  i.op = op;
  return i;
}
inline Instr opInt(u64 v) {
  Instr i = op0(Instr::Op::Int);
  i.num = v;
  return i;
}
inline Instr opByte(Bytes b) {
  Instr i = op0(Instr::Op::ByteConst);
  i.data = std::move(b);
  return i;
}
inline Instr opArg(u64 n) {
  Instr i = op0(Instr::Op::Arg);
  i.num = n;
  return i;
}
inline Instr opTxn(std::string field) {
  Instr i = op0(Instr::Op::Txn);
  i.field = std::move(field);
  return i;
}
inline Instr opGtxn(u64 n, std::string field) {
  Instr i = op0(Instr::Op::Gtxn);
  i.num = n;
  i.field = std::move(field);
  return i;
}
inline Instr opGlobal(std::string field) {
  Instr i = op0(Instr::Op::Global);
  i.field = std::move(field);
  return i;
}
inline Instr opBnz(std::string label) {
  Instr i = op0(Instr::Op::Bnz);
  i.label = std::move(label);
  return i;
}
inline Instr opLabel(std::string name) {
  Instr i = op0(Instr::Op::Label);
  i.label = std::move(name);
  return i;
}
inline Instr opStore(u64 slot) {
  Instr i = op0(Instr::Op::Store);
  i.num = slot;
  return i;
}
inline Instr opLoad(u64 slot) {
  Instr i = op0(Instr::Op::Load);
  i.num = slot;
  return i;
}

}  // namespace detail

inline std::string toText(const Program& p) {
  std::ostringstream out;
  out << "// asc1 script, LogicSigVersion >= " << p.requiredVersion << "\n";
  for (const auto& i : p.code) {
    switch (i.op) {
      case Instr::Op::Int: out << "int " << i.num; break;
      case Instr::Op::ByteConst: out << "byte 0x" << hexEncode(i.data); break;
      case Instr::Op::Arg: out << "arg " << i.num; break;
      case Instr::Op::Txn: out << "txn " << i.field; break;
      case Instr::Op::Gtxn: out << "gtxn " << i.num << " " << i.field; break;
      case Instr::Op::Global: out << "global " << i.field; break;
      case Instr::Op::Add: out << "+"; break;
      case Instr::Op::Sub: out << "-"; break;
      case Instr::Op::Mul: out << "*"; break;
      case Instr::Op::Div: out << "/"; break;
      case Instr::Op::Mod: out << "%"; break;
      case Instr::Op::Lt: out << "<"; break;
      case Instr::Op::Gt: out << ">"; break;
      case Instr::Op::Le: out << "<="; break;
      case Instr::Op::Ge: out << ">="; break;
      case Instr::Op::Eq: out << "=="; break;
      case Instr::Op::Not: out << "!"; break;
      case Instr::Op::Bnz: out << "bnz " << i.label; break;
      case Instr::Op::Pop: out << "pop"; break;
      case Instr::Op::Dup: out << "dup"; break;
      case Instr::Op::Store: out << "store " << i.num; break;
      case Instr::Op::Load: out << "load " << i.num; break;
      case Instr::Op::Sha256: out << "sha256"; break;
      case Instr::Op::Ed25519Verify: out << "ed25519verify"; break;
      case Instr::Op::Err: out << "err"; break;
      case Instr::Op::Label: out << i.label << ":"; break;
    }
    out << "\n";
  }
  return out.str();
}

inline Program parseText(const std::string& text) {
  Program p;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    auto comment = line.find("//");
    if (comment != std::string::npos) {
      if (line.find("LogicSigVersion >=") != std::string::npos) {
        auto pos = line.find(">=");
        p.requiredVersion = std::stoi(line.substr(pos + 2));
      }
      line = line.substr(0, comment);
    }
    std::istringstream ls(line);
    std::string word;
    if (!(ls >> word)) continue;
    using detail::op0;
    if (word.back() == ':') {
      p.code.push_back(detail::opLabel(word.substr(0, word.size() - 1)));
    } else if (word == "int") {
      u64 v;
      ls >> v;
      p.code.push_back(detail::opInt(v));
    } else if (word == "byte") {
      std::string hex;
      ls >> hex;
      if (hex.rfind("0x", 0) != 0) throw std::invalid_argument("byte literal must be 0x-hex");
      p.code.push_back(detail::opByte(hexDecode(hex.substr(2))));
    } else if (word == "arg") {
      u64 n;
      ls >> n;
      p.code.push_back(detail::opArg(n));
    } else if (word == "txn") {
      std::string f;
      ls >> f;
      p.code.push_back(detail::opTxn(f));
    } else if (word == "gtxn") {
      u64 n;
      std::string f;
      ls >> n >> f;
      p.code.push_back(detail::opGtxn(n, f));
    } else if (word == "global") {
      std::string f;
      ls >> f;
      p.code.push_back(detail::opGlobal(f));
    } else if (word == "bnz") {
      std::string l;
      ls >> l;
      p.code.push_back(detail::opBnz(l));
    } else if (word == "store" || word == "load") {
      u64 n;
      ls >> n;
      p.code.push_back(word == "store" ? detail::opStore(n) : detail::opLoad(n));
    } else if (word == "+") p.code.push_back(op0(Instr::Op::Add));
    else if (word == "-") p.code.push_back(op0(Instr::Op::Sub));
    else if (word == "*") p.code.push_back(op0(Instr::Op::Mul));
    else if (word == "/") p.code.push_back(op0(Instr::Op::Div));
    else if (word == "%") p.code.push_back(op0(Instr::Op::Mod));
    else if (word == "<") p.code.push_back(op0(Instr::Op::Lt));
    else if (word == ">") p.code.push_back(op0(Instr::Op::Gt));
    else if (word == "<=") p.code.push_back(op0(Instr::Op::Le));
    else if (word == ">=") p.code.push_back(op0(Instr::Op::Ge));
    else if (word == "==") p.code.push_back(op0(Instr::Op::Eq));
    else if (word == "!") p.code.push_back(op0(Instr::Op::Not));
    else if (word == "pop") p.code.push_back(op0(Instr::Op::Pop));
    else if (word == "dup") p.code.push_back(op0(Instr::Op::Dup));
    else if (word == "sha256") p.code.push_back(op0(Instr::Op::Sha256));
    else if (word == "ed25519verify") p.code.push_back(op0(Instr::Op::Ed25519Verify));
    else if (word == "err") p.code.push_back(op0(Instr::Op::Err));
    else throw std::invalid_argument("unknown opcode: " + word);
  }
  return p;
}

// Static stack check: every instruction must find its arity on the
// stack, and branch joins must agree on the depth.
struct StackCheck {
  bool ok = false;
  std::string error;
  std::size_t maxDepth = 0;
};

inline StackCheck checkProgram(const Program& p) {
  StackCheck result;
  std::map<std::string, long> labelDepth;
  long depth = 0;
  bool reachable = true;
  bool prevPushedNonzeroInt = false;
  auto fail = [&](const std::string& why) {
    result.error = why;
    return result;
  };
  for (const auto& i : p.code) {
    if (i.op == Instr::Op::Label) {
      auto it = labelDepth.find(i.label);
      if (it != labelDepth.end()) {
        if (reachable && depth != it->second) return fail("branch join with mismatched depth");
        // a label reached only by jumps resumes at the recorded depth
        depth = it->second;
        reachable = true;
      }
      // a label without recorded jumps keeps the fallthrough state; in
      // dead code it stays dead
      prevPushedNonzeroInt = false;
      continue;
    }
    if (!reachable) continue;
    bool unconditionalJump =
        i.op == Instr::Op::Bnz && prevPushedNonzeroInt;  // the `int 1; bnz` jump idiom
    prevPushedNonzeroInt = i.op == Instr::Op::Int && i.num != 0;
    long pops = 0, pushes = 0;
    switch (i.op) {
      case Instr::Op::Int: case Instr::Op::ByteConst: case Instr::Op::Arg:
      case Instr::Op::Txn: case Instr::Op::Gtxn: case Instr::Op::Global:
      case Instr::Op::Load:
        pushes = 1;
        break;
      case Instr::Op::Add: case Instr::Op::Sub: case Instr::Op::Mul:
      case Instr::Op::Div: case Instr::Op::Mod: case Instr::Op::Lt:
      case Instr::Op::Gt: case Instr::Op::Le: case Instr::Op::Ge:
      case Instr::Op::Eq:
        pops = 2;
        pushes = 1;
        break;
      case Instr::Op::Not: case Instr::Op::Sha256:
        pops = 1;
        pushes = 1;
        break;
      case Instr::Op::Ed25519Verify:
        pops = 3;
        pushes = 1;
        break;
      case Instr::Op::Bnz: case Instr::Op::Pop: case Instr::Op::Store:
        pops = 1;
        break;
      case Instr::Op::Dup:
        pops = 1;
        pushes = 2;
        break;
      case Instr::Op::Err:
        break;
      case Instr::Op::Label:
        break;
    }
    if (depth < pops) return fail("static stack underflow");
    depth = depth - pops + pushes;
    result.maxDepth = std::max<std::size_t>(result.maxDepth, static_cast<std::size_t>(depth));
    if (i.op == Instr::Op::Bnz) {
      auto it = labelDepth.find(i.label);
      if (it == labelDepth.end()) {
        labelDepth[i.label] = depth;
      } else if (it->second != depth) {
        return fail("branch join with mismatched depth");
      }
    }
    if (i.op == Instr::Op::Err || unconditionalJump) reachable = false;
  }
  result.ok = true;
  return result;
}

// ---------------------------------------------------------------------------
// Transaction translation (model record -> concrete field layout)

namespace detail {

inline std::string addrHex(const Address& a) { return hexEncode(a.encoding()); }

inline void putCommon(ConcreteTx& j, const Transaction& t) {
  j["FirstValid"] = t.fv;
  j["LastValid"] = t.lv;
  j["Lease"] = t.lx;
}

}  // namespace detail

// Inverse of the decoding table: each model type/asset combination maps
// to exactly one concrete field layout. 0 marks an unset address field.
inline ConcreteTx translateTx(const Transaction& t,
                              const std::map<AssetId, AssetInfo>& assetMap) {
  using detail::addrHex;
  ConcreteTx j = ConcreteTx::object();
  auto managerHexOr = [&](const Address& fallback) {
    auto it = assetMap.find(t.asst);
    return addrHex(it != assetMap.end() ? it->second.manager : fallback);
  };
  switch (t.type) {
    case TxType::Close:
      if (t.asst == kAlgo) {
        j["type"] = "pay";
        j["snd"] = addrHex(t.snd);
        j["rcv"] = 0;
        j["close"] = addrHex(t.rcv);
        j["amt"] = 0;
      } else {
        j["type"] = "axfer";
        j["snd"] = addrHex(t.snd);
        j["asnd"] = addrHex(t.snd);
        j["arcv"] = 0;
        j["aclose"] = addrHex(t.rcv);
        j["xaid"] = t.asst;
        j["aamt"] = 0;
      }
      break;
    case TxType::Pay:
      if (t.asst == kAlgo) {
        j["type"] = "pay";
        j["snd"] = addrHex(t.snd);
        j["rcv"] = addrHex(t.rcv);
        j["close"] = 0;
        j["amt"] = t.val;
      } else {
        if (t.val == 0)
          throw TranslateError("zero-amount asset payment matches no concrete layout");
        j["type"] = "axfer";
        j["snd"] = addrHex(t.snd);
        j["asnd"] = 0;
        j["arcv"] = addrHex(t.rcv);
        j["aclose"] = 0;
        j["xaid"] = t.asst;
        j["aamt"] = t.val;
      }
      break;
    case TxType::Gen:
      j["type"] = "acfg";
      j["snd"] = addrHex(t.snd);
      j["ConfigAsset"] = 0;
      j["ConfigAssetManager"] = addrHex(t.rcv);
      j["ConfigAssetFreeze"] = addrHex(t.rcv);
      j["ConfigAssetReserve"] = addrHex(t.rcv);
      j["ConfigAssetClawback"] = addrHex(t.rcv);
      j["AssetAmount"] = t.val;
      break;
    case TxType::Optin:
      j["type"] = "axfer";
      j["snd"] = addrHex(t.snd);
      j["asnd"] = 0;
      j["arcv"] = addrHex(t.snd);
      j["aclose"] = 0;
      j["xaid"] = t.asst;
      j["aamt"] = 0;
      break;
    case TxType::Burn:
      j["type"] = "acfg";
      j["snd"] = addrHex(t.snd);
      j["ConfigAsset"] = t.asst;
      j["ConfigAssetManager"] = 0;
      j["ConfigAssetFreeze"] = 0;
      j["ConfigAssetReserve"] = 0;
      j["ConfigAssetClawback"] = 0;
      break;
    case TxType::Rvk:
      j["type"] = "axfer";
      j["snd"] = managerHexOr(t.snd);
      j["asnd"] = addrHex(t.snd);
      j["arcv"] = addrHex(t.rcv);
      j["aclose"] = 0;
      j["xaid"] = t.asst;
      j["aamt"] = t.val;
      break;
    case TxType::Frz:
    case TxType::Unfrz:
      j["type"] = "afrz";
      j["snd"] = managerHexOr(t.snd);
      j["FreezeAsset"] = t.asst;
      j["FreezeAccount"] = addrHex(t.snd);
      j["AssetFrozen"] = (t.type == TxType::Frz);
      break;
    case TxType::Delegate:
      j["type"] = "acfg";
      j["snd"] = addrHex(t.snd);
      j["ConfigAsset"] = t.asst;
      j["ConfigAssetManager"] = addrHex(t.rcv);
      j["ConfigAssetFreeze"] = addrHex(t.rcv);
      j["ConfigAssetReserve"] = addrHex(t.rcv);
      j["ConfigAssetClawback"] = addrHex(t.rcv);
      break;
  }
  detail::putCommon(j, t);
  return j;
}

inline std::vector<ConcreteTx> translateGroup(const std::vector<Transaction>& group,
                                              const std::map<AssetId, AssetInfo>& assetMap) {
  std::vector<ConcreteTx> out;
  out.reserve(group.size());
  for (const auto& t : group) out.push_back(translateTx(t, assetMap));
  return out;
}

namespace detail {

inline Bytes addrFieldBytes(const ConcreteTx& j, const char* key) {
  if (!j.contains(key)) return {};
  const auto& v = j.at(key);
  if (v.is_number()) return {};  // 0 marks an unset address field
  return hexDecode(v.get<std::string>());
}

inline u64 uintField(const ConcreteTx& j, const char* key) {
  if (!j.contains(key)) return 0;
  const auto& v = j.at(key);
  if (v.is_boolean()) return v.get<bool>() ? 1 : 0;
  return v.get<u64>();
}

inline std::optional<Address> addrField(const ConcreteTx& j, const char* key) {
  Bytes enc = addrFieldBytes(j, key);
  if (enc.empty()) return std::nullopt;
  try {
    return decodeAddress(enc);
  } catch (const DecodeError&) {
    return std::nullopt;
  }
}

}  // namespace detail

// Recovers the model record from a concrete transaction by matching the
// decoding rows; fields the row does not carry take their canonical
// defaults, matching how well-formed model transactions are built.
inline std::optional<Transaction> decodeConcreteTx(const ConcreteTx& j) {
  using detail::addrField;
  using detail::addrFieldBytes;
  using detail::uintField;
  if (!j.contains("type") || !j.at("type").is_string()) return std::nullopt;
  std::string type = j.at("type").get<std::string>();
  auto snd = addrField(j, "snd");
  Transaction t;
  if (type == "pay") {
    if (!snd) return std::nullopt;
    auto close = addrField(j, "close");
    if (close) {
      if (uintField(j, "amt") != 0) return std::nullopt;
      t = tx::close(*snd, *close, kAlgo, {});
    } else {
      auto rcv = addrField(j, "rcv");
      if (!rcv) return std::nullopt;
      t = tx::pay(*snd, *rcv, uintField(j, "amt"), kAlgo, {});
    }
  } else if (type == "axfer") {
    AssetId asset = uintField(j, "xaid");
    auto aclose = addrField(j, "aclose");
    auto asnd = addrField(j, "asnd");
    auto arcv = addrField(j, "arcv");
    if (aclose) {
      if (!asnd || uintField(j, "aamt") != 0) return std::nullopt;
      t = tx::close(*asnd, *aclose, asset, {});
    } else if (asnd) {
      if (!snd || !arcv) return std::nullopt;
      t = tx::rvk(*asnd, *arcv, uintField(j, "aamt"), asset, {});
    } else if (snd && arcv && *snd == *arcv && uintField(j, "aamt") == 0) {
      t = tx::optin(*snd, asset, {});
    } else if (snd && arcv && uintField(j, "aamt") != 0) {
      t = tx::pay(*snd, *arcv, uintField(j, "aamt"), asset, {});
    } else {
      return std::nullopt;
    }
  } else if (type == "acfg") {
    if (!snd) return std::nullopt;
    Bytes m = addrFieldBytes(j, "ConfigAssetManager");
    Bytes f = addrFieldBytes(j, "ConfigAssetFreeze");
    Bytes r = addrFieldBytes(j, "ConfigAssetReserve");
    Bytes c = addrFieldBytes(j, "ConfigAssetClawback");
    if (!(m == f && m == r && m == c)) return std::nullopt;
    AssetId configAsset = uintField(j, "ConfigAsset");
    if (configAsset == 0) {
      if (m.empty()) return std::nullopt;
      auto manager = addrField(j, "ConfigAssetManager");
      if (!manager) return std::nullopt;
      t = tx::gen(*snd, *manager, uintField(j, "AssetAmount"), {});
    } else if (m.empty()) {
      t = tx::burn(*snd, configAsset, {});
    } else {
      auto manager = addrField(j, "ConfigAssetManager");
      if (!manager) return std::nullopt;
      t = tx::delegate(*snd, *manager, configAsset, {});
    }
  } else if (type == "afrz") {
    auto target = addrField(j, "FreezeAccount");
    if (!target) return std::nullopt;
    AssetId asset = uintField(j, "FreezeAsset");
    bool freeze = j.contains("AssetFrozen") && j.at("AssetFrozen").is_boolean()
                      ? j.at("AssetFrozen").get<bool>()
                      : uintField(j, "AssetFrozen") != 0;
    t = freeze ? tx::frz(*target, asset, {}) : tx::unfrz(*target, asset, {});
  } else {
    return std::nullopt;
  }
  t.fv = uintField(j, "FirstValid");
  t.lv = uintField(j, "LastValid");
  t.lx = uintField(j, "Lease");
  return t;
}

// ---------------------------------------------------------------------------
// Compiler

namespace detail {

// Scratch layout: the k-th distinct group position whose decoded fields
// the script reads owns slots 8k..8k+4, in the order type, snd, rcv,
// val, asst.
enum class DecodedField { Type = 0, Snd, Rcv, Val, Asst };

inline std::optional<DecodedField> decodedField(TxFieldKind f) {
  switch (f) {
    case TxFieldKind::Type: return DecodedField::Type;
    case TxFieldKind::Snd: return DecodedField::Snd;
    case TxFieldKind::Rcv: return DecodedField::Rcv;
    case TxFieldKind::Val: return DecodedField::Val;
    case TxFieldKind::Asst: return DecodedField::Asst;
    default: return std::nullopt;
  }
}

struct SelectorKey {
  bool current;
  u64 index;
  bool operator<(const SelectorKey& o) const {
    if (current != o.current) return current < o.current;
    return index < o.index;
  }
};

class Compiler {
 public:
  Program run(const ScriptExpr& e) {
    emitExpr(e);
    program_.requiredVersion = usesAcfgFields_ ? 2 : 1;
    return std::move(program_);
  }

 private:
  Program program_;
  int labelCounter_ = 0;
  std::map<SelectorKey, u64> slotBase_;
  bool usesAcfgFields_ = false;

  std::string freshLabel(const std::string& stem) {
    return stem + "_" + std::to_string(labelCounter_++);
  }

  void emit(Instr i) { program_.code.push_back(std::move(i)); }

  void emitAccessor(const TxSelector& sel, const std::string& field) {
    if (sel.current) {
      emit(opTxn(field));
    } else {
      emit(opGtxn(sel.index, field));
    }
  }

  u64 slotFor(const TxSelector& sel) {
    SelectorKey key{sel.current, sel.current ? 0 : sel.index};
    auto it = slotBase_.find(key);
    if (it != slotBase_.end()) return it->second;
    u64 base = 8 * static_cast<u64>(slotBase_.size());
    slotBase_[key] = base;
    return base;
  }

  void emitIsSet(const TxSelector& sel, const std::string& field) {
    emitAccessor(sel, field);
    emit(opByte({}));
    emit(op0(Instr::Op::Eq));
    emit(op0(Instr::Op::Not));
  }

  void emitIsUnset(const TxSelector& sel, const std::string& field) {
    emitAccessor(sel, field);
    emit(opByte({}));
    emit(op0(Instr::Op::Eq));
  }

  void emitUintEq(const TxSelector& sel, const std::string& field, u64 v) {
    emitAccessor(sel, field);
    emit(opInt(v));
    emit(op0(Instr::Op::Eq));
  }

  void emitFieldsEqual(const TxSelector& sel, const std::string& f1, const std::string& f2) {
    emitAccessor(sel, f1);
    emitAccessor(sel, f2);
    emit(op0(Instr::Op::Eq));
  }

  void emitAnd(std::size_t count) {
    for (std::size_t i = 1; i < count; ++i) emit(op0(Instr::Op::Mul));
  }

  struct RowStore {
    TxType type;
    // Field names to copy into the snd/rcv/val/asst slots; an empty
    // name stores the constant fallback instead.
    std::string snd, rcv;
    std::string val;   // empty -> int 0
    std::string asst;  // empty -> int 0
  };

  void emitRowBody(const TxSelector& sel, u64 base, const RowStore& row,
                   const std::string& doneLabel) {
    emit(opByte(txTypeTagBytes(row.type)));
    emit(opStore(base + 0));
    emitAccessor(sel, row.snd);
    emit(opStore(base + 1));
    emitAccessor(sel, row.rcv);
    emit(opStore(base + 2));
    if (row.val.empty()) {
      emit(opInt(0));
    } else {
      emitAccessor(sel, row.val);
    }
    emit(opStore(base + 3));
    if (row.asst.empty()) {
      emit(opInt(0));
    } else {
      emitAccessor(sel, row.asst);
    }
    emit(opStore(base + 4));
    emit(opInt(1));
    emit(opBnz(doneLabel));
  }

  // TypeEnum values of the concrete layouts.
  static constexpr u64 kPayEnum = 1;
  static constexpr u64 kAcfgEnum = 3;
  static constexpr u64 kAxferEnum = 4;
  static constexpr u64 kAfrzEnum = 5;

  // Emits the full decoding table for one group position: the first
  // matching row stores the five model fields into the scratch slots;
  // no match errors out, mirroring evaluation failure.
  void emitDecodeBlock(const TxSelector& sel) {
    usesAcfgFields_ = true;
    u64 base = slotFor(sel);
    std::string done = freshLabel("decode_done");
    std::vector<std::pair<std::function<std::size_t()>, RowStore>> rows;

    auto uintEq = [&](const char* f, u64 v) { emitUintEq(sel, f, v); };
    auto isSet = [&](const char* f) { emitIsSet(sel, f); };
    auto isUnset = [&](const char* f) { emitIsUnset(sel, f); };
    auto fieldsEq = [&](const char* a, const char* b) { emitFieldsEqual(sel, a, b); };

    // pay with CloseRemainderTo set -> close(Algo)
    rows.push_back({[&] {
                      uintEq("TypeEnum", kPayEnum);
                      uintEq("Amount", 0);
                      isSet("CloseRemainderTo");
                      return std::size_t(3);
                    },
                    {TxType::Close, "Sender", "CloseRemainderTo", "", ""}});
    // plain pay -> pay(Algo)
    rows.push_back({[&] {
                      uintEq("TypeEnum", kPayEnum);
                      isUnset("CloseRemainderTo");
                      return std::size_t(2);
                    },
                    {TxType::Pay, "Sender", "Receiver", "Amount", ""}});
    // axfer with AssetCloseTo set -> close(asset)
    rows.push_back({[&] {
                      uintEq("TypeEnum", kAxferEnum);
                      isSet("AssetSender");
                      uintEq("AssetAmount", 0);
                      isSet("AssetCloseTo");
                      return std::size_t(4);
                    },
                    {TxType::Close, "AssetSender", "AssetCloseTo", "", "XferAsset"}});
    // axfer with AssetSender set -> rvk (added check: AssetCloseTo unset)
    rows.push_back({[&] {
                      uintEq("TypeEnum", kAxferEnum);
                      isSet("Sender");
                      isSet("AssetSender");
                      isUnset("AssetCloseTo");
                      return std::size_t(4);
                    },
                    {TxType::Rvk, "AssetSender", "AssetReceiver", "AssetAmount", "XferAsset"}});
    // self-transfer of zero -> optin (added check: AssetCloseTo unset)
    rows.push_back({[&] {
                      uintEq("TypeEnum", kAxferEnum);
                      fieldsEq("Sender", "AssetReceiver");
                      isUnset("AssetSender");
                      uintEq("AssetAmount", 0);
                      isUnset("AssetCloseTo");
                      return std::size_t(5);
                    },
                    {TxType::Optin, "Sender", "Sender", "", "XferAsset"}});
    // remaining axfer -> pay(asset) (added check: AssetCloseTo unset)
    rows.push_back({[&] {
                      uintEq("TypeEnum", kAxferEnum);
                      isSet("Sender");
                      isUnset("AssetSender");
                      uintEq("AssetAmount", 0);
                      emit(op0(Instr::Op::Not));
                      isUnset("AssetCloseTo");
                      return std::size_t(5);
                    },
                    {TxType::Pay, "Sender", "AssetReceiver", "AssetAmount", "XferAsset"}});
    // acfg creating an asset -> gen (added check: manager fields set)
    rows.push_back({[&] {
                      uintEq("TypeEnum", kAcfgEnum);
                      uintEq("ConfigAsset", 0);
                      isSet("ConfigAssetManager");
                      fieldsEq("ConfigAssetManager", "ConfigAssetFreeze");
                      fieldsEq("ConfigAssetManager", "ConfigAssetReserve");
                      fieldsEq("ConfigAssetManager", "ConfigAssetClawback");
                      return std::size_t(6);
                    },
                    {TxType::Gen, "Sender", "ConfigAssetManager", "AssetAmount", ""}});
    // acfg with empty manager fields -> burn (added check: ConfigAsset set)
    rows.push_back({[&] {
                      uintEq("TypeEnum", kAcfgEnum);
                      uintEq("ConfigAsset", 0);
                      emit(op0(Instr::Op::Not));
                      isUnset("ConfigAssetManager");
                      isUnset("ConfigAssetFreeze");
                      isUnset("ConfigAssetReserve");
                      isUnset("ConfigAssetClawback");
                      return std::size_t(6);
                    },
                    {TxType::Burn, "Sender", "Sender", "", "ConfigAsset"}});
    // acfg reassigning the manager -> delegate
    rows.push_back({[&] {
                      uintEq("TypeEnum", kAcfgEnum);
                      uintEq("ConfigAsset", 0);
                      emit(op0(Instr::Op::Not));
                      isSet("ConfigAssetManager");
                      fieldsEq("ConfigAssetManager", "ConfigAssetFreeze");
                      fieldsEq("ConfigAssetManager", "ConfigAssetReserve");
                      fieldsEq("ConfigAssetManager", "ConfigAssetClawback");
                      return std::size_t(6);
                    },
                    {TxType::Delegate, "Sender", "ConfigAssetManager", "", "ConfigAsset"}});
    // afrz with AssetFrozen true/false -> frz/unfrz
    rows.push_back({[&] {
                      uintEq("TypeEnum", kAfrzEnum);
                      uintEq("AssetFrozen", 1);
                      return std::size_t(2);
                    },
                    {TxType::Frz, "FreezeAccount", "FreezeAccount", "", "FreezeAsset"}});
    rows.push_back({[&] {
                      uintEq("TypeEnum", kAfrzEnum);
                      uintEq("AssetFrozen", 0);
                      return std::size_t(2);
                    },
                    {TxType::Unfrz, "FreezeAccount", "FreezeAccount", "", "FreezeAsset"}});

    std::vector<std::string> bodyLabels;
    for (auto& [conds, store] : rows) {
      std::string body = freshLabel("decode_row");
      bodyLabels.push_back(body);
      std::size_t n = conds();
      emitAnd(n);
      emit(opBnz(body));
    }
    emit(op0(Instr::Op::Err));
    for (std::size_t r = 0; r < rows.size(); ++r) {
      emit(opLabel(bodyLabels[r]));
      emitRowBody(sel, base, rows[r].second, done);
    }
    emit(opLabel(done));
  }

  void emitExpr(const ScriptExpr& e) {
    switch (e.kind) {
      case ScriptExpr::Kind::Const:
        if (e.constant.isNat()) {
          emit(opInt(e.constant.asNat()));
        } else {
          emit(opByte(e.constant.asBytes()));
        }
        break;
      case ScriptExpr::Kind::BinOp:
        if (e.op == BinOpKind::And) {
          std::string rhs = freshLabel("and_rhs");
          std::string end = freshLabel("and_end");
          emitExpr(*e.operands[0]);
          emit(opBnz(rhs));
          emit(opInt(0));
          emit(opInt(1));
          emit(opBnz(end));
          emit(opLabel(rhs));
          emitExpr(*e.operands[1]);
          emit(opLabel(end));
        } else if (e.op == BinOpKind::Or) {
          std::string yes = freshLabel("or_true");
          std::string end = freshLabel("or_end");
          emitExpr(*e.operands[0]);
          emit(opBnz(yes));
          emitExpr(*e.operands[1]);
          emit(opInt(1));
          emit(opBnz(end));
          emit(opLabel(yes));
          emit(opInt(1));
          emit(opLabel(end));
        } else {
          emitExpr(*e.operands[0]);
          emitExpr(*e.operands[1]);
          switch (e.op) {
            case BinOpKind::Add: emit(op0(Instr::Op::Add)); break;
            case BinOpKind::Sub: emit(op0(Instr::Op::Sub)); break;
            case BinOpKind::Mul: emit(op0(Instr::Op::Mul)); break;
            case BinOpKind::Div: emit(op0(Instr::Op::Div)); break;
            case BinOpKind::Mod: emit(op0(Instr::Op::Mod)); break;
            case BinOpKind::Lt: emit(op0(Instr::Op::Lt)); break;
            case BinOpKind::Le: emit(op0(Instr::Op::Le)); break;
            case BinOpKind::Eq: emit(op0(Instr::Op::Eq)); break;
            case BinOpKind::Ge: emit(op0(Instr::Op::Ge)); break;
            case BinOpKind::Gt: emit(op0(Instr::Op::Gt)); break;
            default: break;
          }
        }
        break;
      case ScriptExpr::Kind::Not:
        emitExpr(*e.operands[0]);
        emit(op0(Instr::Op::Not));
        break;
      case ScriptExpr::Kind::TxLen:
        emit(opGlobal("GroupSize"));
        break;
      case ScriptExpr::Kind::TxPos:
        emit(opTxn("GroupIndex"));
        break;
      case ScriptExpr::Kind::TxId:
        emitAccessor(e.selector, "TxID");
        break;
      case ScriptExpr::Kind::TxField:
        switch (e.field) {
          case TxFieldKind::Fv: emitAccessor(e.selector, "FirstValid"); break;
          case TxFieldKind::Lv: emitAccessor(e.selector, "LastValid"); break;
          case TxFieldKind::Lx: emitAccessor(e.selector, "Lease"); break;
          default: {
            // The decode runs at the use site so that short-circuited
            // branches never decode transactions they do not touch.
            emitDecodeBlock(e.selector);
            u64 base = slotFor(e.selector);
            emit(opLoad(base + static_cast<u64>(*decodedField(e.field))));
            break;
          }
        }
        break;
      case ScriptExpr::Kind::Arg:
        emit(opArg(e.argIndex));
        break;
      case ScriptExpr::Kind::Hash:
        emitExpr(*e.operands[0]);
        emit(op0(Instr::Op::Sha256));
        break;
      case ScriptExpr::Kind::Versig:
        emitExpr(*e.operands[0]);
        emitExpr(*e.operands[1]);
        emitExpr(*e.operands[2]);
        emit(op0(Instr::Op::Ed25519Verify));
        break;
    }
  }
};

}  // namespace detail

inline Program compileScript(const ExprPtr& e) {
  detail::Compiler c;
  return c.run(*e);
}

// ---------------------------------------------------------------------------
// Interpreter over the emitted opcode subset

namespace detail {

struct Machine {
  const Program& prog;
  const std::vector<ConcreteTx>& group;
  u64 index;
  const std::vector<Bytes>& args;
  const SignatureProvider& provider;

  std::vector<ScriptValue> stack;
  std::map<u64, ScriptValue> scratch;
  std::map<std::string, std::size_t> labels;

  bool failed = false;

  void fail() { failed = true; }

  std::optional<ScriptValue> pop() {
    if (stack.empty()) {
      fail();
      return std::nullopt;
    }
    ScriptValue v = std::move(stack.back());
    stack.pop_back();
    return v;
  }

  void push(ScriptValue v) { stack.push_back(std::move(v)); }

  std::optional<u64> typeEnum(const ConcreteTx& t) const {
    if (!t.contains("type") || !t.at("type").is_string()) return std::nullopt;
    std::string s = t.at("type").get<std::string>();
    if (s == "pay") return 1;
    if (s == "keyreg") return 2;
    if (s == "acfg") return 3;
    if (s == "axfer") return 4;
    if (s == "afrz") return 5;
    return std::nullopt;
  }

  static bool isAddressField(const std::string& f) {
    return f == "Sender" || f == "Receiver" || f == "CloseRemainderTo" ||
           f == "AssetSender" || f == "AssetReceiver" || f == "AssetCloseTo" ||
           f == "ConfigAssetManager" || f == "ConfigAssetFreeze" ||
           f == "ConfigAssetReserve" || f == "ConfigAssetClawback" || f == "FreezeAccount";
  }

  // Concrete JSON key for a field, resolved against the transaction's
  // concrete type.
  static const char* jsonKey(const std::string& field, const std::string& type) {
    if (field == "Sender") return "snd";
    if (field == "Receiver") return "rcv";
    if (field == "CloseRemainderTo") return "close";
    if (field == "Amount") return "amt";
    if (field == "AssetSender") return "asnd";
    if (field == "AssetReceiver") return "arcv";
    if (field == "AssetCloseTo") return "aclose";
    if (field == "XferAsset") return "xaid";
    if (field == "AssetAmount") return type == "axfer" ? "aamt" : "AssetAmount";
    return field.c_str();
  }

  void pushTxField(const ConcreteTx& t, const std::string& field) {
    if (field == "TxID") {
      auto model = decodeConcreteTx(t);
      if (!model) return fail();
      push(ScriptValue::bytes(txId(*model)));
      return;
    }
    if (field == "TypeEnum") {
      auto e = typeEnum(t);
      if (!e) return fail();
      push(ScriptValue::nat(*e));
      return;
    }
    std::string type = t.contains("type") && t.at("type").is_string()
                           ? t.at("type").get<std::string>()
                           : "";
    const char* key = jsonKey(field, type);
    if (isAddressField(field)) {
      push(ScriptValue::bytes(addrFieldBytes(t, key)));
      return;
    }
    // Remaining fields are numeric (booleans read as 0/1).
    push(ScriptValue::nat(uintField(t, key)));
  }

  ScriptValue run() {
    for (std::size_t pc = 0; pc < prog.code.size(); ++pc) {
      if (prog.code[pc].op == Instr::Op::Label) labels[prog.code[pc].label] = pc;
    }
    std::size_t steps = 0;
    for (std::size_t pc = 0; pc < prog.code.size() && !failed; ++pc) {
      if (++steps > 1000000) return ScriptValue::bottom();
      const Instr& i = prog.code[pc];
      switch (i.op) {
        case Instr::Op::Label:
          break;
        case Instr::Op::Int:
          push(ScriptValue::nat(i.num));
          break;
        case Instr::Op::ByteConst:
          push(ScriptValue::bytes(i.data));
          break;
        case Instr::Op::Arg:
          if (i.num >= args.size()) return ScriptValue::bottom();
          push(asc1::detail::argValue(args[i.num]));
          break;
        case Instr::Op::Txn:
          if (i.field == "GroupIndex") {
            push(ScriptValue::nat(index));
          } else {
            pushTxField(group[index], i.field);
          }
          break;
        case Instr::Op::Gtxn:
          if (i.num >= group.size()) return ScriptValue::bottom();
          pushTxField(group[i.num], i.field);
          break;
        case Instr::Op::Global:
          if (i.field != "GroupSize") return ScriptValue::bottom();
          push(ScriptValue::nat(static_cast<u64>(group.size())));
          break;
        case Instr::Op::Add: case Instr::Op::Sub: case Instr::Op::Mul:
        case Instr::Op::Div: case Instr::Op::Mod: case Instr::Op::Lt:
        case Instr::Op::Gt: case Instr::Op::Le: case Instr::Op::Ge:
        case Instr::Op::Eq: {
          auto b = pop();
          auto a = pop();
          if (!a || !b) return ScriptValue::bottom();
          BinOpKind op;
          switch (i.op) {
            case Instr::Op::Add: op = BinOpKind::Add; break;
            case Instr::Op::Sub: op = BinOpKind::Sub; break;
            case Instr::Op::Mul: op = BinOpKind::Mul; break;
            case Instr::Op::Div: op = BinOpKind::Div; break;
            case Instr::Op::Mod: op = BinOpKind::Mod; break;
            case Instr::Op::Lt: op = BinOpKind::Lt; break;
            case Instr::Op::Gt: op = BinOpKind::Gt; break;
            case Instr::Op::Le: op = BinOpKind::Le; break;
            case Instr::Op::Ge: op = BinOpKind::Ge; break;
            default: op = BinOpKind::Eq; break;
          }
          ScriptValue v = asc1::detail::applyStrictBinOp(op, *a, *b);
          if (v.isBottom()) return ScriptValue::bottom();
          push(std::move(v));
          break;
        }
        case Instr::Op::Not: {
          auto a = pop();
          if (!a || !a->isNat()) return ScriptValue::bottom();
          push(ScriptValue::nat(a->asNat() == 0 ? 1 : 0));
          break;
        }
        case Instr::Op::Bnz: {
          auto a = pop();
          if (!a || !a->isNat()) return ScriptValue::bottom();
          if (a->asNat() != 0) {
            auto it = labels.find(i.label);
            if (it == labels.end()) return ScriptValue::bottom();
            pc = it->second;
          }
          break;
        }
        case Instr::Op::Pop:
          if (!pop()) return ScriptValue::bottom();
          break;
        case Instr::Op::Dup: {
          auto a = pop();
          if (!a) return ScriptValue::bottom();
          push(*a);
          push(*a);
          break;
        }
        case Instr::Op::Store: {
          auto a = pop();
          if (!a) return ScriptValue::bottom();
          scratch[i.num] = *a;
          break;
        }
        case Instr::Op::Load: {
          auto it = scratch.find(i.num);
          if (it == scratch.end()) return ScriptValue::bottom();
          push(it->second);
          break;
        }
        case Instr::Op::Sha256: {
          auto a = pop();
          if (!a) return ScriptValue::bottom();
          push(ScriptValue::bytes(sha256(asc1::detail::valueBytes(*a))));
          break;
        }
        case Instr::Op::Ed25519Verify: {
          auto key = pop();
          auto sig = pop();
          auto data = pop();
          if (!key || !sig || !data) return ScriptValue::bottom();
          if (!key->isBytes() || !sig->isBytes()) return ScriptValue::bottom();
          auto model = decodeConcreteTx(group[index]);
          if (!model) return ScriptValue::bottom();
          Bytes msg = versigMessage(model->snd, *data);
          bool ok = provider.verify(key->asBytes(), msg, sig->asBytes());
          push(ScriptValue::nat(ok ? 1 : 0));
          break;
        }
        case Instr::Op::Err:
          return ScriptValue::bottom();
      }
    }
    if (failed || stack.size() != 1) return ScriptValue::bottom();
    return stack.back();
  }
};

}  // namespace detail

// Stack-machine run over a concrete group; every runtime error maps to
// Bottom, which models rejection.
inline ScriptValue interpretTeal(const Program& prog, const std::vector<ConcreteTx>& group,
                                 u64 index, const std::vector<Bytes>& args,
                                 const SignatureProvider& provider = ed25519Provider()) {
  if (index >= group.size()) return ScriptValue::bottom();
  detail::Machine m{prog, group, index, args, provider};
  return m.run();
}

// ---------------------------------------------------------------------------
// Differential check: model evaluation vs compiled execution

struct DifferentialResult {
  bool agree = false;
  bool modelAccepts = false;
  bool tealAccepts = false;
};

inline DifferentialResult differentialCheck(const ExprPtr& e,
                                            const std::vector<Transaction>& group, u64 index,
                                            const std::vector<Bytes>& args,
                                            const std::map<AssetId, AssetInfo>& assetMap = {},
                                            const SignatureProvider& provider =
                                                ed25519Provider()) {
  EvalContext ctx;
  ctx.group = group;
  ctx.index = index;
  ctx.args = args;
  ctx.provider = &provider;
  bool modelAccepts = accepts(ctx, e);

  Program prog = compileScript(e);
  std::vector<ConcreteTx> concrete = translateGroup(group, assetMap);
  ScriptValue v = interpretTeal(prog, concrete, index, args, provider);
  bool tealAccepts = v.isNat() && v.asNat() != 0;

  return {modelAccepts == tealAccepts, modelAccepts, tealAccepts};
}

}  // namespace asc1::teal
