#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "asc1/bytes.hpp"
#include "asc1/crypto.hpp"
#include "asc1/script.hpp"

namespace asc1 {

using AssetId = u64;
constexpr AssetId kAlgo = 0;  // id 0 is reserved for the native asset

// Consensus parameters. The defaults are the network's published
// numbers; tests shrink them where the scenario calls for it.
struct LedgerConfig {
  u64 deltaMax = 1000;           // max lv - fv window
  u64 minBalancePerAsset = 100000;  // micro-Algos required per owned asset
  u64 maxAssetsPerAccount = 1001;   // |dom(balance)| bound, Algo included
  u64 initialSupply = 10000000000000000ULL;  // 10^16 micro-Algos
};

// ---------------------------------------------------------------------------
// Addresses

constexpr std::uint8_t kTagAddrMultisig = 0x01;
constexpr std::uint8_t kTagAddrScript = 0x02;

// An address is either a multisig (ordered key list + threshold; a
// single-user address is the 1-of-1 multisig) or a script account. Two
// addresses are equal iff their canonical encodings are byte-equal; the
// script encoding embeds only the 32-byte script hash, so a decoded
// script address may carry no expression (it then cannot authorize).
class Address {
 public:
  Address() = default;

  static Address multisig(std::vector<Bytes> keys, u64 threshold) {
    if (keys.empty()) throw std::invalid_argument("multisig address needs at least one key");
    if (threshold < 1 || threshold > keys.size())
      throw std::invalid_argument("multisig threshold out of range");
    auto d = std::make_shared<Data>();
    d->isScript = false;
    d->keys = std::move(keys);
    d->threshold = threshold;
    d->encoding = encodeMultisig(d->keys, d->threshold);
    return Address(std::move(d));
  }

  static Address user(const Bytes& publicKey) { return multisig({publicKey}, 1); }

  static Address script(ExprPtr e) {
    auto d = std::make_shared<Data>();
    d->isScript = true;
    d->scriptHash = sha256(encodeExpr(e));
    d->expr = std::move(e);
    d->encoding = encodeScript(d->scriptHash);
    return Address(std::move(d));
  }

  static Address scriptHashOnly(Bytes hash32) {
    if (hash32.size() != 32) throw std::invalid_argument("script hash must be 32 bytes");
    auto d = std::make_shared<Data>();
    d->isScript = true;
    d->scriptHash = std::move(hash32);
    d->encoding = encodeScript(d->scriptHash);
    return Address(std::move(d));
  }

  bool empty() const { return !data_; }
  bool isScript() const { return data_ && data_->isScript; }
  bool isMultisig() const { return data_ && !data_->isScript; }

  const std::vector<Bytes>& keys() const { return requireMultisig().keys; }
  u64 threshold() const { return requireMultisig().threshold; }
  const Bytes& scriptHash() const { return requireScript().scriptHash; }
  // Null for hash-only script addresses recovered by decode.
  const ExprPtr& scriptExpr() const { return requireScript().expr; }

  const Bytes& encoding() const {
    if (!data_) throw std::logic_error("empty address");
    return data_->encoding;
  }

  bool operator==(const Address& o) const { return encoding() == o.encoding(); }
  bool operator!=(const Address& o) const { return !(*this == o); }
  bool operator<(const Address& o) const { return encoding() < o.encoding(); }

 private:
  struct Data {
    bool isScript = false;
    std::vector<Bytes> keys;
    u64 threshold = 0;
    Bytes scriptHash;
    ExprPtr expr;
    Bytes encoding;
  };

  explicit Address(std::shared_ptr<const Data> d) : data_(std::move(d)) {}

  const Data& requireMultisig() const {
    if (!isMultisig()) throw std::logic_error("address is not a multisig");
    return *data_;
  }
  const Data& requireScript() const {
    if (!isScript()) throw std::logic_error("address is not a script");
    return *data_;
  }

  static Bytes encodeMultisig(const std::vector<Bytes>& keys, u64 threshold) {
    ByteWriter w;
    w.byte(kTagAddrMultisig);
    w.u32be(static_cast<u32>(keys.size()));
    for (const auto& k : keys) w.lengthPrefixed(k);
    w.u64be(threshold);
    return w.take();
  }

  static Bytes encodeScript(const Bytes& hash) {
    ByteWriter w;
    w.byte(kTagAddrScript);
    w.raw(hash);
    return w.take();
  }

  std::shared_ptr<const Data> data_;
};

// Script addresses hash the canonical encoding of the expression, so
// structurally equal scripts yield equal addresses.
inline Address scriptAddress(const ExprPtr& e) { return Address::script(e); }

namespace codec {

inline void writeAddress(ByteWriter& w, const Address& a) { w.raw(a.encoding()); }

inline Address readAddress(ByteReader& r) {
  auto tag = r.byte();
  if (tag == kTagAddrMultisig) {
    auto count = r.u32be();
    std::vector<Bytes> keys;
    keys.reserve(count);
    for (u32 i = 0; i < count; ++i) keys.push_back(r.lengthPrefixed());
    u64 threshold = r.u64be();
    return Address::multisig(std::move(keys), threshold);
  }
  if (tag == kTagAddrScript) return Address::scriptHashOnly(r.raw(32));
  throw DecodeError("unknown address tag");
}

}  // namespace codec

inline Bytes encodeAddress(const Address& a) { return a.encoding(); }

inline Address decodeAddress(const Bytes& b) {
  ByteReader r(b);
  auto a = codec::readAddress(r);
  r.expectEnd();
  return a;
}

// ---------------------------------------------------------------------------
// Transactions

enum class TxType : std::uint8_t {
  Pay = 0, Close, Gen, Optin, Burn, Rvk, Frz, Unfrz, Delegate
};

inline const char* txTypeName(TxType t) {
  switch (t) {
    case TxType::Pay: return "pay";
    case TxType::Close: return "close";
    case TxType::Gen: return "gen";
    case TxType::Optin: return "optin";
    case TxType::Burn: return "burn";
    case TxType::Rvk: return "rvk";
    case TxType::Frz: return "frz";
    case TxType::Unfrz: return "unfrz";
    case TxType::Delegate: return "delegate";
  }
  return "?";
}

inline std::optional<TxType> txTypeFromName(const std::string& s) {
  for (int i = 0; i <= static_cast<int>(TxType::Delegate); ++i) {
    auto t = static_cast<TxType>(i);
    if (s == txTypeName(t)) return t;
  }
  return std::nullopt;
}

constexpr std::uint8_t kTagTxBase = 0x10;

// The 1-byte tag used both in the transaction encoding and as the Bytes
// value of the script-level type field.
inline std::uint8_t txTypeTag(TxType t) {
  return static_cast<std::uint8_t>(kTagTxBase + static_cast<std::uint8_t>(t));
}
inline Bytes txTypeTagBytes(TxType t) { return Bytes{txTypeTag(t)}; }

// All nine fields are always present; fields irrelevant to the type
// hold canonical defaults (val=0, asst=Algo, rcv=snd, lx=0). The
// transition rules enforce relevance, not the record.
struct Transaction {
  TxType type = TxType::Pay;
  Address snd;
  Address rcv;
  u64 val = 0;
  AssetId asst = kAlgo;
  u64 fv = 0;
  u64 lv = 0;
  u64 lx = 0;
};

inline Bytes encodeTransaction(const Transaction& t) {
  ByteWriter w;
  w.byte(txTypeTag(t.type));
  codec::writeAddress(w, t.snd);
  codec::writeAddress(w, t.rcv);
  w.u64be(t.val);
  w.u64be(t.asst);
  w.u64be(t.fv);
  w.u64be(t.lv);
  w.u64be(t.lx);
  return w.take();
}

namespace codec {

inline Transaction readTransaction(ByteReader& r) {
  auto tag = r.byte();
  if (tag < kTagTxBase || tag > kTagTxBase + 8) throw DecodeError("unknown transaction tag");
  Transaction t;
  t.type = static_cast<TxType>(tag - kTagTxBase);
  t.snd = readAddress(r);
  t.rcv = readAddress(r);
  t.val = r.u64be();
  t.asst = r.u64be();
  t.fv = r.u64be();
  t.lv = r.u64be();
  t.lx = r.u64be();
  return t;
}

}  // namespace codec

inline Transaction decodeTransaction(const Bytes& b) {
  ByteReader r(b);
  auto t = codec::readTransaction(r);
  r.expectEnd();
  return t;
}

// Transaction identity is equality of canonical encodings.
inline bool operator==(const Transaction& a, const Transaction& b) {
  return encodeTransaction(a) == encodeTransaction(b);
}
inline bool operator!=(const Transaction& a, const Transaction& b) { return !(a == b); }

inline Bytes txId(const Transaction& t) { return sha256(encodeTransaction(t)); }

// Builders that fill the fields irrelevant to each type with their
// canonical defaults (val=0, asst=Algo, rcv=snd, lx=0).
namespace tx {

struct Window {
  u64 fv = 0;
  u64 lv = 0;
  u64 lx = 0;
};

inline Transaction pay(const Address& snd, const Address& rcv, u64 val, AssetId asst,
                       Window w) {
  return Transaction{TxType::Pay, snd, rcv, val, asst, w.fv, w.lv, w.lx};
}

inline Transaction close(const Address& snd, const Address& rcv, AssetId asst, Window w) {
  return Transaction{TxType::Close, snd, rcv, 0, asst, w.fv, w.lv, w.lx};
}

inline Transaction gen(const Address& snd, const Address& manager, u64 supply, Window w) {
  return Transaction{TxType::Gen, snd, manager, supply, kAlgo, w.fv, w.lv, w.lx};
}

inline Transaction optin(const Address& snd, AssetId asst, Window w) {
  return Transaction{TxType::Optin, snd, snd, 0, asst, w.fv, w.lv, w.lx};
}

inline Transaction burn(const Address& creator, AssetId asst, Window w) {
  return Transaction{TxType::Burn, creator, creator, 0, asst, w.fv, w.lv, w.lx};
}

inline Transaction rvk(const Address& from, const Address& to, u64 val, AssetId asst,
                       Window w) {
  return Transaction{TxType::Rvk, from, to, val, asst, w.fv, w.lv, w.lx};
}

inline Transaction frz(const Address& target, AssetId asst, Window w) {
  return Transaction{TxType::Frz, target, target, 0, asst, w.fv, w.lv, w.lx};
}

inline Transaction unfrz(const Address& target, AssetId asst, Window w) {
  return Transaction{TxType::Unfrz, target, target, 0, asst, w.fv, w.lv, w.lx};
}

inline Transaction delegate(const Address& manager, const Address& newManager, AssetId asst,
                            Window w) {
  return Transaction{TxType::Delegate, manager, newManager, 0, asst, w.fv, w.lv, w.lx};
}

}  // namespace tx

// ---------------------------------------------------------------------------
// Balances

enum class BalanceError { MissingAsset, Overflow, Underflow };

class Balance {
 public:
  Balance() = default;
  explicit Balance(std::map<AssetId, u64> entries) : entries_(std::move(entries)) {}

  const std::map<AssetId, u64>& entries() const { return entries_; }
  bool has(AssetId a) const { return entries_.count(a) != 0; }
  u64 amount(AssetId a) const {
    auto it = entries_.find(a);
    return it == entries_.end() ? 0 : it->second;
  }
  std::size_t assetCount() const { return entries_.size(); }

  Balance withEntry(AssetId a, u64 v) const {
    auto m = entries_;
    m[a] = v;
    return Balance(std::move(m));
  }
  Balance withoutEntry(AssetId a) const {
    auto m = entries_;
    m.erase(a);
    return Balance(std::move(m));
  }

  bool operator==(const Balance& o) const { return entries_ == o.entries_; }
  bool operator!=(const Balance& o) const { return !(*this == o); }

 private:
  std::map<AssetId, u64> entries_;
};

// sigma + v:tau / sigma - v:tau, defined only when tau is already in the
// balance, with all arithmetic checked against the 64-bit range.
inline std::optional<BalanceError> adjustBalanceInPlace(std::map<AssetId, u64>& entries,
                                                        bool addition, u64 delta, AssetId asset) {
  auto it = entries.find(asset);
  if (it == entries.end()) return BalanceError::MissingAsset;
  if (addition) {
    if (it->second > ~u64{0} - delta) return BalanceError::Overflow;
    it->second += delta;
  } else {
    if (it->second < delta) return BalanceError::Underflow;
    it->second -= delta;
  }
  return std::nullopt;
}

struct AdjustResult {
  std::optional<Balance> balance;
  std::optional<BalanceError> error;
  bool ok() const { return balance.has_value(); }
};

inline AdjustResult adjustBalance(const Balance& b, bool addition, u64 delta, AssetId asset) {
  auto entries = b.entries();
  if (auto err = adjustBalanceInPlace(entries, addition, delta, asset))
    return {std::nullopt, err};
  return {Balance(std::move(entries)), std::nullopt};
}

inline bool validBalance(const Balance& b, const LedgerConfig& cfg = LedgerConfig{}) {
  if (!b.has(kAlgo)) return false;
  u64 assets = static_cast<u64>(b.assetCount());
  if (assets > cfg.maxAssetsPerAccount) return false;
  // minBalance * assets cannot overflow: assets <= 1001 and the
  // configured minimum is a small constant.
  return b.amount(kAlgo) >= cfg.minBalancePerAsset * assets;
}

// ---------------------------------------------------------------------------
// Blockchain state

struct AssetInfo {
  Address manager;
  Address creator;
  bool operator==(const AssetInfo& o) const {
    return manager == o.manager && creator == o.creator;
  }
};

using LeaseKey = std::pair<Address, u64>;

struct BlockchainState {
  std::map<Address, Balance> accounts;
  u64 round = 0;
  // Performed transactions whose last-valid round has not expired,
  // keyed by canonical encoding.
  std::map<Bytes, Transaction> recentTxs;
  std::map<AssetId, AssetInfo> assetMap;
  std::map<LeaseKey, u64> leaseMap;
  std::map<Address, std::set<AssetId>> freezeMap;
  AssetId nextAssetId = 1;
  LedgerConfig config;

  bool hasAccount(const Address& a) const { return accounts.count(a) != 0; }
  const Balance& balanceOf(const Address& a) const { return accounts.at(a); }
  bool frozen(const Address& a, AssetId t) const {
    auto it = freezeMap.find(a);
    return it != freezeMap.end() && it->second.count(t) != 0;
  }
};

struct GenesisConfig {
  Address initialUser;
  u64 supply = LedgerConfig{}.initialSupply;
  LedgerConfig ledger;
};

struct ConfigError : std::invalid_argument {
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

inline BlockchainState initialState(const GenesisConfig& g) {
  if (g.initialUser.empty()) throw ConfigError("genesis user address missing");
  BlockchainState s;
  s.config = g.ledger;
  Balance genesis(std::map<AssetId, u64>{{kAlgo, g.supply}});
  if (!validBalance(genesis, s.config))
    throw ConfigError("genesis supply below the minimum account balance");
  s.accounts.emplace(g.initialUser, std::move(genesis));
  s.round = 0;
  s.nextAssetId = 1;
  return s;
}

// fv <= round <= lv, window bounded by DeltaMax, and the lease is free.
inline bool temporalValidity(const std::map<LeaseKey, u64>& leaseMap, u64 round,
                             const Transaction& t, const LedgerConfig& cfg = LedgerConfig{}) {
  if (!(t.fv <= round && round <= t.lv)) return false;
  if (t.lv - t.fv > cfg.deltaMax) return false;
  if (t.lx == 0) return true;
  auto it = leaseMap.find({t.snd, t.lx});
  if (it == leaseMap.end()) return true;
  return round > it->second;
}

inline std::map<LeaseKey, u64> leaseUpdate(const std::map<LeaseKey, u64>& leaseMap,
                                           const Transaction& t) {
  if (t.lx == 0) return leaseMap;
  auto m = leaseMap;
  m[{t.snd, t.lx}] = t.lv;
  return m;
}

inline u64 assetTotal(AssetId asset, const BlockchainState& s) {
  u64 total = 0;
  for (const auto& [addr, bal] : s.accounts) total += bal.amount(asset);
  return total;
}

// The four state invariants; reachable states must satisfy all of them.
inline std::optional<std::string> checkStateInvariants(const BlockchainState& s) {
  for (const auto& [addr, bal] : s.accounts) {
    if (!validBalance(bal, s.config))
      return "invalid balance at account " + hexEncode(addr.encoding());
  }
  for (const auto& [enc, tx] : s.recentTxs) {
    if (tx.lv < s.round) return "recent transaction with expired lv";
  }
  std::set<AssetId> inBalances;
  for (const auto& [addr, bal] : s.accounts) {
    for (const auto& [asset, amt] : bal.entries()) {
      if (asset != kAlgo) inBalances.insert(asset);
    }
  }
  for (AssetId a : inBalances) {
    if (s.assetMap.count(a) == 0) return "asset held by an account but not in the asset map";
  }
  for (const auto& [asset, info] : s.assetMap) {
    if (asset != kAlgo && inBalances.count(asset) == 0)
      return "asset in the asset map but held by no account";
  }
  return std::nullopt;
}

}  // namespace asc1
