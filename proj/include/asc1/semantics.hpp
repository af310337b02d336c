#pragma once

#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "asc1/codec.hpp"
#include "asc1/eval.hpp"
#include "asc1/ledger.hpp"

namespace asc1 {

enum class StepCode {
  DoubleSpend,
  TimeInvalid,
  BalanceInvalid,
  MissingAccount,
  AccountExists,
  NotOptedIn,
  Frozen,
  NotCreator,
  NotSoleOwner,
  NotManager,
  AssetUnknown,
  NoRuleApplies,
  EmptyGroup,
  Overflow,
  // Network-layer failures
  UnknownWitness,
  Unauthorized,
  StuckRun,
};

inline const char* stepCodeName(StepCode c) {
  switch (c) {
    case StepCode::DoubleSpend: return "DoubleSpend";
    case StepCode::TimeInvalid: return "TimeInvalid";
    case StepCode::BalanceInvalid: return "BalanceInvalid";
    case StepCode::MissingAccount: return "MissingAccount";
    case StepCode::AccountExists: return "AccountExists";
    case StepCode::NotOptedIn: return "NotOptedIn";
    case StepCode::Frozen: return "Frozen";
    case StepCode::NotCreator: return "NotCreator";
    case StepCode::NotSoleOwner: return "NotSoleOwner";
    case StepCode::NotManager: return "NotManager";
    case StepCode::AssetUnknown: return "AssetUnknown";
    case StepCode::NoRuleApplies: return "NoRuleApplies";
    case StepCode::EmptyGroup: return "EmptyGroup";
    case StepCode::Overflow: return "Overflow";
    case StepCode::UnknownWitness: return "UnknownWitness";
    case StepCode::Unauthorized: return "Unauthorized";
    case StepCode::StuckRun: return "StuckRun";
  }
  return "?";
}

struct StepError {
  StepCode code;
  std::string detail;
};

template <typename T>
class StepResult {
 public:
  StepResult(T value) : v_(std::move(value)) {}
  StepResult(StepError err) : v_(std::move(err)) {}
  StepResult(StepCode code, std::string detail = {})
      : v_(StepError{code, std::move(detail)}) {}

  bool ok() const { return std::holds_alternative<T>(v_); }
  explicit operator bool() const { return ok(); }
  const T& value() const { return std::get<T>(v_); }
  T& value() { return std::get<T>(v_); }
  const StepError& error() const { return std::get<StepError>(v_); }

 private:
  std::variant<T, StepError> v_;
};

namespace detail {

inline void recordTx(BlockchainState& s, const Transaction& t) {
  s.recentTxs.emplace(encodeTransaction(t), t);
  s.leaseMap = leaseUpdate(s.leaseMap, t);
}

inline StepResult<BlockchainState> payRule(BlockchainState s, const Transaction& t) {
  if (!s.hasAccount(t.snd))
    return StepError{StepCode::MissingAccount, "pay sender does not exist"};

  if (!s.hasAccount(t.rcv)) {
    // [Pay-Open]: only Algo payments can create the receiver.
    if (t.asst != kAlgo)
      return StepError{StepCode::NoRuleApplies, "pay to a missing account requires Algo"};
    auto debited = adjustBalance(s.balanceOf(t.snd), false, t.val, kAlgo);
    if (!debited.ok())
      return StepError{StepCode::BalanceInvalid, "sender cannot afford the payment"};
    if (!validBalance(*debited.balance, s.config))
      return StepError{StepCode::BalanceInvalid, "sender balance below minimum after debit"};
    Balance created(std::map<AssetId, u64>{{kAlgo, t.val}});
    if (!validBalance(created, s.config))
      return StepError{StepCode::BalanceInvalid, "new account below minimum balance"};
    s.accounts[t.snd] = *debited.balance;
    s.accounts.emplace(t.rcv, std::move(created));
    recordTx(s, t);
    return s;
  }

  if (t.val == 0) {
    // [Pay-Zero]: both parties exist and differ; no opt-in or freeze
    // checks, the asset is unconstrained.
    if (t.rcv == t.snd)
      return StepError{StepCode::NoRuleApplies, "zero self-payment is stuck"};
    recordTx(s, t);
    return s;
  }

  // [Pay]: same checks for self-payment, whose balance stays unchanged.
  const Balance& sndBal = s.balanceOf(t.snd);
  const Balance& rcvBal = s.balanceOf(t.rcv);
  if (!sndBal.has(t.asst))
    return StepError{StepCode::NotOptedIn, "sender does not hold the asset"};
  if (!rcvBal.has(t.asst))
    return StepError{StepCode::NotOptedIn, "receiver has not opted in"};
  if (s.frozen(t.snd, t.asst) || s.frozen(t.rcv, t.asst))
    return StepError{StepCode::Frozen, "asset frozen for a party"};
  auto debited = adjustBalance(sndBal, false, t.val, t.asst);
  if (!debited.ok())
    return StepError{StepCode::BalanceInvalid, "sender cannot afford the payment"};
  if (!validBalance(*debited.balance, s.config))
    return StepError{StepCode::BalanceInvalid, "sender balance below minimum after debit"};
  if (t.snd != t.rcv) {
    auto credited = adjustBalance(rcvBal, true, t.val, t.asst);
    if (!credited.ok()) return StepError{StepCode::Overflow, "receiver balance overflow"};
    s.accounts[t.snd] = *debited.balance;
    s.accounts[t.rcv] = *credited.balance;
  }
  recordTx(s, t);
  return s;
}

inline StepResult<BlockchainState> closeRule(BlockchainState s, const Transaction& t) {
  if (!s.hasAccount(t.snd))
    return StepError{StepCode::MissingAccount, "close sender does not exist"};
  if (t.rcv == t.snd)
    return StepError{StepCode::NoRuleApplies, "self-close is stuck"};

  const Balance sndBal = s.balanceOf(t.snd);

  if (t.asst == kAlgo) {
    if (sndBal.assetCount() != 1)
      return StepError{StepCode::BalanceInvalid, "closing account still holds other assets"};
    u64 amount = sndBal.amount(kAlgo);
    if (!s.hasAccount(t.rcv)) {
      // [Close-Open]: the balance moves wholesale to the new account.
      s.accounts.erase(t.snd);
      s.accounts.emplace(t.rcv, sndBal);
    } else {
      // [Close-Pay]
      auto credited = adjustBalance(s.balanceOf(t.rcv), true, amount, kAlgo);
      if (!credited.ok()) return StepError{StepCode::Overflow, "receiver balance overflow"};
      s.accounts.erase(t.snd);
      s.accounts[t.rcv] = *credited.balance;
    }
    recordTx(s, t);
    return s;
  }

  // [Close-Asst]: remove the asset from the sender, moving all units.
  if (!s.hasAccount(t.rcv))
    return StepError{StepCode::MissingAccount, "close receiver does not exist"};
  if (!sndBal.has(t.asst))
    return StepError{StepCode::NotOptedIn, "sender does not hold the asset"};
  if (!s.balanceOf(t.rcv).has(t.asst))
    return StepError{StepCode::NotOptedIn, "receiver has not opted in"};
  if (s.frozen(t.snd, t.asst) || s.frozen(t.rcv, t.asst))
    return StepError{StepCode::Frozen, "asset frozen for a party"};
  u64 amount = sndBal.amount(t.asst);
  auto credited = adjustBalance(s.balanceOf(t.rcv), true, amount, t.asst);
  if (!credited.ok()) return StepError{StepCode::Overflow, "receiver balance overflow"};
  if (!validBalance(*credited.balance, s.config))
    return StepError{StepCode::BalanceInvalid, "receiver balance invalid after credit"};
  s.accounts[t.snd] = sndBal.withoutEntry(t.asst);
  s.accounts[t.rcv] = *credited.balance;
  recordTx(s, t);
  return s;
}

inline StepResult<BlockchainState> genRule(BlockchainState s, const Transaction& t) {
  if (!s.hasAccount(t.snd))
    return StepError{StepCode::MissingAccount, "gen sender does not exist"};
  AssetId fresh = s.nextAssetId;
  Balance extended = s.balanceOf(t.snd).withEntry(fresh, t.val);
  if (!validBalance(extended, s.config))
    return StepError{StepCode::BalanceInvalid, "sender cannot hold another asset"};
  s.accounts[t.snd] = std::move(extended);
  s.assetMap[fresh] = AssetInfo{t.rcv, t.snd};
  s.nextAssetId = fresh + 1;
  recordTx(s, t);
  return s;
}

inline StepResult<BlockchainState> optinRule(BlockchainState s, const Transaction& t) {
  if (!s.hasAccount(t.snd))
    return StepError{StepCode::MissingAccount, "optin sender does not exist"};
  // The asset must occur in the state. Algo occurs in every account;
  // user assets occur iff they are in the asset map.
  if (t.asst != kAlgo && s.assetMap.count(t.asst) == 0)
    return StepError{StepCode::AssetUnknown, "asset does not occur in the state"};
  const Balance& bal = s.balanceOf(t.snd);
  if (!bal.has(t.asst)) {
    Balance extended = bal.withEntry(t.asst, 0);
    if (!validBalance(extended, s.config))
      return StepError{StepCode::BalanceInvalid, "not enough Algos to store the asset"};
    s.accounts[t.snd] = std::move(extended);
  }
  recordTx(s, t);
  return s;
}

inline StepResult<BlockchainState> burnRule(BlockchainState s, const Transaction& t) {
  auto it = s.assetMap.find(t.asst);
  if (it == s.assetMap.end())
    return StepError{StepCode::AssetUnknown, "burn of an unknown asset"};
  const Address creator = it->second.creator;
  if (t.snd != creator)
    return StepError{StepCode::NotCreator, "burn sender is not the asset creator"};
  if (!s.hasAccount(creator))
    return StepError{StepCode::MissingAccount, "asset creator account does not exist"};
  for (const auto& [addr, bal] : s.accounts) {
    if (addr != creator && bal.has(t.asst))
      return StepError{StepCode::NotSoleOwner, "another account still holds the asset"};
  }
  if (!s.balanceOf(creator).has(t.asst))
    return StepError{StepCode::NotOptedIn, "creator does not hold the asset"};
  s.accounts[creator] = s.balanceOf(creator).withoutEntry(t.asst);
  s.assetMap.erase(t.asst);
  recordTx(s, t);
  return s;
}

inline StepResult<BlockchainState> rvkRule(BlockchainState s, const Transaction& t) {
  if (!s.hasAccount(t.snd))
    return StepError{StepCode::MissingAccount, "revoke source does not exist"};
  if (!s.hasAccount(t.rcv))
    return StepError{StepCode::MissingAccount, "revoke receiver does not exist"};
  if (t.snd == t.rcv)
    return StepError{StepCode::NoRuleApplies, "self-revoke is stuck"};
  const Balance& sndBal = s.balanceOf(t.snd);
  const Balance& rcvBal = s.balanceOf(t.rcv);
  if (!sndBal.has(t.asst) || !rcvBal.has(t.asst))
    return StepError{StepCode::NotOptedIn, "both parties must hold the asset"};
  if (s.frozen(t.snd, t.asst) || s.frozen(t.rcv, t.asst))
    return StepError{StepCode::Frozen, "asset frozen for a party"};
  auto debited = adjustBalance(sndBal, false, t.val, t.asst);
  if (!debited.ok())
    return StepError{StepCode::BalanceInvalid, "source cannot cover the revocation"};
  if (!validBalance(*debited.balance, s.config))
    return StepError{StepCode::BalanceInvalid, "source balance below minimum after debit"};
  auto credited = adjustBalance(rcvBal, true, t.val, t.asst);
  if (!credited.ok()) return StepError{StepCode::Overflow, "receiver balance overflow"};
  s.accounts[t.snd] = *debited.balance;
  s.accounts[t.rcv] = *credited.balance;
  recordTx(s, t);
  return s;
}

inline StepResult<BlockchainState> freezeRule(BlockchainState s, const Transaction& t,
                                              bool freeze) {
  if (!s.hasAccount(t.snd))
    return StepError{StepCode::MissingAccount, "freeze target does not exist"};
  if (!s.balanceOf(t.snd).has(t.asst))
    return StepError{StepCode::NotOptedIn, "target does not hold the asset"};
  auto& set = s.freezeMap[t.snd];
  if (freeze) {
    set.insert(t.asst);
  } else {
    set.erase(t.asst);
    if (set.empty()) s.freezeMap.erase(t.snd);
  }
  recordTx(s, t);
  return s;
}

inline StepResult<BlockchainState> delegateRule(BlockchainState s, const Transaction& t) {
  auto it = s.assetMap.find(t.asst);
  if (it == s.assetMap.end())
    return StepError{StepCode::AssetUnknown, "delegate of an unknown asset"};
  if (it->second.manager != t.snd)
    return StepError{StepCode::NotManager, "delegate sender is not the asset manager"};
  s.assetMap[t.asst] = AssetInfo{t.rcv, it->second.creator};
  recordTx(s, t);
  return s;
}

}  // namespace detail

// One single-transaction step. The premises common to every rule run
// first (no duplicate in the recent set, temporal validity), then the
// per-type rule; the error reports the first violated premise.
inline StepResult<BlockchainState> applyTx(const BlockchainState& state, const Transaction& t) {
  if (state.recentTxs.count(encodeTransaction(t)) != 0)
    return StepError{StepCode::DoubleSpend, "transaction already performed"};
  if (!temporalValidity(state.leaseMap, state.round, t, state.config))
    return StepError{StepCode::TimeInvalid, "validity window or lease violated"};

  switch (t.type) {
    case TxType::Pay: return detail::payRule(state, t);
    case TxType::Close: return detail::closeRule(state, t);
    case TxType::Gen: return detail::genRule(state, t);
    case TxType::Optin: return detail::optinRule(state, t);
    case TxType::Burn: return detail::burnRule(state, t);
    case TxType::Rvk: return detail::rvkRule(state, t);
    case TxType::Frz: return detail::freezeRule(state, t, true);
    case TxType::Unfrz: return detail::freezeRule(state, t, false);
    case TxType::Delegate: return detail::delegateRule(state, t);
  }
  return StepError{StepCode::NoRuleApplies, "unknown transaction type"};
}

// [Round]: advance the round and drop expired recent transactions.
inline BlockchainState advanceRound(const BlockchainState& state) {
  BlockchainState s = state;
  for (auto it = s.recentTxs.begin(); it != s.recentTxs.end();) {
    if (it->second.lv > s.round) {
      ++it;
    } else {
      it = s.recentTxs.erase(it);
    }
  }
  s.round += 1;
  return s;
}

// [TxG]: all-or-nothing left-to-right fold of applyTx.
inline StepResult<BlockchainState> applyGroup(const BlockchainState& state,
                                              const std::vector<Transaction>& group) {
  if (group.empty()) return StepError{StepCode::EmptyGroup, "atomic group must be non-empty"};
  BlockchainState current = state;
  for (const auto& t : group) {
    auto next = applyTx(current, t);
    if (!next.ok()) return next.error();
    current = std::move(next.value());
  }
  return current;
}

// The authorizer address: the sender for pay/close/gen/optin, the asset
// manager for the manager-controlled types.
inline StepResult<Address> authorizer(const std::map<AssetId, AssetInfo>& assetMap,
                                      const Transaction& t) {
  switch (t.type) {
    case TxType::Pay:
    case TxType::Close:
    case TxType::Gen:
    case TxType::Optin:
      return t.snd;
    default: {
      auto it = assetMap.find(t.asst);
      if (it == assetMap.end())
        return StepError{StepCode::AssetUnknown, "no manager for an unknown asset"};
      return it->second.manager;
    }
  }
}

// Witness check for one transaction of a group: a threshold of distinct
// multisig keys with valid signatures over (group, index), or an
// accepting script run with the witnesses as arguments.
inline bool authorizeTx(const std::map<AssetId, AssetInfo>& assetMap,
                        const std::vector<Bytes>& witnesses,
                        const std::vector<Transaction>& group, u64 index,
                        const SignatureProvider& provider) {
  auto who = authorizer(assetMap, group[index]);
  if (!who.ok()) return false;
  const Address& addr = who.value();
  if (addr.isMultisig()) {
    Bytes msg = groupIndexMessage(group, index);
    std::set<Bytes> signedKeys;
    std::set<Bytes> distinctKeys(addr.keys().begin(), addr.keys().end());
    for (const Bytes& key : distinctKeys) {
      for (const Bytes& w : witnesses) {
        if (provider.verify(key, msg, w)) {
          signedKeys.insert(key);
          break;
        }
      }
    }
    return signedKeys.size() >= addr.threshold();
  }
  const ExprPtr& script = addr.scriptExpr();
  if (!script) return false;  // hash-only address: the script is unknown
  EvalContext ctx;
  ctx.group = group;
  ctx.index = index;
  ctx.args = witnesses;
  ctx.provider = &provider;
  return accepts(ctx, script);
}

inline bool authorizeGroup(const std::map<AssetId, AssetInfo>& assetMap,
                           const std::vector<std::vector<Bytes>>& witnessSeqs,
                           const std::vector<Transaction>& group,
                           const SignatureProvider& provider) {
  if (witnessSeqs.size() != group.size()) return false;
  for (u64 i = 0; i < group.size(); ++i) {
    if (!authorizeTx(assetMap, witnessSeqs[i], group, i, provider)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// User-blockchain interaction layer

struct NetState {
  BlockchainState chain;
  std::set<Bytes> knowledge;
};

struct Label {
  enum class Kind { Witness, Tick, AuthGroup };
  Kind kind = Kind::Tick;
  Bytes witness;                               // Witness
  std::vector<std::vector<Bytes>> witnessSeqs;  // AuthGroup
  std::vector<Transaction> group;               // AuthGroup

  static Label witnessLabel(Bytes w) {
    Label l;
    l.kind = Kind::Witness;
    l.witness = std::move(w);
    return l;
  }
  static Label tick() { return Label{}; }
  static Label authGroup(std::vector<std::vector<Bytes>> seqs, std::vector<Transaction> txs) {
    Label l;
    l.kind = Kind::AuthGroup;
    l.witnessSeqs = std::move(seqs);
    l.group = std::move(txs);
    return l;
  }
};

constexpr std::uint8_t kTagLabelWitness = 0x60;
constexpr std::uint8_t kTagLabelTick = 0x61;
constexpr std::uint8_t kTagLabelAuthGroup = 0x62;

inline Bytes encodeLabel(const Label& l) {
  ByteWriter w;
  switch (l.kind) {
    case Label::Kind::Witness:
      w.byte(kTagLabelWitness);
      w.lengthPrefixed(l.witness);
      break;
    case Label::Kind::Tick:
      w.byte(kTagLabelTick);
      break;
    case Label::Kind::AuthGroup:
      w.byte(kTagLabelAuthGroup);
      w.u32be(static_cast<u32>(l.witnessSeqs.size()));
      for (const auto& seq : l.witnessSeqs) {
        w.u32be(static_cast<u32>(seq.size()));
        for (const auto& witness : seq) w.lengthPrefixed(witness);
      }
      w.u32be(static_cast<u32>(l.group.size()));
      for (const auto& t : l.group) w.lengthPrefixed(encodeTransaction(t));
      break;
  }
  return w.take();
}

inline Label decodeLabel(const Bytes& b) {
  ByteReader r(b);
  auto tag = r.byte();
  Label l;
  if (tag == kTagLabelWitness) {
    l = Label::witnessLabel(r.lengthPrefixed());
  } else if (tag == kTagLabelTick) {
    l = Label::tick();
  } else if (tag == kTagLabelAuthGroup) {
    std::vector<std::vector<Bytes>> seqs(r.u32be());
    for (auto& seq : seqs) {
      seq.resize(r.u32be());
      for (auto& witness : seq) witness = r.lengthPrefixed();
    }
    std::vector<Transaction> group(r.u32be());
    for (auto& t : group) t = decodeTransaction(r.lengthPrefixed());
    l = Label::authGroup(std::move(seqs), std::move(group));
  } else {
    throw DecodeError("unknown label tag");
  }
  r.expectEnd();
  return l;
}

// [Net-Wit] / [Net-Round] / [Net-TxG]: witnesses only enter through
// broadcasts, and a group fires only with known, authorizing witnesses.
inline StepResult<NetState> netStep(const NetState& net, const Label& label,
                                    const SignatureProvider& provider = ed25519Provider()) {
  switch (label.kind) {
    case Label::Kind::Witness: {
      NetState out = net;
      out.knowledge.insert(label.witness);
      return out;
    }
    case Label::Kind::Tick: {
      NetState out = net;
      out.chain = advanceRound(out.chain);
      return out;
    }
    case Label::Kind::AuthGroup: {
      if (label.witnessSeqs.size() != label.group.size())
        return StepError{StepCode::Unauthorized, "witness sequence count mismatch"};
      for (const auto& seq : label.witnessSeqs) {
        for (const auto& w : seq) {
          if (net.knowledge.count(w) == 0)
            return StepError{StepCode::UnknownWitness, "witness was never broadcast"};
        }
      }
      if (!authorizeGroup(net.chain.assetMap, label.witnessSeqs, label.group, provider))
        return StepError{StepCode::Unauthorized, "group authorization predicate failed"};
      auto next = applyGroup(net.chain, label.group);
      if (!next.ok()) return next.error();
      NetState out = net;
      out.chain = std::move(next.value());
      return out;
    }
  }
  return StepError{StepCode::NoRuleApplies, "unknown label"};
}

}  // namespace asc1
