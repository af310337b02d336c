#pragma once

#include <algorithm>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "asc1/sim.hpp"

namespace asc1::sim {

inline Bytes signGroupWitness(const SignatureProvider& provider, const Bytes& privateKey,
                              const std::vector<Transaction>& group, u64 index) {
  return provider.sign(privateKey, groupIndexMessage(group, index));
}

inline Bytes signValueWitness(const SignatureProvider& provider, const Bytes& privateKey,
                              const Address& scriptAddr, const ScriptValue& value) {
  return provider.sign(privateKey, versigMessage(scriptAddr, value));
}

// Signs every transaction of a group with one key (a single-user sender
// submitting its own group).
inline UserAction selfSignedSubmit(const SignatureProvider& provider, const Bytes& privateKey,
                                   std::vector<Transaction> group) {
  std::vector<std::vector<Bytes>> seqs;
  seqs.reserve(group.size());
  for (u64 i = 0; i < group.size(); ++i)
    seqs.push_back({signGroupWitness(provider, privateKey, group, i)});
  return UserAction::submitGroup(std::move(seqs), std::move(group));
}

inline bool runContainsClaim(const Run& run, const TxPredicate& claim) {
  for (const auto& l : run.labels) {
    if (l.kind != Label::Kind::AuthGroup) continue;
    for (const auto& t : l.group) {
      if (claim(t)) return true;
    }
  }
  return false;
}

inline std::optional<Bytes> findPreimageInKnowledge(const Run& run, const Bytes& digest) {
  for (const auto& w : run.current().knowledge) {
    if (sha256(w) == digest) return w;
  }
  return std::nullopt;
}

class IdleStrategy final : public Strategy {
 public:
  std::optional<UserAction> step(const Run&, Rng&) override { return std::nullopt; }
};

// Replays a fixed list of actions, each no earlier than its round.
class ScriptedStrategy final : public Strategy {
 public:
  struct Item {
    u64 round;
    UserAction action;
  };
  explicit ScriptedStrategy(std::vector<Item> items) : items_(std::move(items)) {}

  std::optional<UserAction> step(const Run& run, Rng&) override {
    if (next_ >= items_.size()) return std::nullopt;
    if (run.round() < items_[next_].round) return std::nullopt;
    return items_[next_++].action;
  }

 private:
  std::vector<Item> items_;
  std::size_t next_ = 0;
};

// Sigma_A of the hash time lock contract: reveal the secret before the
// deadline by closing the contract to yourself.
class HtlcRevealStrategy final : public Strategy {
 public:
  struct Params {
    Address htlc;
    Address self;
    Bytes secret;
    u64 revealRound = 0;
    u64 window = 2;
  };
  explicit HtlcRevealStrategy(Params p) : p_(std::move(p)) {}

  std::optional<UserAction> step(const Run& run, Rng&) override {
    if (done_ || run.round() < p_.revealRound) return std::nullopt;
    if (!run.current().chain.hasAccount(p_.htlc)) return std::nullopt;
    done_ = true;
    u64 r = run.round();
    auto t = tx::close(p_.htlc, p_.self, kAlgo, {r, r + p_.window, 0});
    return UserAction::submitGroup({{p_.secret}}, {t});
  }

 private:
  Params p_;
  bool done_ = false;
};

// Sigma_B: if the reveal has not appeared by the deadline, claim the
// timeout branch.
class HtlcTimeoutStrategy final : public Strategy {
 public:
  struct Params {
    Address htlc;
    Address self;
    Address counterparty;  // the revealer
    u64 tmax = 0;
    u64 window = 2;
  };
  explicit HtlcTimeoutStrategy(Params p) : p_(std::move(p)) {}

  std::optional<UserAction> step(const Run& run, Rng&) override {
    if (done_ || run.round() < p_.tmax) return std::nullopt;
    done_ = true;
    TxPredicate reveal = [this](const Transaction& t) {
      return t.type == TxType::Close && t.snd == p_.htlc && t.rcv == p_.counterparty &&
             t.asst == kAlgo;
    };
    if (runContainsClaim(run, reveal)) return std::nullopt;
    if (!run.current().chain.hasAccount(p_.htlc)) return std::nullopt;
    u64 r = run.round();
    auto t = tx::close(p_.htlc, p_.self, kAlgo, {r, r + p_.window, 0});
    return UserAction::submitGroup({{}}, {t});
  }

 private:
  Params p_;
  bool done_ = false;
};

// Sigma_o: broadcast one signed outcome, or stay silent; never signs
// both values.
class OracleSignStrategy final : public Strategy {
 public:
  struct Params {
    Address oracle;
    Bytes privateKey;
    std::optional<u64> outcome;  // nullopt: stay silent
    u64 signRound = 0;
    const SignatureProvider* provider = &ed25519Provider();
  };
  explicit OracleSignStrategy(Params p) : p_(std::move(p)) {}

  std::optional<UserAction> step(const Run& run, Rng&) override {
    if (done_ || !p_.outcome || run.round() < p_.signRound) return std::nullopt;
    done_ = true;
    Bytes sig =
        signValueWitness(*p_.provider, p_.privateKey, p_.oracle, ScriptValue::nat(*p_.outcome));
    return UserAction::broadcastWitness(sig);
  }

 private:
  Params p_;
  bool done_ = false;
};

// Sigma_A of the oracle contract: claim on a signed 0, or fall back to
// the timeout branch one round past the deadline.
class OracleClaimStrategy final : public Strategy {
 public:
  struct Params {
    Address oracle;
    Address self;
    Bytes oracleKey;
    u64 watchedOutcome = 0;
    std::optional<u64> timeoutRound;  // tmax + 1 for the A role, nullopt for B
    u64 window = 2;
    const SignatureProvider* provider = &ed25519Provider();
  };
  explicit OracleClaimStrategy(Params p) : p_(std::move(p)) {}

  std::optional<UserAction> step(const Run& run, Rng&) override {
    if (done_ || !run.current().chain.hasAccount(p_.oracle)) return std::nullopt;
    Bytes msg = versigMessage(p_.oracle, ScriptValue::nat(p_.watchedOutcome));
    for (const auto& w : run.current().knowledge) {
      if (p_.provider->verify(p_.oracleKey, msg, w)) {
        done_ = true;
        u64 r = run.round();
        auto t = tx::close(p_.oracle, p_.self, kAlgo, {r, r + p_.window, 0});
        return UserAction::submitGroup({{u64beBytes(p_.watchedOutcome), w}}, {t});
      }
    }
    if (p_.timeoutRound && run.round() >= *p_.timeoutRound) {
      done_ = true;
      u64 r = run.round();
      auto t = tx::close(p_.oracle, p_.self, kAlgo, {r, r + p_.window, 0});
      return UserAction::submitGroup({{}}, {t});
    }
    return std::nullopt;
  }

 private:
  Params p_;
  bool done_ = false;
};

// Sigma_p of the collateral lottery: fund, reveal, then either claim
// the pot on a win or the opponent's collateral on a timeout.
class LotteryPlayerStrategy final : public Strategy {
 public:
  struct Params {
    bool roleA = true;
    Address self;
    Address other;
    Bytes privateKey;
    Bytes otherPublicKey;
    Bytes secret;
    Bytes otherHash;
    Address ownHtlc;
    Address otherHtlc;
    Address lottery;
    std::vector<Transaction> setupGroup;
    u64 revealRound = 1;
    u64 tmax = 0;
    u64 window = 2;
    bool withholdSecret = false;
    const SignatureProvider* provider = &ed25519Provider();
  };
  explicit LotteryPlayerStrategy(Params p) : p_(std::move(p)) {}

  std::optional<UserAction> step(const Run& run, Rng&) override {
    const NetState& net = run.current();
    // Setup: the A role broadcasts its two signatures, the B role
    // gathers them and submits the four-transaction group.
    if (p_.roleA) {
      if (broadcasts_ < 2) {
        u64 index = broadcasts_ == 0 ? 0 : 2;
        ++broadcasts_;
        return UserAction::broadcastWitness(
            signGroupWitness(*p_.provider, p_.privateKey, p_.setupGroup, index));
      }
    } else if (!setupSubmitted_ && !net.chain.hasAccount(p_.lottery)) {
      // scan only witnesses not seen before; verification is cached
      for (const auto& w : net.knowledge) {
        if (!checkedWitnesses_.insert(w).second) continue;
        if (!sig0_ && p_.provider->verify(p_.otherPublicKey,
                                          groupIndexMessage(p_.setupGroup, 0), w)) {
          sig0_ = w;
          continue;
        }
        if (!sig2_ && p_.provider->verify(p_.otherPublicKey,
                                          groupIndexMessage(p_.setupGroup, 2), w)) {
          sig2_ = w;
        }
      }
      if (sig0_ && sig2_) {
        setupSubmitted_ = true;
        std::vector<std::vector<Bytes>> seqs = {
            {*sig0_},
            {signGroupWitness(*p_.provider, p_.privateKey, p_.setupGroup, 1)},
            {*sig2_},
            {signGroupWitness(*p_.provider, p_.privateKey, p_.setupGroup, 3)}};
        return UserAction::submitGroup(std::move(seqs), p_.setupGroup);
      }
      return std::nullopt;
    }

    if (!net.chain.hasAccount(p_.lottery) && !revealed_) return std::nullopt;

    // Reveal the own secret (also reclaims the own collateral).
    if (!revealed_ && !p_.withholdSecret && run.round() >= p_.revealRound &&
        run.round() < p_.tmax) {
      if (net.chain.hasAccount(p_.ownHtlc)) {
        revealed_ = true;
        u64 r = run.round();
        auto t = tx::close(p_.ownHtlc, p_.self, kAlgo, {r, r + p_.window, 0});
        return UserAction::submitGroup({{p_.secret}}, {t});
      }
    }

    // Pot claim once both secrets are public and the parity favours us.
    if (!potTried_ && net.chain.hasAccount(p_.lottery)) {
      if (auto otherSecret = findPreimageInKnowledge(run, p_.otherHash)) {
        if (!p_.withholdSecret) {
          Bytes secretA = p_.roleA ? p_.secret : *otherSecret;
          Bytes secretB = p_.roleA ? *otherSecret : p_.secret;
          u64 pa = *asc1::detail::coerceNat(ScriptValue::bytes(secretA));
          u64 pb = *asc1::detail::coerceNat(ScriptValue::bytes(secretB));
          bool aWins = (pa + pb) % 2 == 0;
          if (aWins == p_.roleA) {
            potTried_ = true;
            u64 r = run.round();
            auto t = tx::close(p_.lottery, p_.self, kAlgo, {r, r + p_.window, 0});
            return UserAction::submitGroup({{secretA, secretB}}, {t});
          }
        }
      }
    }

    // Timeout claim on the opponent's collateral.
    if (!timeoutTried_ && run.round() >= p_.tmax && net.chain.hasAccount(p_.otherHtlc)) {
      if (!findPreimageInKnowledge(run, p_.otherHash)) {
        timeoutTried_ = true;
        u64 r = run.round();
        auto t = tx::close(p_.otherHtlc, p_.self, kAlgo, {r, r + p_.window, 0});
        return UserAction::submitGroup({{}}, {t});
      }
    }
    return std::nullopt;
  }

 private:
  Params p_;
  int broadcasts_ = 0;
  bool setupSubmitted_ = false;
  bool revealed_ = false;
  bool potTried_ = false;
  bool timeoutTried_ = false;
  std::set<Bytes> checkedWitnesses_;
  std::optional<Bytes> sig0_, sig2_;
};

// Withdraws the allowed amount once per period window.
class PpWithdrawStrategy final : public Strategy {
 public:
  struct Params {
    Address pp;
    Address self;
    u64 v = 0;
    u64 period = 0;
    u64 d = 0;
    u64 lease = 0;
    u64 windows = 5;
  };
  explicit PpWithdrawStrategy(Params p) : p_(std::move(p)) {}

  std::optional<UserAction> step(const Run& run, Rng&) override {
    u64 r = run.round();
    if (r % p_.period != 0) return std::nullopt;
    u64 window = r / p_.period;
    if (window >= p_.windows || window < nextWindow_) return std::nullopt;
    if (!run.current().chain.hasAccount(p_.pp)) return std::nullopt;
    nextWindow_ = window + 1;
    auto t = tx::pay(p_.pp, p_.self, p_.v, kAlgo, {r, r + p_.d, p_.lease});
    return UserAction::submitGroup({{}}, {t});
  }

 private:
  Params p_;
  u64 nextWindow_ = 0;
};

// Proposes the same signed transaction twice; the second submission
// must bounce off the double-spend guard.
class DuplicateSubmitStrategy final : public Strategy {
 public:
  struct Params {
    Transaction tx;
    Bytes privateKey;
    u64 firstRound = 0;
    const SignatureProvider* provider = &ed25519Provider();
  };
  explicit DuplicateSubmitStrategy(Params p) : p_(std::move(p)) {}

  std::optional<UserAction> step(const Run& run, Rng&) override {
    if (submissions_ >= 2 || run.round() < p_.firstRound) return std::nullopt;
    ++submissions_;
    return selfSignedSubmit(*p_.provider, p_.privateKey, {p_.tx});
  }

 private:
  Params p_;
  int submissions_ = 0;
};

// Random exerciser of the whole rule set; used by the fuzz corpora.
class RandomLedgerStrategy final : public Strategy {
 public:
  struct HtlcTarget {
    Address htlc;
    Address self;
    Address other;
    Bytes secret;
    u64 tmax = 0;
  };
  struct Params {
    KeyPair key;
    Address self;
    std::vector<Address> peers;
    u64 actPercent = 45;
    u64 maxActionsPerRound = 2;
    bool enableGenBurn = true;
    std::optional<HtlcTarget> htlc;
    const SignatureProvider* provider = &ed25519Provider();
  };
  explicit RandomLedgerStrategy(Params p) : p_(std::move(p)) {}

  std::optional<UserAction> step(const Run& run, Rng& rng) override {
    const BlockchainState& chain = run.current().chain;
    u64 r = run.round();
    if (r != lastRound_) {
      lastRound_ = r;
      actionsThisRound_ = 0;
    }
    if (actionsThisRound_ >= p_.maxActionsPerRound) return std::nullopt;
    if (rng() % 100 >= p_.actPercent) return std::nullopt;
    if (!chain.hasAccount(p_.self)) return std::nullopt;
    ++actionsThisRound_;

    u64 lv = r + rng() % 4;
    u64 lease = rng() % 5 == 0 ? 1 + rng() % 3 : 0;
    tx::Window w{r, lv, lease};
    const Balance& bal = chain.balanceOf(p_.self);
    u64 algo = bal.amount(kAlgo);

    switch (rng() % 10) {
      case 0: {  // pay a fresh account into existence
        if (algo < 400000) break;
        Bytes seed(32);
        for (auto& c : seed) c = static_cast<std::uint8_t>(rng());
        Address fresh = Address::user(p_.provider->keyFromSeed(seed).publicKey);
        u64 val = 100000 + rng() % 100000;
        return submitOwn(tx::pay(p_.self, fresh, val, kAlgo, w));
      }
      case 1:
      case 2: {  // Algo payment to a peer
        if (p_.peers.empty() || algo < 200000) break;
        const Address& peer = p_.peers[rng() % p_.peers.size()];
        u64 val = rng() % (algo / 2 + 1);
        return submitOwn(tx::pay(p_.self, peer, val, kAlgo, w));
      }
      case 3: {  // asset payment (sometimes to a non-opted-in peer)
        if (p_.peers.empty()) break;
        auto assets = heldAssets(bal);
        if (assets.empty()) break;
        AssetId asset = assets[rng() % assets.size()];
        const Address& peer = p_.peers[rng() % p_.peers.size()];
        u64 val = rng() % (bal.amount(asset) + 2);
        return submitOwn(tx::pay(p_.self, peer, val, asset, w));
      }
      case 4: {  // opt in to a random known asset
        if (chain.assetMap.empty()) break;
        auto it = chain.assetMap.begin();
        std::advance(it, rng() % chain.assetMap.size());
        return submitOwn(tx::optin(p_.self, it->first, w));
      }
      case 5: {  // mint an asset managed by ourselves
        if (!p_.enableGenBurn) break;
        u64 supply = 1 + rng() % 1000;
        return submitOwn(tx::gen(p_.self, p_.self, supply, w));
      }
      case 6: {  // burn an owned asset (fails unless sole owner)
        if (!p_.enableGenBurn) break;
        auto owned = managedAssets(chain);
        if (owned.empty()) break;
        return submitOwn(tx::burn(p_.self, owned[rng() % owned.size()], w));
      }
      case 7: {  // freeze or unfreeze a holder of a managed asset
        auto owned = managedAssets(chain);
        if (owned.empty()) break;
        AssetId asset = owned[rng() % owned.size()];
        std::vector<Address> holders;
        for (const auto& [addr, b] : chain.accounts) {
          if (b.has(asset)) holders.push_back(addr);
        }
        if (holders.empty()) break;
        const Address& target = holders[rng() % holders.size()];
        Transaction t = rng() % 2 == 0 ? tx::frz(target, asset, w) : tx::unfrz(target, asset, w);
        return submitOwn(t);
      }
      case 8: {  // resubmit the previous transaction (double-spend probe)
        if (!lastSubmitted_) break;
        return selfSignedSubmit(*p_.provider, p_.key.privateKey, {*lastSubmitted_});
      }
      case 9: {  // interact with the close-guarded contract account
        if (!p_.htlc) break;
        const auto& h = *p_.htlc;
        if (!chain.hasAccount(h.htlc)) {
          if (h.self == p_.self && algo > 600000) {
            return submitOwn(tx::pay(p_.self, h.htlc, 200000 + rng() % 200000, kAlgo, w));
          }
          break;
        }
        bool rightSecret = h.self == p_.self && rng() % 2 == 0;
        Bytes witness = h.secret;
        if (!rightSecret) {
          witness.assign(16, 0);
          for (auto& c : witness) c = static_cast<std::uint8_t>(rng());
        }
        Address rcv = rightSecret ? h.self : p_.self;
        u64 fv = r;
        if (rng() % 3 == 0 && r >= h.tmax) rcv = h.other;
        auto t = tx::close(h.htlc, rcv, kAlgo, {fv, fv + rng() % 3, 0});
        return UserAction::submitGroup({{witness}}, {t});
      }
    }
    return std::nullopt;
  }

 private:
  std::vector<AssetId> heldAssets(const Balance& bal) const {
    std::vector<AssetId> out;
    for (const auto& [asset, amt] : bal.entries()) {
      if (asset != kAlgo) out.push_back(asset);
    }
    return out;
  }

  std::vector<AssetId> managedAssets(const BlockchainState& chain) const {
    std::vector<AssetId> out;
    for (const auto& [asset, info] : chain.assetMap) {
      if (info.manager == p_.self && info.creator == p_.self) out.push_back(asset);
    }
    return out;
  }

  UserAction submitOwn(Transaction t) {
    lastSubmitted_ = t;
    return selfSignedSubmit(*p_.provider, p_.key.privateKey, {std::move(t)});
  }

  Params p_;
  u64 lastRound_ = ~u64{0};
  u64 actionsThisRound_ = 0;
  std::optional<Transaction> lastSubmitted_;
};

// Named construction used by the CLI scenario format.
struct StrategyParams {
  std::string kind;
  // the union of builtin parameter fields, filled per kind
  HtlcRevealStrategy::Params htlcReveal;
  HtlcTimeoutStrategy::Params htlcTimeout;
  OracleSignStrategy::Params oracleSign;
  OracleClaimStrategy::Params oracleClaim;
  LotteryPlayerStrategy::Params lottery;
  PpWithdrawStrategy::Params pp;
  DuplicateSubmitStrategy::Params duplicate;
  RandomLedgerStrategy::Params random;
};

inline std::shared_ptr<Strategy> builtinStrategy(const StrategyParams& p) {
  if (p.kind == "idle") return std::make_shared<IdleStrategy>();
  if (p.kind == "htlc-reveal") return std::make_shared<HtlcRevealStrategy>(p.htlcReveal);
  if (p.kind == "htlc-timeout") return std::make_shared<HtlcTimeoutStrategy>(p.htlcTimeout);
  if (p.kind == "oracle-sign") return std::make_shared<OracleSignStrategy>(p.oracleSign);
  if (p.kind == "oracle-claim") return std::make_shared<OracleClaimStrategy>(p.oracleClaim);
  if (p.kind == "lottery-player") return std::make_shared<LotteryPlayerStrategy>(p.lottery);
  if (p.kind == "pp-withdraw") return std::make_shared<PpWithdrawStrategy>(p.pp);
  if (p.kind == "duplicate-submit")
    return std::make_shared<DuplicateSubmitStrategy>(p.duplicate);
  if (p.kind == "random-ledger") return std::make_shared<RandomLedgerStrategy>(p.random);
  throw std::invalid_argument("InvalidParams: unknown strategy kind " + p.kind);
}

}  // namespace asc1::sim
