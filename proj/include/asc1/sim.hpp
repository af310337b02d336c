#pragma once

#include <deque>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "asc1/codec.hpp"
#include "asc1/semantics.hpp"
#include "asc1/templates.hpp"

namespace asc1::sim {

using Rng = std::mt19937_64;

// What a user strategy may try to do in one scheduling slot. A submit
// expands into witness broadcasts for every witness not yet known,
// followed by the authorized group, so the network premises hold.
struct SubmitAction {
  std::vector<std::vector<Bytes>> witnessSeqs;
  std::vector<Transaction> group;
};

struct UserAction {
  std::optional<Bytes> broadcast;
  std::optional<SubmitAction> submit;

  static UserAction broadcastWitness(Bytes w) {
    UserAction a;
    a.broadcast = std::move(w);
    return a;
  }
  static UserAction submitGroup(std::vector<std::vector<Bytes>> seqs,
                                std::vector<Transaction> group) {
    UserAction a;
    a.submit = SubmitAction{std::move(seqs), std::move(group)};
    return a;
  }
};

struct Rejection {
  std::size_t owner = 0;
  u64 round = 0;
  std::string reason;
};

struct Run {
  std::vector<Label> labels;
  std::vector<NetState> states;  // states[i+1] = netStep(states[i], labels[i])
  u64 seed = 0;
  std::string conformsTo;
  std::vector<Rejection> rejections;
  std::optional<StepError> harnessError;

  const NetState& current() const { return states.back(); }
  u64 round() const { return current().chain.round; }
};

class Strategy {
 public:
  virtual ~Strategy() = default;
  // Called once per scheduling slot; strategies keep their own tape and
  // must not rely on being called exactly once per round.
  virtual std::optional<UserAction> step(const Run& run, Rng& rng) = 0;
};

struct PendingProposal {
  UserAction action;
  std::size_t owner = 0;
  u64 proposedRound = 0;
};

class Adversary {
 public:
  virtual ~Adversary() = default;
  // Returns the index of the pending proposal to schedule, or nullopt
  // for a Tick. The harness rejects an illegal Tick (one that would
  // break a delivery deadline).
  virtual std::optional<std::size_t> choose(const Run& run,
                                            const std::vector<PendingProposal>& pending,
                                            bool tickAllowed, Rng& rng) = 0;
};

struct SimConfig {
  u64 maxRounds = 10;
  u64 seed = 0;
  u64 deltaAdv = 0;
  u64 maxActionsPerRound = 1024;
  const SignatureProvider* provider = &ed25519Provider();
  std::string conformsTo;
};

// Round-robin scheduler: strategies propose, the adversary picks the
// next label, delivery deadlines are proposal round + deltaAdv. A
// proposal the chain rejects is recorded and dropped, never silently
// retried by the harness.
inline Run simulate(const NetState& initial,
                    std::vector<std::shared_ptr<Strategy>> strategies,
                    Adversary& adversary, const SimConfig& cfg) {
  Run run;
  run.seed = cfg.seed;
  run.conformsTo = cfg.conformsTo;
  run.states.push_back(initial);

  std::vector<Rng> userRngs;
  for (std::size_t i = 0; i < strategies.size(); ++i)
    userRngs.emplace_back(cfg.seed * 2654435761ULL + i + 1);
  Rng advRng(cfg.seed * 2654435761ULL + 0x5eedULL);

  std::vector<PendingProposal> pending;
  u64 ticks = 0;
  u64 actionsThisRound = 0;

  auto applyLabel = [&](const Label& l) -> std::optional<StepError> {
    auto next = netStep(run.current(), l, *cfg.provider);
    if (!next.ok()) return next.error();
    run.labels.push_back(l);
    run.states.push_back(std::move(next.value()));
    return std::nullopt;
  };

  auto tick = [&] {
    applyLabel(Label::tick());  // [Round] is total
    ++ticks;
    actionsThisRound = 0;
  };

  auto schedule = [&](std::size_t idx) {
    PendingProposal p = std::move(pending[idx]);
    pending.erase(pending.begin() + static_cast<std::ptrdiff_t>(idx));
    ++actionsThisRound;
    if (p.action.broadcast) {
      applyLabel(Label::witnessLabel(*p.action.broadcast));
      return;
    }
    const SubmitAction& sub = *p.action.submit;
    for (const auto& seq : sub.witnessSeqs) {
      for (const auto& w : seq) {
        if (run.current().knowledge.count(w) == 0) applyLabel(Label::witnessLabel(w));
      }
    }
    auto err = applyLabel(Label::authGroup(sub.witnessSeqs, sub.group));
    if (err) run.rejections.push_back({p.owner, run.round(), stepCodeName(err->code)});
  };

  while (ticks < cfg.maxRounds) {
    bool proposed = false;
    for (std::size_t i = 0; i < strategies.size(); ++i) {
      if (auto act = strategies[i]->step(run, userRngs[i])) {
        pending.push_back({std::move(*act), i, run.round()});
        proposed = true;
      }
    }

    bool tickAllowed = true;
    for (const auto& p : pending) {
      if (p.proposedRound + cfg.deltaAdv <= run.round()) {
        tickAllowed = false;
        break;
      }
    }

    if (actionsThisRound >= cfg.maxActionsPerRound) {
      // Non-Zeno cap: time advances regardless of the backlog; held
      // proposals stay pending and are due first thing next round.
      tick();
      continue;
    }

    if (pending.empty()) {
      if (!proposed) {
        tick();
      }
      continue;
    }

    auto choice = adversary.choose(run, pending, tickAllowed, advRng);
    if (!choice) {
      if (!tickAllowed) {
        run.harnessError =
            StepError{StepCode::StuckRun, "adversary refused a due proposal"};
        return run;
      }
      tick();
    } else {
      if (*choice >= pending.size()) {
        run.harnessError = StepError{StepCode::StuckRun, "adversary chose a bogus proposal"};
        return run;
      }
      schedule(*choice);
    }
  }
  return run;
}

// ---------------------------------------------------------------------------
// Adversaries

class FifoAdversary final : public Adversary {
 public:
  std::optional<std::size_t> choose(const Run&, const std::vector<PendingProposal>& pending,
                                    bool, Rng&) override {
    if (pending.empty()) return std::nullopt;
    return 0;
  }
};

class RandomAdversary final : public Adversary {
 public:
  std::optional<std::size_t> choose(const Run&, const std::vector<PendingProposal>& pending,
                                    bool tickAllowed, Rng& rng) override {
    if (pending.empty()) return std::nullopt;
    std::uniform_int_distribution<std::size_t> dist(0, pending.size() - (tickAllowed ? 0 : 1));
    std::size_t pick = dist(rng);
    if (tickAllowed && pick == pending.size()) return std::nullopt;
    // Per-user FIFO order: schedule the oldest proposal of the picked owner.
    std::size_t owner = pending[pick].owner;
    for (std::size_t i = 0; i < pending.size(); ++i) {
      if (pending[i].owner == owner) return i;
    }
    return pick;
  }
};

// Holds every proposal for the full allowed delay.
class DelayAdversary final : public Adversary {
 public:
  explicit DelayAdversary(u64 deltaAdv) : deltaAdv_(deltaAdv) {}
  std::optional<std::size_t> choose(const Run& run,
                                    const std::vector<PendingProposal>& pending, bool,
                                    Rng&) override {
    for (std::size_t i = 0; i < pending.size(); ++i) {
      if (pending[i].proposedRound + deltaAdv_ <= run.round()) return i;
    }
    return std::nullopt;
  }

 private:
  u64 deltaAdv_;
};

// ---------------------------------------------------------------------------
// Run properties (the executable theorem checks)

struct Verdict {
  bool pass = false;
  std::optional<std::size_t> failIndex;
  std::string message;

  static Verdict good() { return {true, std::nullopt, ""}; }
  static Verdict bad(std::size_t index, std::string msg) {
    return {false, index, std::move(msg)};
  }
};

namespace detail {

inline Verdict checkNoDoubleSpend(const Run& run) {
  std::set<Bytes> seen;
  for (std::size_t i = 0; i < run.labels.size(); ++i) {
    if (run.labels[i].kind != Label::Kind::AuthGroup) continue;
    for (const auto& t : run.labels[i].group) {
      Bytes enc = encodeTransaction(t);
      if (!seen.insert(enc).second)
        return Verdict::bad(i, "transaction appears in two authorized groups");
    }
  }
  return Verdict::good();
}

inline Verdict checkValuePreservation(const Run& run) {
  u64 algoSupply = assetTotal(kAlgo, run.states.front().chain);
  std::map<AssetId, u64> minted;
  std::set<AssetId> burnt;
  for (std::size_t i = 0; i < run.states.size(); ++i) {
    const BlockchainState& s = run.states[i].chain;
    if (assetTotal(kAlgo, s) != algoSupply)
      return Verdict::bad(i, "Algo total changed");
    for (const auto& [asset, info] : s.assetMap) {
      auto it = minted.find(asset);
      if (it == minted.end()) {
        if (burnt.count(asset) != 0)
          return Verdict::bad(i, "burnt asset reappeared");
        minted[asset] = assetTotal(asset, s);
      } else if (assetTotal(asset, s) != it->second) {
        return Verdict::bad(i, "asset total changed between mint and burn");
      }
    }
    for (const auto& [asset, amount] : minted) {
      if (s.assetMap.count(asset) == 0) {
        burnt.insert(asset);
        if (assetTotal(asset, s) != 0)
          return Verdict::bad(i, "burnt asset still has holdings");
      }
    }
  }
  return Verdict::good();
}

inline Verdict checkReplayDeterminism(const Run& run, const SignatureProvider& provider) {
  if (run.states.empty()) return Verdict::bad(0, "run has no states");
  NetState replay = run.states.front();
  for (std::size_t i = 0; i < run.labels.size(); ++i) {
    auto next = netStep(replay, run.labels[i], provider);
    if (!next.ok())
      return Verdict::bad(i, std::string("replay step failed: ") +
                                 stepCodeName(next.error().code));
    replay = std::move(next.value());
    if (stateDigest(replay.chain) != stateDigest(run.states[i + 1].chain))
      return Verdict::bad(i, "replayed state digest diverges");
    if (replay.knowledge != run.states[i + 1].knowledge)
      return Verdict::bad(i, "replayed knowledge diverges");
  }
  return Verdict::good();
}

// Lemma check for close-guarded script accounts: while the account is
// open its balance domain stays {Algo} and the Algo entry never drops.
inline Verdict checkCloseMonotone(const Run& run, const Address& account) {
  std::optional<u64> lastAlgo;
  for (std::size_t i = 0; i < run.states.size(); ++i) {
    const BlockchainState& s = run.states[i].chain;
    auto it = s.accounts.find(account);
    if (it == s.accounts.end()) {
      lastAlgo.reset();  // closed (or not yet funded); a refund restarts the check
      continue;
    }
    const Balance& bal = it->second;
    if (bal.assetCount() != 1 || !bal.has(kAlgo))
      return Verdict::bad(i, "close-guarded account holds a non-Algo asset");
    u64 algo = bal.amount(kAlgo);
    if (lastAlgo && algo < *lastAlgo)
      return Verdict::bad(i, "close-guarded account balance decreased");
    lastAlgo = algo;
  }
  return Verdict::good();
}

}  // namespace detail

struct PropertyOptions {
  std::optional<Address> account;  // close-monotone target
  const SignatureProvider* provider = &ed25519Provider();
};

inline Verdict checkProperty(const Run& run, const std::string& propertyId,
                             const PropertyOptions& opts = {}) {
  if (propertyId == "no-double-spend") return detail::checkNoDoubleSpend(run);
  if (propertyId == "value-preservation") return detail::checkValuePreservation(run);
  if (propertyId == "replay-determinism")
    return detail::checkReplayDeterminism(run, *opts.provider);
  if (propertyId == "close-monotone") {
    if (!opts.account) return Verdict::bad(0, "close-monotone needs an account");
    return detail::checkCloseMonotone(run, *opts.account);
  }
  return Verdict::bad(0, "UnknownProperty: " + propertyId);
}

// ---------------------------------------------------------------------------
// Trace serialization: line-delimited JSON, one object per label.

inline std::string traceHeader(const Run& run) {
  nlohmann::ordered_json j;
  j["trace"] = "asc1-run";
  j["seed"] = run.seed;
  j["conformsTo"] = run.conformsTo;
  const BlockchainState& genesis = run.states.front().chain;
  j["genesisState"] = hexEncode(encodeState(genesis));
  j["config"] = {{"deltaMax", genesis.config.deltaMax},
                 {"minBalancePerAsset", genesis.config.minBalancePerAsset},
                 {"maxAssetsPerAccount", genesis.config.maxAssetsPerAccount}};
  j["initialState"] = hexEncode(stateDigest(genesis));
  return j.dump();
}

inline std::string traceLine(const Run& run, std::size_t i) {
  const Label& l = run.labels[i];
  nlohmann::ordered_json j;
  switch (l.kind) {
    case Label::Kind::Witness: j["kind"] = "witness"; break;
    case Label::Kind::Tick: j["kind"] = "tick"; break;
    case Label::Kind::AuthGroup: j["kind"] = "authgroup"; break;
  }
  Bytes payload = encodeLabel(l);
  j["round"] = run.states[i + 1].chain.round;
  j["payload"] = hexEncode(payload);
  j["payloadDigest"] = hexEncode(sha256(payload));
  j["state"] = hexEncode(stateDigest(run.states[i + 1].chain));
  return j.dump();
}

inline std::string serializeTrace(const Run& run) {
  std::ostringstream out;
  out << traceHeader(run) << "\n";
  for (std::size_t i = 0; i < run.labels.size(); ++i) out << traceLine(run, i) << "\n";
  return out.str();
}

struct TraceReplay {
  bool ok = false;
  std::string message;
  Run run;  // reconstructed from the trace payloads
};

// Rebuilds the run from a serialized trace and re-derives every state
// digest. Scripts are referenced by hash in the canonical encoding, so
// the replay re-applies the chain transitions and the knowledge
// premises; witness authorization is vouched for by the recorded run.
inline TraceReplay verifyTrace(std::istream& in) {
  TraceReplay out;
  std::string line;
  if (!std::getline(in, line)) {
    out.message = "empty trace";
    return out;
  }
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    out.message = std::string("bad trace header: ") + e.what();
    return out;
  }
  if (!header.contains("genesisState")) {
    out.message = "trace header lacks the genesis state";
    return out;
  }
  LedgerConfig cfg;
  if (header.contains("config")) {
    cfg.deltaMax = header["config"].value("deltaMax", cfg.deltaMax);
    cfg.minBalancePerAsset = header["config"].value("minBalancePerAsset", cfg.minBalancePerAsset);
    cfg.maxAssetsPerAccount =
        header["config"].value("maxAssetsPerAccount", cfg.maxAssetsPerAccount);
  }
  NetState net;
  try {
    net.chain = decodeState(hexDecode(header.at("genesisState").get<std::string>()), cfg);
  } catch (const std::exception& e) {
    out.message = std::string("bad genesis state: ") + e.what();
    return out;
  }
  out.run.states.push_back(net);

  std::size_t lineNo = 1;
  while (std::getline(in, line)) {
    ++lineNo;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      out.message = "line " + std::to_string(lineNo) + ": " + e.what();
      return out;
    }
    Bytes payload = hexDecode(j.at("payload").get<std::string>());
    if (hexEncode(sha256(payload)) != j.at("payloadDigest").get<std::string>()) {
      out.message = "line " + std::to_string(lineNo) + ": payload digest mismatch";
      return out;
    }
    Label label = decodeLabel(payload);
    NetState& cur = out.run.states.back();
    NetState next = cur;
    switch (label.kind) {
      case Label::Kind::Witness:
        next.knowledge.insert(label.witness);
        break;
      case Label::Kind::Tick:
        next.chain = advanceRound(cur.chain);
        break;
      case Label::Kind::AuthGroup: {
        for (const auto& seq : label.witnessSeqs) {
          for (const auto& w : seq) {
            if (cur.knowledge.count(w) == 0) {
              out.message = "line " + std::to_string(lineNo) + ": witness never broadcast";
              return out;
            }
          }
        }
        auto applied = applyGroup(cur.chain, label.group);
        if (!applied.ok()) {
          out.message = "line " + std::to_string(lineNo) + ": replay failed with " +
                        stepCodeName(applied.error().code);
          return out;
        }
        next.chain = std::move(applied.value());
        break;
      }
    }
    if (hexEncode(stateDigest(next.chain)) != j.at("state").get<std::string>()) {
      out.message = "line " + std::to_string(lineNo) + ": state digest diverges";
      return out;
    }
    out.run.labels.push_back(std::move(label));
    out.run.states.push_back(std::move(next));
  }
  out.ok = true;
  out.message = "replayed " + std::to_string(out.run.labels.size()) + " labels";
  return out;
}

}  // namespace asc1::sim
