// Acceptance suite: one check per numbered criterion, each printed as a
// single pass/fail line. Exit status is zero only when every criterion
// holds at its stated tolerance.

#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <vector>

#include "asc1/fuzz.hpp"
#include "asc1/scenario.hpp"
#include "asc1/script_text.hpp"
#include "asc1/strategies.hpp"
#include "asc1/teal.hpp"
#include "../tests/operator_cases.hpp"

using namespace asc1;
using namespace asc1::sim;

namespace {

struct Criterion {
  int number;
  std::string title;
  std::function<std::string()> run;  // empty string = pass, else failure detail
};

TestProvider gTestProvider;

KeyPair keyOf(unsigned id) {
  Bytes seed(32, 0);
  seed[0] = static_cast<std::uint8_t>(id);
  seed[1] = 0xce;
  return gTestProvider.keyFromSeed(seed);
}
Address addrOf(unsigned id) { return Address::user(keyOf(id).publicKey); }

KeyPair edKeyOf(unsigned id) {
  Bytes seed(32, 0);
  seed[0] = static_cast<std::uint8_t>(id);
  seed[1] = 0xed;
  return ed25519Provider().keyFromSeed(seed);
}
Address edAddrOf(unsigned id) { return Address::user(edKeyOf(id).publicKey); }

Bytes randomSecret(std::mt19937_64& rng) {
  Bytes s(16);
  for (auto& b : s) b = static_cast<std::uint8_t>(rng());
  return s;
}

// A hand-driven network session for the scripted theorem scenarios.
struct Session {
  NetState net;
  const SignatureProvider& provider;
  Run run;

  Session(BlockchainState genesis, const SignatureProvider& p) : provider(p) {
    net.chain = std::move(genesis);
    run.states.push_back(net);
  }

  std::optional<StepError> apply(const Label& l) {
    auto next = netStep(net, l, provider);
    if (!next.ok()) return next.error();
    net = next.value();
    run.labels.push_back(l);
    run.states.push_back(net);
    return std::nullopt;
  }

  void tick(u64 count = 1) {
    for (u64 i = 0; i < count; ++i) apply(Label::tick());
  }

  std::optional<StepError> submit(const std::vector<Transaction>& group,
                                  std::vector<std::vector<Bytes>> seqs) {
    for (const auto& seq : seqs) {
      for (const auto& w : seq) {
        if (net.knowledge.count(w) == 0) apply(Label::witnessLabel(w));
      }
    }
    return apply(Label::authGroup(std::move(seqs), group));
  }

  std::optional<StepError> submitSigned(const KeyPair& kp, std::vector<Transaction> group) {
    std::vector<std::vector<Bytes>> seqs;
    for (u64 i = 0; i < group.size(); ++i)
      seqs.push_back({provider.sign(kp.privateKey, groupIndexMessage(group, i))});
    return submit(group, std::move(seqs));
  }

  u64 algosOf(const Address& a) const {
    return net.chain.hasAccount(a) ? net.chain.balanceOf(a).amount(kAlgo) : 0;
  }
};

BlockchainState fundedGenesis(const SignatureProvider& provider, const KeyPair& faucet,
                              const std::vector<std::pair<Address, u64>>& funds,
                              u64 deltaMax = 1000) {
  GenesisConfig g;
  g.initialUser = Address::user(faucet.publicKey);
  g.ledger.deltaMax = deltaMax;
  BlockchainState s = initialState(g);
  for (const auto& [addr, amount] : funds) {
    auto t = tx::pay(g.initialUser, addr, amount, kAlgo, {0, 0, 0});
    auto r = applyTx(s, t);
    if (!r.ok()) throw std::runtime_error("genesis funding failed");
    s = std::move(r.value());
  }
  s.recentTxs.clear();  // pristine start for the scenario proper
  return s;
}

std::string fmtFail(const std::string& msg) { return msg; }

// ---------------------------------------------------------------------------
// Shared fuzz corpus for criteria 1-4

struct Corpus {
  std::vector<FuzzOutcome> runs;
};

const Corpus& corpus() {
  static Corpus c = [] {
    Corpus out;
    out.runs.reserve(1000);
    for (u64 seed = 0; seed < 1000; ++seed) {
      FuzzOptions opts;
      opts.seed = 1000 + seed;
      opts.rounds = 8;
      opts.users = 3;
      opts.deltaMax = 16;
      opts.maxActionsPerRound = 20;
      opts.withHtlc = seed % 2 == 0;
      opts.provider = &gTestProvider;
      out.runs.push_back(fuzzRun(opts));
    }
    return out;
  }();
  return c;
}

std::string criterion1() {
  u64 labelMax = 0;
  for (const auto& outcome : corpus().runs) {
    labelMax = std::max<u64>(labelMax, outcome.run.labels.size());
    auto verdict = checkProperty(outcome.run, "no-double-spend");
    if (!verdict.pass)
      return fmtFail("double spend in fuzz run: " + verdict.message);
  }
  if (labelMax > 200) return fmtFail("a fuzz run exceeded 200 labels");

  // directed duplicate submissions across several transaction types
  const SignatureProvider& prov = gTestProvider;
  auto faucet = keyOf(0);
  BlockchainState genesis = fundedGenesis(prov, faucet, {{addrOf(1), 10000000}});
  std::vector<Transaction> duplicates = {
      tx::pay(addrOf(1), addrOf(2), 300000, kAlgo, {0, 4, 0}),
      tx::gen(addrOf(1), addrOf(1), 100, {0, 4, 0}),
      tx::optin(Address::user(faucet.publicKey), kAlgo, {0, 4, 0}),
  };
  for (const auto& dup : duplicates) {
    Session s(genesis, prov);
    const KeyPair& signer = dup.snd == addrOf(1) ? keyOf(1) : faucet;
    if (s.submitSigned(signer, {dup}))
      return fmtFail("directed duplicate scenario: first submission failed");
    auto err = s.submitSigned(signer, {dup});
    if (!err || err->code != StepCode::DoubleSpend)
      return fmtFail("directed duplicate submission did not return DoubleSpend");
  }
  return {};
}

std::string criterion2() {
  const u64 supply = LedgerConfig{}.initialSupply;
  for (const auto& outcome : corpus().runs) {
    auto verdict = checkProperty(outcome.run, "value-preservation");
    if (!verdict.pass) return fmtFail("value preservation: " + verdict.message);
    for (const auto& st : outcome.run.states) {
      if (assetTotal(kAlgo, st.chain) != supply)
        return fmtFail("Algo total diverged from the initial supply");
    }
  }
  return {};
}

std::string criterion3() {
  PropertyOptions opts;
  opts.provider = &gTestProvider;
  for (const auto& outcome : corpus().runs) {
    auto verdict = checkProperty(outcome.run, "replay-determinism", opts);
    if (!verdict.pass) return fmtFail("replay: " + verdict.message);
  }

  // alternative witness sequences on 100 authorized group steps
  std::mt19937_64 rng(777);
  u64 substituted = 0;
  for (const auto& outcome : corpus().runs) {
    if (substituted >= 100) break;
    const Run& run = outcome.run;
    for (std::size_t i = 0; i < run.labels.size() && substituted < 100; ++i) {
      if (run.labels[i].kind != Label::Kind::AuthGroup) continue;
      const NetState& before = run.states[i];
      if (before.knowledge.empty()) continue;
      auto it = before.knowledge.begin();
      std::advance(it, rng() % before.knowledge.size());
      Bytes extra = *it;
      auto seqs = run.labels[i].witnessSeqs;
      for (auto& seq : seqs) seq.push_back(extra);
      auto next = netStep(before, Label::authGroup(seqs, run.labels[i].group), gTestProvider);
      if (!next.ok())
        return fmtFail("alternative witness sequence was rejected");
      if (stateDigest(next.value().chain) != stateDigest(run.states[i + 1].chain))
        return fmtFail("alternative witnesses changed the chain state");
      ++substituted;
      break;  // at most one per run keeps the sample spread out
    }
  }
  if (substituted < 100)
    return fmtFail("only " + std::to_string(substituted) + " substitution samples found");
  return {};
}

std::string criterion4() {
  u64 checked = 0;
  for (const auto& outcome : corpus().runs) {
    if (!outcome.htlcAddr) continue;
    PropertyOptions opts;
    opts.account = outcome.htlcAddr;
    auto verdict = checkProperty(outcome.run, "close-monotone", opts);
    if (!verdict.pass) return fmtFail("close-monotone: " + verdict.message);
    ++checked;
    if (checked >= 100) break;
  }
  if (checked < 100)
    return fmtFail("only " + std::to_string(checked) + " close-guarded runs in the corpus");
  return {};
}

// ---------------------------------------------------------------------------
// Criterion 5: oracle and HTLC theorem scenarios (real signatures)

std::string criterion5() {
  const SignatureProvider& prov = ed25519Provider();
  auto faucet = edKeyOf(0);
  auto alice = edKeyOf(1);
  auto bob = edKeyOf(2);
  auto oracleUser = edKeyOf(3);
  Address a = Address::user(alice.publicKey);
  Address b = Address::user(bob.publicKey);

  Bytes secret(16, 0x5e);
  TemplateParams hp;
  hp.a = a;
  hp.b = b;
  hp.hashA = sha256(secret);
  hp.tmax = 6;
  ContractBundle htlc = buildTemplate("htlc", hp);
  Address htlcAddr = htlc.address("htlc");

  TemplateParams op;
  op.a = a;
  op.b = b;
  op.oracleKey = oracleUser.publicKey;
  op.tmax = 6;
  ContractBundle oracle = buildTemplate("oracle", op);
  Address oracleAddr = oracle.address("oracle");

  const u64 pot = 2000000;
  BlockchainState genesis = fundedGenesis(
      prov, faucet,
      {{a, 10000000}, {b, 10000000}, {htlcAddr, pot}, {oracleAddr, pot}});

  auto signedOutcome = [&](u64 v) {
    return prov.sign(oracleUser.privateKey, versigMessage(oracleAddr, ScriptValue::nat(v)));
  };

  // oracle signs 0: A claims at least the contract balance
  {
    Session s(genesis, prov);
    s.tick(2);
    u64 before = s.algosOf(a);
    auto claim = tx::close(oracleAddr, a, kAlgo, {2, 4, 0});
    if (s.submit({claim}, {{u64beBytes(0), signedOutcome(0)}}))
      return fmtFail("oracle signs 0: claim by A failed");
    if (s.algosOf(a) < before + pot) return fmtFail("oracle signs 0: A got less than the pot");
  }
  // oracle signs 1: B claims
  {
    Session s(genesis, prov);
    s.tick(2);
    u64 before = s.algosOf(b);
    auto claim = tx::close(oracleAddr, b, kAlgo, {2, 4, 0});
    if (s.submit({claim}, {{u64beBytes(1), signedOutcome(1)}}))
      return fmtFail("oracle signs 1: claim by B failed");
    if (s.algosOf(b) < before + pot) return fmtFail("oracle signs 1: B got less than the pot");
  }
  // oracle silent: A claims after the deadline
  {
    Session s(genesis, prov);
    s.tick(7);
    u64 before = s.algosOf(a);
    auto claim = tx::close(oracleAddr, a, kAlgo, {7, 9, 0});
    if (s.submit({claim}, {{}})) return fmtFail("silent oracle: timeout claim failed");
    if (s.algosOf(a) < before + pot) return fmtFail("silent oracle: A got less than the pot");
  }
  // negated: a forged oracle signature is rejected
  {
    Session s(genesis, prov);
    s.tick(2);
    Bytes forged = prov.sign(bob.privateKey, versigMessage(oracleAddr, ScriptValue::nat(1)));
    auto claim = tx::close(oracleAddr, b, kAlgo, {2, 4, 0});
    auto err = s.submit({claim}, {{u64beBytes(1), forged}});
    if (!err || err->code != StepCode::Unauthorized)
      return fmtFail("forged oracle signature was not rejected");
  }
  // negated: B cannot reuse the 0-outcome signature
  {
    Session s(genesis, prov);
    s.tick(2);
    auto claim = tx::close(oracleAddr, b, kAlgo, {2, 4, 0});
    auto err = s.submit({claim}, {{u64beBytes(0), signedOutcome(0)}});
    if (!err || err->code != StepCode::Unauthorized)
      return fmtFail("0-outcome claim by B was not rejected");
  }

  // HTLC reveal: A claims with the preimage before the deadline
  {
    Session s(genesis, prov);
    s.tick(2);
    u64 before = s.algosOf(a);
    auto claim = tx::close(htlcAddr, a, kAlgo, {2, 4, 0});
    if (s.submit({claim}, {{secret}})) return fmtFail("htlc reveal failed");
    if (s.algosOf(a) < before + pot) return fmtFail("htlc reveal: A got less than the pot");
  }
  // HTLC timeout: B claims at the deadline
  {
    Session s(genesis, prov);
    s.tick(6);
    u64 before = s.algosOf(b);
    auto claim = tx::close(htlcAddr, b, kAlgo, {6, 8, 0});
    if (s.submit({claim}, {{}})) return fmtFail("htlc timeout claim failed");
    if (s.algosOf(b) < before + pot) return fmtFail("htlc timeout: B got less than the pot");
  }
  // negated: a wrong preimage is rejected
  {
    Session s(genesis, prov);
    s.tick(2);
    auto claim = tx::close(htlcAddr, a, kAlgo, {2, 4, 0});
    auto err = s.submit({claim}, {{Bytes(16, 0x11)}});
    if (!err || err->code != StepCode::Unauthorized)
      return fmtFail("wrong preimage was not rejected");
  }
  // negated: an early timeout claim cannot enter the chain
  {
    Session s(genesis, prov);
    s.tick(2);
    auto early = tx::close(htlcAddr, b, kAlgo, {6, 8, 0});  // not yet valid
    auto err = s.submit({early}, {{}});
    if (!err || err->code != StepCode::TimeInvalid)
      return fmtFail("early timeout claim was not rejected");
    auto bentWindow = tx::close(htlcAddr, b, kAlgo, {2, 4, 0});  // fv below the deadline
    err = s.submit({bentWindow}, {{}});
    if (!err || err->code != StepCode::Unauthorized)
      return fmtFail("below-deadline timeout claim was not rejected");
  }
  return {};
}

// ---------------------------------------------------------------------------
// Criterion 6: lottery fairness and the deviation payoff

struct LotteryResult {
  bool aWonPot = false;
  bool bWonPot = false;
  u64 aReceived = 0;  // close transfers into A's account
  bool ok = true;
};

LotteryResult playLottery(const Bytes& secretA, const Bytes& secretB, bool bWithholds,
                          u64 seed) {
  const SignatureProvider& prov = ed25519Provider();
  auto faucet = edKeyOf(10);
  auto alice = edKeyOf(11);
  auto bob = edKeyOf(12);
  Address a = Address::user(alice.publicKey);
  Address b = Address::user(bob.publicKey);

  TemplateParams p;
  p.a = a;
  p.b = b;
  p.hashA = sha256(secretA);
  p.hashB = sha256(secretB);
  p.tmax = 6;
  p.unit = 1000000;
  p.setupLv = 3;
  ContractBundle bundle = buildTemplate("lottery", p);

  BlockchainState genesis =
      fundedGenesis(prov, faucet, {{a, 10000000}, {b, 10000000}});

  auto mkPlayer = [&](bool roleA, bool withhold) {
    LotteryPlayerStrategy::Params lp;
    lp.roleA = roleA;
    lp.self = roleA ? a : b;
    lp.other = roleA ? b : a;
    lp.privateKey = roleA ? alice.privateKey : bob.privateKey;
    lp.otherPublicKey = roleA ? bob.publicKey : alice.publicKey;
    lp.secret = roleA ? secretA : secretB;
    lp.otherHash = roleA ? sha256(secretB) : sha256(secretA);
    lp.ownHtlc = bundle.address(roleA ? "htlc-a" : "htlc-b");
    lp.otherHtlc = bundle.address(roleA ? "htlc-b" : "htlc-a");
    lp.lottery = bundle.address("lottery");
    lp.setupGroup = *bundle.setupGroup;
    lp.revealRound = 1;
    lp.tmax = 6;
    lp.withholdSecret = withhold;
    lp.provider = &prov;
    return std::make_shared<LotteryPlayerStrategy>(lp);
  };

  std::vector<std::shared_ptr<Strategy>> strategies = {mkPlayer(true, false),
                                                       mkPlayer(false, bWithholds)};
  FifoAdversary adv;
  SimConfig cfg;
  cfg.maxRounds = 8;
  cfg.seed = seed;
  cfg.provider = &prov;
  Run run = simulate(NetState{genesis, {}}, strategies, adv, cfg);

  LotteryResult out;
  out.aWonPot = runContainsClaim(run, bundle.claimSets.at("lott-a"));
  out.bWonPot = runContainsClaim(run, bundle.claimSets.at("lott-b"));
  // a close transfers the whole source balance as it stood just before
  // the label
  for (std::size_t i = 0; i < run.labels.size(); ++i) {
    const Label& l = run.labels[i];
    if (l.kind != Label::Kind::AuthGroup) continue;
    for (const auto& t : l.group) {
      if (t.type != TxType::Close || !(t.rcv == a)) continue;
      bool contractSource = t.snd == bundle.address("htlc-a") ||
                            t.snd == bundle.address("htlc-b") ||
                            t.snd == bundle.address("lottery");
      if (contractSource && run.states[i].chain.hasAccount(t.snd))
        out.aReceived += run.states[i].chain.balanceOf(t.snd).amount(kAlgo);
    }
  }
  out.ok = !run.harnessError.has_value();
  return out;
}

std::string criterion6() {
  std::mt19937_64 rng(0x10770);
  u64 aWins = 0;
  const int rounds = 2000;
  for (int i = 0; i < rounds; ++i) {
    Bytes sa = randomSecret(rng);
    Bytes sb = randomSecret(rng);
    if (sha256(sa) == sha256(sb)) {
      --i;
      continue;
    }
    LotteryResult r = playLottery(sa, sb, false, 9000 + static_cast<u64>(i));
    if (!r.ok) return fmtFail("lottery run hit a harness error");
    if (r.aWonPot == r.bWonPot)
      return fmtFail("honest lottery did not pay exactly one winner");
    if (r.aWonPot) ++aWins;
  }
  double freq = static_cast<double>(aWins) / rounds;
  if (freq < 0.46 || freq > 0.54)
    return fmtFail("win frequency " + std::to_string(freq) + " outside 0.5 +- 0.04");

  for (int i = 0; i < 100; ++i) {
    Bytes sa = randomSecret(rng);
    Bytes sb = randomSecret(rng);
    LotteryResult r = playLottery(sa, sb, true, 42000 + static_cast<u64>(i));
    if (!r.ok) return fmtFail("deviation run hit a harness error");
    if (r.aReceived < 3000000)
      return fmtFail("deviation run " + std::to_string(i) + ": A received only " +
                     std::to_string(r.aReceived));
  }
  return {};
}

// ---------------------------------------------------------------------------
// Criterion 7: the remaining templates, one positive and one negative each

std::string criterion7() {
  const SignatureProvider& prov = ed25519Provider();
  auto faucet = edKeyOf(20);
  auto alice = edKeyOf(21);
  auto bob = edKeyOf(22);
  auto carol = edKeyOf(23);
  auto a1 = edKeyOf(24);
  auto b1 = edKeyOf(25);
  Address a = Address::user(alice.publicKey);
  Address b = Address::user(bob.publicKey);
  Address c = Address::user(carol.publicKey);

  // --- mutual HTLC ---
  {
    Bytes sa(16, 0x21), sb(16, 0x22);
    TemplateParams p;
    p.a = a;
    p.b = b;
    p.hashA = sha256(sa);
    p.hashB = sha256(sb);
    p.tmax = 6;
    p.v = 2000000;
    p.setupLv = 3;
    ContractBundle m = buildTemplate("mutual-htlc", p);
    BlockchainState genesis = fundedGenesis(prov, faucet, {{a, 10000000}, {b, 10000000}});
    Session s(genesis, prov);
    // atomic funding of both contracts
    std::vector<std::vector<Bytes>> seqs = {
        {prov.sign(alice.privateKey, groupIndexMessage(*m.setupGroup, 0))},
        {prov.sign(bob.privateKey, groupIndexMessage(*m.setupGroup, 1))}};
    if (s.submit(*m.setupGroup, seqs)) return fmtFail("mutual htlc: setup failed");
    s.tick();
    // positive: A reveals, B stays silent, A collects B's deposit at the deadline
    if (s.submit({tx::close(m.address("htlc-a"), a, kAlgo, {1, 3, 0})}, {{sa}}))
      return fmtFail("mutual htlc: A's reveal failed");
    // negative: B cannot take A's contract before the deadline
    auto err = s.submit({tx::close(m.address("htlc-b"), b, kAlgo, {1, 3, 0})}, {{Bytes{}}});
    if (!err || err->code != StepCode::Unauthorized)
      return fmtFail("mutual htlc: early grab was not rejected");
    s.tick(5);
    u64 before = s.algosOf(a);
    if (s.submit({tx::close(m.address("htlc-b"), a, kAlgo, {6, 8, 0})}, {{}}))
      return fmtFail("mutual htlc: timeout claim failed");
    if (s.algosOf(a) != before + 2000000)
      return fmtFail("mutual htlc: timeout paid the wrong amount");
  }

  // --- zero-collateral lottery ---
  {
    Bytes sa(16, 0x31), sb(16, 0x32);
    sa[15] = 2;
    sb[15] = 5;  // sum odd: B wins
    TemplateParams p;
    p.a = a;
    p.b = b;
    p.hashA = sha256(sa);
    p.hashB = sha256(sb);
    p.t0 = 4;
    p.t1 = 4;
    p.unit = 1000000;
    p.setupLv = 3;
    ContractBundle z = buildTemplate("zero-collateral-lottery", p);
    BlockchainState genesis = fundedGenesis(prov, faucet, {{a, 10000000}, {b, 10000000}});
    Session s(genesis, prov);
    std::vector<std::vector<Bytes>> seqs = {
        {prov.sign(alice.privateKey, groupIndexMessage(*z.setupGroup, 0))},
        {prov.sign(bob.privateKey, groupIndexMessage(*z.setupGroup, 1))}};
    if (s.submit(*z.setupGroup, seqs)) return fmtFail("zdl: setup failed");
    s.tick();
    // negative: the timeout branch is shut before t0
    auto err = s.submit({tx::close(z.address("zdl"), b, kAlgo, {1, 3, 0})}, {{}});
    if (!err || err->code != StepCode::Unauthorized)
      return fmtFail("zdl: premature timeout was not rejected");
    // positive: A advances with her secret, then B wins with both secrets
    if (s.submit({tx::close(z.address("zdl"), z.address("zdl2"), kAlgo, {1, 3, 0})}, {{sa}}))
      return fmtFail("zdl: advance failed");
    u64 before = s.algosOf(b);
    if (s.submit({tx::close(z.address("zdl2"), b, kAlgo, {1, 3, 0})}, {{sa, sb}}))
      return fmtFail("zdl: winner claim failed");
    if (s.algosOf(b) != before + 2000000) return fmtFail("zdl: pot paid the wrong amount");
  }

  // --- escrow ---
  {
    TemplateParams p;
    p.a = a;
    p.b = b;
    p.keyA = alice.publicKey;
    p.keyB = bob.publicKey;
    p.keyC = carol.publicKey;
    p.v = 4000000;
    ContractBundle e = buildTemplate("escrow", p);
    Address escrow = e.address("escrow");
    Address resolve = e.address("resolve");
    BlockchainState genesis = fundedGenesis(
        prov, faucet, {{a, 10000000}, {b, 10000000}, {escrow, 4200000}});

    // positive (direct route): A authorizes the payment to B
    {
      Session s(genesis, prov);
      auto pay = tx::close(escrow, b, kAlgo, {0, 2, 0});
      Bytes sigA = prov.sign(alice.privateKey,
                             versigMessage(escrow, ScriptValue::bytes(txId(pay))));
      u64 before = s.algosOf(b);
      if (s.submit({pay}, {{Bytes{}, sigA}})) return fmtFail("escrow: payment to B failed");
      if (s.algosOf(b) != before + 4200000) return fmtFail("escrow: B got the wrong amount");
    }
    // positive (dispute route): B pushes to the resolver, C splits v
    {
      Session s(genesis, prov);
      auto dispute = tx::close(escrow, resolve, kAlgo, {0, 2, 0});
      Bytes sigB = prov.sign(bob.privateKey,
                             versigMessage(escrow, ScriptValue::bytes(txId(dispute))));
      if (s.submit({dispute}, {{Bytes{}, sigB}})) return fmtFail("escrow: dispute move failed");
      u64 va = 1500000;
      Bytes sigC = prov.sign(carol.privateKey, versigMessage(resolve, ScriptValue::nat(va)));
      auto toA = tx::pay(resolve, a, va, kAlgo, {0, 2, 0});
      auto toB = tx::pay(resolve, b, 4000000 - va, kAlgo, {0, 2, 1});
      if (s.submit({toA, toB}, {{u64beBytes(va), sigC}, {u64beBytes(va), sigC}}))
        return fmtFail("escrow: resolver split failed");
      // negative: a split that disagrees with the signed amount is rejected
      auto crooked = tx::pay(resolve, b, 100000, kAlgo, {0, 2, 2});
      auto err = s.submit({crooked}, {{u64beBytes(va), sigC}});
      if (!err || err->code != StepCode::Unauthorized)
        return fmtFail("escrow: crooked split was not rejected");
    }
    // negative: A cannot refund herself
    {
      Session s(genesis, prov);
      auto selfPay = tx::close(escrow, a, kAlgo, {0, 2, 0});
      Bytes sigA = prov.sign(alice.privateKey,
                             versigMessage(escrow, ScriptValue::bytes(txId(selfPay))));
      auto err = s.submit({selfPay}, {{Bytes{}, sigA}});
      if (!err || err->code != StepCode::Unauthorized)
        return fmtFail("escrow: self-refund was not rejected");
    }
  }

  // --- limit order ---
  {
    TemplateParams p;
    p.a = a;
    p.asset = 1;
    p.rho = 3;
    p.vmin = 100000;
    p.tmax = 10;
    ContractBundle lo = buildTemplate("limit-order", p);
    Address loAddr = lo.address("limit-order");
    BlockchainState genesis = fundedGenesis(
        prov, faucet, {{a, 10000000}, {b, 10000000}, {loAddr, 500000}});
    Session s(genesis, prov);
    // the taker mints the traded asset and A opts in
    if (s.submitSigned(bob, {tx::gen(b, b, 10000000, {0, 2, 0})}))
      return fmtFail("limit order: mint failed");
    if (s.submitSigned(alice, {tx::optin(a, 1, {0, 2, 0})}))
      return fmtFail("limit order: opt-in failed");
    // positive: a conforming exchange
    std::vector<Transaction> swap = {tx::pay(loAddr, b, 100000, kAlgo, {0, 2, 0}),
                                     tx::pay(b, a, 300000, 1, {0, 2, 0})};
    std::vector<std::vector<Bytes>> seqs = {
        {}, {prov.sign(bob.privateKey, groupIndexMessage(swap, 1))}};
    if (s.submit(swap, seqs)) return fmtFail("limit order: conforming exchange failed");
    if (s.net.chain.balanceOf(a).amount(1) != 300000)
      return fmtFail("limit order: A did not receive the asset");
    // negative: an exchange below the rate bound
    std::vector<Transaction> cheap = {tx::pay(loAddr, b, 100000, kAlgo, {1, 2, 0}),
                                      tx::pay(b, a, 299999, 1, {1, 2, 0})};
    std::vector<std::vector<Bytes>> cheapSeqs = {
        {}, {prov.sign(bob.privateKey, groupIndexMessage(cheap, 1))}};
    auto err = s.submit(cheap, cheapSeqs);
    if (!err || err->code != StepCode::Unauthorized)
      return fmtFail("limit order: under-priced exchange was not rejected");
  }

  // --- split ---
  {
    Address b0 = edAddrOf(26);
    Address b1Addr = edAddrOf(27);
    TemplateParams p;
    p.a = a;
    p.b0 = b0;
    p.b1 = b1Addr;
    p.rho = 3;
    p.vmin = 100000;
    p.tmax = 10;
    ContractBundle sp = buildTemplate("split", p);
    Address spAddr = sp.address("split");
    BlockchainState genesis = fundedGenesis(
        prov, faucet,
        {{a, 10000000}, {b0, 1000000}, {b1Addr, 1000000}, {spAddr, 1000000}});
    Session s(genesis, prov);
    std::vector<Transaction> payout = {tx::pay(spAddr, b0, 200000, kAlgo, {0, 2, 0}),
                                       tx::pay(spAddr, b1Addr, 600000, kAlgo, {0, 2, 0})};
    if (s.submit(payout, {{}, {}})) return fmtFail("split: conforming payout failed");
    if (s.algosOf(b0) != 1200000 || s.algosOf(b1Addr) != 1600000)
      return fmtFail("split: wrong amounts delivered");
    std::vector<Transaction> skewed = {tx::pay(spAddr, b0, 50000, kAlgo, {1, 2, 0}),
                                       tx::pay(spAddr, b1Addr, 150001, kAlgo, {1, 2, 0})};
    auto err = s.submit(skewed, {{}, {}});
    if (!err || err->code != StepCode::Unauthorized)
      return fmtFail("split: skewed payout was not rejected");
  }

  // --- periodic payment: exactly one withdrawal per window over 5 windows ---
  {
    TemplateParams p;
    p.a = a;
    p.v = 100000;
    p.p = 4;
    p.d = 2;
    p.n = 9;
    ContractBundle pp = buildTemplate("periodic-payment", p);
    Address ppAddr = pp.address("pp");
    BlockchainState genesis =
        fundedGenesis(prov, faucet, {{a, 10000000}, {ppAddr, 700000}});
    Session s(genesis, prov);
    u64 withdrawals = 0;
    for (u64 window = 0; window < 5; ++window) {
      u64 fv = window * 4;
      while (s.net.chain.round < fv) s.tick();
      auto t = tx::pay(ppAddr, a, 100000, kAlgo, {fv, fv + 2, 9});
      if (s.submit({t}, {{}}))
        return fmtFail("periodic payment: withdrawal " + std::to_string(window) + " failed");
      ++withdrawals;
      // a second withdrawal in the same window is blocked
      auto err = s.submit({t}, {{}});
      if (!err || err->code != StepCode::DoubleSpend)
        return fmtFail("periodic payment: duplicate withdrawal was not rejected");
      // the lease alone blocks any same-lease transaction until the window dies
      auto probe = tx::pay(ppAddr, a, 100000, kAlgo, {fv, fv + 1, 9});
      if (temporalValidity(s.net.chain.leaseMap, s.net.chain.round, probe,
                           s.net.chain.config))
        return fmtFail("periodic payment: the lease did not lock the window");
      // off-schedule attempts are rejected by the script
      auto off = tx::pay(ppAddr, a, 100000, kAlgo, {fv + 1, fv + 3, 9});
      s.tick();
      err = s.submit({off}, {{}});
      if (!err || err->code != StepCode::Unauthorized)
        return fmtFail("periodic payment: off-schedule withdrawal was not rejected");
    }
    if (withdrawals != 5 || s.algosOf(a) != 10000000 + 5 * 100000)
      return fmtFail("periodic payment: expected exactly 5 withdrawals");
  }

  // --- two-phase authorization ---
  {
    TemplateParams p;
    p.c = c;
    p.keyA = alice.publicKey;
    p.keyB = bob.publicKey;
    p.keyA1 = a1.publicKey;
    p.keyB1 = b1.publicKey;
    p.p = 16;
    p.deltaMax = 16;
    ContractBundle tp = buildTemplate("two-phase", p);
    Address p1 = tp.address("p1");
    Address p2 = tp.address("p2");
    GenesisConfig g;
    g.initialUser = Address::user(faucet.publicKey);
    g.ledger.deltaMax = 16;
    BlockchainState genesis =
        fundedGenesis(prov, faucet, {{c, 1000000}, {p1, 2000000}}, 16);

    // positive: advance to P2, then B authorizes the payout to c
    {
      Session s(genesis, prov);
      auto advance = tx::close(p1, p2, kAlgo, {0, 16, 0});
      Bytes sigA =
          prov.sign(alice.privateKey, versigMessage(p1, ScriptValue::bytes(txId(advance))));
      if (s.submit({advance}, {{sigA}})) return fmtFail("two-phase: advance failed");
      auto payout = tx::close(p2, c, kAlgo, {0, 4, 0});
      Bytes sigB =
          prov.sign(bob.privateKey, versigMessage(p2, ScriptValue::bytes(txId(payout))));
      u64 before = s.algosOf(c);
      if (s.submit({payout}, {{sigB}})) return fmtFail("two-phase: payout failed");
      if (s.algosOf(c) != before + 2000000)
        return fmtFail("two-phase: c received the wrong amount");
    }
    // positive: without B, anyone resets the machine in the fourth frame
    {
      Session s(genesis, prov);
      auto advance = tx::close(p1, p2, kAlgo, {0, 16, 0});
      Bytes sigA =
          prov.sign(alice.privateKey, versigMessage(p1, ScriptValue::bytes(txId(advance))));
      if (s.submit({advance}, {{sigA}})) return fmtFail("two-phase: advance failed");
      s.tick(32);
      auto reset = tx::close(p2, p1, kAlgo, {32, 48, 0});
      Bytes addrBytes = p1.encoding();
      Bytes s1 = prov.sign(a1.privateKey, versigMessage(p2, ScriptValue::bytes(addrBytes)));
      Bytes s2 = prov.sign(b1.privateKey, versigMessage(p2, ScriptValue::bytes(addrBytes)));
      if (s.submit({reset}, {{addrBytes, s1, s2}})) return fmtFail("two-phase: reset failed");
      if (!s.net.chain.hasAccount(p1)) return fmtFail("two-phase: P1 was not re-created");
    }
    // negative: B's signature cannot open phase one
    {
      Session s(genesis, prov);
      auto advance = tx::close(p1, p2, kAlgo, {0, 16, 0});
      Bytes sigB =
          prov.sign(bob.privateKey, versigMessage(p1, ScriptValue::bytes(txId(advance))));
      auto err = s.submit({advance}, {{sigB}});
      if (!err || err->code != StepCode::Unauthorized)
        return fmtFail("two-phase: advance with the wrong signer was not rejected");
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// Criterion 8: compiler differential testing

ExprPtr randomAst(std::mt19937_64& rng, int depth, int& budget) {
  using namespace expr;
  if (depth <= 0 || budget <= 1 || rng() % 3 == 0) {
    --budget;
    switch (rng() % 8) {
      case 0: return natConst(rng() % 16);
      case 1: return natConst(rng() % 2);
      case 2: return bytesConst(Bytes{static_cast<std::uint8_t>(0x10 + rng() % 9)});
      case 3: return arg(rng() % 4);
      case 4: return txFieldAt(rng() % 3, static_cast<TxFieldKind>(rng() % 8));
      case 5: return txLen();
      case 6: return txPos();
      default: return txIdAt(rng() % 3);
    }
  }
  --budget;
  switch (rng() % 8) {
    case 0: case 1: case 2: case 3:
      return binOp(static_cast<BinOpKind>(rng() % 12), randomAst(rng, depth - 1, budget),
                   randomAst(rng, depth - 1, budget));
    case 4: return notE(randomAst(rng, depth - 1, budget));
    case 5: return hash(randomAst(rng, depth - 1, budget));
    case 6:
      return ifE(randomAst(rng, depth - 1, budget), randomAst(rng, depth - 1, budget),
                 randomAst(rng, depth - 1, budget));
    default:
      return versig(randomAst(rng, depth - 1, budget), randomAst(rng, depth - 1, budget),
                    randomAst(rng, depth - 1, budget));
  }
}

std::vector<Transaction> randomGroup(std::mt19937_64& rng,
                                     const std::vector<Address>& pool) {
  std::size_t n = 1 + rng() % 3;
  std::vector<Transaction> group;
  auto pick = [&] { return pool[rng() % pool.size()]; };
  for (std::size_t i = 0; i < n; ++i) {
    tx::Window w{rng() % 8, 8 + rng() % 8, rng() % 3};
    switch (rng() % 9) {
      case 0: group.push_back(tx::pay(pick(), pick(), rng() % 1000, kAlgo, w)); break;
      case 1: group.push_back(tx::pay(pick(), pick(), 1 + rng() % 1000, 1 + rng() % 3, w)); break;
      case 2: group.push_back(tx::close(pick(), pick(), rng() % 4, w)); break;
      case 3: group.push_back(tx::gen(pick(), pick(), rng() % 5000, w)); break;
      case 4: group.push_back(tx::optin(pick(), 1 + rng() % 3, w)); break;
      case 5: group.push_back(tx::burn(pick(), 1 + rng() % 3, w)); break;
      case 6: group.push_back(tx::rvk(pick(), pick(), rng() % 100, 1 + rng() % 3, w)); break;
      case 7:
        group.push_back(rng() % 2 ? tx::frz(pick(), 1 + rng() % 3, w)
                                  : tx::unfrz(pick(), 1 + rng() % 3, w));
        break;
      default: group.push_back(tx::delegate(pick(), pick(), 1 + rng() % 3, w)); break;
    }
  }
  return group;
}

std::vector<Bytes> randomArgs(std::mt19937_64& rng, const std::vector<Bytes>& extras) {
  std::vector<Bytes> args;
  std::size_t n = rng() % 4;
  for (std::size_t i = 0; i < n; ++i) {
    switch (rng() % 4) {
      case 0: args.push_back(u64beBytes(rng() % 64)); break;
      case 1: {
        Bytes b(1 + rng() % 20);
        for (auto& x : b) x = static_cast<std::uint8_t>(rng());
        args.push_back(b);
        break;
      }
      case 2: args.push_back({}); break;
      default:
        args.push_back(extras.empty() ? u64beBytes(rng()) : extras[rng() % extras.size()]);
        break;
    }
  }
  return args;
}

std::string criterion8() {
  const SignatureProvider& prov = gTestProvider;
  std::mt19937_64 rng(0xd1ff);
  std::vector<Address> pool = {addrOf(1), addrOf(2), addrOf(3)};
  std::map<AssetId, AssetInfo> assetMap{{1, AssetInfo{addrOf(2), addrOf(1)}},
                                        {2, AssetInfo{addrOf(3), addrOf(3)}},
                                        {3, AssetInfo{addrOf(1), addrOf(2)}}};

  // the three translation examples, field for field
  {
    Address x = addrOf(1), y = addrOf(2);
    auto left = teal::translateTx(tx::close(x, y, kAlgo, {0, 0, 0}), assetMap);
    if (!(left.at("type") == "pay" && left.at("snd") == hexEncode(x.encoding()) &&
          left.at("rcv") == 0 && left.at("close") == hexEncode(y.encoding()) &&
          left.at("amt") == 0))
      return fmtFail("close(Algo) translation mismatch");
    auto right = teal::translateTx(tx::close(x, y, 2, {0, 0, 0}), assetMap);
    if (!(right.at("type") == "axfer" && right.at("snd") == hexEncode(x.encoding()) &&
          right.at("asnd") == hexEncode(x.encoding()) && right.at("arcv") == 0 &&
          right.at("aclose") == hexEncode(y.encoding()) && right.at("xaid") == 2 &&
          right.at("aamt") == 0))
      return fmtFail("close(asset) translation mismatch");
    auto frz = teal::translateTx(tx::frz(x, 2, {0, 0, 0}), assetMap);
    if (!(frz.at("type") == "afrz" && frz.at("AssetFrozen") == true &&
          frz.at("FreezeAsset") == 2 && frz.at("FreezeAccount") == hexEncode(x.encoding())))
      return fmtFail("freeze translation mismatch");
  }

  // template sweep: every bundle script against 200 random contexts
  Bytes secretA(16, 0x61), secretB(16, 0x62);
  auto kpA = keyOf(1), kpB = keyOf(2), kpC = keyOf(3), kpO = keyOf(4);
  TemplateParams tp;
  tp.a = addrOf(1);
  tp.b = addrOf(2);
  tp.c = addrOf(3);
  tp.b0 = addrOf(4);
  tp.b1 = addrOf(5);
  tp.oracleKey = kpO.publicKey;
  tp.keyA = kpA.publicKey;
  tp.keyB = kpB.publicKey;
  tp.keyC = kpC.publicKey;
  tp.keyA1 = keyOf(5).publicKey;
  tp.keyB1 = keyOf(6).publicKey;
  tp.hashA = sha256(secretA);
  tp.hashB = sha256(secretB);
  tp.tmax = 8;
  tp.t0 = 4;
  tp.t1 = 4;
  tp.p = 16;
  tp.d = 3;
  tp.n = 5;
  tp.v = 700;
  tp.rho = 3;
  tp.vmin = 10;
  tp.asset = 1;
  tp.deltaMax = 16;

  u64 checks = 0, accepted = 0;
  for (const auto& kind : templateKinds()) {
    ContractBundle bundle = buildTemplate(kind, tp);
    std::vector<Address> contractPool = pool;
    for (const auto& [name, addr] : bundle.addresses) contractPool.push_back(addr);
    std::vector<Bytes> extras = {secretA, secretB, u64beBytes(0), u64beBytes(1),
                                 addrOf(1).encoding()};
    for (const auto& [name, script] : bundle.scripts) {
      teal::Program prog = teal::compileScript(script);
      auto stack = teal::checkProgram(prog);
      if (!stack.ok) return fmtFail(kind + "/" + name + ": stack check failed");
      for (int i = 0; i < 200; ++i) {
        std::vector<Transaction> group = randomGroup(rng, contractPool);
        // bias half the contexts toward the contract's own spends
        if (i % 2 == 0) {
          group[0] = tx::close(bundle.addresses.begin()->second,
                               contractPool[rng() % contractPool.size()], kAlgo,
                               {rng() % 12, 12 + rng() % 4, 0});
        }
        u64 index = rng() % group.size();
        std::vector<Bytes> args = randomArgs(rng, extras);
        EvalContext ctx{group, index, args, &prov};
        bool modelAccepts = accepts(ctx, script);
        auto concrete = teal::translateGroup(group, assetMap);
        ScriptValue v = teal::interpretTeal(prog, concrete, index, args, prov);
        bool tealAccepts = v.isNat() && v.asNat() != 0;
        if (modelAccepts != tealAccepts)
          return fmtFail(kind + "/" + name + ": disagreement at context " +
                         std::to_string(i));
        ++checks;
        if (modelAccepts) ++accepted;
      }
    }
  }

  // directed accepting contexts so the sweep provably hits both sides
  {
    TemplateParams hp = tp;
    ContractBundle h = buildTemplate("htlc", hp);
    auto claim = tx::close(h.address("htlc"), addrOf(1), kAlgo, {1, 3, 0});
    auto r = teal::differentialCheck(h.script("htlc"), {claim}, 0, {secretA}, assetMap, prov);
    if (!r.agree || !r.modelAccepts) return fmtFail("directed htlc context disagreed");
    ++checks;
    ++accepted;
  }

  // 500 random ASTs, 200 contexts each
  for (int astIdx = 0; astIdx < 500; ++astIdx) {
    int budget = 40;
    ExprPtr e = randomAst(rng, 8, budget);
    teal::Program prog = teal::compileScript(e);
    auto stack = teal::checkProgram(prog);
    if (!stack.ok) return fmtFail("random ast failed the stack check");
    for (int i = 0; i < 200; ++i) {
      std::vector<Transaction> group = randomGroup(rng, pool);
      u64 index = rng() % group.size();
      std::vector<Bytes> args = randomArgs(rng, {});
      EvalContext ctx{group, index, args, &prov};
      bool modelAccepts = accepts(ctx, e);
      auto concrete = teal::translateGroup(group, assetMap);
      ScriptValue v = teal::interpretTeal(prog, concrete, index, args, prov);
      bool tealAccepts = v.isNat() && v.asNat() != 0;
      if (modelAccepts != tealAccepts) {
        return fmtFail("random ast " + std::to_string(astIdx) + " context " +
                       std::to_string(i) + " disagreed: " + printScript(e));
      }
      ++checks;
      if (modelAccepts) ++accepted;
    }
  }
  if (accepted == 0 || accepted == checks)
    return fmtFail("degenerate sweep: acceptances " + std::to_string(accepted) + "/" +
                   std::to_string(checks));
  return {};
}

std::string criterion9() {
  auto cases = asc1::test::operatorTableCases();
  if (cases.size() < 60)
    return fmtFail("only " + std::to_string(cases.size()) + " operator cases");
  EvalContext ctx;
  Transaction t;
  t.snd = addrOf(1);
  t.rcv = addrOf(2);
  ctx.group = {t};
  ctx.provider = &gTestProvider;
  for (const auto& c : cases) {
    if (evalScript(ctx, c.script) != c.expected)
      return fmtFail("operator case failed: " + c.name);
  }
  return {};
}

}  // namespace

int main() {
  std::vector<Criterion> criteria = {
      {1, "no double-spending over 1000 fuzzed runs and directed duplicates", criterion1},
      {2, "value preservation for every asset and snapshot", criterion2},
      {3, "determinism: replay and witness-substitution", criterion3},
      {4, "close-guarded accounts stay Algo-only and non-decreasing", criterion4},
      {5, "oracle and HTLC scenarios pay the designated claimant", criterion5},
      {6, "lottery fairness and deviation payoff", criterion6},
      {7, "appendix contract templates, positive and negative", criterion7},
      {8, "compiler differential sweep and translation examples", criterion8},
      {9, "script operator table covered exhaustively", criterion9},
  };

  bool allPass = true;
  for (const auto& c : criteria) {
    auto start = std::chrono::steady_clock::now();
    std::string failure;
    try {
      failure = c.run();
    } catch (const std::exception& e) {
      failure = std::string("exception: ") + e.what();
    }
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - start)
                  .count();
    if (failure.empty()) {
      std::cout << "[PASS] criterion " << c.number << ": " << c.title << " (" << ms
                << " ms)\n";
    } else {
      allPass = false;
      std::cout << "[FAIL] criterion " << c.number << ": " << c.title << " -- " << failure
                << "\n";
    }
  }
  return allPass ? 0 : 1;
}
