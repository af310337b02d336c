#pragma once

#include <memory>
#include <vector>

#include "asc1/strategies.hpp"

namespace asc1::sim {

// Shared random-run generator used by the fuzz command and the
// theorem-level test corpora: a funded set of users driving random
// ledger strategies under a random adversary.
struct FuzzOptions {
  u64 users = 3;
  u64 rounds = 8;
  u64 deltaMax = 16;
  u64 seed = 0;
  u64 fundAmount = 1000000000;  // 1000 Algos each
  u64 maxActionsPerRound = 20;
  bool withHtlc = false;  // create a close-guarded contract account
  bool enableGenBurn = true;
  const SignatureProvider* provider = nullptr;
};

struct FuzzOutcome {
  Run run;
  std::optional<Address> htlcAddr;
  std::vector<Address> userAddrs;
};

inline FuzzOutcome fuzzRun(const FuzzOptions& opts) {
  const SignatureProvider& provider = *opts.provider;
  Rng seeder(opts.seed ^ 0x66757a7aULL);

  std::vector<KeyPair> keys;
  std::vector<Address> addrs;
  for (u64 i = 0; i < opts.users; ++i) {
    Bytes seed(32, 0);
    u64 material = seeder();
    for (int k = 0; k < 8; ++k) seed[static_cast<std::size_t>(k)] = static_cast<std::uint8_t>(material >> (8 * k));
    seed[8] = static_cast<std::uint8_t>(i + 1);
    keys.push_back(provider.keyFromSeed(seed));
    addrs.push_back(Address::user(keys.back().publicKey));
  }

  GenesisConfig genesis;
  genesis.initialUser = addrs[0];
  genesis.ledger.deltaMax = opts.deltaMax;
  BlockchainState chain = initialState(genesis);

  Run run;
  run.seed = opts.seed;
  run.conformsTo = "fuzz";
  run.states.push_back(NetState{chain, {}});

  auto applyLabel = [&](const Label& l) {
    auto next = netStep(run.current(), l, provider);
    if (next.ok()) {
      run.labels.push_back(l);
      run.states.push_back(std::move(next.value()));
    }
  };

  // Funding prefix: the genesis account seeds every other user.
  for (u64 i = 1; i < opts.users; ++i) {
    auto t = tx::pay(addrs[0], addrs[i], opts.fundAmount, kAlgo, {0, 0, 0});
    Bytes sig = provider.sign(keys[0].privateKey, groupIndexMessage({t}, 0));
    applyLabel(Label::witnessLabel(sig));
    applyLabel(Label::authGroup({{sig}}, {t}));
  }

  FuzzOutcome outcome;
  outcome.userAddrs = addrs;

  std::optional<RandomLedgerStrategy::HtlcTarget> htlcTarget;
  if (opts.withHtlc && opts.users >= 2) {
    Bytes secret(16, 0);
    u64 material = seeder();
    for (int k = 0; k < 8; ++k) secret[static_cast<std::size_t>(k)] = static_cast<std::uint8_t>(material >> (8 * k));
    TemplateParams tp;
    tp.a = addrs[0];
    tp.b = addrs[1];
    tp.hashA = sha256(secret);
    tp.tmax = opts.rounds / 2 + 1;
    ContractBundle bundle = buildTemplate("htlc", tp);
    htlcTarget = RandomLedgerStrategy::HtlcTarget{bundle.address("htlc"), addrs[0], addrs[1],
                                                  secret, *tp.tmax};
    outcome.htlcAddr = bundle.address("htlc");
  }

  std::vector<std::shared_ptr<Strategy>> strategies;
  for (u64 i = 0; i < opts.users; ++i) {
    RandomLedgerStrategy::Params sp;
    sp.key = keys[i];
    sp.self = addrs[i];
    for (u64 k = 0; k < opts.users; ++k) {
      if (k != i) sp.peers.push_back(addrs[k]);
    }
    sp.enableGenBurn = opts.enableGenBurn;
    sp.provider = &provider;
    if (htlcTarget && i <= 1) sp.htlc = htlcTarget;
    strategies.push_back(std::make_shared<RandomLedgerStrategy>(sp));
  }

  RandomAdversary adversary;
  SimConfig cfg;
  cfg.maxRounds = opts.rounds;
  cfg.seed = opts.seed;
  cfg.maxActionsPerRound = opts.maxActionsPerRound;
  cfg.provider = &provider;
  cfg.conformsTo = "fuzz";

  Run simulated = simulate(run.current(), strategies, adversary, cfg);
  for (std::size_t i = 0; i < simulated.labels.size(); ++i) {
    run.labels.push_back(simulated.labels[i]);
    run.states.push_back(simulated.states[i + 1]);
  }
  run.rejections = simulated.rejections;
  run.harnessError = simulated.harnessError;
  outcome.run = std::move(run);
  return outcome;
}

}  // namespace asc1::sim
