#include <catch_amalgamated.hpp>

#include "asc1/templates.hpp"
#include "test_support.hpp"

using namespace asc1;
using asc1::test::balanceOf;
using asc1::test::genesisState;
using asc1::test::mustApply;
using asc1::test::userAddr;
using asc1::test::userKey;

namespace {

// genesis(0) with users 1 and 2 funded
BlockchainState fundedState() {
  BlockchainState s = genesisState();
  s = mustApply(s, tx::pay(userAddr(0), userAddr(1), 5000000, kAlgo, {0, 3, 0}));
  s = mustApply(s, tx::pay(userAddr(0), userAddr(2), 5000000, kAlgo, {0, 3, 1}));
  return s;
}

StepCode codeOf(const StepResult<BlockchainState>& r) {
  REQUIRE_FALSE(r.ok());
  return r.error().code;
}

}  // namespace

TEST_CASE("pay to a new account") {
  BlockchainState s = genesisState();
  auto t = tx::pay(userAddr(0), userAddr(9), 300000, kAlgo, {0, 5, 0});
  auto r = applyTx(s, t);
  REQUIRE(r.ok());
  const BlockchainState& next = r.value();
  CHECK(next.balanceOf(userAddr(9)) == balanceOf({{kAlgo, 300000}}));
  CHECK(next.balanceOf(userAddr(0)).amount(kAlgo) == 10000000000000000ULL - 300000);
  CHECK(next.recentTxs.count(encodeTransaction(t)) == 1);

  SECTION("the same pay twice is a double spend") {
    CHECK(codeOf(applyTx(next, t)) == StepCode::DoubleSpend);
  }
  SECTION("below the minimum balance the account cannot be created") {
    auto tiny = tx::pay(userAddr(0), userAddr(8), 99999, kAlgo, {0, 5, 0});
    CHECK(codeOf(applyTx(s, tiny)) == StepCode::BalanceInvalid);
  }
  SECTION("a missing account cannot receive a user asset") {
    auto assetPay = tx::pay(userAddr(0), userAddr(8), 5, 1, {0, 5, 0});
    CHECK(codeOf(applyTx(s, assetPay)) == StepCode::NoRuleApplies);
  }
  SECTION("time constraints are checked first") {
    auto late = tx::pay(userAddr(0), userAddr(8), 300000, kAlgo, {5, 9, 0});
    CHECK(codeOf(applyTx(s, late)) == StepCode::TimeInvalid);
  }
}

TEST_CASE("pay between existing accounts") {
  BlockchainState s = fundedState();
  auto t = tx::pay(userAddr(1), userAddr(2), 700000, kAlgo, {0, 4, 0});
  auto r = applyTx(s, t);
  REQUIRE(r.ok());
  CHECK(r.value().balanceOf(userAddr(1)).amount(kAlgo) == 4300000);
  CHECK(r.value().balanceOf(userAddr(2)).amount(kAlgo) == 5700000);

  SECTION("self-payment keeps the balance unchanged") {
    auto self = tx::pay(userAddr(1), userAddr(1), 700000, kAlgo, {0, 4, 0});
    auto rr = applyTx(s, self);
    REQUIRE(rr.ok());
    CHECK(rr.value().balanceOf(userAddr(1)) == s.balanceOf(userAddr(1)));
    CHECK(rr.value().recentTxs.size() == s.recentTxs.size() + 1);
  }
  SECTION("self-payment must still be affordable") {
    auto self = tx::pay(userAddr(1), userAddr(1), 6000000, kAlgo, {0, 4, 0});
    CHECK(codeOf(applyTx(s, self)) == StepCode::BalanceInvalid);
  }
  SECTION("zero-value payment to a distinct account applies with no checks") {
    auto zero = tx::pay(userAddr(1), userAddr(2), 0, 77, {0, 4, 0});  // unknown asset
    auto rr = applyTx(s, zero);
    REQUIRE(rr.ok());
    CHECK(rr.value().balanceOf(userAddr(1)) == s.balanceOf(userAddr(1)));
    CHECK(rr.value().balanceOf(userAddr(2)) == s.balanceOf(userAddr(2)));
  }
  SECTION("zero-value self-payment is stuck") {
    auto zero = tx::pay(userAddr(1), userAddr(1), 0, kAlgo, {0, 4, 0});
    CHECK(codeOf(applyTx(s, zero)) == StepCode::NoRuleApplies);
  }
}

TEST_CASE("asset lifecycle: gen, optin, pay, freeze, revoke, delegate, burn") {
  BlockchainState s = fundedState();

  // [Gen]: user 1 mints 500 units managed by user 2
  auto gen = tx::gen(userAddr(1), userAddr(2), 500, {0, 4, 0});
  s = mustApply(s, gen);
  REQUIRE(s.assetMap.count(1) == 1);
  CHECK(s.assetMap.at(1).manager == userAddr(2));
  CHECK(s.assetMap.at(1).creator == userAddr(1));
  CHECK(s.balanceOf(userAddr(1)).amount(1) == 500);
  CHECK(s.nextAssetId == 2);

  SECTION("fresh ids are never reused") {
    BlockchainState after = mustApply(s, tx::burn(userAddr(1), 1, {0, 4, 2}));
    after = mustApply(after, tx::gen(userAddr(1), userAddr(1), 9, {0, 4, 1}));
    CHECK(after.assetMap.count(2) == 1);
    CHECK(after.assetMap.count(1) == 0);
  }

  // [Optin]
  CHECK(codeOf(applyTx(s, tx::pay(userAddr(1), userAddr(2), 5, 1, {0, 4, 2}))) ==
        StepCode::NotOptedIn);
  s = mustApply(s, tx::optin(userAddr(2), 1, {0, 4, 0}));
  CHECK(s.balanceOf(userAddr(2)).amount(1) == 0);

  SECTION("optin for an unknown asset") {
    CHECK(codeOf(applyTx(s, tx::optin(userAddr(2), 9, {0, 4, 0}))) == StepCode::AssetUnknown);
  }
  SECTION("optin while already holding leaves the balance unchanged") {
    auto again = tx::optin(userAddr(2), 1, {0, 5, 0});
    auto rr = applyTx(s, again);
    REQUIRE(rr.ok());
    CHECK(rr.value().balanceOf(userAddr(2)) == s.balanceOf(userAddr(2)));
    CHECK(rr.value().recentTxs.count(encodeTransaction(again)) == 1);
  }
  SECTION("optin to the native asset is a recorded no-op") {
    auto rr = applyTx(s, tx::optin(userAddr(2), kAlgo, {0, 4, 3}));
    REQUIRE(rr.ok());
    CHECK(rr.value().balanceOf(userAddr(2)) == s.balanceOf(userAddr(2)));
  }

  // asset transfer now works
  s = mustApply(s, tx::pay(userAddr(1), userAddr(2), 60, 1, {0, 4, 2}));
  CHECK(s.balanceOf(userAddr(2)).amount(1) == 60);
  CHECK(assetTotal(1, s) == 500);

  // [Freeze]: the target's holdings lock up
  s = mustApply(s, tx::frz(userAddr(2), 1, {0, 4, 0}));
  CHECK(s.frozen(userAddr(2), 1));
  CHECK(codeOf(applyTx(s, tx::pay(userAddr(2), userAddr(1), 5, 1, {0, 4, 3}))) ==
        StepCode::Frozen);
  CHECK(codeOf(applyTx(s, tx::pay(userAddr(1), userAddr(2), 5, 1, {0, 4, 3}))) ==
        StepCode::Frozen);
  CHECK(codeOf(applyTx(s, tx::rvk(userAddr(2), userAddr(1), 5, 1, {0, 4, 3}))) ==
        StepCode::Frozen);

  // [Unfreeze]
  s = mustApply(s, tx::unfrz(userAddr(2), 1, {0, 4, 0}));
  CHECK_FALSE(s.frozen(userAddr(2), 1));

  // [Revoke] moves units back
  s = mustApply(s, tx::rvk(userAddr(2), userAddr(1), 60, 1, {0, 4, 3}));
  CHECK(s.balanceOf(userAddr(2)).amount(1) == 0);
  CHECK(s.balanceOf(userAddr(1)).amount(1) == 500);

  // [Delegate] reassigns the manager, keeping the creator
  CHECK(codeOf(applyTx(s, tx::delegate(userAddr(1), userAddr(1), 1, {0, 4, 4}))) ==
        StepCode::NotManager);
  s = mustApply(s, tx::delegate(userAddr(2), userAddr(1), 1, {0, 4, 4}));
  CHECK(s.assetMap.at(1).manager == userAddr(1));
  CHECK(s.assetMap.at(1).creator == userAddr(1));

  // [Burn] requires the creator to be the sole owner
  CHECK(codeOf(applyTx(s, tx::burn(userAddr(2), 1, {0, 4, 5}))) == StepCode::NotCreator);
  // even a zero entry elsewhere blocks the burn: sole ownership is about
  // balance domains, not amounts
  CHECK(codeOf(applyTx(s, tx::burn(userAddr(1), 1, {0, 4, 5}))) == StepCode::NotSoleOwner);
  s = mustApply(s, tx::close(userAddr(2), userAddr(1), 1, {0, 4, 6}));
  s = mustApply(s, tx::burn(userAddr(1), 1, {0, 4, 5}));
  CHECK(s.assetMap.count(1) == 0);
  CHECK(assetTotal(1, s) == 0);
  CHECK(codeOf(applyTx(s, tx::burn(userAddr(1), 1, {0, 4, 6}))) == StepCode::AssetUnknown);

  CHECK_FALSE(checkStateInvariants(s).has_value());
}

TEST_CASE("close rules") {
  BlockchainState s = fundedState();

  SECTION("close(Algo) to an existing account transfers everything") {
    auto t = tx::close(userAddr(1), userAddr(2), kAlgo, {0, 4, 0});
    auto r = applyTx(s, t);
    REQUIRE(r.ok());
    CHECK_FALSE(r.value().hasAccount(userAddr(1)));
    CHECK(r.value().balanceOf(userAddr(2)).amount(kAlgo) == 10000000);
  }
  SECTION("close(Algo) to a missing account moves the balance wholesale") {
    auto t = tx::close(userAddr(1), userAddr(7), kAlgo, {0, 4, 0});
    auto r = applyTx(s, t);
    REQUIRE(r.ok());
    CHECK_FALSE(r.value().hasAccount(userAddr(1)));
    CHECK(r.value().balanceOf(userAddr(7)).amount(kAlgo) == 5000000);
  }
  SECTION("close(Algo) is stuck while other assets remain") {
    BlockchainState holding = mustApply(s, tx::gen(userAddr(1), userAddr(1), 5, {0, 4, 0}));
    CHECK(codeOf(applyTx(holding, tx::close(userAddr(1), userAddr(2), kAlgo, {0, 4, 1}))) ==
          StepCode::BalanceInvalid);
  }
  SECTION("close of a user asset removes the entry and moves all units") {
    BlockchainState st = mustApply(s, tx::gen(userAddr(1), userAddr(1), 50, {0, 4, 0}));
    st = mustApply(st, tx::optin(userAddr(2), 1, {0, 4, 0}));
    auto t = tx::close(userAddr(1), userAddr(2), 1, {0, 4, 1});
    auto r = applyTx(st, t);
    REQUIRE(r.ok());
    CHECK(r.value().hasAccount(userAddr(1)));
    CHECK_FALSE(r.value().balanceOf(userAddr(1)).has(1));
    CHECK(r.value().balanceOf(userAddr(2)).amount(1) == 50);

    SECTION("but only toward an opted-in receiver") {
      BlockchainState noOptin = mustApply(s, tx::gen(userAddr(1), userAddr(1), 50, {0, 4, 0}));
      CHECK(codeOf(applyTx(noOptin, t)) == StepCode::NotOptedIn);
    }
  }
  SECTION("self-close is stuck") {
    CHECK(codeOf(applyTx(s, tx::close(userAddr(1), userAddr(1), kAlgo, {0, 4, 0}))) ==
          StepCode::NoRuleApplies);
  }
}

TEST_CASE("advanceRound filters expired transactions and touches nothing else") {
  BlockchainState s = genesisState();
  s.round = 5;
  auto t1 = tx::pay(userAddr(0), userAddr(1), 300000, kAlgo, {5, 5, 0});
  auto t2 = tx::pay(userAddr(0), userAddr(1), 400000, kAlgo, {5, 9, 0});
  s = mustApply(s, t1);
  s = mustApply(s, t2);
  REQUIRE(s.recentTxs.size() == 2);

  BlockchainState next = advanceRound(s);
  CHECK(next.round == 6);
  CHECK(next.recentTxs.size() == 1);
  CHECK(next.recentTxs.count(encodeTransaction(t2)) == 1);
  CHECK(next.accounts == s.accounts);
  CHECK(next.assetMap == s.assetMap);
  CHECK(next.leaseMap == s.leaseMap);
  CHECK(next.freezeMap == s.freezeMap);

  BlockchainState empty = genesisState();
  BlockchainState emptyNext = advanceRound(empty);
  CHECK(emptyNext.round == 1);
  CHECK(emptyNext.recentTxs.empty());
}

TEST_CASE("atomic groups are all-or-nothing") {
  BlockchainState s = fundedState();

  SECTION("a funding pay enables the close within one group") {
    // the second transaction closes the account the first one creates
    auto fund = tx::pay(userAddr(1), userAddr(7), 400000, kAlgo, {0, 4, 0});
    auto spend = tx::close(userAddr(7), userAddr(2), kAlgo, {0, 4, 0});
    CHECK_FALSE(applyTx(s, spend).ok());  // not before funding
    auto r = applyGroup(s, {fund, spend});
    REQUIRE(r.ok());
    CHECK_FALSE(r.value().hasAccount(userAddr(7)));
    CHECK(r.value().balanceOf(userAddr(2)).amount(kAlgo) == 5400000);
  }
  SECTION("a failing member leaves the state untouched") {
    auto ok = tx::pay(userAddr(1), userAddr(2), 100000, kAlgo, {0, 4, 0});
    auto dup = ok;
    auto r = applyGroup(s, {ok, dup});
    REQUIRE_FALSE(r.ok());
    CHECK(r.error().code == StepCode::DoubleSpend);
  }
  SECTION("the empty group is rejected") {
    auto r = applyGroup(s, {});
    REQUIRE_FALSE(r.ok());
    CHECK(r.error().code == StepCode::EmptyGroup);
  }
}

TEST_CASE("authorizer address") {
  BlockchainState s = fundedState();
  s = mustApply(s, tx::gen(userAddr(1), userAddr(2), 500, {0, 4, 0}));

  auto payT = tx::pay(userAddr(1), userAddr(2), 1, kAlgo, {0, 4, 0});
  auto who = authorizer(s.assetMap, payT);
  REQUIRE(who.ok());
  CHECK(who.value() == userAddr(1));

  auto rvkT = tx::rvk(userAddr(1), userAddr(2), 1, 1, {0, 4, 0});
  who = authorizer(s.assetMap, rvkT);
  REQUIRE(who.ok());
  CHECK(who.value() == userAddr(2));  // the manager, not the sender

  auto burnUnknown = tx::burn(userAddr(1), 9, {0, 4, 0});
  auto bad = authorizer(s.assetMap, burnUnknown);
  REQUIRE_FALSE(bad.ok());
  CHECK(bad.error().code == StepCode::AssetUnknown);
}

TEST_CASE("group authorization") {
  const SignatureProvider& prov = test::provider();
  auto k1 = userKey(11), k2 = userKey(12), k3 = userKey(13);
  Address multisig = Address::multisig({k1.publicKey, k2.publicKey, k3.publicKey}, 2);

  std::vector<Transaction> group = {
      tx::pay(multisig, userAddr(1), 5, kAlgo, {0, 4, 0})};
  Bytes msg = groupIndexMessage(group, 0);
  Bytes s1 = prov.sign(k1.privateKey, msg);
  Bytes s2 = prov.sign(k2.privateKey, msg);
  Bytes s3 = prov.sign(k3.privateKey, msg);

  std::map<AssetId, AssetInfo> noAssets;
  CHECK(authorizeGroup(noAssets, {{s1, s2}}, group, prov));
  CHECK(authorizeGroup(noAssets, {{s3, s1}}, group, prov));
  CHECK_FALSE(authorizeGroup(noAssets, {{s1}}, group, prov));
  CHECK_FALSE(authorizeGroup(noAssets, {{s1, s1}}, group, prov));  // same key twice
  CHECK_FALSE(authorizeGroup(noAssets, {{}}, group, prov));
  CHECK_FALSE(authorizeGroup(noAssets, {}, group, prov));  // seq count mismatch

  SECTION("signatures bind to the group position") {
    std::vector<Transaction> pair = {group[0],
                                     tx::pay(multisig, userAddr(2), 6, kAlgo, {0, 4, 0})};
    Bytes m0 = groupIndexMessage(pair, 0);
    Bytes w1 = prov.sign(k1.privateKey, m0);
    Bytes w2 = prov.sign(k2.privateKey, m0);
    CHECK_FALSE(authorizeGroup(noAssets, {{w1, w2}, {w1, w2}}, pair, prov));
  }

  SECTION("script accounts authorize by evaluation") {
    Bytes secret(16, 0x5c);
    TemplateParams tp;
    tp.a = userAddr(1);
    tp.b = userAddr(2);
    tp.hashA = sha256(secret);
    tp.tmax = 9;
    ContractBundle htlc = buildTemplate("htlc", tp);
    std::vector<Transaction> claim = {
        tx::close(htlc.address("htlc"), userAddr(1), kAlgo, {0, 4, 0})};
    CHECK(authorizeGroup(noAssets, {{secret}}, claim, prov));
    CHECK_FALSE(authorizeGroup(noAssets, {{Bytes(16, 0x11)}}, claim, prov));

    // a hash-only script address cannot vouch for any script
    std::vector<Transaction> opaque = claim;
    opaque[0].snd = Address::scriptHashOnly(Bytes(32, 9));
    CHECK_FALSE(authorizeGroup(noAssets, {{secret}}, opaque, prov));
  }
}

TEST_CASE("network layer") {
  const SignatureProvider& prov = test::provider();
  NetState net{fundedState(), {}};

  Bytes w = toBytes("some witness");
  auto afterW = netStep(net, Label::witnessLabel(w), prov);
  REQUIRE(afterW.ok());
  CHECK(afterW.value().knowledge.count(w) == 1);
  CHECK(stateDigest(afterW.value().chain) == stateDigest(net.chain));

  auto afterTick = netStep(net, Label::tick(), prov);
  REQUIRE(afterTick.ok());
  CHECK(afterTick.value().chain.round == net.chain.round + 1);
  CHECK(afterTick.value().knowledge == net.knowledge);

  auto kp = userKey(1);
  std::vector<Transaction> group = {tx::pay(userAddr(1), userAddr(2), 7, kAlgo, {0, 4, 0})};
  Bytes sig = prov.sign(kp.privateKey, groupIndexMessage(group, 0));

  SECTION("witnesses must be known before a group fires") {
    auto r = netStep(net, Label::authGroup({{sig}}, group), prov);
    REQUIRE_FALSE(r.ok());
    CHECK(r.error().code == StepCode::UnknownWitness);
  }
  SECTION("an authorized group with known witnesses applies") {
    NetState known = netStep(net, Label::witnessLabel(sig), prov).value();
    auto r = netStep(known, Label::authGroup({{sig}}, group), prov);
    REQUIRE(r.ok());
    CHECK(r.value().chain.balanceOf(userAddr(2)).amount(kAlgo) == 5000007);
    CHECK(r.value().knowledge == known.knowledge);
  }
  SECTION("a wrong signature is rejected as unauthorized") {
    Bytes bad = prov.sign(userKey(2).privateKey, groupIndexMessage(group, 0));
    NetState known = netStep(net, Label::witnessLabel(bad), prov).value();
    auto r = netStep(known, Label::authGroup({{bad}}, group), prov);
    REQUIRE_FALSE(r.ok());
    CHECK(r.error().code == StepCode::Unauthorized);
  }
}
