#pragma once

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "asc1/eval.hpp"
#include "asc1/ledger.hpp"
#include "asc1/script.hpp"

namespace asc1 {

struct TemplateError : std::invalid_argument {
  explicit TemplateError(const std::string& what) : std::invalid_argument(what) {}
};

using TxPredicate = std::function<bool(const Transaction&)>;

// A reference strategy shipped with a bundle: the sim layer turns the
// kind into a concrete strategy once the owner's private inputs are known.
struct StrategySpec {
  std::string kind;
  std::string role;
};

struct ContractBundle {
  std::string kind;
  std::map<std::string, ExprPtr> scripts;
  std::map<std::string, Address> addresses;
  std::optional<std::vector<Transaction>> setupGroup;
  std::map<std::string, TxPredicate> claimSets;
  std::vector<StrategySpec> referenceStrategies;

  const ExprPtr& script(const std::string& name) const {
    auto it = scripts.find(name);
    if (it == scripts.end()) throw TemplateError("no script named " + name);
    return it->second;
  }
  const Address& address(const std::string& name) const {
    auto it = addresses.find(name);
    if (it == addresses.end()) throw TemplateError("no contract address named " + name);
    return it->second;
  }
  bool claims(const std::string& name, const Transaction& t) const {
    auto it = claimSets.find(name);
    if (it == claimSets.end()) throw TemplateError("no claim set named " + name);
    return it->second(t);
  }
};

struct TemplateParams {
  std::optional<Address> a, b, c, b0, b1;
  std::optional<Bytes> oracleKey, keyA, keyB, keyC, keyA1, keyB1;
  std::optional<Bytes> hashA, hashB;
  std::optional<u64> tmax, t0, t1, p, d, n, v, rho, vmin, asset;
  u64 unit = 1000000;  // micro-Algos per Algo in bet/collateral amounts
  u64 deltaMax = LedgerConfig{}.deltaMax;
  u64 setupFv = 0;
  std::optional<u64> setupLv;
};

namespace tmpl_detail {

using namespace expr;

inline ExprPtr conjoin(std::vector<ExprPtr> parts) {
  if (parts.empty()) throw TemplateError("empty conjunction");
  ExprPtr out = parts[0];
  for (std::size_t i = 1; i < parts.size(); ++i) out = andE(out, parts[i]);
  return out;
}

inline ExprPtr disjoin(std::vector<ExprPtr> parts) {
  if (parts.empty()) return falseE();
  ExprPtr out = parts[0];
  for (std::size_t i = 1; i < parts.size(); ++i) out = orE(out, parts[i]);
  return out;
}

inline ExprPtr typeIs(TxType t) {
  return eq(txField(TxFieldKind::Type), bytesConst(txTypeTagBytes(t)));
}
inline ExprPtr typeIsAt(u64 i, TxType t) {
  return eq(txFieldAt(i, TxFieldKind::Type), bytesConst(txTypeTagBytes(t)));
}
inline ExprPtr asstIs(AssetId id) { return eq(txField(TxFieldKind::Asst), natConst(id)); }
inline ExprPtr asstIsAt(u64 i, AssetId id) {
  return eq(txFieldAt(i, TxFieldKind::Asst), natConst(id));
}
inline ExprPtr rcvIs(const Address& addr) {
  return eq(txField(TxFieldKind::Rcv), bytesConst(addr.encoding()));
}
inline ExprPtr rcvIsAt(u64 i, const Address& addr) {
  return eq(txFieldAt(i, TxFieldKind::Rcv), bytesConst(addr.encoding()));
}

inline u64 require(const std::optional<u64>& v, const char* what) {
  if (!v) throw TemplateError(std::string("missing parameter: ") + what);
  return *v;
}
inline const Address& require(const std::optional<Address>& v, const char* what) {
  if (!v) throw TemplateError(std::string("missing parameter: ") + what);
  return *v;
}
inline const Bytes& require(const std::optional<Bytes>& v, const char* what) {
  if (!v) throw TemplateError(std::string("missing parameter: ") + what);
  return *v;
}

inline Transaction payTx(const Address& from, const Address& to, u64 val, AssetId asset,
                         u64 fv, u64 lv, u64 lx = 0) {
  Transaction t;
  t.type = TxType::Pay;
  t.snd = from;
  t.rcv = to;
  t.val = val;
  t.asst = asset;
  t.fv = fv;
  t.lv = lv;
  t.lx = lx;
  return t;
}

inline TxPredicate closeClaim(const Address& from, const Address& to) {
  return [from, to](const Transaction& t) {
    return t.type == TxType::Close && t.snd == from && t.rcv == to && t.asst == kAlgo;
  };
}

}  // namespace tmpl_detail

// ---------------------------------------------------------------------------
// Finite-state machine encoding

// A transition either pins the receiver to the address of a
// later-defined state, to an external address, or (for loops, which
// cannot be referenced directly) to a witness-designated address that
// every machine participant must have signed.
struct FsmTransition {
  std::optional<std::size_t> nextState;
  std::optional<Address> externalTarget;
  bool loop = false;
  std::vector<Bytes> txAuthKeys;                    // versig(txid, arg(i), key_i)
  std::optional<std::pair<ExprPtr, ExprPtr>> fvMod;  // tx.fv % modulus = residue
  std::optional<ExprPtr> lvOffset;                   // tx.lv = tx.fv + offset
  ExprPtr extraGuard;
};

struct FsmState {
  std::string name;
  std::vector<FsmTransition> transitions;
};

struct FsmEncoding {
  std::vector<ExprPtr> scripts;
  std::vector<Address> addresses;
};

// One script per state. Forward transitions (to a strictly later state
// index) embed the target's script address; loops use the signed
// rcv-in-arg(0) pattern and require a non-empty signer set.
inline FsmEncoding fsmEncode(const std::vector<FsmState>& states,
                             const std::vector<Bytes>& signers) {
  using namespace tmpl_detail;
  using namespace expr;

  std::vector<ExprPtr> scripts(states.size());
  std::vector<Address> addresses(states.size());

  for (std::size_t idx = states.size(); idx-- > 0;) {
    const FsmState& st = states[idx];
    std::vector<std::vector<ExprPtr>> clauses;
    for (const FsmTransition& tr : st.transitions) {
      std::vector<ExprPtr> parts;
      u64 nextArg = 0;
      if (tr.loop) nextArg = 1;  // arg(0) carries the next-state address
      for (const Bytes& key : tr.txAuthKeys)
        parts.push_back(versig(txId(), arg(nextArg++), bytesConst(key)));
      if (tr.loop) {
        if (signers.empty())
          throw TemplateError("CyclicWithoutSigners: loop transition needs a signer set");
        for (const Bytes& key : signers)
          parts.push_back(versig(arg(0), arg(nextArg++), bytesConst(key)));
        parts.push_back(eq(txField(TxFieldKind::Rcv), arg(0)));
      } else if (tr.externalTarget) {
        parts.push_back(rcvIs(*tr.externalTarget));
      } else if (tr.nextState) {
        if (*tr.nextState <= idx)
          throw TemplateError(
              "CyclicWithoutSigners: direct reference to an earlier state is circular");
        if (*tr.nextState >= states.size()) throw TemplateError("transition target out of range");
        parts.push_back(rcvIs(addresses[*tr.nextState]));
      } else {
        throw TemplateError("transition needs a target");
      }
      if (tr.fvMod)
        parts.push_back(eq(mod(txField(TxFieldKind::Fv), tr.fvMod->first), tr.fvMod->second));
      if (tr.lvOffset)
        parts.push_back(
            eq(txField(TxFieldKind::Lv), add(txField(TxFieldKind::Fv), *tr.lvOffset)));
      if (tr.extraGuard) parts.push_back(tr.extraGuard);
      clauses.push_back(std::move(parts));
    }

    // A single transition splices into the top-level conjunction; several
    // become a disjunction of conjoined clauses.
    std::vector<ExprPtr> top = {typeIs(TxType::Close), asstIs(kAlgo)};
    if (clauses.empty()) {
      top.push_back(falseE());
    } else if (clauses.size() == 1) {
      for (auto& part : clauses[0]) top.push_back(std::move(part));
    } else {
      std::vector<ExprPtr> disjuncts;
      disjuncts.reserve(clauses.size());
      for (auto& clause : clauses) disjuncts.push_back(conjoin(std::move(clause)));
      top.push_back(disjoin(std::move(disjuncts)));
    }
    ExprPtr script = conjoin(std::move(top));
    scripts[idx] = script;
    addresses[idx] = Address::script(script);
  }
  return {std::move(scripts), std::move(addresses)};
}

// ---------------------------------------------------------------------------
// Templates

namespace tmpl_detail {

inline ContractBundle oracleTemplate(const TemplateParams& p) {
  using namespace expr;
  const Address& a = require(p.a, "a");
  const Address& b = require(p.b, "b");
  const Bytes& oKey = require(p.oracleKey, "oracleKey");
  u64 tmax = require(p.tmax, "tmax");

  ExprPtr script = conjoin(
      {typeIs(TxType::Close), asstIs(kAlgo),
       disjoin({conjoin({gt(txField(TxFieldKind::Fv), natConst(tmax)), rcvIs(a)}),
                conjoin({eq(arg(0), natConst(0)), versig(arg(0), arg(1), bytesConst(oKey)),
                         rcvIs(a)}),
                conjoin({eq(arg(0), natConst(1)), versig(arg(0), arg(1), bytesConst(oKey)),
                         rcvIs(b)})})});

  ContractBundle bundle;
  bundle.kind = "oracle";
  bundle.scripts["oracle"] = script;
  Address oracleAddr = Address::script(script);
  bundle.addresses["oracle"] = oracleAddr;
  bundle.claimSets["claim-a"] = closeClaim(oracleAddr, a);
  bundle.claimSets["claim-b"] = closeClaim(oracleAddr, b);
  bundle.referenceStrategies = {{"oracle-claim-a", "a"}, {"oracle-claim-b", "b"},
                                {"oracle-sign", "o"}};
  return bundle;
}

inline ExprPtr htlcScript(const Address& a, const Address& b, const Bytes& hashA, u64 tmax) {
  using namespace expr;
  return conjoin(
      {typeIs(TxType::Close), asstIs(kAlgo),
       disjoin({conjoin({rcvIs(a), eq(hash(arg(0)), bytesConst(hashA))}),
                conjoin({rcvIs(b), ge(txField(TxFieldKind::Fv), natConst(tmax))})})});
}

inline ContractBundle htlcTemplate(const TemplateParams& p) {
  const Address& a = require(p.a, "a");
  const Address& b = require(p.b, "b");
  const Bytes& hashA = require(p.hashA, "hashA");
  u64 tmax = require(p.tmax, "tmax");

  ContractBundle bundle;
  bundle.kind = "htlc";
  ExprPtr script = htlcScript(a, b, hashA, tmax);
  bundle.scripts["htlc"] = script;
  Address addr = Address::script(script);
  bundle.addresses["htlc"] = addr;
  bundle.claimSets["claim-a"] = closeClaim(addr, a);
  bundle.claimSets["claim-b"] = closeClaim(addr, b);
  bundle.referenceStrategies = {{"htlc-reveal", "a"}, {"htlc-timeout", "b"}};
  return bundle;
}

// Winner selection shared by both lotteries: the parity of the sum of
// the revealed secrets picks the receiver.
inline ExprPtr lotteryWinnerClause(const Address& a, const Address& b) {
  using namespace expr;
  return ifE(eq(mod(add(arg(0), arg(1)), natConst(2)), natConst(0)), rcvIs(a), rcvIs(b));
}

inline ContractBundle lotteryTemplate(const TemplateParams& p) {
  using namespace expr;
  const Address& a = require(p.a, "a");
  const Address& b = require(p.b, "b");
  const Bytes& hashA = require(p.hashA, "hashA");
  const Bytes& hashB = require(p.hashB, "hashB");
  u64 tmax = require(p.tmax, "tmax");
  if (hashA == hashB)
    throw TemplateError("InvalidParams: the two commitments must differ");

  ExprPtr lottery = conjoin({typeIs(TxType::Close), asstIs(kAlgo),
                             eq(hash(arg(0)), bytesConst(hashA)),
                             eq(hash(arg(1)), bytesConst(hashB)),
                             lotteryWinnerClause(a, b)});
  ExprPtr htlcA = htlcScript(a, b, hashA, tmax);
  ExprPtr htlcB = htlcScript(b, a, hashB, tmax);

  ContractBundle bundle;
  bundle.kind = "lottery";
  bundle.scripts["lottery"] = lottery;
  bundle.scripts["htlc-a"] = htlcA;
  bundle.scripts["htlc-b"] = htlcB;
  Address lotteryAddr = Address::script(lottery);
  Address htlcAAddr = Address::script(htlcA);
  Address htlcBAddr = Address::script(htlcB);
  bundle.addresses["lottery"] = lotteryAddr;
  bundle.addresses["htlc-a"] = htlcAAddr;
  bundle.addresses["htlc-b"] = htlcBAddr;

  u64 bet = p.unit;
  u64 collateral = 2 * p.unit;
  u64 setupLv = p.setupLv.value_or(std::min(p.setupFv + p.deltaMax, tmax));
  bundle.setupGroup = std::vector<Transaction>{
      payTx(a, htlcAAddr, collateral, kAlgo, p.setupFv, setupLv),
      payTx(b, htlcBAddr, collateral, kAlgo, p.setupFv, setupLv),
      payTx(a, lotteryAddr, bet, kAlgo, p.setupFv, setupLv),
      payTx(b, lotteryAddr, bet, kAlgo, p.setupFv, setupLv)};

  bundle.claimSets["secr-a"] = closeClaim(htlcAAddr, a);
  bundle.claimSets["secr-b"] = closeClaim(htlcBAddr, b);
  bundle.claimSets["tout-a"] = closeClaim(htlcAAddr, b);
  bundle.claimSets["tout-b"] = closeClaim(htlcBAddr, a);
  bundle.claimSets["lott-a"] = closeClaim(lotteryAddr, a);
  bundle.claimSets["lott-b"] = closeClaim(lotteryAddr, b);
  bundle.referenceStrategies = {{"lottery-player", "a"}, {"lottery-player", "b"}};
  return bundle;
}

inline ContractBundle periodicPaymentTemplate(const TemplateParams& params) {
  using namespace expr;
  const Address& a = require(params.a, "a");
  u64 v = require(params.v, "v");
  u64 p = require(params.p, "p");
  u64 d = require(params.d, "d");
  u64 n = require(params.n, "n");
  if (p == 0) throw TemplateError("InvalidParams: period must be positive");

  ExprPtr script = conjoin({typeIs(TxType::Pay), eq(txField(TxFieldKind::Val), natConst(v)),
                            asstIs(kAlgo), rcvIs(a),
                            eq(mod(txField(TxFieldKind::Fv), natConst(p)), natConst(0)),
                            eq(txField(TxFieldKind::Lv),
                               add(txField(TxFieldKind::Fv), natConst(d))),
                            eq(txField(TxFieldKind::Lx), natConst(n))});

  ContractBundle bundle;
  bundle.kind = "periodic-payment";
  bundle.scripts["pp"] = script;
  Address addr = Address::script(script);
  bundle.addresses["pp"] = addr;
  bundle.claimSets["withdraw"] = [addr, a, v](const Transaction& t) {
    return t.type == TxType::Pay && t.snd == addr && t.rcv == a && t.val == v &&
           t.asst == kAlgo;
  };
  bundle.referenceStrategies = {{"pp-withdraw", "a"}};
  return bundle;
}

inline ContractBundle twoPhaseTemplate(const TemplateParams& params) {
  using namespace expr;
  const Address& c = require(params.c, "c");
  const Bytes& keyA = require(params.keyA, "keyA");
  const Bytes& keyB = require(params.keyB, "keyB");
  const Bytes& keyA1 = require(params.keyA1, "keyA1");
  const Bytes& keyB1 = require(params.keyB1, "keyB1");
  u64 p = require(params.p, "p");
  u64 dmax = params.deltaMax;
  if (p < dmax) throw TemplateError("InvalidParams: the frame must cover the validity window");

  ExprPtr p2 = conjoin(
      {typeIs(TxType::Close), asstIs(kAlgo),
       disjoin(
           {conjoin({versig(txId(), arg(0), bytesConst(keyB)), rcvIs(c)}),
            conjoin({versig(arg(0), arg(1), bytesConst(keyA1)),
                     versig(arg(0), arg(2), bytesConst(keyB1)),
                     eq(txField(TxFieldKind::Rcv), arg(0)),
                     eq(mod(txField(TxFieldKind::Fv), mul(natConst(4), natConst(p))),
                        mul(natConst(2), natConst(p))),
                     eq(txField(TxFieldKind::Lv),
                        add(txField(TxFieldKind::Fv), natConst(dmax)))})})});
  Address p2Addr = Address::script(p2);

  ExprPtr p1 = conjoin(
      {typeIs(TxType::Close), asstIs(kAlgo), versig(txId(), arg(0), bytesConst(keyA)),
       rcvIs(p2Addr),
       eq(mod(txField(TxFieldKind::Fv), mul(natConst(4), natConst(p))), natConst(0)),
       eq(txField(TxFieldKind::Lv), add(txField(TxFieldKind::Fv), natConst(dmax)))});
  Address p1Addr = Address::script(p1);

  ContractBundle bundle;
  bundle.kind = "two-phase";
  bundle.scripts["p1"] = p1;
  bundle.scripts["p2"] = p2;
  bundle.addresses["p1"] = p1Addr;
  bundle.addresses["p2"] = p2Addr;
  bundle.claimSets["phase2"] = closeClaim(p1Addr, p2Addr);
  bundle.claimSets["claim-c"] = closeClaim(p2Addr, c);
  bundle.claimSets["reset"] = closeClaim(p2Addr, p1Addr);
  bundle.referenceStrategies = {{"two-phase-a", "a"}, {"two-phase-b", "b"}};
  return bundle;
}

inline ContractBundle mutualHtlcTemplate(const TemplateParams& p) {
  const Address& a = require(p.a, "a");
  const Address& b = require(p.b, "b");
  const Bytes& hashA = require(p.hashA, "hashA");
  const Bytes& hashB = require(p.hashB, "hashB");
  u64 tmax = require(p.tmax, "tmax");
  u64 v = require(p.v, "v");
  if (hashA == hashB)
    throw TemplateError("InvalidParams: the two commitments must differ");

  ExprPtr htlcA = htlcScript(a, b, hashA, tmax);
  ExprPtr htlcB = htlcScript(b, a, hashB, tmax);
  Address htlcAAddr = Address::script(htlcA);
  Address htlcBAddr = Address::script(htlcB);

  ContractBundle bundle;
  bundle.kind = "mutual-htlc";
  bundle.scripts["htlc-a"] = htlcA;
  bundle.scripts["htlc-b"] = htlcB;
  bundle.addresses["htlc-a"] = htlcAAddr;
  bundle.addresses["htlc-b"] = htlcBAddr;
  u64 setupLv = p.setupLv.value_or(std::min(p.setupFv + p.deltaMax, tmax));
  bundle.setupGroup = std::vector<Transaction>{
      payTx(a, htlcAAddr, v, kAlgo, p.setupFv, setupLv),
      payTx(b, htlcBAddr, v, kAlgo, p.setupFv, setupLv)};
  bundle.claimSets["secr-a"] = closeClaim(htlcAAddr, a);
  bundle.claimSets["secr-b"] = closeClaim(htlcBAddr, b);
  bundle.claimSets["tout-a"] = closeClaim(htlcAAddr, b);
  bundle.claimSets["tout-b"] = closeClaim(htlcBAddr, a);
  bundle.referenceStrategies = {{"mutual-htlc-player", "a"}, {"mutual-htlc-player", "b"}};
  return bundle;
}

inline ContractBundle zeroCollateralLotteryTemplate(const TemplateParams& p) {
  using namespace expr;
  const Address& a = require(p.a, "a");
  const Address& b = require(p.b, "b");
  const Bytes& hashA = require(p.hashA, "hashA");
  const Bytes& hashB = require(p.hashB, "hashB");
  u64 t0 = require(p.t0, "t0");
  u64 t1 = require(p.t1, "t1");
  if (hashA == hashB)
    throw TemplateError("InvalidParams: the two commitments must differ");

  ExprPtr zdl2 = conjoin(
      {typeIs(TxType::Close), asstIs(kAlgo), eq(hash(arg(0)), bytesConst(hashA)),
       disjoin({conjoin({eq(hash(arg(1)), bytesConst(hashB)), lotteryWinnerClause(a, b)}),
                conjoin({rcvIs(a), ge(txField(TxFieldKind::Fv), natConst(t0 + t1))})})});
  Address zdl2Addr = Address::script(zdl2);

  ExprPtr zdl = conjoin(
      {typeIs(TxType::Close), asstIs(kAlgo),
       disjoin({conjoin({rcvIs(zdl2Addr), eq(hash(arg(0)), bytesConst(hashA))}),
                conjoin({rcvIs(b), ge(txField(TxFieldKind::Fv), natConst(t0))})})});
  Address zdlAddr = Address::script(zdl);

  ContractBundle bundle;
  bundle.kind = "zero-collateral-lottery";
  bundle.scripts["zdl"] = zdl;
  bundle.scripts["zdl2"] = zdl2;
  bundle.addresses["zdl"] = zdlAddr;
  bundle.addresses["zdl2"] = zdl2Addr;
  u64 bet = p.unit;
  u64 setupLv = p.setupLv.value_or(std::min(p.setupFv + p.deltaMax, t0));
  bundle.setupGroup = std::vector<Transaction>{payTx(a, zdlAddr, bet, kAlgo, p.setupFv, setupLv),
                                               payTx(b, zdlAddr, bet, kAlgo, p.setupFv, setupLv)};
  bundle.claimSets["advance"] = closeClaim(zdlAddr, zdl2Addr);
  bundle.claimSets["zdl-timeout-b"] = closeClaim(zdlAddr, b);
  bundle.claimSets["win-a"] = closeClaim(zdl2Addr, a);
  bundle.claimSets["win-b"] = closeClaim(zdl2Addr, b);
  bundle.referenceStrategies = {{"zdl-player", "a"}, {"zdl-player", "b"}};
  return bundle;
}

inline ContractBundle escrowTemplate(const TemplateParams& p) {
  using namespace expr;
  const Address& a = require(p.a, "a");
  const Address& b = require(p.b, "b");
  const Bytes& keyA = require(p.keyA, "keyA");
  const Bytes& keyB = require(p.keyB, "keyB");
  const Bytes& keyC = require(p.keyC, "keyC");
  u64 v = require(p.v, "v");

  ExprPtr resolve = conjoin(
      {typeIs(TxType::Pay), asstIs(kAlgo), versig(arg(0), arg(1), bytesConst(keyC)),
       disjoin({conjoin({rcvIs(a), eq(txField(TxFieldKind::Val), arg(0))}),
                conjoin({rcvIs(b),
                         eq(txField(TxFieldKind::Val), sub(natConst(v), arg(0)))})})});
  Address resolveAddr = Address::script(resolve);

  ExprPtr escrow = conjoin(
      {typeIs(TxType::Close), asstIs(kAlgo),
       disjoin({andE(versig(txId(), arg(1), bytesConst(keyA)),
                     orE(rcvIs(b), rcvIs(resolveAddr))),
                andE(versig(txId(), arg(1), bytesConst(keyB)),
                     orE(rcvIs(a), rcvIs(resolveAddr)))})});
  Address escrowAddr = Address::script(escrow);

  ContractBundle bundle;
  bundle.kind = "escrow";
  bundle.scripts["escrow"] = escrow;
  bundle.scripts["resolve"] = resolve;
  bundle.addresses["escrow"] = escrowAddr;
  bundle.addresses["resolve"] = resolveAddr;
  bundle.claimSets["pay-b"] = closeClaim(escrowAddr, b);
  bundle.claimSets["refund-a"] = closeClaim(escrowAddr, a);
  bundle.claimSets["to-resolve"] = closeClaim(escrowAddr, resolveAddr);
  bundle.claimSets["resolve-a"] = [resolveAddr, a](const Transaction& t) {
    return t.type == TxType::Pay && t.snd == resolveAddr && t.rcv == a && t.asst == kAlgo;
  };
  bundle.claimSets["resolve-b"] = [resolveAddr, b](const Transaction& t) {
    return t.type == TxType::Pay && t.snd == resolveAddr && t.rcv == b && t.asst == kAlgo;
  };
  bundle.referenceStrategies = {{"escrow-buyer", "a"}, {"escrow-seller", "b"},
                                {"escrow-arbiter", "c"}};
  return bundle;
}

inline ContractBundle limitOrderTemplate(const TemplateParams& p) {
  using namespace expr;
  const Address& a = require(p.a, "a");
  u64 asset = require(p.asset, "asset");
  u64 rhoMin = require(p.rho, "rho");
  u64 vmin = require(p.vmin, "vmin");
  u64 tmax = require(p.tmax, "tmax");

  ExprPtr exchange = conjoin(
      {eq(txLen(), natConst(2)), eq(txPos(), natConst(0)), typeIsAt(0, TxType::Pay),
       asstIsAt(0, kAlgo),
       eq(txFieldAt(0, TxFieldKind::Rcv), txFieldAt(1, TxFieldKind::Snd)),
       typeIsAt(1, TxType::Pay), asstIsAt(1, asset), rcvIsAt(1, a),
       ge(div(txFieldAt(1, TxFieldKind::Val), txFieldAt(0, TxFieldKind::Val)),
          natConst(rhoMin)),
       ge(txFieldAt(0, TxFieldKind::Val), natConst(vmin))});
  ExprPtr closeout = conjoin(
      {eq(txLen(), natConst(1)), gt(txField(TxFieldKind::Fv), natConst(tmax)),
       typeIs(TxType::Close), asstIs(kAlgo), rcvIsAt(0, a)});
  ExprPtr script = orE(exchange, closeout);

  ContractBundle bundle;
  bundle.kind = "limit-order";
  bundle.scripts["limit-order"] = script;
  Address addr = Address::script(script);
  bundle.addresses["limit-order"] = addr;
  bundle.claimSets["exchange"] = [addr](const Transaction& t) {
    return t.type == TxType::Pay && t.snd == addr && t.asst == kAlgo;
  };
  bundle.claimSets["close"] = closeClaim(addr, a);
  bundle.referenceStrategies = {{"limit-order-taker", "b"}};
  return bundle;
}

inline ContractBundle splitTemplate(const TemplateParams& p) {
  using namespace expr;
  const Address& a = require(p.a, "a");
  const Address& b0 = require(p.b0, "b0");
  const Address& b1 = require(p.b1, "b1");
  u64 rho = require(p.rho, "rho");
  u64 vmin = require(p.vmin, "vmin");
  u64 tmax = require(p.tmax, "tmax");

  ExprPtr splitClause = conjoin(
      {eq(txLen(), natConst(2)),
       eq(txFieldAt(0, TxFieldKind::Snd), txFieldAt(1, TxFieldKind::Snd)),
       typeIsAt(0, TxType::Pay), asstIsAt(0, kAlgo), rcvIsAt(0, b0),
       typeIsAt(1, TxType::Pay), asstIsAt(1, kAlgo), rcvIsAt(1, b1),
       eq(txFieldAt(1, TxFieldKind::Val), mul(natConst(rho), txFieldAt(0, TxFieldKind::Val))),
       ge(txFieldAt(0, TxFieldKind::Val), natConst(vmin))});
  ExprPtr closeout = conjoin(
      {eq(txLen(), natConst(1)), gt(txField(TxFieldKind::Fv), natConst(tmax)),
       typeIs(TxType::Close), asstIs(kAlgo), rcvIsAt(0, a)});
  ExprPtr script = orE(splitClause, closeout);

  ContractBundle bundle;
  bundle.kind = "split";
  bundle.scripts["split"] = script;
  Address addr = Address::script(script);
  bundle.addresses["split"] = addr;
  bundle.claimSets["split"] = [addr](const Transaction& t) {
    return t.type == TxType::Pay && t.snd == addr && t.asst == kAlgo;
  };
  bundle.claimSets["close"] = closeClaim(addr, a);
  bundle.referenceStrategies = {};
  return bundle;
}

}  // namespace tmpl_detail

inline const std::vector<std::string>& templateKinds() {
  static const std::vector<std::string> kinds = {
      "oracle", "htlc", "lottery", "periodic-payment", "two-phase",
      "mutual-htlc", "zero-collateral-lottery", "escrow", "limit-order", "split"};
  return kinds;
}

inline ContractBundle buildTemplate(const std::string& kind, const TemplateParams& params) {
  using namespace tmpl_detail;
  if (kind == "oracle") return oracleTemplate(params);
  if (kind == "htlc") return htlcTemplate(params);
  if (kind == "lottery") return lotteryTemplate(params);
  if (kind == "periodic-payment") return periodicPaymentTemplate(params);
  if (kind == "two-phase") return twoPhaseTemplate(params);
  if (kind == "mutual-htlc") return mutualHtlcTemplate(params);
  if (kind == "zero-collateral-lottery") return zeroCollateralLotteryTemplate(params);
  if (kind == "escrow") return escrowTemplate(params);
  if (kind == "limit-order") return limitOrderTemplate(params);
  if (kind == "split") return splitTemplate(params);
  throw TemplateError("unknown template kind: " + kind);
}

}  // namespace asc1
