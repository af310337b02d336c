#pragma once

#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "asc1/script_text.hpp"
#include "asc1/strategies.hpp"
#include "asc1/teal.hpp"

namespace asc1 {

using json = nlohmann::ordered_json;

struct ScenarioError : std::runtime_error {
  explicit ScenarioError(const std::string& what) : std::runtime_error(what) {}
};

// A loaded scenario: resolved users, secrets and contract bundles plus
// the raw validated document the executor walks.
struct Scenario {
  json doc;
  GenesisConfig genesis;
  const SignatureProvider* provider = &ed25519Provider();
  std::shared_ptr<TestProvider> testProvider;  // owns the registry when selected

  std::map<std::string, KeyPair> userKeys;
  std::map<std::string, Address> userAddrs;
  std::map<std::string, Bytes> secrets;
  std::map<std::string, ContractBundle> contracts;
  std::map<std::string, json> contractParams;

  u64 maxRounds = 10;
  u64 seed = 0;
  u64 deltaAdv = 0;
  std::string adversary = "fifo";

  std::string normalized() const { return doc.dump(2); }

  Address resolveAddress(const std::string& name) const {
    auto u = userAddrs.find(name);
    if (u != userAddrs.end()) return u->second;
    auto dot = name.find('.');
    if (dot != std::string::npos) {
      auto c = contracts.find(name.substr(0, dot));
      if (c != contracts.end()) return c->second.address(name.substr(dot + 1));
    } else {
      auto c = contracts.find(name);
      if (c != contracts.end()) {
        if (c->second.addresses.size() != 1)
          throw ScenarioError("contract " + name + " has several scripts; qualify the name");
        return c->second.addresses.begin()->second;
      }
    }
    if (name.rfind("hex:", 0) == 0) return decodeAddress(hexDecode(name.substr(4)));
    throw ScenarioError("ValidationError: unknown address name '" + name + "'");
  }

  const KeyPair& resolveUser(const std::string& name) const {
    auto it = userKeys.find(name);
    if (it == userKeys.end())
      throw ScenarioError("ValidationError: unknown user '" + name + "'");
    return it->second;
  }

  const Bytes& resolveSecret(const std::string& name) const {
    auto it = secrets.find(name);
    if (it == secrets.end())
      throw ScenarioError("ValidationError: unknown secret '" + name + "'");
    return it->second;
  }
};

namespace scenario_detail {

inline void requireKeys(const json& j, const std::set<std::string>& allowed,
                        const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (allowed.count(it.key()) == 0)
      throw ScenarioError("ValidationError: unknown key '" + it.key() + "' in " + where);
  }
}

inline u64 u64Of(const json& j, const char* key, u64 fallback) {
  return j.contains(key) ? j.at(key).get<u64>() : fallback;
}

inline Bytes seedBytes(const json& v) {
  if (v.is_number()) {
    Bytes b(32, 0);
    u64 n = v.get<u64>();
    for (int i = 0; i < 8; ++i) b[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(n >> (8 * (7 - i)));
    return b;
  }
  Bytes b = hexDecode(v.get<std::string>());
  b.resize(32, 0);
  return b;
}

inline TemplateParams templateParamsFromJson(const Scenario& sc, const json& p) {
  TemplateParams tp;
  auto addrOf = [&](const char* key) -> std::optional<Address> {
    if (!p.contains(key)) return std::nullopt;
    return sc.resolveAddress(p.at(key).get<std::string>());
  };
  auto keyOf = [&](const char* key) -> std::optional<Bytes> {
    if (!p.contains(key)) return std::nullopt;
    return sc.resolveUser(p.at(key).get<std::string>()).publicKey;
  };
  auto hashOf = [&](const char* key) -> std::optional<Bytes> {
    if (!p.contains(key)) return std::nullopt;
    const json& v = p.at(key);
    if (v.is_object() && v.contains("ofSecret"))
      return sha256(sc.resolveSecret(v.at("ofSecret").get<std::string>()));
    return hexDecode(v.get<std::string>());
  };
  auto numOf = [&](const char* key) -> std::optional<u64> {
    if (!p.contains(key)) return std::nullopt;
    return p.at(key).get<u64>();
  };
  tp.a = addrOf("a");
  tp.b = addrOf("b");
  tp.c = addrOf("c");
  tp.b0 = addrOf("b0");
  tp.b1 = addrOf("b1");
  tp.oracleKey = keyOf("o");
  tp.keyA = keyOf("keyA");
  tp.keyB = keyOf("keyB");
  tp.keyC = keyOf("keyC");
  tp.keyA1 = keyOf("keyA1");
  tp.keyB1 = keyOf("keyB1");
  tp.hashA = hashOf("hashA");
  tp.hashB = hashOf("hashB");
  tp.tmax = numOf("tmax");
  tp.t0 = numOf("t0");
  tp.t1 = numOf("t1");
  tp.p = numOf("p");
  tp.d = numOf("d");
  tp.n = numOf("n");
  tp.v = numOf("v");
  tp.rho = numOf("rho");
  tp.vmin = numOf("vmin");
  tp.asset = numOf("asset");
  if (auto u = numOf("unit")) tp.unit = *u;
  if (auto f = numOf("setupFv")) tp.setupFv = *f;
  tp.setupLv = numOf("setupLv");
  tp.deltaMax = sc.genesis.ledger.deltaMax;
  return tp;
}

}  // namespace scenario_detail

inline Scenario loadScenarioJson(const json& doc) {
  using scenario_detail::requireKeys;
  using scenario_detail::u64Of;

  Scenario sc;
  sc.doc = doc;
  requireKeys(doc,
              {"genesis", "users", "secrets", "contracts", "actions", "strategies",
               "adversary", "deltaAdv", "maxRounds", "seed", "properties", "provider"},
              "scenario");
  if (doc.contains("actions") && doc.contains("strategies"))
    throw ScenarioError("ValidationError: 'actions' and 'strategies' are mutually exclusive");

  std::string providerName =
      doc.contains("provider") ? doc.at("provider").get<std::string>() : "ed25519";
  if (providerName == "test") {
    sc.testProvider = std::make_shared<TestProvider>();
    sc.provider = sc.testProvider.get();
  } else if (providerName != "ed25519") {
    throw ScenarioError("ValidationError: unknown provider '" + providerName + "'");
  }

  if (!doc.contains("users") || !doc.at("users").is_array() || doc.at("users").empty())
    throw ScenarioError("ValidationError: 'users' must be a non-empty array");
  for (const json& u : doc.at("users")) {
    requireKeys(u, {"name", "seed"}, "user");
    std::string name = u.at("name").get<std::string>();
    KeyPair kp = sc.provider->keyFromSeed(scenario_detail::seedBytes(u.at("seed")));
    sc.userAddrs[name] = Address::user(kp.publicKey);
    sc.userKeys[name] = std::move(kp);
  }

  if (!doc.contains("genesis")) throw ScenarioError("ValidationError: missing 'genesis'");
  const json& g = doc.at("genesis");
  requireKeys(g, {"initialUser", "supply", "deltaMax", "fund"}, "genesis");
  std::string initial = g.at("initialUser").get<std::string>();
  if (sc.userAddrs.count(initial) == 0)
    throw ScenarioError("ValidationError: genesis user '" + initial + "' is not declared");
  sc.genesis.initialUser = sc.userAddrs.at(initial);
  sc.genesis.supply = u64Of(g, "supply", LedgerConfig{}.initialSupply);
  sc.genesis.ledger.deltaMax = u64Of(g, "deltaMax", LedgerConfig{}.deltaMax);

  if (doc.contains("secrets")) {
    for (const json& s : doc.at("secrets")) {
      requireKeys(s, {"name", "hex"}, "secret");
      sc.secrets[s.at("name").get<std::string>()] = hexDecode(s.at("hex").get<std::string>());
    }
  }

  if (doc.contains("contracts")) {
    for (const json& c : doc.at("contracts")) {
      requireKeys(c, {"name", "kind", "params"}, "contract");
      std::string name = c.at("name").get<std::string>();
      json params = c.contains("params") ? c.at("params") : json::object();
      sc.contracts[name] =
          buildTemplate(c.at("kind").get<std::string>(),
                        scenario_detail::templateParamsFromJson(sc, params));
      sc.contractParams[name] = params;
    }
  }

  sc.maxRounds = u64Of(doc, "maxRounds", 10);
  sc.seed = u64Of(doc, "seed", 0);
  sc.deltaAdv = u64Of(doc, "deltaAdv", 0);
  if (doc.contains("adversary")) sc.adversary = doc.at("adversary").get<std::string>();
  if (sc.adversary != "fifo" && sc.adversary != "random" && sc.adversary != "delay")
    throw ScenarioError("ValidationError: unknown adversary '" + sc.adversary + "'");
  if (const char* env = std::getenv("ASC1_SEED")) sc.seed = std::stoull(env);
  return sc;
}

inline Scenario loadScenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open scenario file: " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ScenarioError(std::string("ParseError: ") + e.what());
  }
  return loadScenarioJson(doc);
}

// ---------------------------------------------------------------------------
// Execution

struct ScenarioResult {
  int exitCode = 0;
  std::string trace;
  std::vector<std::string> messages;
  sim::Run run;

  void fail(std::string msg) {
    exitCode = 1;
    messages.push_back(std::move(msg));
  }
  void note(std::string msg) { messages.push_back(std::move(msg)); }
};

namespace scenario_detail {

inline Transaction txFromJson(const Scenario& sc, const json& j) {
  requireKeys(j, {"type", "snd", "rcv", "val", "asst", "fv", "lv", "lx"}, "transaction");
  auto type = txTypeFromName(j.at("type").get<std::string>());
  if (!type) throw ScenarioError("ValidationError: unknown transaction type");
  Transaction t;
  t.type = *type;
  t.snd = sc.resolveAddress(j.at("snd").get<std::string>());
  t.rcv = j.contains("rcv") ? sc.resolveAddress(j.at("rcv").get<std::string>()) : t.snd;
  t.val = u64Of(j, "val", 0);
  t.asst = u64Of(j, "asst", 0);
  t.fv = u64Of(j, "fv", 0);
  t.lv = u64Of(j, "lv", 0);
  t.lx = u64Of(j, "lx", 0);
  return t;
}

inline ScriptValue valueSpec(const Scenario& sc, const json& v) {
  if (v.is_number()) return ScriptValue::nat(v.get<u64>());
  if (v.is_object()) {
    requireKeys(v, {"int", "hex", "addr", "secret"}, "value");
    if (v.contains("int")) return ScriptValue::nat(v.at("int").get<u64>());
    if (v.contains("hex")) return ScriptValue::bytes(hexDecode(v.at("hex").get<std::string>()));
    if (v.contains("addr"))
      return ScriptValue::bytes(sc.resolveAddress(v.at("addr").get<std::string>()).encoding());
    if (v.contains("secret"))
      return ScriptValue::bytes(sc.resolveSecret(v.at("secret").get<std::string>()));
  }
  throw ScenarioError("ValidationError: bad value spec");
}

// One witness entry of a submit action. Signature helpers compute the
// same messages the authorization layer checks.
inline Bytes witnessFromJson(const Scenario& sc, const json& w,
                             const std::vector<Transaction>& group, u64 index) {
  if (w.is_string()) {
    std::string s = w.get<std::string>();
    if (s.rfind("hex:", 0) == 0) return hexDecode(s.substr(4));
    return sc.resolveSecret(s);
  }
  requireKeys(w, {"hex", "int", "secret", "addr", "sig", "sigval", "sigtxid"}, "witness");
  if (w.contains("hex")) return hexDecode(w.at("hex").get<std::string>());
  if (w.contains("int")) return u64beBytes(w.at("int").get<u64>());
  if (w.contains("secret")) return sc.resolveSecret(w.at("secret").get<std::string>());
  if (w.contains("addr"))
    return sc.resolveAddress(w.at("addr").get<std::string>()).encoding();
  if (w.contains("sig")) {
    const json& s = w.at("sig");
    requireKeys(s, {"user", "index"}, "sig");
    const KeyPair& kp = sc.resolveUser(s.at("user").get<std::string>());
    u64 i = u64Of(s, "index", index);
    return sc.provider->sign(kp.privateKey, groupIndexMessage(group, i));
  }
  if (w.contains("sigval")) {
    const json& s = w.at("sigval");
    requireKeys(s, {"user", "snd", "value"}, "sigval");
    const KeyPair& kp = sc.resolveUser(s.at("user").get<std::string>());
    Address snd = s.contains("snd") ? sc.resolveAddress(s.at("snd").get<std::string>())
                                    : group[index].snd;
    return sc.provider->sign(kp.privateKey, versigMessage(snd, valueSpec(sc, s.at("value"))));
  }
  if (w.contains("sigtxid")) {
    const json& s = w.at("sigtxid");
    requireKeys(s, {"user", "index"}, "sigtxid");
    const KeyPair& kp = sc.resolveUser(s.at("user").get<std::string>());
    u64 i = u64Of(s, "index", index);
    Bytes msg = versigMessage(group[i].snd, ScriptValue::bytes(txId(group[i])));
    return sc.provider->sign(kp.privateKey, msg);
  }
  throw ScenarioError("ValidationError: bad witness spec");
}

inline std::shared_ptr<sim::Strategy> strategyFromJson(const Scenario& sc, const json& j) {
  requireKeys(j, {"user", "kind", "params"}, "strategy");
  std::string kind = j.at("kind").get<std::string>();
  json p = j.contains("params") ? j.at("params") : json::object();
  std::string user = j.at("user").get<std::string>();
  const KeyPair& kp = sc.resolveUser(user);
  Address self = sc.userAddrs.at(user);

  auto bundleOf = [&](const char* key) -> const ContractBundle& {
    std::string name = p.at(key).get<std::string>();
    auto it = sc.contracts.find(name);
    if (it == sc.contracts.end())
      throw ScenarioError("ValidationError: unknown contract '" + name + "'");
    return it->second;
  };

  if (kind == "idle") return std::make_shared<sim::IdleStrategy>();
  if (kind == "htlc-reveal") {
    sim::HtlcRevealStrategy::Params sp;
    sp.htlc = bundleOf("contract").address("htlc");
    sp.self = self;
    sp.secret = sc.resolveSecret(p.at("secret").get<std::string>());
    sp.revealRound = u64Of(p, "revealRound", 0);
    sp.window = u64Of(p, "window", 2);
    return std::make_shared<sim::HtlcRevealStrategy>(sp);
  }
  if (kind == "htlc-timeout") {
    sim::HtlcTimeoutStrategy::Params sp;
    sp.htlc = bundleOf("contract").address("htlc");
    sp.self = self;
    sp.counterparty = sc.resolveAddress(p.at("counterparty").get<std::string>());
    sp.tmax = p.at("tmax").get<u64>();
    sp.window = u64Of(p, "window", 2);
    return std::make_shared<sim::HtlcTimeoutStrategy>(sp);
  }
  if (kind == "oracle-sign") {
    sim::OracleSignStrategy::Params sp;
    sp.oracle = bundleOf("contract").address("oracle");
    sp.privateKey = kp.privateKey;
    if (p.contains("outcome")) sp.outcome = p.at("outcome").get<u64>();
    sp.signRound = u64Of(p, "signRound", 0);
    sp.provider = sc.provider;
    return std::make_shared<sim::OracleSignStrategy>(sp);
  }
  if (kind == "oracle-claim") {
    sim::OracleClaimStrategy::Params sp;
    sp.oracle = bundleOf("contract").address("oracle");
    sp.self = self;
    sp.oracleKey = sc.resolveUser(p.at("oracleUser").get<std::string>()).publicKey;
    sp.watchedOutcome = u64Of(p, "outcome", 0);
    if (p.contains("timeoutRound")) sp.timeoutRound = p.at("timeoutRound").get<u64>();
    sp.window = u64Of(p, "window", 2);
    sp.provider = sc.provider;
    return std::make_shared<sim::OracleClaimStrategy>(sp);
  }
  if (kind == "pp-withdraw") {
    sim::PpWithdrawStrategy::Params sp;
    sp.pp = bundleOf("contract").address("pp");
    sp.self = self;
    sp.v = p.at("v").get<u64>();
    sp.period = p.at("p").get<u64>();
    sp.d = p.at("d").get<u64>();
    sp.lease = p.at("n").get<u64>();
    sp.windows = u64Of(p, "windows", 5);
    return std::make_shared<sim::PpWithdrawStrategy>(sp);
  }
  if (kind == "lottery-player") {
    const ContractBundle& bundle = bundleOf("contract");
    bool roleA = p.at("role").get<std::string>() == "a";
    sim::LotteryPlayerStrategy::Params sp;
    sp.roleA = roleA;
    sp.self = self;
    sp.other = sc.resolveAddress(p.at("other").get<std::string>());
    sp.privateKey = kp.privateKey;
    sp.otherPublicKey = sc.resolveUser(p.at("other").get<std::string>()).publicKey;
    sp.secret = sc.resolveSecret(p.at("secret").get<std::string>());
    const json& oh = p.at("otherHash");
    sp.otherHash = oh.is_object() && oh.contains("ofSecret")
                       ? sha256(sc.resolveSecret(oh.at("ofSecret").get<std::string>()))
                       : hexDecode(oh.get<std::string>());
    sp.ownHtlc = bundle.address(roleA ? "htlc-a" : "htlc-b");
    sp.otherHtlc = bundle.address(roleA ? "htlc-b" : "htlc-a");
    sp.lottery = bundle.address("lottery");
    sp.setupGroup = *bundle.setupGroup;
    sp.revealRound = u64Of(p, "revealRound", 1);
    sp.tmax = p.at("tmax").get<u64>();
    sp.withholdSecret = p.contains("withhold") && p.at("withhold").get<bool>();
    sp.provider = sc.provider;
    return std::make_shared<sim::LotteryPlayerStrategy>(sp);
  }
  if (kind == "duplicate-submit") {
    sim::DuplicateSubmitStrategy::Params sp;
    sp.tx = txFromJson(sc, p.at("tx"));
    sp.privateKey = kp.privateKey;
    sp.firstRound = u64Of(p, "firstRound", 0);
    sp.provider = sc.provider;
    return std::make_shared<sim::DuplicateSubmitStrategy>(sp);
  }
  if (kind == "random-ledger") {
    sim::RandomLedgerStrategy::Params sp;
    sp.key = kp;
    sp.self = self;
    for (const auto& [name, addr] : sc.userAddrs) {
      if (addr != self) sp.peers.push_back(addr);
    }
    sp.actPercent = u64Of(p, "actPercent", 45);
    sp.enableGenBurn = !p.contains("enableGenBurn") || p.at("enableGenBurn").get<bool>();
    sp.provider = sc.provider;
    return std::make_shared<sim::RandomLedgerStrategy>(sp);
  }
  throw ScenarioError("ValidationError: unknown strategy kind '" + kind + "'");
}

}  // namespace scenario_detail

inline ScenarioResult executeScenario(const Scenario& sc) {
  using scenario_detail::requireKeys;
  using scenario_detail::u64Of;

  ScenarioResult result;
  sim::Run& run = result.run;
  run.seed = sc.seed;
  run.states.push_back(NetState{initialState(sc.genesis), {}});

  auto applyLabel = [&](const Label& l) -> std::optional<StepError> {
    auto next = netStep(run.current(), l, *sc.provider);
    if (!next.ok()) return next.error();
    run.labels.push_back(l);
    run.states.push_back(std::move(next.value()));
    return std::nullopt;
  };

  // Optional genesis funding: payments from the initial user.
  if (sc.doc.at("genesis").contains("fund")) {
    const std::string initial = sc.doc.at("genesis").at("initialUser").get<std::string>();
    const KeyPair& kp = sc.resolveUser(initial);
    for (const json& f : sc.doc.at("genesis").at("fund")) {
      requireKeys(f, {"user", "amount"}, "fund");
      auto t = tx::pay(sc.userAddrs.at(initial),
                       sc.resolveAddress(f.at("user").get<std::string>()),
                       f.at("amount").get<u64>(), kAlgo,
                       {0, std::min<u64>(sc.genesis.ledger.deltaMax, 8), 0});
      Bytes sig = sc.provider->sign(kp.privateKey, groupIndexMessage({t}, 0));
      applyLabel(Label::witnessLabel(sig));
      if (auto err = applyLabel(Label::authGroup({{sig}}, {t}))) {
        result.fail(std::string("genesis funding failed: ") + stepCodeName(err->code));
        return result;
      }
    }
  }

  if (sc.doc.contains("actions")) {
    for (const json& a : sc.doc.at("actions")) {
      requireKeys(a, {"op", "count", "hex", "secret", "group", "witnesses", "expect"},
                  "action");
      std::string op = a.at("op").get<std::string>();
      if (op == "tick") {
        u64 count = u64Of(a, "count", 1);
        for (u64 i = 0; i < count; ++i) applyLabel(Label::tick());
      } else if (op == "witness") {
        Bytes w = a.contains("secret")
                      ? sc.resolveSecret(a.at("secret").get<std::string>())
                      : hexDecode(a.at("hex").get<std::string>());
        applyLabel(Label::witnessLabel(w));
      } else if (op == "submit") {
        std::vector<Transaction> group;
        for (const json& tj : a.at("group"))
          group.push_back(scenario_detail::txFromJson(sc, tj));
        std::vector<std::vector<Bytes>> seqs(group.size());
        if (a.contains("witnesses")) {
          const json& ws = a.at("witnesses");
          if (ws.size() != group.size())
            throw ScenarioError("ValidationError: witness count must match the group");
          for (std::size_t i = 0; i < group.size(); ++i) {
            for (const json& w : ws[i])
              seqs[i].push_back(
                  scenario_detail::witnessFromJson(sc, w, group, static_cast<u64>(i)));
          }
        }
        for (const auto& seq : seqs) {
          for (const auto& w : seq) {
            if (run.current().knowledge.count(w) == 0) applyLabel(Label::witnessLabel(w));
          }
        }
        auto err = applyLabel(Label::authGroup(seqs, group));
        std::optional<std::string> expectCode;
        if (a.contains("expect")) expectCode = a.at("expect").get<std::string>();
        if (expectCode) {
          if (!err) {
            result.fail("expected " + *expectCode + " but the group was applied");
          } else if (stepCodeName(err->code) != *expectCode) {
            result.fail("expected " + *expectCode + " but got " + stepCodeName(err->code));
          } else {
            result.note("rejected as expected: " + *expectCode);
          }
        } else if (err) {
          result.fail(std::string("step failed: ") + stepCodeName(err->code) +
                      (err->detail.empty() ? "" : " (" + err->detail + ")"));
        }
      } else {
        throw ScenarioError("ValidationError: unknown action op '" + op + "'");
      }
      if (result.exitCode != 0) break;
    }
  } else if (sc.doc.contains("strategies")) {
    std::vector<std::shared_ptr<sim::Strategy>> strategies;
    for (const json& s : sc.doc.at("strategies"))
      strategies.push_back(scenario_detail::strategyFromJson(sc, s));
    std::unique_ptr<sim::Adversary> adv;
    if (sc.adversary == "fifo") adv = std::make_unique<sim::FifoAdversary>();
    else if (sc.adversary == "random") adv = std::make_unique<sim::RandomAdversary>();
    else adv = std::make_unique<sim::DelayAdversary>(sc.deltaAdv);
    sim::SimConfig cfg;
    cfg.maxRounds = sc.maxRounds;
    cfg.seed = sc.seed;
    cfg.deltaAdv = sc.deltaAdv;
    cfg.provider = sc.provider;

    sim::Run simulated = sim::simulate(run.current(), strategies, *adv, cfg);
    // Prepend the funding prefix already applied above.
    for (std::size_t i = 0; i < simulated.labels.size(); ++i) {
      run.labels.push_back(simulated.labels[i]);
      run.states.push_back(simulated.states[i + 1]);
    }
    run.rejections = simulated.rejections;
    if (simulated.harnessError) {
      result.fail(std::string("harness error: ") + simulated.harnessError->detail);
    }
  }

  if (sc.doc.contains("properties") && result.exitCode == 0) {
    for (const json& pr : sc.doc.at("properties")) {
      std::string id;
      sim::PropertyOptions opts;
      opts.provider = sc.provider;
      if (pr.is_string()) {
        id = pr.get<std::string>();
      } else {
        requireKeys(pr, {"id", "account"}, "property");
        id = pr.at("id").get<std::string>();
        if (pr.contains("account"))
          opts.account = sc.resolveAddress(pr.at("account").get<std::string>());
      }
      auto verdict = sim::checkProperty(run, id, opts);
      if (!verdict.pass) {
        result.fail("property " + id + " failed: " + verdict.message +
                    (verdict.failIndex ? " at label " + std::to_string(*verdict.failIndex)
                                       : ""));
      } else {
        result.note("property " + id + ": ok");
      }
    }
  }

  result.trace = sim::serializeTrace(run);
  return result;
}

}  // namespace asc1
