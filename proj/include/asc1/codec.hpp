#pragma once

#include <vector>

#include "asc1/bytes.hpp"
#include "asc1/crypto.hpp"
#include "asc1/ledger.hpp"
#include "asc1/script.hpp"

namespace asc1 {

constexpr std::uint8_t kTagGroupIndexMsg = 0x47;
constexpr std::uint8_t kTagVersigMsg = 0x56;

// Message signed by multisig authorizers: the whole atomic group (each
// transaction length-prefixed) followed by the index of the authorized
// transaction, so a signature binds to its position in the group.
inline Bytes groupIndexMessage(const std::vector<Transaction>& group, u64 index) {
  ByteWriter w;
  w.byte(kTagGroupIndexMsg);
  w.u32be(static_cast<u32>(group.size()));
  for (const auto& t : group) w.lengthPrefixed(encodeTransaction(t));
  w.u64be(index);
  return w.take();
}

// Message checked by the versig operator: the sender address of the
// enclosing transaction paired with the evaluated data value.
inline Bytes versigMessage(const Address& snd, const ScriptValue& value) {
  ByteWriter w;
  w.byte(kTagVersigMsg);
  w.lengthPrefixed(snd.encoding());
  ByteWriter vw;
  codec::writeScriptValue(vw, value);
  w.lengthPrefixed(vw.take());
  return w.take();
}

// Deterministic whole-state encoding used for state digests in traces
// and determinism checks. Maps iterate in key order, so the encoding is
// canonical by construction.
inline Bytes encodeState(const BlockchainState& s) {
  ByteWriter w;
  w.u32be(static_cast<u32>(s.accounts.size()));
  for (const auto& [addr, bal] : s.accounts) {
    w.lengthPrefixed(addr.encoding());
    w.u32be(static_cast<u32>(bal.entries().size()));
    for (const auto& [asset, amt] : bal.entries()) {
      w.u64be(asset);
      w.u64be(amt);
    }
  }
  w.u64be(s.round);
  w.u32be(static_cast<u32>(s.recentTxs.size()));
  for (const auto& [enc, tx] : s.recentTxs) w.lengthPrefixed(enc);
  w.u32be(static_cast<u32>(s.assetMap.size()));
  for (const auto& [asset, info] : s.assetMap) {
    w.u64be(asset);
    w.lengthPrefixed(info.manager.encoding());
    w.lengthPrefixed(info.creator.encoding());
  }
  w.u32be(static_cast<u32>(s.leaseMap.size()));
  for (const auto& [key, until] : s.leaseMap) {
    w.lengthPrefixed(key.first.encoding());
    w.u64be(key.second);
    w.u64be(until);
  }
  w.u32be(static_cast<u32>(s.freezeMap.size()));
  for (const auto& [addr, assets] : s.freezeMap) {
    w.lengthPrefixed(addr.encoding());
    w.u32be(static_cast<u32>(assets.size()));
    for (AssetId a : assets) w.u64be(a);
  }
  w.u64be(s.nextAssetId);
  return w.take();
}

inline Bytes stateDigest(const BlockchainState& s) { return sha256(encodeState(s)); }

inline BlockchainState decodeState(const Bytes& b, const LedgerConfig& cfg = LedgerConfig{}) {
  ByteReader r(b);
  BlockchainState s;
  s.config = cfg;
  u32 accounts = r.u32be();
  for (u32 i = 0; i < accounts; ++i) {
    Address addr = decodeAddress(r.lengthPrefixed());
    u32 entries = r.u32be();
    std::map<AssetId, u64> bal;
    for (u32 k = 0; k < entries; ++k) {
      u64 asset = r.u64be();
      bal[asset] = r.u64be();
    }
    s.accounts.emplace(std::move(addr), Balance(std::move(bal)));
  }
  s.round = r.u64be();
  u32 recent = r.u32be();
  for (u32 i = 0; i < recent; ++i) {
    Bytes enc = r.lengthPrefixed();
    s.recentTxs.emplace(enc, decodeTransaction(enc));
  }
  u32 assets = r.u32be();
  for (u32 i = 0; i < assets; ++i) {
    u64 id = r.u64be();
    Address manager = decodeAddress(r.lengthPrefixed());
    Address creator = decodeAddress(r.lengthPrefixed());
    s.assetMap[id] = AssetInfo{std::move(manager), std::move(creator)};
  }
  u32 leases = r.u32be();
  for (u32 i = 0; i < leases; ++i) {
    Address addr = decodeAddress(r.lengthPrefixed());
    u64 lease = r.u64be();
    s.leaseMap[{std::move(addr), lease}] = r.u64be();
  }
  u32 freezes = r.u32be();
  for (u32 i = 0; i < freezes; ++i) {
    Address addr = decodeAddress(r.lengthPrefixed());
    u32 count = r.u32be();
    std::set<AssetId> ids;
    for (u32 k = 0; k < count; ++k) ids.insert(r.u64be());
    s.freezeMap.emplace(std::move(addr), std::move(ids));
  }
  s.nextAssetId = r.u64be();
  r.expectEnd();
  return s;
}

}  // namespace asc1
