#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>

#include <sodium.h>

#include "asc1/bytes.hpp"

namespace asc1 {

inline Bytes sha256(const Bytes& data) {
  Bytes digest(crypto_hash_sha256_BYTES);
  crypto_hash_sha256(digest.data(), data.data(), data.size());
  return digest;
}

struct KeyPair {
  Bytes publicKey;
  Bytes privateKey;
};

// Signature backend. The default is Ed25519 (matches the ed25519verify
// opcode of the compilation target); a deterministic registry-backed
// provider is available for reproducible fixtures and fast fuzzing.
class SignatureProvider {
 public:
  virtual ~SignatureProvider() = default;
  virtual std::string name() const = 0;
  virtual KeyPair keyFromSeed(const Bytes& seed32) const = 0;
  virtual Bytes sign(const Bytes& privateKey, const Bytes& msg) const = 0;
  virtual bool verify(const Bytes& publicKey, const Bytes& msg, const Bytes& sig) const = 0;
};

class Ed25519Provider final : public SignatureProvider {
 public:
  Ed25519Provider() {
    if (sodium_init() < 0) throw std::runtime_error("sodium_init failed");
  }

  std::string name() const override { return "ed25519"; }

  KeyPair keyFromSeed(const Bytes& seed32) const override {
    Bytes seed = seed32;
    seed.resize(crypto_sign_SEEDBYTES, 0);
    KeyPair kp;
    kp.publicKey.resize(crypto_sign_PUBLICKEYBYTES);
    kp.privateKey.resize(crypto_sign_SECRETKEYBYTES);
    crypto_sign_seed_keypair(kp.publicKey.data(), kp.privateKey.data(), seed.data());
    return kp;
  }

  Bytes sign(const Bytes& privateKey, const Bytes& msg) const override {
    if (privateKey.size() != crypto_sign_SECRETKEYBYTES)
      throw std::invalid_argument("malformed ed25519 private key");
    Bytes sig(crypto_sign_BYTES);
    crypto_sign_detached(sig.data(), nullptr, msg.data(), msg.size(), privateKey.data());
    return sig;
  }

  bool verify(const Bytes& publicKey, const Bytes& msg, const Bytes& sig) const override {
    if (publicKey.size() != crypto_sign_PUBLICKEYBYTES) return false;
    if (sig.size() != crypto_sign_BYTES) return false;
    return crypto_sign_verify_detached(sig.data(), msg.data(), msg.size(), publicKey.data()) == 0;
  }
};

// Deterministic test provider. Public keys are hashes of the seed;
// verification replays the signing function through a key registry, so
// signatures cannot be produced for keys the provider never generated.
class TestProvider final : public SignatureProvider {
 public:
  std::string name() const override { return "test"; }

  KeyPair keyFromSeed(const Bytes& seed32) const override {
    Bytes material = toBytes("asc1-test-key");
    material.insert(material.end(), seed32.begin(), seed32.end());
    KeyPair kp;
    kp.publicKey = sha256(material);
    kp.privateKey = seed32;
    {
      std::lock_guard<std::mutex> lock(mutex_);
      registry_[kp.publicKey] = kp.privateKey;
    }
    return kp;
  }

  Bytes sign(const Bytes& privateKey, const Bytes& msg) const override {
    Bytes material = toBytes("asc1-test-sig");
    material.insert(material.end(), privateKey.begin(), privateKey.end());
    material.insert(material.end(), msg.begin(), msg.end());
    return sha256(material);
  }

  bool verify(const Bytes& publicKey, const Bytes& msg, const Bytes& sig) const override {
    if (sig.size() != crypto_hash_sha256_BYTES) return false;
    Bytes privateKey;
    {
      std::lock_guard<std::mutex> lock(mutex_);
      auto it = registry_.find(publicKey);
      if (it == registry_.end()) return false;
      privateKey = it->second;
    }
    return sign(privateKey, msg) == sig;
  }

 private:
  mutable std::mutex mutex_;
  mutable std::map<Bytes, Bytes> registry_;
};

inline const SignatureProvider& ed25519Provider() {
  static Ed25519Provider provider;
  return provider;
}

}  // namespace asc1
