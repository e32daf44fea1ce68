/**
 * Copyright 2026 The prefixcons Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *    http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "prefixcons/crypto.h"

#include <sodium.h>

#include <algorithm>
#include <set>

#include "prefixcons/bytes.h"

namespace prefixcons {

namespace {

void ensure_sodium() {
  static const bool ok = [] { return sodium_init() >= 0; }();
  if (!ok) throw std::runtime_error("libsodium initialization failed");
}

std::array<uint8_t, 32> blake2b(std::string_view domain, std::string_view data, const uint8_t *key = nullptr,
                                size_t keylen = 0) {
  ensure_sodium();
  crypto_generichash_state st;
  crypto_generichash_init(&st, key, keylen, 32);
  ByteWriter w;
  w.bytes(domain);
  crypto_generichash_update(&st, reinterpret_cast<const uint8_t *>(w.str().data()), w.size());
  crypto_generichash_update(&st, reinterpret_cast<const uint8_t *>(data.data()), data.size());
  std::array<uint8_t, 32> out;
  crypto_generichash_final(&st, out.data(), out.size());
  return out;
}

std::array<uint8_t, 32> derive_seed(std::string_view purpose, uint64_t seed, uint32_t party) {
  ByteWriter w;
  w.varint(seed);
  w.varint(party);
  return blake2b(purpose, w.str());
}

std::string tagged(const DomainTag &tag, std::string_view msg) {
  std::string out = tag.encode();
  out.append(msg);
  return out;
}

class MacScheme final : public SignatureScheme {
 public:
  MacScheme(size_t n, uint64_t seed) {
    for (uint32_t i = 0; i < n; i++) keys_.push_back(derive_seed("prefixcons/mac-key", seed, i));
  }

  std::string name() const override { return "mac"; }
  size_t signature_size() const override { return 32; }
  size_t num_parties() const override { return keys_.size(); }

  Signature sign(PartyId party, const DomainTag &tag, std::string_view msg) const override {
    if (party.index >= keys_.size()) throw KeyError("no key for party " + party.to_string());
    return Signature{party, mac(party, tag, msg)};
  }

  bool verify(PartyId party, const DomainTag &tag, std::string_view msg, const Signature &sig) const override {
    if (party.index >= keys_.size() || sig.signer != party || sig.bytes.size() != 32) return false;
    return sodium_memcmp(sig.bytes.data(), mac(party, tag, msg).data(), 32) == 0;
  }

 private:
  std::string mac(PartyId party, const DomainTag &tag, std::string_view msg) const {
    const auto &key = keys_[party.index];
    auto out = blake2b("prefixcons/mac", tagged(tag, msg), key.data(), key.size());
    return std::string(out.begin(), out.end());
  }

  std::vector<std::array<uint8_t, 32>> keys_;
};

class Ed25519Scheme final : public SignatureScheme {
 public:
  Ed25519Scheme(size_t n, uint64_t seed) {
    ensure_sodium();
    for (uint32_t i = 0; i < n; i++) {
      auto s = derive_seed("prefixcons/ed25519-seed", seed, i);
      Keypair kp;
      crypto_sign_seed_keypair(kp.pk.data(), kp.sk.data(), s.data());
      keys_.push_back(kp);
    }
  }

  std::string name() const override { return "ed25519"; }
  size_t signature_size() const override { return crypto_sign_BYTES; }
  size_t num_parties() const override { return keys_.size(); }

  Signature sign(PartyId party, const DomainTag &tag, std::string_view msg) const override {
    if (party.index >= keys_.size()) throw KeyError("no key for party " + party.to_string());
    std::string m = tagged(tag, msg);
    std::string sig(crypto_sign_BYTES, '\0');
    crypto_sign_detached(reinterpret_cast<uint8_t *>(sig.data()), nullptr, reinterpret_cast<const uint8_t *>(m.data()),
                         m.size(), keys_[party.index].sk.data());
    return Signature{party, std::move(sig)};
  }

  bool verify(PartyId party, const DomainTag &tag, std::string_view msg, const Signature &sig) const override {
    if (party.index >= keys_.size() || sig.signer != party || sig.bytes.size() != crypto_sign_BYTES) return false;
    std::string m = tagged(tag, msg);
    return crypto_sign_verify_detached(reinterpret_cast<const uint8_t *>(sig.bytes.data()),
                                       reinterpret_cast<const uint8_t *>(m.data()), m.size(),
                                       keys_[party.index].pk.data()) == 0;
  }

 private:
  struct Keypair {
    std::array<uint8_t, crypto_sign_PUBLICKEYBYTES> pk;
    std::array<uint8_t, crypto_sign_SECRETKEYBYTES> sk;
  };
  std::vector<Keypair> keys_;
};

}  // namespace

const char *msg_kind_name(MsgKind kind) {
  switch (kind) {
    case MsgKind::kVote1: return "VOTE-1";
    case MsgKind::kVote2: return "VOTE-2";
    case MsgKind::kVote3: return "VOTE-3";
    case MsgKind::kVote4: return "VOTE-4";
    case MsgKind::kNewView: return "NEW-VIEW";
    case MsgKind::kEmptyView: return "EMPTY-VIEW";
    case MsgKind::kNewCommit: return "NEW-COMMIT";
    case MsgKind::kProposal: return "PROPOSAL";
  }
  return "?";
}

std::string InstanceId::to_string() const {
  return "proto" + std::to_string(protocol) + "/s" + std::to_string(slot) + "/w" + std::to_string(view) + "/l" +
         std::to_string(lane);
}

std::string DomainTag::encode() const {
  ByteWriter w;
  w.raw("PCX");
  w.u8(static_cast<uint8_t>(kind));
  w.u8(instance.protocol);
  w.varint(instance.slot);
  w.varint(instance.view);
  w.varint(instance.lane);
  return w.take();
}

Digest Digest::from_value(const Value &v) {
  std::array<uint8_t, kSize> b{};
  std::copy_n(v.bytes().begin(), std::min(v.bytes().size(), kSize), b.begin());
  return Digest(b);
}

std::string Digest::hex() const { return to_hex(str()); }

Digest hash_object(std::string_view encoded) { return Digest(blake2b("prefixcons/object", encoded)); }

const Digest &hbot() {
  static const Digest d(blake2b("prefixcons/bot", ""));
  return d;
}

const Value &hbot_value() {
  static const Value v = hbot().to_value();
  return v;
}

Signature Signer::sign(const DomainTag &tag, std::string_view msg) const { return scheme_->sign(id_, tag, msg); }

Signer SignatureScheme::signer(PartyId party) const {
  if (party.index >= num_parties()) throw KeyError("no key for party " + party.to_string());
  return Signer(this, party);
}

std::unique_ptr<SignatureScheme> make_mac_scheme(size_t n, uint64_t seed) {
  return std::make_unique<MacScheme>(n, seed);
}

std::unique_ptr<SignatureScheme> make_ed25519_scheme(size_t n, uint64_t seed) {
  return std::make_unique<Ed25519Scheme>(n, seed);
}

std::unique_ptr<SignatureScheme> make_scheme(std::string_view name, size_t n, uint64_t seed) {
  if (name == "mac") return make_mac_scheme(n, seed);
  if (name == "ed25519") return make_ed25519_scheme(n, seed);
  throw std::invalid_argument("unknown signature backend '" + std::string(name) + "'");
}

AggregateSignature aggregate(const SignatureScheme &scheme, const DomainTag &tag,
                             std::span<const AggregateEntry> entries) {
  std::vector<const AggregateEntry *> sorted;
  for (const auto &e : entries) sorted.push_back(&e);
  std::sort(sorted.begin(), sorted.end(), [](auto *a, auto *b) { return a->signer < b->signer; });
  for (size_t i = 0; i < sorted.size(); i++) {
    if (i && sorted[i]->signer == sorted[i - 1]->signer)
      throw AggregationError("duplicate signer " + sorted[i]->signer.to_string());
    if (!scheme.verify(sorted[i]->signer, tag, sorted[i]->message, sorted[i]->sig))
      throw AggregationError("invalid signature from " + sorted[i]->signer.to_string());
  }

  AggregateSignature agg;
  if (sorted.empty()) return agg;
  size_t common = sorted[0]->message.size();
  bool identical = true;
  for (auto *e : sorted) {
    const auto &m = e->message;
    identical = identical && m == sorted[0]->message;
    size_t k = 0;
    while (k < common && k < m.size() && m[k] == sorted[0]->message[k]) k++;
    common = k;
  }
  if (identical) {
    agg.messages.common = sorted[0]->message;
  } else {
    agg.messages.common = sorted[0]->message.substr(0, common);
    for (auto *e : sorted) agg.messages.suffixes.push_back(e->message.substr(common));
  }
  std::vector<Signature> sigs;
  for (auto *e : sorted) {
    agg.signers.push_back(e->signer);
    sigs.push_back(e->sig);
  }
  agg.blob = concat_signatures(sigs);
  return agg;
}

bool verify_aggregate(const SignatureScheme &scheme, const DomainTag &tag, const AggregateSignature &agg) {
  if (!agg.messages.suffixes.empty() && agg.messages.suffixes.size() != agg.signers.size()) return false;
  std::vector<std::string> messages;
  for (size_t i = 0; i < agg.signers.size(); i++) messages.push_back(agg.messages.message(i));
  return verify_multi(scheme, tag, agg.signers, messages, agg.blob);
}

std::string concat_signatures(std::span<const Signature> sigs) {
  std::string blob;
  for (const auto &s : sigs) blob += s.bytes;
  return blob;
}

bool verify_multi(const SignatureScheme &scheme, const DomainTag &tag, std::span<const PartyId> signers,
                  std::span<const std::string> messages, std::string_view blob) {
  size_t k = scheme.signature_size();
  if (signers.size() != messages.size() || blob.size() != k * signers.size()) return false;
  for (size_t i = 0; i < signers.size(); i++) {
    if (i && !(signers[i - 1] < signers[i])) return false;
    Signature sig{signers[i], std::string(blob.substr(i * k, k))};
    if (!scheme.verify(signers[i], tag, messages[i], sig)) return false;
  }
  return true;
}

std::string to_hex(std::string_view bytes) {
  static const char *kHex = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (unsigned char c : bytes) {
    out.push_back(kHex[c >> 4]);
    out.push_back(kHex[c & 15]);
  }
  return out;
}

std::string from_hex(std::string_view hex) {
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
  };
  std::string digits;
  for (char c : hex) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    if (nibble(c) < 0) throw std::invalid_argument(std::string("non-hex character '") + c + "'");
    digits.push_back(c);
  }
  if (digits.size() % 2) throw std::invalid_argument("odd number of hex digits");
  std::string out;
  for (size_t i = 0; i < digits.size(); i += 2)
    out.push_back(static_cast<char>(nibble(digits[i]) * 16 + nibble(digits[i + 1])));
  return out;
}

}  // namespace prefixcons
