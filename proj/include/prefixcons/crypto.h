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

#ifndef PREFIXCONS_CRYPTO_H
#define PREFIXCONS_CRYPTO_H

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "prefixcons/prefix.h"

namespace prefixcons {

struct PartyId {
  uint32_t index = 0;

  constexpr PartyId() = default;
  constexpr explicit PartyId(uint32_t i) : index(i) {}
  friend constexpr auto operator<=>(PartyId, PartyId) = default;
  std::string to_string() const { return "p" + std::to_string(index); }
};

class KeyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class AggregationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class MsgKind : uint8_t {
  kVote1 = 1,
  kVote2 = 2,
  kVote3 = 3,
  kVote4 = 4,
  kNewView = 5,
  kEmptyView = 6,
  kNewCommit = 7,
  kProposal = 8,
};

const char *msg_kind_name(MsgKind kind);

/** Identifies one protocol instance: a PC lane inside a view inside a slot. */
struct InstanceId {
  uint8_t protocol = 0;
  uint64_t slot = 0;
  uint64_t view = 0;
  uint32_t lane = 0;

  friend auto operator<=>(const InstanceId &, const InstanceId &) = default;
  std::string to_string() const;
};

/** Every signed byte string is prefixed with exactly one tag. */
struct DomainTag {
  MsgKind kind = MsgKind::kVote1;
  InstanceId instance;

  friend bool operator==(const DomainTag &, const DomainTag &) = default;
  std::string encode() const;
};

struct Signature {
  PartyId signer;
  std::string bytes;

  friend bool operator==(const Signature &, const Signature &) = default;
};

/** Fixed-width hash output. */
class Digest {
 public:
  static constexpr size_t kSize = 32;

  Digest() { bytes_.fill(0); }
  explicit Digest(const std::array<uint8_t, kSize> &b) : bytes_(b) {}
  static Digest from_value(const Value &v);

  const std::array<uint8_t, kSize> &bytes() const { return bytes_; }
  std::string str() const { return std::string(bytes_.begin(), bytes_.end()); }
  Value to_value() const { return Value(str()); }
  std::string hex() const;

  friend auto operator<=>(const Digest &, const Digest &) = default;

 private:
  std::array<uint8_t, kSize> bytes_;
};

/** Hash of an encoded object. */
Digest hash_object(std::string_view encoded);

/** The distinguished digest of "no proposal". */
const Digest &hbot();
const Value &hbot_value();

class SignatureScheme;

/** Signing capability for one party; the only way protocol code can produce signatures. */
class Signer {
 public:
  Signer(const SignatureScheme *scheme, PartyId id) : scheme_(scheme), id_(id) {}
  PartyId id() const { return id_; }
  Signature sign(const DomainTag &tag, std::string_view msg) const;
  const SignatureScheme &scheme() const { return *scheme_; }

 private:
  const SignatureScheme *scheme_;
  PartyId id_;
};

class SignatureScheme {
 public:
  virtual ~SignatureScheme() = default;

  virtual std::string name() const = 0;
  /** kappa_s: bytes per individual signature. */
  virtual size_t signature_size() const = 0;
  /** kappa_h: bytes per digest. */
  size_t hash_size() const { return Digest::kSize; }
  virtual size_t num_parties() const = 0;

  /** Throws KeyError when `party` has no key. */
  virtual Signature sign(PartyId party, const DomainTag &tag, std::string_view msg) const = 0;
  virtual bool verify(PartyId party, const DomainTag &tag, std::string_view msg, const Signature &sig) const = 0;

  Signer signer(PartyId party) const;
};

/** Keyed-BLAKE2b test scheme; the verifier holds every key. */
std::unique_ptr<SignatureScheme> make_mac_scheme(size_t n, uint64_t seed);
/** Ed25519 via libsodium, keys derived deterministically from the seed. */
std::unique_ptr<SignatureScheme> make_ed25519_scheme(size_t n, uint64_t seed);
/** Looks up a backend by name ("mac" or "ed25519"); throws std::invalid_argument otherwise. */
std::unique_ptr<SignatureScheme> make_scheme(std::string_view name, size_t n, uint64_t seed);

/**
 * Distinct messages stored by shared-prefix compression: the message of the
 * i-th signer is common + suffixes[i]. Identical messages leave suffixes empty.
 */
struct CompressedMessages {
  std::string common;
  std::vector<std::string> suffixes;

  friend bool operator==(const CompressedMessages &, const CompressedMessages &) = default;
  std::string message(size_t i) const { return suffixes.empty() ? common : common + suffixes[i]; }
};

/** Aggregate as structured concatenation: signer list, message descriptors, concatenated signatures. */
struct AggregateSignature {
  std::vector<PartyId> signers;
  CompressedMessages messages;
  std::string blob;

  friend bool operator==(const AggregateSignature &, const AggregateSignature &) = default;
};

struct AggregateEntry {
  PartyId signer;
  std::string message;
  Signature sig;
};

/** Throws AggregationError on duplicate signers or any invalid input signature. */
AggregateSignature aggregate(const SignatureScheme &scheme, const DomainTag &tag,
                             std::span<const AggregateEntry> entries);

bool verify_aggregate(const SignatureScheme &scheme, const DomainTag &tag, const AggregateSignature &agg);

/** Concatenates signatures (all from distinct signers) into an aggregate blob. */
std::string concat_signatures(std::span<const Signature> sigs);

/**
 * Verifies a blob against externally reconstructed per-signer messages.
 * Signers must be strictly increasing.
 */
bool verify_multi(const SignatureScheme &scheme, const DomainTag &tag, std::span<const PartyId> signers,
                  std::span<const std::string> messages, std::string_view blob);

}  // namespace prefixcons

template <>
struct std::hash<prefixcons::PartyId> {
  size_t operator()(prefixcons::PartyId p) const noexcept { return std::hash<uint32_t>()(p.index); }
};

#endif
