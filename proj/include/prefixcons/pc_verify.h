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

#ifndef PREFIXCONS_PC_VERIFY_H
#define PREFIXCONS_PC_VERIFY_H

#include <map>
#include <memory>
#include <optional>
#include <span>

#include "prefixcons/pc_types.h"

namespace prefixcons {

/**
 * Certification rule of each stage applied to the vote values of a quorum.
 * Round 1: x (and y = mcp for the optimistic variant). Later rounds: mcp and
 * mce. Throws ProtocolViolation when a stage that needs mce has conflicting
 * values; the optimistic round-3 stage returns mce only when it exists.
 */
Certified certify_values(const PcConfig &cfg, uint8_t round, std::span<const PrefixVector> values);

inline Certified qc1_certify(const PcConfig &cfg, std::span<const PrefixVector> v) { return certify_values(cfg, 1, v); }
inline Certified qc2_certify(const PcConfig &cfg, std::span<const PrefixVector> v) { return certify_values(cfg, 2, v); }
inline Certified qc3_certify(const PcConfig &cfg, std::span<const PrefixVector> v) { return certify_values(cfg, 3, v); }
inline Certified qc4_certify(const PcConfig &cfg, std::span<const PrefixVector> v) { return certify_values(cfg, 4, v); }

/** The optimistic round-3 value: x when y_e extends to x, otherwise y_e. */
PrefixVector optimistic_z(const PrefixVector &x, const PrefixVector &y_e);

/** Builds and signs a vote under cfg's codec. */
VotePtr make_vote(const PcConfig &cfg, const Signer &signer, uint8_t round, PrefixVector value,
                  std::vector<QcRef> justify);

/**
 * Verifies votes and certificates, caching results per immutable object.
 * One verifier serves one party; it is not thread-safe.
 */
class QcVerifier {
 public:
  explicit QcVerifier(const SignatureScheme &scheme) : scheme_(&scheme) {}

  const SignatureScheme &scheme() const { return *scheme_; }

  /** True iff the vote is well-formed for cfg, correctly signed and justified. */
  bool verify_vote(const PcConfig &cfg, const VotePtr &vote);

  /** Values certified by a QC built from round-`round` votes; nullopt if invalid. */
  std::optional<Certified> certify(const PcConfig &cfg, uint8_t round, const QcRef &qc);

  bool predicate_low(const PcConfig &cfg, const PrefixVector &v, const QcRef &proof);
  bool predicate_high(const PcConfig &cfg, const PrefixVector &v, const QcRef &proof);

  size_t cache_size() const { return votes_.size() + qcs_.size(); }

 private:
  struct Key {
    const void *object;
    InstanceId instance;
    uint8_t round;
    uint32_t capacity;
    PcVariant variant;
    Codec codec;

    friend auto operator<=>(const Key &, const Key &) = default;
  };
  static Key key(const PcConfig &cfg, const void *object, uint8_t round) {
    return Key{object, cfg.instance, round, cfg.capacity, cfg.variant, cfg.codec};
  }

  bool verify_vote_uncached(const PcConfig &cfg, const Vote &vote);
  std::optional<Certified> certify_uncached(const PcConfig &cfg, uint8_t round, const QcRef &qc);
  std::optional<Certified> certify_plain(const PcConfig &cfg, uint8_t round, const PlainQc &qc);
  /** Stage of an output proof: round of its votes, or 3 for compact QC3; 0 if unusable. */
  uint8_t proof_stage(const PcConfig &cfg, const QcRef &proof) const;

  const SignatureScheme *scheme_;
  // Cached objects are kept alive so their addresses stay unique.
  std::map<Key, std::pair<bool, VotePtr>> votes_;
  std::map<Key, std::pair<std::optional<Certified>, QcRef>> qcs_;
};

/** Stateless forms of the public predicates. */
bool predicate_low(const PcConfig &cfg, const SignatureScheme &scheme, const PrefixVector &v, const QcRef &proof);
bool predicate_high(const PcConfig &cfg, const SignatureScheme &scheme, const PrefixVector &v, const QcRef &proof);

}  // namespace prefixcons

#endif
