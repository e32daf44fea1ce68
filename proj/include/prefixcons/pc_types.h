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

#ifndef PREFIXCONS_PC_TYPES_H
#define PREFIXCONS_PC_TYPES_H

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "prefixcons/crypto.h"
#include "prefixcons/prefix.h"

namespace prefixcons {

enum class PcVariant : uint8_t {
  kThreeRound = 1,
  kOptimistic = 2,
  kFast = 3,  // two rounds, needs n >= 5f+1
};

enum class Codec : uint8_t {
  kPlain = 1,
  kCompact = 2,
};

/** A locally formed quorum broke an invariant that n >= 3f+1 guarantees. */
class ProtocolViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

const char *variant_name(PcVariant v);
const char *codec_name(Codec c);

struct PcConfig {
  uint32_t n = 4;
  uint32_t f = 1;
  uint32_t capacity = 4;  // L
  PcVariant variant = PcVariant::kThreeRound;
  Codec codec = Codec::kPlain;
  InstanceId instance;

  uint32_t quorum() const { return n - f; }
  /** Support threshold used by QC1 certification. */
  uint32_t qc1_support() const { return variant == PcVariant::kFast ? n - 2 * f : f + 1; }
  uint8_t last_round() const;
  DomainTag tag(uint8_t round) const;

  /** Throws std::invalid_argument when resilience or codec constraints are violated. */
  void validate() const;
};

struct Vote;
struct PlainQc;
struct CompactQc1;
struct CompactQc2;
struct CompactQc3;

using VotePtr = std::shared_ptr<const Vote>;
using PlainQcPtr = std::shared_ptr<const PlainQc>;
using CompactQc1Ptr = std::shared_ptr<const CompactQc1>;
using CompactQc2Ptr = std::shared_ptr<const CompactQc2>;
using CompactQc3Ptr = std::shared_ptr<const CompactQc3>;

/** Any quorum certificate, plain or compact. */
using QcRef = std::variant<PlainQcPtr, CompactQc1Ptr, CompactQc2Ptr, CompactQc3Ptr>;

/** Identity of the object behind a QcRef (used as a cache key). */
const void *qc_address(const QcRef &qc);
bool qc_empty(const QcRef &qc);

/**
 * A round-r vote. The instance is implied by the enclosing message or
 * certificate. Plain votes carry one signature over `value`; compact votes
 * of rounds 1 and 2 carry one signature per padded prefix, lengths 0..L.
 */
struct Vote {
  uint8_t round = 1;
  PartyId voter;
  PrefixVector value;
  std::vector<std::string> sigs;
  std::vector<QcRef> justify;
};

/** Plain representation: the n-f constituent votes, all of the same round. */
struct PlainQc {
  std::vector<VotePtr> votes;

  uint8_t round() const { return votes.empty() ? 0 : votes.front()->round; }
};

/**
 * A vote-1 truncated at its first divergence from the certified x:
 * (l, v[l+1]) over the padded vote, or (L, BOT) when the vote equals x.
 */
struct TruncatedVote {
  uint32_t length = 0;
  Value next;

  friend bool operator==(const TruncatedVote &, const TruncatedVote &) = default;
};

struct CompactQc1 {
  PrefixVector x;
  std::vector<PartyId> signers;
  std::vector<TruncatedVote> reps;
  std::string blob;
};

/** Party j's vote-2 continues the common prefix with `next` at the following position. */
struct DivergenceWitness {
  PartyId party;
  Value next;
  std::string sig;
  CompactQc1Ptr qc1;
};

struct CompactQc2 {
  PrefixVector x_p;
  std::vector<PartyId> signers;
  std::string blob;
  // Exactly one of the two proofs is present: the full-length case carries a
  // QC1 for x_p, every shorter x_p carries two diverging witnesses.
  CompactQc1Ptr full;
  std::vector<DivergenceWitness> witnesses;
};

struct CompactQc3 {
  PrefixVector shortest;
  CompactQc2Ptr shortest_proof;
  PrefixVector longest;
  CompactQc2Ptr longest_proof;
  std::vector<PartyId> signers;
  std::vector<uint32_t> lengths;  // logical length of each signer's x_p
  std::string blob;
};

/** Values certified by a QC: (x) for QC1/QC2-style, (mcp, mce) for output stages. */
struct Certified {
  PrefixVector first;
  std::optional<PrefixVector> second;

  friend bool operator==(const Certified &, const Certified &) = default;
};

enum class PcOutputKind : uint8_t { kOpt = 1, kLow = 2, kHigh = 3 };
const char *output_kind_name(PcOutputKind k);

struct VerifiableValue {
  PrefixVector value;
  QcRef proof;
};

struct PcOutputs {
  std::optional<VerifiableValue> opt;
  std::optional<VerifiableValue> low;
  std::optional<VerifiableValue> high;
};

/** Bytes signed for a vector value (element count, then tagged elements). */
std::string vector_message(const PrefixVector &v);

}  // namespace prefixcons

#endif
