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

#ifndef PREFIXCONS_MESSAGES_H
#define PREFIXCONS_MESSAGES_H

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>

#include "prefixcons/crypto.h"
#include "prefixcons/pc_types.h"

namespace prefixcons {

/** Protocol ids carried in InstanceId::protocol. */
enum class ProtocolId : uint8_t {
  kPc3 = 1,
  kPcOpt = 2,
  kPc5f1 = 3,
  kSpc = 4,
  kMsc = 5,
  kGraded = 6,
  kBinary = 7,
  kValidated = 8,
};

enum class CertKind : uint8_t { kDirect = 1, kIndirect = 2 };

/**
 * View-entry authorization for view prev_view+1. A direct certificate
 * carries the verifiable high of prev_view (parent_view == prev_view). An
 * indirect one carries the highest parentful high reported by f+1 skip
 * statements (prev_view, w_h), aggregated in `skips`.
 */
struct Certificate {
  CertKind kind = CertKind::kDirect;
  uint64_t prev_view = 0;
  uint64_t parent_view = 0;
  PrefixVector value;
  QcRef proof;
  AggregateSignature skips;
};
using CertPtr = std::shared_ptr<const Certificate>;

/** A party's proposal for a view; identical to its new-view payload. */
struct ProposalObject {
  uint64_t view = 0;
  CertPtr cert;

  /** Hash of the encoded object, computed once. */
  const Digest &digest() const;

 private:
  mutable std::optional<Digest> digest_;
};
using ProposalPtr = std::shared_ptr<const ProposalObject>;

struct NewView {
  ProposalPtr proposal;
};

/** Skip statement for `view` with the sender's best parentful high. */
struct EmptyView {
  uint64_t view = 0;
  uint64_t high_view = 0;
  PrefixVector high_value;
  QcRef high_proof;
  Signature sig;
};

struct NewCommit {
  uint64_t view = 0;
  PrefixVector value;
  QcRef proof;
};

struct SlotProposal {
  uint64_t slot = 0;
  std::string payload;
};

enum class FetchKind : uint8_t { kProposalObject = 1, kPayload = 2 };

struct FetchRequest {
  FetchKind kind = FetchKind::kProposalObject;
  Digest digest;
};

struct FetchResponse {
  FetchKind kind = FetchKind::kProposalObject;
  ProposalPtr object;   // kProposalObject
  std::string payload;  // kPayload
};

using Body = std::variant<VotePtr, NewView, EmptyView, NewCommit, SlotProposal, FetchRequest, FetchResponse>;

struct Message {
  InstanceId instance;
  Body body;
};
using MessagePtr = std::shared_ptr<const Message>;

/** Short name of the body kind ("vote-2", "new-view", ...). */
std::string message_kind(const Message &m);

/** Message signed in a skip statement: (view, high_view). */
std::string skip_statement(uint64_t view, uint64_t high_view);
DomainTag skip_tag(const InstanceId &instance);

/** Digest a slot payload is referenced by. */
Digest payload_digest(std::string_view payload);

}  // namespace prefixcons

#endif
