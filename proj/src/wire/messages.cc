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

#include "prefixcons/messages.h"

#include "prefixcons/bytes.h"
#include "prefixcons/codec.h"
#include "prefixcons/reactor.h"

namespace prefixcons {

const Digest &ProposalObject::digest() const {
  if (!digest_) digest_ = hash_object(encode_proposal(*this));
  return *digest_;
}

std::string message_kind(const Message &m) {
  switch (m.body.index()) {
    case 0: return "vote-" + std::to_string(std::get<VotePtr>(m.body)->round);
    case 1: return "new-view";
    case 2: return "empty-view";
    case 3: return "new-commit";
    case 4: return "proposal";
    case 5: return "fetch-request";
    default: return "fetch-response";
  }
}

std::string skip_statement(uint64_t view, uint64_t high_view) {
  ByteWriter w;
  w.varint(view);
  w.varint(high_view);
  return w.take();
}

DomainTag skip_tag(const InstanceId &instance) {
  // The statement itself names the view, so the tag omits it.
  InstanceId id = instance;
  id.view = 0;
  id.lane = 0;
  return DomainTag{MsgKind::kEmptyView, id};
}

Digest payload_digest(std::string_view payload) {
  ByteWriter w;
  w.u8(static_cast<uint8_t>(MsgKind::kProposal));
  w.bytes(payload);
  return hash_object(w.str());
}

std::string time_to_string(const Time &t) {
  if (t.denominator() == 1) return std::to_string(t.numerator());
  return std::to_string(t.numerator()) + "/" + std::to_string(t.denominator());
}

const char *output_kind_str(OutputKind k) {
  switch (k) {
    case OutputKind::kOpt: return "opt";
    case OutputKind::kLow: return "low";
    case OutputKind::kHigh: return "high";
    case OutputKind::kCommit: return "commit";
    case OutputKind::kSlotStart: return "slot-start";
    case OutputKind::kDecide: return "decide";
    case OutputKind::kFault: return "fault";
  }
  return "?";
}

}  // namespace prefixcons
