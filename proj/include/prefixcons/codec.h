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

// Binary framing for every protocol object. Layout is documented in
// docs/wire-format.md. Decoders throw DecodeError naming the bad field.

#ifndef PREFIXCONS_CODEC_H
#define PREFIXCONS_CODEC_H

#include <string>
#include <string_view>

#include "prefixcons/bytes.h"
#include "prefixcons/messages.h"

namespace prefixcons {

/** Leading byte of an encoded message. */
enum class WireTag : uint8_t {
  kVote1 = 1,
  kVote2 = 2,
  kVote3 = 3,
  kVote4 = 4,
  kNewView = 5,
  kEmptyView = 6,
  kNewCommit = 7,
  kProposal = 8,
  kFetchRequest = 9,
  kFetchResponse = 10,
};

void write_vector(ByteWriter &w, const PrefixVector &v);
PrefixVector read_vector(ByteReader &r, const std::string &field);

std::string encode_vote(const Vote &v);
VotePtr decode_vote(std::string_view bytes);

std::string encode_qc(const QcRef &qc);
QcRef decode_qc(std::string_view bytes);

std::string encode_proposal(const ProposalObject &p);
ProposalPtr decode_proposal(std::string_view bytes);

std::string encode_message(const Message &m);
MessagePtr decode_message(std::string_view bytes);

/** Multi-line human-readable dump with per-field sizes. */
std::string describe_message(const Message &m);

}  // namespace prefixcons

#endif
