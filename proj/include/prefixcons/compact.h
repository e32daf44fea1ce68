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

#ifndef PREFIXCONS_COMPACT_H
#define PREFIXCONS_COMPACT_H

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>

#include "prefixcons/pc_types.h"

namespace prefixcons {

/** A verification outcome: the certified value, or the reason for rejection. */
template <class T>
struct Checked {
  std::optional<T> value;
  std::string reason;

  explicit operator bool() const { return value.has_value(); }
  static Checked ok(T v) { return Checked{std::move(v), {}}; }
  static Checked fail(std::string why) { return Checked{std::nullopt, std::move(why)}; }
};

/** Certifies nested compact QCs; lets callers plug in a cache. */
using CompactQc1Oracle = std::function<std::optional<PrefixVector>(const CompactQc1Ptr &)>;
using CompactQc2Oracle = std::function<std::optional<PrefixVector>(const CompactQc2Ptr &)>;

/** Prefix signatures over the padded value, lengths 0..L. */
std::vector<std::string> sign_prefixes(const PcConfig &cfg, const Signer &signer, uint8_t round,
                                       const PrefixVector &value);

/** Rebuilds the signed truncated vote v' from x and its compressed form; nullopt if malformed. */
std::optional<PrefixVector> reconstruct_truncated(const PcConfig &cfg, const PrefixVector &x, const TruncatedVote &rep);

/** Inputs are verified compact votes of the matching round from distinct voters. */
CompactQc1Ptr build_compact_qc1(const PcConfig &cfg, std::span<const VotePtr> votes);
CompactQc2Ptr build_compact_qc2(const PcConfig &cfg, std::span<const VotePtr> votes);
CompactQc3Ptr build_compact_qc3(const PcConfig &cfg, std::span<const VotePtr> votes);

Checked<PrefixVector> verify_compact_qc1(const PcConfig &cfg, const SignatureScheme &scheme, const CompactQc1 &qc);
Checked<PrefixVector> verify_compact_qc2(const PcConfig &cfg, const SignatureScheme &scheme, const CompactQc2 &qc,
                                         const CompactQc1Oracle &qc1 = {});
Checked<std::pair<PrefixVector, PrefixVector>> verify_compact_qc3(const PcConfig &cfg, const SignatureScheme &scheme,
                                                                  const CompactQc3 &qc,
                                                                  const CompactQc2Oracle &qc2 = {});

}  // namespace prefixcons

#endif
