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

#include "prefixcons/pc_types.h"

#include "prefixcons/bytes.h"

namespace prefixcons {

const char *variant_name(PcVariant v) {
  switch (v) {
    case PcVariant::kThreeRound: return "three-round";
    case PcVariant::kOptimistic: return "optimistic";
    case PcVariant::kFast: return "fast-5f1";
  }
  return "?";
}

const char *codec_name(Codec c) { return c == Codec::kCompact ? "compact" : "plain"; }

const char *output_kind_name(PcOutputKind k) {
  switch (k) {
    case PcOutputKind::kOpt: return "opt";
    case PcOutputKind::kLow: return "low";
    case PcOutputKind::kHigh: return "high";
  }
  return "?";
}

uint8_t PcConfig::last_round() const {
  switch (variant) {
    case PcVariant::kThreeRound: return 3;
    case PcVariant::kOptimistic: return 4;
    case PcVariant::kFast: return 2;
  }
  return 0;
}

DomainTag PcConfig::tag(uint8_t round) const { return DomainTag{static_cast<MsgKind>(round), instance}; }

void PcConfig::validate() const {
  if (n == 0) throw std::invalid_argument("n must be positive");
  if (variant == PcVariant::kFast) {
    if (n < 5 * f + 1) throw std::invalid_argument("fast variant requires n >= 5f+1");
  } else if (n < 3 * f + 1) {
    throw std::invalid_argument("requires n >= 3f+1");
  }
  if (capacity == 0) throw std::invalid_argument("vector capacity L must be positive");
  if (codec == Codec::kCompact && variant != PcVariant::kThreeRound)
    throw std::invalid_argument("compact codec is implemented for the three-round variant only");
}

const void *qc_address(const QcRef &qc) {
  return std::visit([](const auto &p) -> const void * { return p.get(); }, qc);
}

bool qc_empty(const QcRef &qc) { return qc_address(qc) == nullptr; }

std::string vector_message(const PrefixVector &v) {
  ByteWriter w;
  w.varint(v.size());
  for (const auto &e : v) {
    if (e.is_bot()) {
      w.u8(0);
    } else {
      w.u8(1);
      w.bytes(e.bytes());
    }
  }
  return w.take();
}

}  // namespace prefixcons
