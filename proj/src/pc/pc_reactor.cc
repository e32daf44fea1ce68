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

#include "prefixcons/pc_reactor.h"

namespace prefixcons {

PcReactor::PcReactor(PcConfig cfg, Signer signer, const SignatureScheme &scheme, Context &ctx,
                     std::optional<PrefixVector> input)
    : verifier_(scheme), ctx_(ctx), input_(std::move(input)), engine_(std::move(cfg), signer, verifier_, *this) {}

void PcReactor::start() {
  if (input_) engine_.input(*input_);
}

void PcReactor::on_message(PartyId from, const MessagePtr &m) {
  const auto *vote = std::get_if<VotePtr>(&m->body);
  if (vote && m->instance == engine_.config().instance) engine_.receive(from, *vote);
}

void PcReactor::pc_broadcast(const PcConfig &cfg, const VotePtr &vote) {
  auto m = std::make_shared<Message>();
  m->instance = cfg.instance;
  m->body = vote;
  ctx_.broadcast(m);
}

void PcReactor::pc_output(const PcConfig &, PcOutputKind kind, const VerifiableValue &out) {
  OutputKind k = kind == PcOutputKind::kOpt   ? OutputKind::kOpt
                 : kind == PcOutputKind::kLow ? OutputKind::kLow
                                              : OutputKind::kHigh;
  ctx_.output(OutputEvent{k, 0, 0, out.value, {}});
}

}  // namespace prefixcons
