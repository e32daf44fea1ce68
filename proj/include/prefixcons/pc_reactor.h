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

#ifndef PREFIXCONS_PC_REACTOR_H
#define PREFIXCONS_PC_REACTOR_H

#include <optional>

#include "prefixcons/pc_engine.h"
#include "prefixcons/reactor.h"

namespace prefixcons {

/** A single standalone PC instance driven by the simulator. */
class PcReactor : public Reactor, private PcSink {
 public:
  PcReactor(PcConfig cfg, Signer signer, const SignatureScheme &scheme, Context &ctx,
            std::optional<PrefixVector> input);

  void start() override;
  void on_message(PartyId from, const MessagePtr &m) override;
  void on_timer(const TimerKey &) override {}
  bool done() const override { return engine_.done(); }

  const PcEngine &engine() const { return engine_; }
  QcVerifier &verifier() { return verifier_; }

 private:
  void pc_broadcast(const PcConfig &cfg, const VotePtr &vote) override;
  void pc_output(const PcConfig &cfg, PcOutputKind kind, const VerifiableValue &out) override;

  QcVerifier verifier_;
  Context &ctx_;
  std::optional<PrefixVector> input_;
  PcEngine engine_;
};

}  // namespace prefixcons

#endif
