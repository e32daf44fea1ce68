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

#include "prefixcons/derived.h"

namespace prefixcons {

GradedOutput graded_from_pc(const PrefixVector &low, const PrefixVector &high) {
  if (low.size() > 1 || high.size() > 1) throw PreconditionError("graded mapping needs outputs of length at most 1");
  if (high.empty()) return {};
  if (low.empty()) return GradedOutput{high[0], 1};
  return GradedOutput{high[0], 2};
}

std::pair<PrefixVector, PrefixVector> pc_from_graded(std::span<const GradedOutput> grades) {
  PrefixVector low, high;
  bool low_open = true;
  for (const auto &g : grades) {
    if (g.grade < 1 || !g.value) break;
    if (low_open && g.grade == 2)
      low.push_back(*g.value);
    else
      low_open = false;
    high.push_back(*g.value);
  }
  return {low, high};
}

GradedReactor::GradedReactor(uint32_t n, uint32_t f, uint32_t lanes, Signer signer, const SignatureScheme &scheme,
                             Context &ctx, PrefixVector input, uint8_t protocol)
    : verifier_(scheme), ctx_(ctx), protocol_(protocol), input_(std::move(input)), graded_(lanes) {
  if (lanes == 0) throw std::invalid_argument("graded reactor needs at least one lane");
  if (input_.size() > lanes) throw PreconditionError("graded input longer than the lane count");
  for (uint32_t k = 0; k < lanes; k++) {
    PcConfig cfg;
    cfg.n = n;
    cfg.f = f;
    cfg.capacity = 1;
    cfg.instance.protocol = protocol;
    cfg.instance.lane = k;
    PcSink &sink = *this;
    lanes_.push_back(std::make_unique<PcEngine>(cfg, signer, verifier_, sink));
  }
}

void GradedReactor::start() {
  for (size_t k = 0; k < lanes_.size(); k++) {
    // A missing index is proposed as the empty vector.
    PrefixVector in;
    if (k < input_.size()) in.push_back(input_[k]);
    lanes_[k]->input(in);
  }
}

void GradedReactor::on_message(PartyId from, const MessagePtr &m) {
  const auto *vote = std::get_if<VotePtr>(&m->body);
  if (!vote || m->instance.protocol != protocol_ || m->instance.lane >= lanes_.size() || m->instance.slot != 0 ||
      m->instance.view != 0)
    return;
  lanes_[m->instance.lane]->receive(from, *vote);
}

bool GradedReactor::done() const { return result_.has_value(); }

void GradedReactor::pc_broadcast(const PcConfig &cfg, const VotePtr &vote) {
  auto m = std::make_shared<Message>();
  m->instance = cfg.instance;
  m->body = vote;
  ctx_.broadcast(m);
}

void GradedReactor::pc_output(const PcConfig &cfg, PcOutputKind kind, const VerifiableValue &) {
  if (kind == PcOutputKind::kOpt) return;
  size_t k = cfg.instance.lane;
  const auto &out = lanes_[k]->outputs();
  // The engine emits low before high; wait for both.
  if (!out.low || !out.high || graded_[k]) return;
  graded_[k] = graded_from_pc(out.low->value, out.high->value);
  const auto &g = *graded_[k];
  PrefixVector v;
  if (g.value) v.push_back(*g.value);
  ctx_.output(OutputEvent{OutputKind::kDecide, 0, k, v, "grade=" + std::to_string(g.grade)});

  for (const auto &lane : graded_)
    if (!lane) return;
  std::vector<GradedOutput> all;
  for (const auto &lane : graded_) all.push_back(*lane);
  result_ = pc_from_graded(all);
  ctx_.output(OutputEvent{OutputKind::kLow, 0, 0, result_->first, {}});
  ctx_.output(OutputEvent{OutputKind::kHigh, 0, 0, result_->second, {}});
}

BinaryReactor::BinaryReactor(SpcConfig cfg, Signer signer, const SignatureScheme &scheme, Context &ctx, bool bit)
    : verifier_(scheme),
      ctx_(ctx),
      bit_(bit),
      engine_(std::move(cfg), signer, verifier_, ctx, [this](OutputKind kind, const PrefixVector &v) {
        ctx_.output(OutputEvent{kind, 0, 0, v, {}});
        if (kind != OutputKind::kHigh || decision_) return;
        decision_ = !v.empty() && v[0] == Value("1");
        ctx_.output(OutputEvent{OutputKind::kDecide, 0, 0, PrefixVector{Value(*decision_ ? "1" : "0")}, {}});
      }) {
  if (engine_.config().capacity != 1) throw std::invalid_argument("binary consensus runs with capacity 1");
}

void BinaryReactor::on_message(PartyId from, const MessagePtr &m) {
  const auto &c = engine_.config().instance;
  if (m->instance.protocol == c.protocol && m->instance.slot == c.slot) engine_.on_message(from, m);
}

ValidatedReactor::ValidatedReactor(MscConfig cfg, Signer signer, const SignatureScheme &scheme, Context &ctx,
                                   std::string input)
    : ctx_(ctx) {
  cfg.max_slots = 1;
  msc_ = std::make_unique<MscReactor>(std::move(cfg), signer, scheme, ctx,
                                      [input = std::move(input)](uint64_t) { return input; });
}

void ValidatedReactor::on_message(PartyId from, const MessagePtr &m) {
  msc_->on_message(from, m);
  settle();
}

void ValidatedReactor::on_timer(const TimerKey &key) {
  msc_->on_timer(key);
  settle();
}

void ValidatedReactor::settle() {
  if (finished_ || !msc_->done()) return;
  finished_ = true;
  // Commits follow vector order, so the first log entry is the first validated entry.
  for (const auto &e : msc_->log())
    if (e.slot == 1) {
      decision_ = e.payload;
      break;
    }
  PrefixVector v;
  if (decision_) v.push_back(Value(*decision_));
  ctx_.output(OutputEvent{OutputKind::kDecide, 1, 0, v, decision_ ? "" : "undecided"});
}

}  // namespace prefixcons
