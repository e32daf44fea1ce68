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

#include "prefixcons/adversary.h"

#include "prefixcons/derived.h"
#include "prefixcons/pc_reactor.h"
#include "prefixcons/pc_verify.h"

namespace prefixcons {

namespace {

std::string flip_first(std::string s) {
  if (!s.empty()) s[0] = static_cast<char>(s[0] ^ 0x01);
  return s;
}

MessagePtr with_body(const Message &m, Body body) {
  auto out = std::make_shared<Message>();
  out->instance = m.instance;
  out->body = std::move(body);
  return out;
}

/** Re-signed vote over an altered value, keeping the justification. */
MessagePtr resign_vote(Simulation &sim, PartyId from, const Message &m, const Vote &vote, const PcConfig &cfg) {
  auto altered = EquivocateAdversary::alter(vote.value, cfg.capacity);
  auto v = make_vote(cfg, sim.byzantine_signer(from), vote.round, altered, vote.justify);
  return with_body(m, v);
}

}  // namespace

PrefixVector EquivocateAdversary::alter(const PrefixVector &v, uint32_t capacity) {
  if (v.empty()) return capacity > 0 ? PrefixVector{Value("eq")} : v;
  std::vector<Value> out = v.elems();
  auto &last = out.back();
  if (last == Value("0"))
    last = Value("1");
  else if (last == Value("1"))
    last = Value("0");
  else
    last = Value(last.bytes() + "'");
  return PrefixVector(std::move(out));
}

void EquivocateAdversary::on_send(Simulation &sim, PartyId from, PartyId to, MessagePtr &m, bool &) {
  if (!parties_.count(from) || to.index % 2 == 0) return;
  auto hit = cache_.find(m.get());
  if (hit != cache_.end()) {
    m = hit->second.second;
    return;
  }
  MessagePtr altered;
  if (const auto *vote = std::get_if<VotePtr>(&m->body)) {
    if (!votes_ || (*vote)->round != 1) return;
    auto cfg = pc_config_ ? pc_config_(m->instance) : std::nullopt;
    if (!cfg) return;
    altered = resign_vote(sim, from, *m, **vote, *cfg);
  } else if (const auto *p = std::get_if<SlotProposal>(&m->body)) {
    if (!proposals_) return;
    altered = with_body(*m, SlotProposal{p->slot, "eq:" + p->payload});
  } else {
    return;
  }
  cache_[m.get()] = {m, altered};
  m = altered;
}

void CensorAdversary::on_send(Simulation &sim, PartyId from, PartyId to, MessagePtr &m, bool &drop) {
  if (!parties_.count(from)) return;
  if (const auto *p = std::get_if<SlotProposal>(&m->body)) {
    withheld_[{from, p->slot}] = payload_digest(p->payload).to_value();
    if (!reveal_to_.count(to) && to != from) drop = true;
    return;
  }
  if (reveal_to_.count(to) || to == from) return;
  const auto *vote = std::get_if<VotePtr>(&m->body);
  if (!vote || (*vote)->round != 1 || m->instance.view != 1) return;
  auto it = withheld_.find({from, m->instance.slot});
  if (it == withheld_.end()) return;
  if (auto hit = cache_.find(m.get()); hit != cache_.end()) {
    m = hit->second.second;
    return;
  }
  auto cfg = pc_config_ ? pc_config_(m->instance) : std::nullopt;
  if (!cfg) return;
  std::vector<Value> elems = (*vote)->value.elems();
  bool changed = false;
  for (auto &e : elems)
    if (e == it->second) {
      e = hbot_value();
      changed = true;
    }
  if (!changed) return;
  auto v = make_vote(*cfg, sim.byzantine_signer(from), 1, PrefixVector(std::move(elems)), (*vote)->justify);
  auto altered = with_body(*m, v);
  cache_[m.get()] = {m, altered};
  m = altered;
}

bool DelayerAdversary::chosen(PartyId from, PartyId to) const {
  if (opt_.link_fraction >= 1.0) return true;
  std::mt19937_64 g(opt_.seed * 1000003ULL + from.index * 7919ULL + to.index);
  return std::uniform_real_distribution<double>(0.0, 1.0)(g) < opt_.link_fraction;
}

std::optional<Time> DelayerAdversary::on_schedule(Simulation &sim, const Envelope &e) {
  const auto &d = sim.config().delay;
  if (e.sent >= d.gst || !chosen(e.from, e.to)) return std::nullopt;
  if (!opt_.kinds.empty() && !opt_.kinds.count(message_kind(*e.msg))) return std::nullopt;
  if (opt_.view) {
    uint64_t view = e.msg->instance.view;
    if (const auto *nv = std::get_if<NewView>(&e.msg->body)) view = nv->proposal->view;
    if (const auto *ev = std::get_if<EmptyView>(&e.msg->body)) view = ev->view;
    if (view != *opt_.view) return std::nullopt;
  }
  // The simulator clamps this to the latest delivery the model allows.
  return d.gst + d.delta_cap - e.sent;
}

std::optional<PartyId> SuspenderAdversary::on_round(uint64_t k) {
  if (targets_.empty() || k < start_) return std::nullopt;
  return targets_[(k - start_) % targets_.size()];
}

void WithholdBodyAdversary::on_send(Simulation &, PartyId from, PartyId to, MessagePtr &m, bool &drop) {
  if (!parties_.count(from)) return;
  if (std::holds_alternative<FetchResponse>(m->body)) {
    drop = true;
    return;
  }
  bool body = std::holds_alternative<NewView>(m->body) || std::holds_alternative<SlotProposal>(m->body);
  if (body && to != reveal_to_) drop = true;
}

void DoctoredProofAdversary::on_send(Simulation &sim, PartyId from, PartyId to, MessagePtr &m, bool &) {
  if (!parties_.count(from) || to.index % 2 == 0) return;
  auto hit = cache_.find(m.get());
  if (hit != cache_.end()) {
    m = hit->second.second;
    sent_++;
    return;
  }
  MessagePtr altered;
  if (const auto *vote = std::get_if<VotePtr>(&m->body)) {
    if ((*vote)->round < 2) return;
    auto cfg = pc_config_ ? pc_config_(m->instance) : std::nullopt;
    if (!cfg) return;
    altered = resign_vote(sim, from, *m, **vote, *cfg);
  } else if (const auto *nc = std::get_if<NewCommit>(&m->body)) {
    NewCommit c = *nc;
    c.value = EquivocateAdversary::alter(c.value, UINT32_MAX);
    altered = with_body(*m, c);
  } else if (const auto *ev = std::get_if<EmptyView>(&m->body)) {
    EmptyView e = *ev;
    e.high_value = EquivocateAdversary::alter(e.high_value, UINT32_MAX);
    altered = with_body(*m, e);
  } else {
    return;
  }
  cache_[m.get()] = {m, altered};
  m = altered;
  sent_++;
}

void DoctoredProofAdversary::on_finish(Simulation &sim) {
  auto offer = [this](const PcEngine &e) {
    const auto &cfg = e.config();
    const auto &out = e.outputs();
    std::vector<std::pair<std::string, const VerifiableValue *>> base;
    if (out.opt) base.emplace_back("opt", &*out.opt);
    if (out.low) base.emplace_back("low", &*out.low);
    if (out.high) base.emplace_back("high", &*out.high);
    for (const auto &[name, vv] : base) {
      candidates_.push_back({cfg, vv->value, vv->proof, name});
      candidates_.push_back({cfg, EquivocateAdversary::alter(vv->value, cfg.capacity), vv->proof, name + "+altered"});
      PrefixVector longer = vv->value;
      longer.push_back(Value("z"));
      candidates_.push_back({cfg, longer, vv->proof, name + "+extended"});
      if (!vv->value.empty()) {
        PrefixVector shorter = vv->value.prefix(vv->value.size() - 1);
        candidates_.push_back({cfg, shorter, vv->proof, name + "+truncated"});
      }
      candidates_.push_back({cfg, vv->value, corrupt_signature(vv->proof), name + "+badsig"});
      for (const auto &[other, ov] : base)
        if (other != name) candidates_.push_back({cfg, ov->value, vv->proof, other + "@" + name});
    }
  };
  for (auto p : parties_) {
    if (auto *r = sim.as<PcReactor>(p)) offer(r->engine());
    if (auto *g = sim.as<GradedReactor>(p))
      for (size_t k = 0; k < g->graded().size(); k++) offer(g->lane(k));
  }
}

QcRef corrupt_signature(const QcRef &qc) {
  return std::visit(
      [](const auto &ptr) -> QcRef {
        using T = std::remove_const_t<typename std::decay_t<decltype(ptr)>::element_type>;
        if (!ptr) return ptr;
        auto copy = std::make_shared<T>(*ptr);
        if constexpr (std::is_same_v<T, PlainQc>) {
          if (!copy->votes.empty()) {
            auto v = std::make_shared<Vote>(*copy->votes.front());
            if (!v->sigs.empty()) v->sigs.front() = flip_first(v->sigs.front());
            copy->votes.front() = v;
          }
        } else {
          copy->blob = flip_first(copy->blob);
        }
        return std::shared_ptr<const T>(copy);
      },
      qc);
}

}  // namespace prefixcons
