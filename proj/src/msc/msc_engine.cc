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

#include <nlohmann/json.hpp>

#include "prefixcons/msc.h"

namespace prefixcons {

Rank update_rank(const Rank &r, const PrefixVector &v_high) {
  size_t l = v_high.size();
  if (l > r.size()) throw PreconditionError("high value longer than the ranking");
  if (l == r.size()) return r;
  Rank out;
  for (size_t i = 0; i < r.size(); i++)
    if (i != l) out.push_back(r[i]);
  out.push_back(r[l]);
  return out;
}

void MscConfig::validate() const {
  SpcConfig s;
  s.n = n;
  s.f = f;
  s.capacity = n;
  s.codec = codec;
  s.delta = delta;
  s.rank = rank;
  s.validate();
  if (max_slots == 0) throw std::invalid_argument("max_slots must be positive");
}

std::string commit_entry_json(const CommitEntry &e) {
  nlohmann::json j{{"slot", e.slot}, {"index", e.index}, {"origin", e.origin.index}, {"digest", e.digest.hex()}};
  return j.dump();
}

MscReactor::MscReactor(MscConfig cfg, Signer signer, const SignatureScheme &scheme, Context &ctx, PayloadFn payload)
    : cfg_(std::move(cfg)), signer_(signer), verifier_(scheme), ctx_(ctx), payload_(std::move(payload)) {
  if (cfg_.rank.empty()) cfg_.rank = identity_rank(cfg_.n);
  cfg_.validate();
}

MscReactor::Slot &MscReactor::slot(uint64_t s) {
  auto &st = slots_[s];
  if (st.buffer.empty()) st.buffer.resize(cfg_.n);
  return st;
}

const Rank *MscReactor::rank(uint64_t s) const {
  auto it = slots_.find(s);
  return it == slots_.end() || !it->second.started ? nullptr : &it->second.rank;
}

const std::optional<PrefixVector> *MscReactor::high(uint64_t s) const {
  auto it = slots_.find(s);
  return it == slots_.end() ? nullptr : &it->second.high;
}

const SpcEngine *MscReactor::spc(uint64_t s) const {
  auto it = slots_.find(s);
  return it == slots_.end() ? nullptr : it->second.spc.get();
}

std::vector<std::string> MscReactor::faults() const {
  std::vector<std::string> out;
  for (const auto &[s, st] : slots_)
    if (st.spc)
      for (auto &f : st.spc->faults()) out.push_back("slot " + std::to_string(s) + " " + f);
  return out;
}

MessagePtr MscReactor::wrap(uint64_t s, Body body) const {
  auto m = std::make_shared<Message>();
  m->instance.protocol = cfg_.protocol;
  m->instance.slot = s;
  m->body = std::move(body);
  return m;
}

void MscReactor::start() { new_slot(1); }

void MscReactor::new_slot(uint64_t s) {
  current_ = s;
  Slot &st = slot(s);
  st.started = true;
  if (s == 1) {
    st.rank = cfg_.rank;
  } else {
    const Slot &prev = slots_.at(s - 1);
    st.rank = update_rank(prev.rank, *prev.high);
  }
  SpcConfig sc;
  sc.n = cfg_.n;
  sc.f = cfg_.f;
  sc.capacity = cfg_.n;
  sc.codec = cfg_.codec;
  sc.instance.protocol = cfg_.protocol;
  sc.instance.slot = s;
  sc.delta = cfg_.delta;
  sc.rank = st.rank;
  st.spc = std::make_unique<SpcEngine>(sc, signer_, verifier_, ctx_,
                                       [this, s](OutputKind k, const PrefixVector &v) { on_spc_output(s, k, v); });
  ctx_.output(OutputEvent{OutputKind::kSlotStart, s, 0, {}, {}});
  ctx_.broadcast(wrap(s, SlotProposal{s, payload_(s)}));
  ctx_.set_timer(TimerKey{TimerKind::kMscSlot, s, 0}, cfg_.delta * 2);

  auto early = std::move(early_[s]);
  early_.erase(s);
  for (auto &[from, m] : early) on_message(from, m);
}

void MscReactor::on_message(PartyId from, const MessagePtr &m) {
  if (m->instance.protocol != cfg_.protocol || from.index >= cfg_.n) return;
  if (const auto *p = std::get_if<SlotProposal>(&m->body)) {
    on_proposal(from, p->slot, p->payload);
    return;
  }
  if (const auto *q = std::get_if<FetchRequest>(&m->body); q && q->kind == FetchKind::kPayload) {
    auto it = payloads_.find(q->digest);
    if (it != payloads_.end() && from != ctx_.self())
      ctx_.send(from, wrap(m->instance.slot, FetchResponse{FetchKind::kPayload, nullptr, it->second}));
    return;
  }
  if (const auto *r = std::get_if<FetchResponse>(&m->body); r && r->kind == FetchKind::kPayload) {
    Digest d = payload_digest(r->payload);
    if (requested_.count(d) && !payloads_.count(d) && (!cfg_.valid || cfg_.valid(r->payload))) {
      payloads_.emplace(d, r->payload);
      drain_commits();
    }
    return;
  }
  uint64_t s = m->instance.slot;
  if (s > current_) {
    // The ranking for a future slot is unknown until the previous slot's high.
    early_[s].emplace_back(from, m);
    return;
  }
  auto it = slots_.find(s);
  if (it != slots_.end() && it->second.spc) it->second.spc->on_message(from, m);
}

void MscReactor::on_timer(const TimerKey &key) {
  if (key.kind == TimerKind::kMscSlot) {
    run_spc(key.slot);
  } else {
    auto it = slots_.find(key.slot);
    if (it != slots_.end() && it->second.spc) it->second.spc->on_timer(key);
  }
}

void MscReactor::on_proposal(PartyId from, uint64_t s, const std::string &payload) {
  if (cfg_.valid && !cfg_.valid(payload)) return;
  Digest d = payload_digest(payload);
  bool fresh = payloads_.emplace(d, payload).second;
  if (s >= current_ && s >= 1) {
    Slot &st = slot(s);
    if (!st.ran && !st.buffer[from.index]) st.buffer[from.index] = payload;
    if (s == current_ && !st.ran &&
        std::all_of(st.buffer.begin(), st.buffer.end(), [](const auto &b) { return b.has_value(); }))
      run_spc(s);
  }
  if (fresh && requested_.count(d)) drain_commits();
}

void MscReactor::run_spc(uint64_t s) {
  auto it = slots_.find(s);
  if (it == slots_.end() || !it->second.started || it->second.ran) return;
  Slot &st = it->second;
  st.ran = true;
  PrefixVector in;
  for (PartyId p : st.rank)
    in.push_back(st.buffer[p.index] ? payload_digest(*st.buffer[p.index]).to_value() : hbot_value());
  st.spc->input(std::move(in));
}

void MscReactor::on_spc_output(uint64_t s, OutputKind kind, const PrefixVector &v) {
  Slot &st = slots_.at(s);
  if (kind == OutputKind::kLow) {
    st.low = v;
    drain_commits();
    return;
  }
  st.high = v;
  drain_commits();
  if (s < cfg_.max_slots && s == current_) new_slot(s + 1);
}

void MscReactor::drain_commits() {
  while (commit_slot_ <= current_) {
    Slot &st = slots_.at(commit_slot_);
    const std::optional<PrefixVector> &target = st.high ? st.high : st.low;
    if (!target) return;
    while (st.cursor < target->size()) {
      const Value &e = (*target)[st.cursor];
      if (e != hbot_value() && !e.is_bot() && e.size() == Digest::kSize) {
        Digest d = Digest::from_value(e);
        auto it = payloads_.find(d);
        if (it == payloads_.end()) {
          if (requested_.insert(d).second) ctx_.broadcast(wrap(commit_slot_, FetchRequest{FetchKind::kPayload, d}));
          return;
        }
        if (committed_.insert(d).second) {
          CommitEntry entry{commit_slot_, st.cursor, st.rank[st.cursor], d, it->second};
          log_.push_back(entry);
          ctx_.output(OutputEvent{OutputKind::kCommit, commit_slot_, st.cursor, PrefixVector{Value(it->second)}, {}});
        }
      }
      st.cursor++;
    }
    if (!st.high) return;
    commit_slot_++;
  }
}

}  // namespace prefixcons
