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

#include <algorithm>

#include "prefixcons/bytes.h"
#include "prefixcons/spc.h"

namespace prefixcons {

Rank shift(std::span<const PartyId> r) {
  Rank out(r.begin(), r.end());
  if (!out.empty()) std::rotate(out.begin(), out.begin() + 1, out.end());
  return out;
}

Rank identity_rank(uint32_t n) {
  Rank r;
  for (uint32_t i = 0; i < n; i++) r.emplace_back(i);
  return r;
}

Rank view_rank(const Rank &initial, uint64_t view) {
  Rank r = initial;
  if (r.empty() || view <= 2) return r;
  std::rotate(r.begin(), r.begin() + static_cast<long>((view - 2) % r.size()), r.end());
  return r;
}

void SpcConfig::validate() const {
  vpc(1).validate();
  if (!rank.empty()) {
    if (rank.size() != n) throw std::invalid_argument("initial ranking must list all n parties");
    std::set<PartyId> seen(rank.begin(), rank.end());
    if (seen.size() != n || seen.rbegin()->index >= n)
      throw std::invalid_argument("initial ranking is not a permutation");
  }
  if (delta <= 0) throw std::invalid_argument("delta must be positive");
}

PcConfig SpcConfig::vpc(uint64_t view) const {
  PcConfig c;
  c.n = n;
  c.f = f;
  c.capacity = view == 1 ? capacity : n;
  c.variant = PcVariant::kThreeRound;
  c.codec = codec;
  c.instance = instance;
  c.instance.view = view;
  c.instance.lane = 0;
  return c;
}

SpcEngine::SpcEngine(SpcConfig cfg, Signer signer, QcVerifier &verifier, Context &ctx, OutputFn out)
    : cfg_(std::move(cfg)), signer_(signer), verifier_(verifier), ctx_(ctx), out_(std::move(out)) {
  if (cfg_.rank.empty()) cfg_.rank = identity_rank(cfg_.n);
  cfg_.validate();
}

PcEngine &SpcEngine::vpc(uint64_t view) {
  auto &slot = vpcs_[view];
  PcSink &sink = *this;
  if (!slot) slot = std::make_unique<PcEngine>(cfg_.vpc(view), signer_, verifier_, sink);
  return *slot;
}

const PcEngine *SpcEngine::vpc_engine(uint64_t view) const {
  auto it = vpcs_.find(view);
  return it == vpcs_.end() ? nullptr : it->second.get();
}

std::vector<std::string> SpcEngine::faults() const {
  std::vector<std::string> out;
  for (const auto &[w, e] : vpcs_)
    if (e->faulted()) out.push_back("view " + std::to_string(w) + ": " + e->fault());
  return out;
}

MessagePtr SpcEngine::wrap(Body body) const {
  auto m = std::make_shared<Message>();
  m->instance = cfg_.instance;
  m->instance.view = 0;
  m->instance.lane = 0;
  m->body = std::move(body);
  return m;
}

bool SpcEngine::f_high(uint64_t view, const PrefixVector &v, const QcRef &proof) {
  return view >= 1 && verifier_.predicate_high(cfg_.vpc(view), v, proof);
}

bool SpcEngine::f_low(uint64_t view, const PrefixVector &v, const QcRef &proof) {
  return view >= 1 && verifier_.predicate_low(cfg_.vpc(view), v, proof);
}

void SpcEngine::input(PrefixVector v) {
  if (vpc(1).has_input()) throw PreconditionError("Strong PC instance already has an input");
  vpc(1).input(std::move(v));
}

SpcEngine::ParentLookup SpcEngine::parent(const PrefixVector &v) const {
  for (const auto &e : v) {
    if (e == hbot_value()) continue;
    // Not a digest at all: no preimage can exist.
    if (e.is_bot() || e.size() != Digest::kSize) return {};
    Digest d = Digest::from_value(e);
    auto it = store_.find(d);
    if (it == store_.end()) return ParentLookup{false, 0, {}, d};
    const Certificate &c = *it->second->cert;
    return ParentLookup{true, c.parent_view, c.value, {}};
  }
  return {};
}

void SpcEngine::defer(const Digest &d, std::function<void()> retry) {
  waiting_[d].push_back(std::move(retry));
  if (requested_.insert(d).second) ctx_.broadcast(wrap(FetchRequest{FetchKind::kProposalObject, d}));
}

void SpcEngine::learn(const ProposalPtr &p) {
  if (!p || !p->cert) return;
  const Digest &d = p->digest();
  store_.emplace(d, p);
  auto it = waiting_.find(d);
  if (it == waiting_.end()) return;
  auto retries = std::move(it->second);
  waiting_.erase(it);
  for (auto &r : retries) r();
}

SpcEngine::Check SpcEngine::valid_cert(uint64_t w, const Certificate &c, Digest *missing) {
  if (w < 2 || c.prev_view != w - 1) return Check::kInvalid;
  if (c.kind == CertKind::kDirect) {
    if (c.parent_view != w - 1) return Check::kInvalid;
  } else if (c.kind == CertKind::kIndirect) {
    const auto &agg = c.skips;
    if (agg.signers.size() != cfg_.f + 1) return Check::kInvalid;
    if (!agg.messages.suffixes.empty() && agg.messages.suffixes.size() != agg.signers.size()) return Check::kInvalid;
    uint64_t w_h = 0;
    for (size_t i = 0; i < agg.signers.size(); i++) {
      ByteReader r(agg.messages.message(i));
      uint64_t sv = 0, sh = 0;
      try {
        sv = r.varint("skip.view");
        sh = r.varint("skip.high_view");
      } catch (const DecodeError &) {
        return Check::kInvalid;
      }
      if (!r.done() || sv != w - 1) return Check::kInvalid;
      w_h = std::max(w_h, sh);
    }
    if (c.parent_view != w_h || w_h + 1 >= w) return Check::kInvalid;
    for (auto s : agg.signers)
      if (s.index >= cfg_.n) return Check::kInvalid;
    if (!verify_aggregate(verifier_.scheme(), skip_tag(cfg_.instance), agg)) return Check::kInvalid;
  } else {
    return Check::kInvalid;
  }
  if (!f_high(c.parent_view, c.value, c.proof)) return Check::kInvalid;
  if (c.parent_view == 1) return Check::kValid;
  auto p = parent(c.value);
  if (!p.ready) {
    if (missing) *missing = p.missing;
    return Check::kPending;
  }
  return p.view == 0 ? Check::kInvalid : Check::kValid;
}

void SpcEngine::on_message(PartyId from, const MessagePtr &m) {
  std::visit(
      [&](const auto &b) {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, VotePtr>) {
          if (m->instance.view >= 1) vpc(m->instance.view).receive(from, b);
        } else if constexpr (std::is_same_v<T, NewView>) {
          on_new_view(from, m);
        } else if constexpr (std::is_same_v<T, EmptyView>) {
          on_empty_view(from, b);
        } else if constexpr (std::is_same_v<T, NewCommit>) {
          on_new_commit(m);
        } else if constexpr (std::is_same_v<T, FetchRequest>) {
          if (b.kind != FetchKind::kProposalObject) return;
          auto it = store_.find(b.digest);
          if (it != store_.end() && from != ctx_.self())
            ctx_.send(from, wrap(FetchResponse{FetchKind::kProposalObject, it->second, {}}));
        } else if constexpr (std::is_same_v<T, FetchResponse>) {
          // Only digests this party asked for are worth storing.
          if (b.kind == FetchKind::kProposalObject && b.object && b.object->cert && waiting_.count(b.object->digest()))
            learn(b.object);
        }
      },
      m->body);
}

void SpcEngine::on_timer(const TimerKey &key) {
  if (key.kind == TimerKind::kSpcView) run_vpc(key.view);
}

void SpcEngine::on_new_view(PartyId from, const MessagePtr &m) {
  const ProposalPtr &p = std::get<NewView>(m->body).proposal;
  if (!p || !p->cert || from.index >= cfg_.n) return;
  uint64_t w = p->view;
  if (high_ || w < view_) {
    learn(p);
    return;
  }
  Digest missing;
  Check check = valid_cert(w, *p->cert, &missing);
  if (check == Check::kPending) {
    defer(missing, [this, from, m] { on_new_view(from, m); });
    learn(p);
    return;
  }
  if (check == Check::kInvalid) return;
  if (p->cert->kind == CertKind::kIndirect) indirect_.emplace_back(p->cert->prev_view, p->cert->parent_view);

  if (w > view_) {
    // Entering the view: relay the certificate and start the view timer.
    if (new_view_sent_.insert(w).second) ctx_.broadcast(m);
    view_ = w;
    ctx_.set_timer(TimerKey{TimerKind::kSpcView, cfg_.instance.slot, w}, cfg_.delta * 2);
  }
  if (p->cert->parent_view > best_.view) best_ = Triple{p->cert->parent_view, p->cert->value, p->cert->proof};

  auto &buf = buffers_[w];
  if (buf.empty()) buf.resize(cfg_.n);
  if (!buf[from.index]) buf[from.index] = p;
  if (std::all_of(buf.begin(), buf.end(), [](const ProposalPtr &q) { return q != nullptr; })) run_vpc(w);
  learn(p);
}

void SpcEngine::run_vpc(uint64_t w) {
  if (high_ || w < 2 || !ran_vpc_.insert(w).second) return;
  auto &buf = buffers_[w];
  if (buf.empty()) buf.resize(cfg_.n);
  PrefixVector in;
  for (PartyId p : view_rank(cfg_.rank, w))
    in.push_back(buf[p.index] ? buf[p.index]->digest().to_value() : hbot_value());
  vpc(w).input(std::move(in));
}

void SpcEngine::on_empty_view(PartyId from, const EmptyView &e) {
  if (high_ || e.sig.signer != from || from.index >= cfg_.n) return;
  if (!(e.view >= view_ && e.view > e.high_view) || e.view < 2) return;
  if (skips_[e.view].count(from)) return;
  if (!verifier_.scheme().verify(from, skip_tag(cfg_.instance), skip_statement(e.view, e.high_view), e.sig)) return;
  if (!f_high(e.high_view, e.high_value, e.high_proof)) return;
  if (e.high_view > 1) {
    auto p = parent(e.high_value);
    if (!p.ready) {
      defer(p.missing, [this, from, e] { on_empty_view(from, e); });
      return;
    }
    if (p.view == 0) return;
  }
  auto &q = skips_[e.view];
  q.emplace(from, e);
  if (q.size() != cfg_.f + 1) return;

  std::vector<AggregateEntry> entries;
  const EmptyView *top = nullptr;
  for (const auto &[j, s] : q) {
    entries.push_back({j, skip_statement(s.view, s.high_view), s.sig});
    if (!top || s.high_view > top->high_view) top = &s;
  }
  auto cert = std::make_shared<Certificate>();
  cert->kind = CertKind::kIndirect;
  cert->prev_view = e.view;
  cert->parent_view = top->high_view;
  cert->value = top->high_value;
  cert->proof = top->high_proof;
  cert->skips = aggregate(verifier_.scheme(), skip_tag(cfg_.instance), entries);
  indirect_.emplace_back(cert->prev_view, cert->parent_view);
  broadcast_new_view(e.view + 1, cert);
}

void SpcEngine::broadcast_new_view(uint64_t view, CertPtr cert) {
  if (!new_view_sent_.insert(view).second) return;
  auto p = std::make_shared<ProposalObject>();
  p->view = view;
  p->cert = std::move(cert);
  store_.emplace(p->digest(), p);
  ctx_.broadcast(wrap(NewView{p}));
}

void SpcEngine::on_vpc_high(uint64_t w, PrefixVector v, QcRef proof) {
  if (high_) return;
  bool parentful = true;
  if (w > 1) {
    auto p = parent(v);
    if (!p.ready) {
      defer(p.missing, [this, w, v, proof] { on_vpc_high(w, v, proof); });
      return;
    }
    parentful = p.view != 0;
  }
  if (parentful) {
    auto cert = std::make_shared<Certificate>();
    cert->kind = CertKind::kDirect;
    cert->prev_view = w;
    cert->parent_view = w;
    cert->value = std::move(v);
    cert->proof = std::move(proof);
    broadcast_new_view(w + 1, cert);
  } else if (empty_view_sent_.insert(w).second) {
    EmptyView e;
    e.view = w;
    e.high_view = best_.view;
    e.high_value = best_.value;
    e.high_proof = best_.proof;
    e.sig = signer_.sign(skip_tag(cfg_.instance), skip_statement(w, best_.view));
    ctx_.broadcast(wrap(std::move(e)));
  }
}

void SpcEngine::on_new_commit(const MessagePtr &m) {
  const auto &c = std::get<NewCommit>(m->body);
  if (c.view > 1 && high_) return;
  if (c.view == 1 && low_ && high_) return;
  if (!f_low(c.view, c.value, c.proof)) return;
  if (commit_relayed_.insert({c.view, c.value}).second) ctx_.broadcast(m);
  commit(c.view, c.value);
}

void SpcEngine::commit(uint64_t w, const PrefixVector &v) {
  if (w == 1) {
    // A view-1 vector holds application values, not digests; it has no parent to follow.
    emit(OutputKind::kLow, v);
    return;
  }
  auto p = parent(v);
  if (!p.ready) {
    defer(p.missing, [this, w, v] { commit(w, v); });
    return;
  }
  commits_.push_back(CommitRecord{w, v, p.view != 0});
  if (p.view == 1)
    emit(OutputKind::kHigh, p.value);
  else if (p.view > 1)
    commit(p.view, p.value);
}

void SpcEngine::emit(OutputKind kind, const PrefixVector &v) {
  auto &slot = kind == OutputKind::kLow ? low_ : high_;
  if (slot) return;
  slot = v;
  if (out_) out_(kind, v);
}

void SpcEngine::pc_broadcast(const PcConfig &cfg, const VotePtr &vote) {
  auto m = std::make_shared<Message>();
  m->instance = cfg.instance;
  m->body = vote;
  ctx_.broadcast(m);
}

void SpcEngine::pc_output(const PcConfig &cfg, PcOutputKind kind, const VerifiableValue &out) {
  uint64_t w = cfg.instance.view;
  if (kind == PcOutputKind::kLow) {
    vpc_lows_.emplace(w, out.value);
    if (commit_relayed_.insert({w, out.value}).second) ctx_.broadcast(wrap(NewCommit{w, out.value, out.proof}));
  } else if (kind == PcOutputKind::kHigh) {
    on_vpc_high(w, out.value, out.proof);
  }
}

SpcReactor::SpcReactor(SpcConfig cfg, Signer signer, const SignatureScheme &scheme, Context &ctx,
                       std::optional<PrefixVector> input)
    : verifier_(scheme),
      input_(std::move(input)),
      engine_(std::move(cfg), signer, verifier_, ctx,
              [&ctx](OutputKind kind, const PrefixVector &v) { ctx.output(OutputEvent{kind, 0, 0, v, {}}); }) {}

void SpcReactor::start() {
  if (input_) engine_.input(*input_);
}

void SpcReactor::on_message(PartyId from, const MessagePtr &m) {
  const auto &c = engine_.config().instance;
  if (m->instance.protocol == c.protocol && m->instance.slot == c.slot) engine_.on_message(from, m);
}

}  // namespace prefixcons
