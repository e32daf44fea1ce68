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

#include "prefixcons/codec.h"

#include <sstream>

namespace prefixcons {

namespace {

constexpr int kMaxDepth = 16;

enum class QcKind : uint8_t { kNone = 0, kPlain = 1, kCompact1 = 2, kCompact2 = 3, kCompact3 = 4 };
enum class VectorMode : uint8_t { kGeneral = 0, kUniform = 1 };

void write_value(ByteWriter &w, const Value &v) {
  if (v.is_bot()) {
    w.u8(0);
  } else {
    w.u8(1);
    w.bytes(v.bytes());
  }
}

Value read_value(ByteReader &r, const std::string &field) {
  uint8_t flag = r.u8(field + ".flag");
  if (flag == 0) return Value::bot();
  if (flag != 1) throw DecodeError(field + ".flag", "unknown value flag " + std::to_string(flag));
  return Value(r.bytes(field + ".bytes"));
}

// Uniform mode applies when the non-BOT elements form a prefix of equal-size values.
bool uniform_layout(const PrefixVector &v, size_t &k, size_t &s) {
  k = 0;
  while (k < v.size() && !v[k].is_bot()) k++;
  for (size_t i = k; i < v.size(); i++)
    if (!v[i].is_bot()) return false;
  s = k ? v[0].size() : 0;
  for (size_t i = 0; i < k; i++)
    if (v[i].size() != s) return false;
  return true;
}

void write_parties(ByteWriter &w, const std::vector<PartyId> &ps) {
  w.varint(ps.size());
  for (auto p : ps) w.varint(p.index);
}

std::vector<PartyId> read_parties(ByteReader &r, const std::string &field) {
  size_t count = r.bounded(field + ".count", r.remaining());
  std::vector<PartyId> out;
  out.reserve(count);
  for (size_t i = 0; i < count; i++) out.emplace_back(static_cast<uint32_t>(r.bounded(field, UINT32_MAX)));
  return out;
}

void write_sigs(ByteWriter &w, const std::vector<std::string> &sigs) {
  w.varint(sigs.size());
  if (sigs.empty()) return;
  size_t s = sigs[0].size();
  w.varint(s);
  for (const auto &sig : sigs) {
    if (sig.size() != s) throw std::invalid_argument("signature sizes differ within one vote");
    w.raw(sig);
  }
}

std::vector<std::string> read_sigs(ByteReader &r, const std::string &field) {
  size_t count = r.bounded(field + ".count", r.remaining());
  std::vector<std::string> out;
  if (!count) return out;
  size_t s = r.bounded(field + ".size", r.remaining());
  if (s * count > r.remaining()) throw DecodeError(field, "truncated input");
  for (size_t i = 0; i < count; i++) out.push_back(r.raw(s, field));
  return out;
}

void write_aggregate(ByteWriter &w, const AggregateSignature &a) {
  write_parties(w, a.signers);
  w.bytes(a.messages.common);
  w.varint(a.messages.suffixes.size());
  for (const auto &s : a.messages.suffixes) w.bytes(s);
  w.bytes(a.blob);
}

AggregateSignature read_aggregate(ByteReader &r, const std::string &field) {
  AggregateSignature a;
  a.signers = read_parties(r, field + ".signers");
  a.messages.common = r.bytes(field + ".common");
  size_t count = r.bounded(field + ".suffixes.count", r.remaining());
  for (size_t i = 0; i < count; i++) a.messages.suffixes.push_back(r.bytes(field + ".suffixes"));
  a.blob = r.bytes(field + ".blob");
  return a;
}

void write_qc(ByteWriter &w, const QcRef &qc);
void write_vote(ByteWriter &w, const Vote &v);
QcRef read_qc(ByteReader &r, const std::string &field, int depth);
VotePtr read_vote(ByteReader &r, const std::string &field, int depth);

void write_cqc1(ByteWriter &w, const CompactQc1 &qc) {
  write_vector(w, qc.x);
  write_parties(w, qc.signers);
  w.varint(qc.reps.size());
  for (const auto &rep : qc.reps) {
    w.varint(rep.length);
    write_value(w, rep.next);
  }
  w.bytes(qc.blob);
}

CompactQc1Ptr read_cqc1(ByteReader &r, const std::string &field) {
  auto qc = std::make_shared<CompactQc1>();
  qc->x = read_vector(r, field + ".x");
  qc->signers = read_parties(r, field + ".signers");
  size_t count = r.bounded(field + ".reps.count", r.remaining());
  for (size_t i = 0; i < count; i++) {
    TruncatedVote rep;
    rep.length = static_cast<uint32_t>(r.bounded(field + ".reps.length", UINT32_MAX));
    rep.next = read_value(r, field + ".reps.next");
    qc->reps.push_back(rep);
  }
  qc->blob = r.bytes(field + ".blob");
  return qc;
}

void write_cqc2(ByteWriter &w, const CompactQc2 &qc) {
  write_vector(w, qc.x_p);
  write_parties(w, qc.signers);
  w.bytes(qc.blob);
  if (qc.full) {
    w.u8(1);
    write_cqc1(w, *qc.full);
  } else {
    w.u8(2);
    w.varint(qc.witnesses.size());
    for (const auto &wit : qc.witnesses) {
      w.varint(wit.party.index);
      write_value(w, wit.next);
      w.bytes(wit.sig);
      if (!wit.qc1) throw std::invalid_argument("divergence witness without QC1");
      write_cqc1(w, *wit.qc1);
    }
  }
}

CompactQc2Ptr read_cqc2(ByteReader &r, const std::string &field) {
  auto qc = std::make_shared<CompactQc2>();
  qc->x_p = read_vector(r, field + ".x_p");
  qc->signers = read_parties(r, field + ".signers");
  qc->blob = r.bytes(field + ".blob");
  uint8_t proof = r.u8(field + ".proof");
  if (proof == 1) {
    qc->full = read_cqc1(r, field + ".full");
  } else if (proof == 2) {
    size_t count = r.bounded(field + ".witnesses.count", r.remaining());
    for (size_t i = 0; i < count; i++) {
      DivergenceWitness wit;
      wit.party = PartyId(static_cast<uint32_t>(r.bounded(field + ".witnesses.party", UINT32_MAX)));
      wit.next = read_value(r, field + ".witnesses.next");
      wit.sig = r.bytes(field + ".witnesses.sig");
      wit.qc1 = read_cqc1(r, field + ".witnesses.qc1");
      qc->witnesses.push_back(std::move(wit));
    }
  } else {
    throw DecodeError(field + ".proof", "unknown proof kind " + std::to_string(proof));
  }
  return qc;
}

void write_cqc3(ByteWriter &w, const CompactQc3 &qc) {
  if (!qc.shortest_proof || !qc.longest_proof) throw std::invalid_argument("compact QC3 without QC2 proofs");
  write_vector(w, qc.shortest);
  write_cqc2(w, *qc.shortest_proof);
  write_vector(w, qc.longest);
  write_cqc2(w, *qc.longest_proof);
  write_parties(w, qc.signers);
  w.varint(qc.lengths.size());
  for (auto l : qc.lengths) w.varint(l);
  w.bytes(qc.blob);
}

CompactQc3Ptr read_cqc3(ByteReader &r, const std::string &field) {
  auto qc = std::make_shared<CompactQc3>();
  qc->shortest = read_vector(r, field + ".shortest");
  qc->shortest_proof = read_cqc2(r, field + ".shortest_proof");
  qc->longest = read_vector(r, field + ".longest");
  qc->longest_proof = read_cqc2(r, field + ".longest_proof");
  qc->signers = read_parties(r, field + ".signers");
  size_t count = r.bounded(field + ".lengths.count", r.remaining());
  for (size_t i = 0; i < count; i++)
    qc->lengths.push_back(static_cast<uint32_t>(r.bounded(field + ".lengths", UINT32_MAX)));
  qc->blob = r.bytes(field + ".blob");
  return qc;
}

void write_qc(ByteWriter &w, const QcRef &qc) {
  if (qc_empty(qc)) {
    w.u8(static_cast<uint8_t>(QcKind::kNone));
    return;
  }
  std::visit(
      [&](const auto &p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, PlainQcPtr>) {
          w.u8(static_cast<uint8_t>(QcKind::kPlain));
          w.varint(p->votes.size());
          for (const auto &v : p->votes) write_vote(w, *v);
        } else if constexpr (std::is_same_v<T, CompactQc1Ptr>) {
          w.u8(static_cast<uint8_t>(QcKind::kCompact1));
          write_cqc1(w, *p);
        } else if constexpr (std::is_same_v<T, CompactQc2Ptr>) {
          w.u8(static_cast<uint8_t>(QcKind::kCompact2));
          write_cqc2(w, *p);
        } else {
          w.u8(static_cast<uint8_t>(QcKind::kCompact3));
          write_cqc3(w, *p);
        }
      },
      qc);
}

QcRef read_qc(ByteReader &r, const std::string &field, int depth) {
  if (depth > kMaxDepth) throw DecodeError(field, "nesting too deep");
  auto kind = static_cast<QcKind>(r.u8(field + ".kind"));
  switch (kind) {
    case QcKind::kNone: return PlainQcPtr{};
    case QcKind::kPlain: {
      auto qc = std::make_shared<PlainQc>();
      size_t count = r.bounded(field + ".votes.count", r.remaining());
      for (size_t i = 0; i < count; i++) qc->votes.push_back(read_vote(r, field + ".votes", depth + 1));
      return PlainQcPtr(qc);
    }
    case QcKind::kCompact1: return read_cqc1(r, field);
    case QcKind::kCompact2: return read_cqc2(r, field);
    case QcKind::kCompact3: return read_cqc3(r, field);
  }
  throw DecodeError(field + ".kind", "unknown QC kind " + std::to_string(static_cast<int>(kind)));
}

void write_vote(ByteWriter &w, const Vote &v) {
  w.u8(v.round);
  w.varint(v.voter.index);
  write_vector(w, v.value);
  write_sigs(w, v.sigs);
  w.varint(v.justify.size());
  for (const auto &qc : v.justify) write_qc(w, qc);
}

VotePtr read_vote(ByteReader &r, const std::string &field, int depth) {
  if (depth > kMaxDepth) throw DecodeError(field, "nesting too deep");
  auto v = std::make_shared<Vote>();
  v->round = r.u8(field + ".round");
  if (v->round < 1 || v->round > 4) throw DecodeError(field + ".round", "out of range");
  v->voter = PartyId(static_cast<uint32_t>(r.bounded(field + ".voter", UINT32_MAX)));
  v->value = read_vector(r, field + ".value");
  v->sigs = read_sigs(r, field + ".sigs");
  size_t count = r.bounded(field + ".justify.count", r.remaining());
  for (size_t i = 0; i < count; i++) v->justify.push_back(read_qc(r, field + ".justify", depth + 1));
  return v;
}

void write_cert(ByteWriter &w, const Certificate &c) {
  w.u8(static_cast<uint8_t>(c.kind));
  w.varint(c.prev_view);
  w.varint(c.parent_view);
  write_vector(w, c.value);
  write_qc(w, c.proof);
  if (c.kind == CertKind::kIndirect) write_aggregate(w, c.skips);
}

CertPtr read_cert(ByteReader &r, const std::string &field) {
  auto c = std::make_shared<Certificate>();
  uint8_t kind = r.u8(field + ".kind");
  if (kind != 1 && kind != 2) throw DecodeError(field + ".kind", "unknown certificate kind");
  c->kind = static_cast<CertKind>(kind);
  c->prev_view = r.varint(field + ".prev_view");
  c->parent_view = r.varint(field + ".parent_view");
  c->value = read_vector(r, field + ".value");
  c->proof = read_qc(r, field + ".proof", 0);
  if (c->kind == CertKind::kIndirect) c->skips = read_aggregate(r, field + ".skips");
  return c;
}

void write_proposal(ByteWriter &w, const ProposalObject &p) {
  if (!p.cert) throw std::invalid_argument("proposal object without certificate");
  w.varint(p.view);
  write_cert(w, *p.cert);
}

ProposalPtr read_proposal(ByteReader &r, const std::string &field) {
  auto p = std::make_shared<ProposalObject>();
  p->view = r.varint(field + ".view");
  p->cert = read_cert(r, field + ".cert");
  return p;
}

void write_instance(ByteWriter &w, const InstanceId &id) {
  w.u8(id.protocol);
  w.varint(id.slot);
  w.varint(id.view);
  w.varint(id.lane);
}

InstanceId read_instance(ByteReader &r) {
  InstanceId id;
  id.protocol = r.u8("instance.protocol");
  id.slot = r.varint("instance.slot");
  id.view = r.varint("instance.view");
  id.lane = static_cast<uint32_t>(r.bounded("instance.lane", UINT32_MAX));
  return id;
}

Digest read_digest(ByteReader &r, const std::string &field) {
  std::string raw = r.raw(Digest::kSize, field);
  std::array<uint8_t, Digest::kSize> b;
  std::copy(raw.begin(), raw.end(), b.begin());
  return Digest(b);
}

template <class F>
std::string encode_with(F &&f) {
  ByteWriter w;
  f(w);
  return w.take();
}

template <class T, class F>
T decode_all(std::string_view bytes, F &&f) {
  ByteReader r(bytes);
  T out = f(r);
  if (!r.done()) throw DecodeError("trailer", std::to_string(r.remaining()) + " unexpected trailing bytes");
  return out;
}

}  // namespace

void write_vector(ByteWriter &w, const PrefixVector &v) {
  size_t k = 0, s = 0;
  if (uniform_layout(v, k, s)) {
    w.u8(static_cast<uint8_t>(VectorMode::kUniform));
    w.varint(v.size());
    w.varint(k);
    w.varint(s);
    for (size_t i = 0; i < k; i++) w.raw(v[i].bytes());
    return;
  }
  w.u8(static_cast<uint8_t>(VectorMode::kGeneral));
  w.varint(v.size());
  for (const auto &e : v) write_value(w, e);
}

PrefixVector read_vector(ByteReader &r, const std::string &field) {
  uint8_t mode = r.u8(field + ".mode");
  size_t count = r.varint(field + ".count");
  std::vector<Value> elems;
  if (mode == static_cast<uint8_t>(VectorMode::kUniform)) {
    size_t k = r.bounded(field + ".filled", count);
    size_t s = r.bounded(field + ".elem_size", r.remaining());
    if (s && k > r.remaining() / s) throw DecodeError(field, "truncated input");
    // Only BOT padding is free; bound it so a tiny input cannot allocate without limit.
    if (count - k > (1u << 20)) throw DecodeError(field + ".count", "padding too long");
    for (size_t i = 0; i < k; i++) elems.emplace_back(r.raw(s, field + ".elems"));
    for (size_t i = k; i < count; i++) elems.push_back(Value::bot());
  } else if (mode == static_cast<uint8_t>(VectorMode::kGeneral)) {
    if (count > r.remaining()) throw DecodeError(field + ".count", "exceeds input");
    for (size_t i = 0; i < count; i++) elems.push_back(read_value(r, field + ".elems"));
  } else {
    throw DecodeError(field + ".mode", "unknown vector mode " + std::to_string(mode));
  }
  return PrefixVector(std::move(elems));
}

std::string encode_vote(const Vote &v) {
  return encode_with([&](ByteWriter &w) { write_vote(w, v); });
}

VotePtr decode_vote(std::string_view bytes) {
  return decode_all<VotePtr>(bytes, [](ByteReader &r) { return read_vote(r, "vote", 0); });
}

std::string encode_qc(const QcRef &qc) {
  return encode_with([&](ByteWriter &w) { write_qc(w, qc); });
}

QcRef decode_qc(std::string_view bytes) {
  return decode_all<QcRef>(bytes, [](ByteReader &r) { return read_qc(r, "qc", 0); });
}

std::string encode_proposal(const ProposalObject &p) {
  return encode_with([&](ByteWriter &w) { write_proposal(w, p); });
}

ProposalPtr decode_proposal(std::string_view bytes) {
  return decode_all<ProposalPtr>(bytes, [](ByteReader &r) { return read_proposal(r, "proposal"); });
}

std::string encode_message(const Message &m) {
  ByteWriter w;
  std::visit(
      [&](const auto &b) {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, VotePtr>) {
          w.u8(b->round);
          write_instance(w, m.instance);
          write_vote(w, *b);
        } else if constexpr (std::is_same_v<T, NewView>) {
          w.u8(static_cast<uint8_t>(WireTag::kNewView));
          write_instance(w, m.instance);
          write_proposal(w, *b.proposal);
        } else if constexpr (std::is_same_v<T, EmptyView>) {
          w.u8(static_cast<uint8_t>(WireTag::kEmptyView));
          write_instance(w, m.instance);
          w.varint(b.view);
          w.varint(b.high_view);
          write_vector(w, b.high_value);
          write_qc(w, b.high_proof);
          w.varint(b.sig.signer.index);
          w.bytes(b.sig.bytes);
        } else if constexpr (std::is_same_v<T, NewCommit>) {
          w.u8(static_cast<uint8_t>(WireTag::kNewCommit));
          write_instance(w, m.instance);
          w.varint(b.view);
          write_vector(w, b.value);
          write_qc(w, b.proof);
        } else if constexpr (std::is_same_v<T, SlotProposal>) {
          w.u8(static_cast<uint8_t>(WireTag::kProposal));
          write_instance(w, m.instance);
          w.varint(b.slot);
          w.bytes(b.payload);
        } else if constexpr (std::is_same_v<T, FetchRequest>) {
          w.u8(static_cast<uint8_t>(WireTag::kFetchRequest));
          write_instance(w, m.instance);
          w.u8(static_cast<uint8_t>(b.kind));
          w.raw(b.digest.str());
        } else {
          w.u8(static_cast<uint8_t>(WireTag::kFetchResponse));
          write_instance(w, m.instance);
          w.u8(static_cast<uint8_t>(b.kind));
          if (b.kind == FetchKind::kProposalObject)
            write_proposal(w, *b.object);
          else
            w.bytes(b.payload);
        }
      },
      m.body);
  return w.take();
}

MessagePtr decode_message(std::string_view bytes) {
  return decode_all<MessagePtr>(bytes, [](ByteReader &r) -> MessagePtr {
    auto m = std::make_shared<Message>();
    uint8_t tag = r.u8("tag");
    m->instance = read_instance(r);
    switch (static_cast<WireTag>(tag)) {
      case WireTag::kVote1:
      case WireTag::kVote2:
      case WireTag::kVote3:
      case WireTag::kVote4: {
        auto v = read_vote(r, "vote", 0);
        if (v->round != tag) throw DecodeError("vote.round", "does not match message tag");
        m->body = v;
        break;
      }
      case WireTag::kNewView: m->body = NewView{read_proposal(r, "new_view")}; break;
      case WireTag::kEmptyView: {
        EmptyView e;
        e.view = r.varint("empty_view.view");
        e.high_view = r.varint("empty_view.high_view");
        e.high_value = read_vector(r, "empty_view.high_value");
        e.high_proof = read_qc(r, "empty_view.high_proof", 0);
        e.sig.signer = PartyId(static_cast<uint32_t>(r.bounded("empty_view.signer", UINT32_MAX)));
        e.sig.bytes = r.bytes("empty_view.sig");
        m->body = std::move(e);
        break;
      }
      case WireTag::kNewCommit: {
        NewCommit c;
        c.view = r.varint("new_commit.view");
        c.value = read_vector(r, "new_commit.value");
        c.proof = read_qc(r, "new_commit.proof", 0);
        m->body = std::move(c);
        break;
      }
      case WireTag::kProposal: {
        SlotProposal p;
        p.slot = r.varint("proposal.slot");
        p.payload = r.bytes("proposal.payload");
        m->body = std::move(p);
        break;
      }
      case WireTag::kFetchRequest: {
        FetchRequest q;
        uint8_t kind = r.u8("fetch_request.kind");
        if (kind != 1 && kind != 2) throw DecodeError("fetch_request.kind", "unknown fetch kind");
        q.kind = static_cast<FetchKind>(kind);
        q.digest = read_digest(r, "fetch_request.digest");
        m->body = q;
        break;
      }
      case WireTag::kFetchResponse: {
        FetchResponse s;
        uint8_t kind = r.u8("fetch_response.kind");
        if (kind == 1) {
          s.object = read_proposal(r, "fetch_response.object");
        } else if (kind == 2) {
          s.payload = r.bytes("fetch_response.payload");
        } else {
          throw DecodeError("fetch_response.kind", "unknown fetch kind");
        }
        s.kind = static_cast<FetchKind>(kind);
        m->body = std::move(s);
        break;
      }
      default: throw DecodeError("tag", "unknown message tag " + std::to_string(tag));
    }
    return m;
  });
}

namespace {

std::string qc_summary(const QcRef &qc) {
  if (qc_empty(qc)) return "none";
  std::ostringstream os;
  std::visit(
      [&](const auto &p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, PlainQcPtr>) {
          os << "plain QC round " << int(p->round()) << " with " << p->votes.size() << " votes";
        } else if constexpr (std::is_same_v<T, CompactQc1Ptr>) {
          os << "compact QC1 x=" << p->x.to_string() << " signers=" << p->signers.size();
        } else if constexpr (std::is_same_v<T, CompactQc2Ptr>) {
          os << "compact QC2 x_p=" << p->x_p.to_string() << (p->full ? " full-length" : " witnesses");
        } else {
          os << "compact QC3 shortest=" << p->shortest.to_string() << " longest=" << p->longest.to_string();
        }
      },
      qc);
  os << " (" << encode_qc(qc).size() << " bytes)";
  return os.str();
}

}  // namespace

std::string describe_message(const Message &m) {
  std::ostringstream os;
  os << message_kind(m) << " instance=" << m.instance.to_string() << " size=" << encode_message(m).size() << "\n";
  std::visit(
      [&](const auto &b) {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, VotePtr>) {
          os << "  voter: " << b->voter.to_string() << "\n  value: " << b->value.to_string()
             << "\n  signatures: " << b->sigs.size() << "\n";
          for (const auto &qc : b->justify) os << "  justify: " << qc_summary(qc) << "\n";
        } else if constexpr (std::is_same_v<T, NewView>) {
          const auto &c = *b.proposal->cert;
          os << "  view: " << b.proposal->view << "\n  cert: " << (c.kind == CertKind::kDirect ? "direct" : "indirect")
             << " prev=" << c.prev_view << " parent=" << c.parent_view << "\n  value: " << c.value.to_string()
             << "\n  proof: " << qc_summary(c.proof) << "\n  digest: " << b.proposal->digest().hex() << "\n";
        } else if constexpr (std::is_same_v<T, EmptyView>) {
          os << "  view: " << b.view << "\n  high_view: " << b.high_view << "\n  signer: " << b.sig.signer.to_string()
             << "\n  proof: " << qc_summary(b.high_proof) << "\n";
        } else if constexpr (std::is_same_v<T, NewCommit>) {
          os << "  view: " << b.view << "\n  value: " << b.value.to_string() << "\n  proof: " << qc_summary(b.proof)
             << "\n";
        } else if constexpr (std::is_same_v<T, SlotProposal>) {
          os << "  slot: " << b.slot << "\n  payload: " << b.payload.size() << " bytes\n";
        } else if constexpr (std::is_same_v<T, FetchRequest>) {
          os << "  digest: " << b.digest.hex() << "\n";
        } else {
          os << "  kind: " << (b.kind == FetchKind::kPayload ? "payload" : "proposal-object") << "\n";
        }
      },
      m.body);
  return os.str();
}

}  // namespace prefixcons
