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

#include "prefixcons/sim.h"

#include <json.hpp>
#include <stdexcept>

#include "prefixcons/codec.h"

namespace prefixcons {

namespace {

std::string hex_of(const std::string &s) {
  static const char *digits = "0123456789abcdef";
  std::string out;
  out.reserve(2 * s.size());
  for (unsigned char c : s) {
    out.push_back(digits[c >> 4]);
    out.push_back(digits[c & 15]);
  }
  return out;
}

Time quarter_steps(std::mt19937_64 &rng, const Time &max) {
  int64_t top = boost::rational_cast<int64_t>(max * 4);
  if (top < 1) top = 1;
  std::uniform_int_distribution<int64_t> dist(1, top);
  return Time(dist(rng), 4);
}

int64_t floor_div(const Time &a, const Time &b) {
  Time q = a / b;
  int64_t f = q.numerator() / q.denominator();
  if (q.numerator() < 0 && q.numerator() % q.denominator() != 0) f--;
  return f;
}

}  // namespace

std::optional<Time> Metrics::first(uint32_t p, OutputKind kind, std::optional<uint64_t> slot) const {
  auto it = outputs.find(p);
  if (it == outputs.end()) return std::nullopt;
  for (const auto &o : it->second)
    if (o.event.kind == kind && (!slot || o.event.slot == *slot)) return o.at;
  return std::nullopt;
}

class Simulation::PartyContext : public Context {
 public:
  PartyContext(Simulation &sim, uint32_t id) : sim_(sim), id_(id) {}
  PartyId self() const override { return PartyId(id_); }
  void broadcast(MessagePtr m) override { sim_.broadcast(PartyId(id_), m); }
  void send(PartyId to, MessagePtr m) override { sim_.send(PartyId(id_), to, m, sim_.size_of(m)); }
  void set_timer(const TimerKey &key, const Time &after) override { sim_.set_timer(PartyId(id_), key, after); }
  void output(const OutputEvent &ev) override { sim_.record_output(PartyId(id_), ev); }

 private:
  Simulation &sim_;
  uint32_t id_;
};

bool Simulation::EventOrder::operator()(const Event &a, const Event &b) const {
  if (a.at != b.at) return a.at < b.at;
  if (a.sender != b.sender) return a.sender < b.sender;
  if (a.receiver != b.receiver) return a.receiver < b.receiver;
  return a.seq < b.seq;
}

Simulation::Simulation(SimConfig cfg, std::vector<std::shared_ptr<Adversary>> adversaries)
    : cfg_(std::move(cfg)), adversaries_(std::move(adversaries)), rng_(cfg_.seed) {
  if (cfg_.n == 0) throw std::invalid_argument("simulation needs at least one party");
  if (cfg_.delay.delta <= 0 || cfg_.delay.delta_cap < cfg_.delay.delta)
    throw std::invalid_argument("delays must satisfy 0 < delta <= delta_cap");
  scheme_ = make_scheme(cfg_.scheme, cfg_.n, cfg_.seed);
  hash_state_.assign(Digest::kSize, '\0');
}

Simulation::~Simulation() = default;

void Simulation::build(const Factory &factory) {
  for (const auto &a : adversaries_) {
    for (auto p : a->byzantine()) byzantine_.insert(p);
    for (auto p : a->silent()) {
      silent_.insert(p);
      byzantine_.insert(p);
    }
  }
  for (auto p : byzantine_)
    if (p.index >= cfg_.n) throw std::invalid_argument("Byzantine party index out of range");
  if (byzantine_.size() > cfg_.f)
    throw std::invalid_argument("adversary corrupts " + std::to_string(byzantine_.size()) +
                                " parties but f = " + std::to_string(cfg_.f));
  contexts_.clear();
  reactors_.clear();
  for (uint32_t i = 0; i < cfg_.n; i++) {
    contexts_.push_back(std::make_unique<PartyContext>(*this, i));
    if (silent_.count(PartyId(i)))
      reactors_.push_back(nullptr);
    else
      reactors_.push_back(factory(PartyId(i), scheme_->signer(PartyId(i)), *contexts_.back()));
  }
}

std::vector<PartyId> Simulation::honest() const {
  std::vector<PartyId> out;
  for (uint32_t i = 0; i < cfg_.n; i++)
    if (!byzantine_.count(PartyId(i))) out.push_back(PartyId(i));
  return out;
}

Reactor *Simulation::reactor(PartyId p) const {
  if (p.index >= reactors_.size()) return nullptr;
  return reactors_[p.index].get();
}

Signer Simulation::byzantine_signer(PartyId p) const {
  if (!is_byzantine(p)) throw KeyError("no signing key for honest party " + p.to_string());
  return scheme_->signer(p);
}

size_t Simulation::size_of(const MessagePtr &m) { return cfg_.count_bytes ? encode_message(*m).size() : 0; }

void Simulation::broadcast(PartyId from, const MessagePtr &m) {
  size_t bytes = size_of(m);
  for (uint32_t to = 0; to < cfg_.n; to++) send(from, PartyId(to), m, bytes);
}

void Simulation::send(PartyId from, PartyId to, const MessagePtr &m, size_t bytes) {
  if (to.index >= cfg_.n) throw std::out_of_range("send to unknown party " + to.to_string());
  if (to == from) {
    local_.emplace_back(from.index, m);
    return;
  }
  MessagePtr out = m;
  if (is_byzantine(from)) {
    bool drop = false;
    for (const auto &a : adversaries_) {
      a->on_send(*this, from, to, out, drop);
      if (drop) return;
    }
    if (out != m) bytes = size_of(out);
  }
  schedule(from, to, out, bytes);
}

void Simulation::inject(PartyId from, PartyId to, MessagePtr m) {
  if (!is_byzantine(from)) throw KeyError("only Byzantine parties can inject messages");
  if (to == from) return;
  schedule(from, to, m, size_of(m));
}

Time Simulation::draw_delay(const Envelope &e) {
  const auto &d = cfg_.delay;
  if (e.sent < d.gst) return d.fuzz ? quarter_steps(rng_, d.pre_gst_max) : d.delta;
  return d.jitter ? quarter_steps(rng_, d.delta_cap) : d.delta;
}

void Simulation::schedule(PartyId from, PartyId to, const MessagePtr &m, size_t bytes) {
  Envelope e{from, to, now_, now_, bytes, m};
  Time delay = draw_delay(e);
  e.deliver = now_ + delay;
  for (const auto &a : adversaries_)
    if (auto d = a->on_schedule(*this, e)) {
      if (*d <= 0) throw std::logic_error("adversary chose a non-positive delay");
      e.deliver = now_ + *d;
    }
  // Anything sent by time t arrives by max(t, GST) + delta_cap.
  Time bound = std::max(now_, cfg_.delay.gst) + cfg_.delay.delta_cap;
  if (e.deliver > bound) e.deliver = bound;

  metrics_.messages++;
  metrics_.bytes += bytes;
  metrics_.messages_by_kind[message_kind(*m)]++;
  queue_.insert(Event{e.deliver, from.index, to.index, seq_++, m, std::nullopt});
}

void Simulation::set_timer(PartyId p, const TimerKey &key, const Time &after) {
  if (after < 0) throw std::invalid_argument("negative timer");
  queue_.insert(Event{now_ + after, cfg_.n, p.index, seq_++, nullptr, key});
}

void Simulation::record_output(PartyId p, const OutputEvent &ev) {
  metrics_.outputs[p.index].push_back(TimedOutput{now_, ev});
  nlohmann::json j;
  j["t"] = time_to_string(now_);
  j["ev"] = "output";
  j["party"] = p.index;
  j["kind"] = output_kind_str(ev.kind);
  j["slot"] = ev.slot;
  j["index"] = ev.index;
  auto arr = nlohmann::json::array();
  for (const auto &x : ev.value) arr.push_back(hex_of(x.bytes()));
  j["value"] = arr;
  if (!ev.note.empty()) j["note"] = ev.note;
  note(j.dump());
}

void Simulation::note(const std::string &line) {
  hash_state_ = hash_object(hash_state_ + line).str();
  if (cfg_.keep_transcript) transcript_.push_back(line);
}

std::string Simulation::transcript_hash() const { return hex_of(hash_state_); }

std::optional<Time> Simulation::suspended_until(PartyId p, const Time &t) {
  int64_t k = floor_div(t, cfg_.delay.delta);
  if (k < 0) return std::nullopt;
  auto it = suspension_.find(static_cast<uint64_t>(k));
  if (it == suspension_.end()) {
    std::optional<PartyId> who;
    for (const auto &a : adversaries_)
      if (auto s = a->on_round(static_cast<uint64_t>(k))) {
        who = s;
        break;
      }
    it = suspension_.emplace(static_cast<uint64_t>(k), who).first;
  }
  if (it->second && *it->second == p) return Time(k + 1) * cfg_.delay.delta;
  return std::nullopt;
}

void Simulation::drain_local(PartyId p) {
  Reactor *r = reactor(p);
  while (!local_.empty()) {
    auto [who, m] = std::move(local_.front());
    local_.pop_front();
    if (r && who == p.index) r->on_message(p, m);
  }
}

void Simulation::dispatch(const Event &ev) {
  PartyId to(ev.receiver);
  if (auto until = suspended_until(to, ev.at)) {
    Event moved = ev;
    moved.at = *until;
    queue_.insert(std::move(moved));
    metrics_.postponed++;
    return;
  }
  now_ = ev.at;
  metrics_.events++;
  Reactor *r = reactor(to);
  nlohmann::json j;
  j["t"] = time_to_string(now_);
  j["to"] = ev.receiver;
  if (ev.timer) {
    j["ev"] = "timer";
    j["slot"] = ev.timer->slot;
    j["view"] = ev.timer->view;
  } else {
    j["ev"] = "deliver";
    j["from"] = ev.sender;
    j["kind"] = message_kind(*ev.msg);
    j["inst"] = ev.msg->instance.to_string();
  }
  note(j.dump());
  if (!r) return;
  if (ev.timer)
    r->on_timer(*ev.timer);
  else
    r->on_message(PartyId(ev.sender), ev.msg);
  drain_local(to);
}

bool Simulation::all_honest_done() const {
  for (uint32_t i = 0; i < cfg_.n; i++) {
    if (byzantine_.count(PartyId(i))) continue;
    if (!reactors_[i] || !reactors_[i]->done()) return false;
  }
  return true;
}

const Metrics &Simulation::run() {
  if (contexts_.empty()) throw std::logic_error("build() must run before run()");
  for (const auto &a : adversaries_) a->on_start(*this);
  for (uint32_t i = 0; i < cfg_.n; i++) {
    if (!reactors_[i]) continue;
    reactors_[i]->start();
    drain_local(PartyId(i));
  }
  while (!queue_.empty() && !all_honest_done()) {
    auto it = queue_.begin();
    if (it->at > cfg_.max_time) {
      metrics_.timed_out = true;
      break;
    }
    Event ev = *it;
    queue_.erase(it);
    dispatch(ev);
  }
  metrics_.all_done = all_honest_done();
  metrics_.end_time = now_;
  for (const auto &a : adversaries_) a->on_finish(*this);
  return metrics_;
}

}  // namespace prefixcons
