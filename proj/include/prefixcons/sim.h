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

#ifndef PREFIXCONS_SIM_H
#define PREFIXCONS_SIM_H

#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "prefixcons/reactor.h"

namespace prefixcons {

/**
 * Partial-synchrony delays. After GST every message takes delta unless an
 * adversary picks another delay, and honest links never exceed delta_cap.
 * Messages sent before GST arrive by gst + delta_cap at the latest.
 */
struct DelayPolicy {
  Time delta = 1;      // actual delay after GST; also the round length
  Time delta_cap = 2;  // known bound after GST
  Time gst = 0;
  bool fuzz = false;  // random pre-GST delays in (0, pre_gst_max]
  Time pre_gst_max = 8;
  bool jitter = false;  // random post-GST delays in (0, delta_cap]
};

struct SimConfig {
  uint32_t n = 4;
  uint32_t f = 1;
  DelayPolicy delay;
  uint64_t seed = 1;
  Time max_time = 10000;
  std::string scheme = "mac";
  bool count_bytes = true;
  bool keep_transcript = false;
};

struct Envelope {
  PartyId from, to;
  Time sent, deliver;
  size_t bytes = 0;
  MessagePtr msg;
};

struct TimedOutput {
  Time at;
  OutputEvent event;
};

struct Metrics {
  uint64_t messages = 0;  // network messages; self-delivery excluded
  uint64_t bytes = 0;
  uint64_t events = 0;
  std::map<std::string, uint64_t> messages_by_kind;
  std::map<uint32_t, std::vector<TimedOutput>> outputs;
  Time end_time = 0;
  bool all_done = false;
  bool timed_out = false;
  uint64_t postponed = 0;  // deliveries moved by suspension

  /** Time of the first output of `kind` at party p (slot filter for MSC events). */
  std::optional<Time> first(uint32_t p, OutputKind kind, std::optional<uint64_t> slot = std::nullopt) const;
};

class Simulation;

/**
 * Adversary hooks. Byzantine parties either have no reactor (silent) or run
 * the honest code with their outgoing traffic filtered by on_send.
 */
class Adversary {
 public:
  virtual ~Adversary() = default;
  virtual std::string name() const = 0;
  virtual std::set<PartyId> byzantine() const { return {}; }
  /** Byzantine parties that never run a reactor. */
  virtual std::set<PartyId> silent() const { return {}; }
  virtual void on_start(Simulation &) {}
  /** Called for each outgoing copy from a Byzantine sender; may replace or drop it. */
  virtual void on_send(Simulation &, PartyId /*from*/, PartyId /*to*/, MessagePtr & /*m*/, bool & /*drop*/) {}
  /** Overrides the delay of one envelope; results are clamped to the model. */
  virtual std::optional<Time> on_schedule(Simulation &, const Envelope &) { return std::nullopt; }
  /** Party suspended for round k (time window [k*delta, (k+1)*delta)). */
  virtual std::optional<PartyId> on_round(uint64_t /*k*/) { return std::nullopt; }
  virtual void on_finish(Simulation &) {}
};

class Simulation {
 public:
  using Factory = std::function<std::unique_ptr<Reactor>(PartyId, const Signer &, Context &)>;

  Simulation(SimConfig cfg, std::vector<std::shared_ptr<Adversary>> adversaries = {});
  ~Simulation();

  /** Creates a reactor for every party that is not silent. Throws std::invalid_argument if |Byzantine| > f. */
  void build(const Factory &factory);
  /** Runs until every honest party is done or max_time passes. */
  const Metrics &run();

  const SimConfig &config() const { return cfg_; }
  const SignatureScheme &scheme() const { return *scheme_; }
  const Metrics &metrics() const { return metrics_; }
  Time now() const { return now_; }
  std::mt19937_64 &rng() { return rng_; }

  bool is_byzantine(PartyId p) const { return byzantine_.count(p) > 0; }
  const std::set<PartyId> &byzantine() const { return byzantine_; }
  std::vector<PartyId> honest() const;
  Reactor *reactor(PartyId p) const;
  template <class T>
  T *as(PartyId p) const {
    return dynamic_cast<T *>(reactor(p));
  }

  /** Signing capability of a Byzantine party; throws KeyError for honest parties. */
  Signer byzantine_signer(PartyId p) const;
  /** Sends a message as Byzantine party `from` outside its reactor. */
  void inject(PartyId from, PartyId to, MessagePtr m);

  const std::vector<std::string> &transcript() const { return transcript_; }
  std::string transcript_hash() const;

 private:
  class PartyContext;
  struct Event {
    Time at;
    uint32_t sender;  // n for timers, so deliveries at the same instant run first
    uint32_t receiver;
    uint64_t seq;
    MessagePtr msg;
    std::optional<TimerKey> timer;
  };
  struct EventOrder {
    bool operator()(const Event &a, const Event &b) const;
  };

  void broadcast(PartyId from, const MessagePtr &m);
  void send(PartyId from, PartyId to, const MessagePtr &m, size_t bytes);
  void schedule(PartyId from, PartyId to, const MessagePtr &m, size_t bytes);
  void set_timer(PartyId p, const TimerKey &key, const Time &after);
  void record_output(PartyId p, const OutputEvent &ev);
  void dispatch(const Event &ev);
  void drain_local(PartyId p);
  std::optional<Time> suspended_until(PartyId p, const Time &t);
  Time draw_delay(const Envelope &e);
  void note(const std::string &line);
  size_t size_of(const MessagePtr &m);
  bool all_honest_done() const;

  SimConfig cfg_;
  std::vector<std::shared_ptr<Adversary>> adversaries_;
  std::unique_ptr<SignatureScheme> scheme_;
  std::set<PartyId> byzantine_, silent_;
  std::vector<std::unique_ptr<PartyContext>> contexts_;
  std::vector<std::unique_ptr<Reactor>> reactors_;
  std::set<Event, EventOrder> queue_;
  std::deque<std::pair<uint32_t, MessagePtr>> local_;
  std::map<uint64_t, std::optional<PartyId>> suspension_;
  std::mt19937_64 rng_;
  Time now_ = 0;
  uint64_t seq_ = 0;
  Metrics metrics_;
  std::vector<std::string> transcript_;
  std::string hash_state_;
  bool in_handler_ = false;
};

}  // namespace prefixcons

#endif
