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

#ifndef PREFIXCONS_REACTOR_H
#define PREFIXCONS_REACTOR_H

#include <boost/rational.hpp>
#include <compare>
#include <cstdint>
#include <string>

#include "prefixcons/messages.h"

namespace prefixcons {

/** Virtual time; rational so fractional delays are exact. */
using Time = boost::rational<int64_t>;

std::string time_to_string(const Time &t);

enum class TimerKind : uint8_t { kSpcView = 1, kMscSlot = 2 };

struct TimerKey {
  TimerKind kind = TimerKind::kSpcView;
  uint64_t slot = 0;
  uint64_t view = 0;

  friend auto operator<=>(const TimerKey &, const TimerKey &) = default;
};

enum class OutputKind : uint8_t {
  kOpt = 1,
  kLow = 2,
  kHigh = 3,
  kCommit = 4,     // one committed payload (slot, index in the decided vector)
  kSlotStart = 5,  // NewSlot at this party
  kDecide = 6,     // wrapper decision; value has 0 or 1 element
  kFault = 7,      // local invariant break; note carries the diagnostic
};

const char *output_kind_str(OutputKind k);

struct OutputEvent {
  OutputKind kind = OutputKind::kLow;
  uint64_t slot = 0;
  uint64_t index = 0;
  PrefixVector value;
  std::string note;
};

/**
 * Effects interface handed to a reactor. Broadcasts reach every other party
 * through the network and are delivered to the sender locally after the
 * current handler returns.
 */
class Context {
 public:
  virtual ~Context() = default;
  virtual PartyId self() const = 0;
  virtual void broadcast(MessagePtr m) = 0;
  virtual void send(PartyId to, MessagePtr m) = 0;
  virtual void set_timer(const TimerKey &key, const Time &after) = 0;
  virtual void output(const OutputEvent &ev) = 0;
};

/** A deterministic per-party state machine: no clock and no IO of its own. */
class Reactor {
 public:
  virtual ~Reactor() = default;
  virtual void start() = 0;
  virtual void on_message(PartyId from, const MessagePtr &m) = 0;
  virtual void on_timer(const TimerKey &key) = 0;
  virtual bool done() const = 0;
};

}  // namespace prefixcons

#endif
