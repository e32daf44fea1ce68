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

#include "prefixcons/scenario.h"

#include <random>
#include <set>

#include "prefixcons/derived.h"
#include "prefixcons/pc_reactor.h"

namespace prefixcons {

namespace {

using nlohmann::json;

constexpr std::pair<Protocol, const char *> kProtocols[] = {
    {Protocol::kPc3, "pc3"},       {Protocol::kPcOpt, "pc_opt"},
    {Protocol::kPc5f1, "pc_5f1"},  {Protocol::kSpc, "spc"},
    {Protocol::kMsc, "msc"},       {Protocol::kGraded, "graded"},
    {Protocol::kBinary, "binary"}, {Protocol::kValidated, "validated"},
};

const std::set<std::string> kAdversaryTypes = {"silent",    "equivocate",    "censor",        "delayer",
                                               "suspender", "withhold_body", "doctored_proof"};

[[noreturn]] void fail(const std::string &path, const std::string &msg) { throw ScenarioError(path + ": " + msg); }

bool is_pc_family(Protocol p) { return p == Protocol::kPc3 || p == Protocol::kPcOpt || p == Protocol::kPc5f1; }
bool is_slotted(Protocol p) { return p == Protocol::kMsc || p == Protocol::kValidated; }

ProtocolId wire_protocol(Protocol p) {
  switch (p) {
    case Protocol::kPc3: return ProtocolId::kPc3;
    case Protocol::kPcOpt: return ProtocolId::kPcOpt;
    case Protocol::kPc5f1: return ProtocolId::kPc5f1;
    case Protocol::kSpc: return ProtocolId::kSpc;
    case Protocol::kMsc: return ProtocolId::kMsc;
    case Protocol::kGraded: return ProtocolId::kGraded;
    case Protocol::kBinary: return ProtocolId::kBinary;
    case Protocol::kValidated: return ProtocolId::kValidated;
  }
  return ProtocolId::kPc3;
}

Time parse_time(const json &j, const std::string &path) {
  if (j.is_number_integer()) return Time(j.get<int64_t>());
  if (j.is_string()) {
    auto s = j.get<std::string>();
    auto slash = s.find('/');
    try {
      if (slash == std::string::npos) return Time(std::stoll(s));
      return Time(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
    } catch (const std::exception &) {
      fail(path, "expected an integer or \"p/q\" rational, got \"" + s + "\"");
    }
  }
  fail(path, "expected an integer or \"p/q\" rational");
}

json time_json(const Time &t) {
  if (t.denominator() == 1) return t.numerator();
  return time_to_string(t);
}

template <class T>
T get(const json &obj, const std::string &key, const std::string &path, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception &) {
    fail(path + "." + key, "wrong type");
  }
}

void reject_unknown(const json &obj, const std::set<std::string> &known, const std::string &path) {
  for (const auto &[k, _] : obj.items())
    if (!known.count(k)) fail(path + "." + k, "unknown field");
}

PrefixVector parse_vector(const json &j, const std::string &path) {
  if (j.is_string()) return PrefixVector::of_symbols(j.get<std::string>());
  if (!j.is_array()) fail(path, "expected an array of strings or a symbol string");
  PrefixVector v;
  for (size_t i = 0; i < j.size(); i++) {
    const auto &e = j[i];
    if (e.is_string())
      v.push_back(Value(e.get<std::string>()));
    else if (e.is_number_integer())
      v.push_back(Value(std::to_string(e.get<int64_t>())));
    else
      fail(path + "[" + std::to_string(i) + "]", "expected a string");
  }
  return v;
}

json vector_json(const PrefixVector &v) {
  json arr = json::array();
  for (const auto &e : v) arr.push_back(e.to_string());
  return arr;
}

std::vector<uint32_t> parse_parties(const json &obj, const std::string &key, const std::string &path) {
  return get<std::vector<uint32_t>>(obj, key, path, {});
}

std::set<PartyId> party_set(const std::vector<uint32_t> &v) {
  std::set<PartyId> out;
  for (auto i : v) out.insert(PartyId(i));
  return out;
}

/** Vector-valued input of party p as the protocol consumes it. */
PrefixVector input_for(const Scenario &s, PartyId p) { return s.inputs.at(p.index); }

}  // namespace

const char *protocol_name(Protocol p) {
  for (const auto &[k, name] : kProtocols)
    if (k == p) return name;
  return "?";
}

std::optional<Protocol> parse_protocol(std::string_view name) {
  for (const auto &[k, n] : kProtocols)
    if (name == n) return k;
  return std::nullopt;
}

PcConfig Scenario::pc_config() const {
  PcConfig c;
  c.n = n;
  c.f = f;
  c.capacity = capacity;
  c.codec = codec;
  c.variant = protocol == Protocol::kPcOpt   ? PcVariant::kOptimistic
              : protocol == Protocol::kPc5f1 ? PcVariant::kFast
                                             : PcVariant::kThreeRound;
  c.instance.protocol = static_cast<uint8_t>(wire_protocol(protocol));
  return c;
}

void Scenario::validate() const {
  if (n == 0) fail("n", "must be positive");
  if (protocol == Protocol::kPc5f1) {
    if (n < 5 * f + 1) fail("n", "pc_5f1 needs n >= 5f+1 (n=" + std::to_string(n) + ", f=" + std::to_string(f) + ")");
  } else if (n < 3 * f + 1) {
    fail("n", std::string(protocol_name(protocol)) + " needs n >= 3f+1 (n=" + std::to_string(n) +
                  ", f=" + std::to_string(f) + ")");
  }
  if ((is_pc_family(protocol) || protocol == Protocol::kSpc || protocol == Protocol::kGraded) && capacity == 0)
    fail("L", "must be positive");
  if (codec == Codec::kCompact && protocol != Protocol::kPc3 && protocol != Protocol::kSpc &&
      protocol != Protocol::kMsc && protocol != Protocol::kGraded && protocol != Protocol::kBinary &&
      protocol != Protocol::kValidated)
    fail("codec", "the compact codec covers the three-round variant only");
  if (is_slotted(protocol) && slots == 0) fail("slots", "must be positive");
  if (delay.delta <= 0) fail("delay.delta", "must be positive");
  if (delay.delta_cap < delay.delta) fail("delay.Delta", "must be at least delta");
  if (delay.gst < 0) fail("delay.gst", "must be non-negative");
  if (delay.pre_gst_max <= 0) fail("delay.pre_gst_max", "must be positive");
  if (generator != "same" && generator != "random") fail("generator", "expected \"same\" or \"random\"");
  if (alphabet == 0) fail("alphabet", "must be positive");
  if (!inputs.empty()) {
    if (inputs.size() != n) fail("inputs", "expected one input per party (" + std::to_string(n) + ")");
    uint32_t cap = protocol == Protocol::kBinary ? 1 : capacity;
    if (!is_slotted(protocol))
      for (size_t i = 0; i < inputs.size(); i++) {
        if (inputs[i].size() > cap) fail("inputs[" + std::to_string(i) + "]", "longer than L");
        if (inputs[i].contains_bot()) fail("inputs[" + std::to_string(i) + "]", "contains BOT");
        if (protocol == Protocol::kBinary &&
            (inputs[i].size() != 1 || (inputs[i][0] != Value("0") && inputs[i][0] != Value("1"))))
          fail("inputs[" + std::to_string(i) + "]", "binary inputs are 0 or 1");
      }
  }
  if (!payloads.empty() && payloads.size() != n) fail("payloads", "expected one payload per party");
  if (!rank.empty()) {
    std::set<PartyId> seen(rank.begin(), rank.end());
    if (rank.size() != n || seen.size() != n || seen.rbegin()->index >= n)
      fail("rank", "must be a permutation of the parties");
  }
  std::set<PartyId> byz;
  int suspenders = 0;
  for (size_t i = 0; i < adversaries.size(); i++) {
    const auto &a = adversaries[i];
    std::string path = "adversary[" + std::to_string(i) + "]";
    if (!kAdversaryTypes.count(a.type)) fail(path + ".type", "unknown adversary \"" + a.type + "\"");
    for (auto p : a.parties) {
      if (p >= n) fail(path + ".parties", "party " + std::to_string(p) + " out of range");
      if (a.type != "delayer" && a.type != "suspender") byz.insert(PartyId(p));
    }
    for (auto p : a.reveal_to)
      if (p >= n) fail(path + ".reveal_to", "party " + std::to_string(p) + " out of range");
    for (auto p : a.targets)
      if (p >= n) fail(path + ".targets", "party " + std::to_string(p) + " out of range");
    if (a.type == "withhold_body" && a.reveal_to.empty()) fail(path + ".reveal_to", "needs one party");
    if (a.link_fraction < 0 || a.link_fraction > 1) fail(path + ".link_fraction", "must lie in [0, 1]");
    if (a.split != "both" && a.split != "proposals" && a.split != "votes")
      fail(path + ".split", "expected proposals, votes or both");
    if (a.type == "suspender") suspenders++;
  }
  if (suspenders > 1) fail("adversary", "at most one suspender (one suspension per round)");
  if (byz.size() > f)
    fail("adversary", "corrupts " + std::to_string(byz.size()) + " parties but f = " + std::to_string(f));
}

void Scenario::materialize() {
  if (!inputs.empty() || is_slotted(protocol)) return;
  std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + 17);
  if (protocol == Protocol::kBinary) {
    for (uint32_t i = 0; i < n; i++) {
      bool bit = generator == "same" ? true : (rng() & 1);
      inputs.push_back(PrefixVector{Value(bit ? "1" : "0")});
    }
    return;
  }
  if (generator == "same") {
    PrefixVector v;
    for (uint32_t k = 0; k < capacity; k++) v.push_back(Value("v" + std::to_string(k + 1)));
    inputs.assign(n, v);
    return;
  }
  // Random inputs share a random base up to a random cut, then diverge.
  auto symbol = [&] { return Value(std::string(1, static_cast<char>('a' + rng() % alphabet))); };
  PrefixVector base;
  for (uint32_t k = 0; k < capacity; k++) base.push_back(symbol());
  for (uint32_t i = 0; i < n; i++) {
    size_t cut = rng() % (capacity + 1);
    size_t len = cut + rng() % (capacity - cut + 1);
    PrefixVector v = base.prefix(cut);
    while (v.size() < len) v.push_back(symbol());
    inputs.push_back(v);
  }
}

std::string Scenario::payload_of(PartyId p, uint64_t slot) const {
  if (protocol == Protocol::kValidated)
    return payloads.empty() ? validity + "v" + std::to_string(p.index) : payloads.at(p.index);
  return "p" + std::to_string(p.index) + "/s" + std::to_string(slot);
}

Scenario scenario_from_json(const json &j) {
  if (!j.is_object()) fail("$", "scenario must be an object");
  reject_unknown(j, {"version",  "name", "protocol",  "n",      "f",          "L",           "codec",      "crypto",
                     "delay",    "seed", "max_time",  "slots",  "inputs",     "generator",   "alphabet",   "payloads",
                     "validity", "rank", "adversary", "checks", "transcript", "count_bytes", "description"},
                 "$");
  Scenario s;
  int version = get<int>(j, "version", "$", Scenario::kVersion);
  if (version != Scenario::kVersion) fail("$.version", "unsupported version " + std::to_string(version));
  s.name = get<std::string>(j, "name", "$", s.name);
  if (!j.contains("protocol")) fail("$.protocol", "missing");
  auto proto = parse_protocol(get<std::string>(j, "protocol", "$", ""));
  if (!proto) fail("$.protocol", "unknown protocol");
  s.protocol = *proto;
  s.n = get<uint32_t>(j, "n", "$", s.n);
  s.f = get<uint32_t>(j, "f", "$", s.f);
  s.capacity = get<uint32_t>(j, "L", "$", is_slotted(s.protocol) ? s.n : s.capacity);
  if (s.protocol == Protocol::kBinary) s.capacity = 1;
  auto codec = get<std::string>(j, "codec", "$", "plain");
  if (codec == "plain")
    s.codec = Codec::kPlain;
  else if (codec == "compact")
    s.codec = Codec::kCompact;
  else
    fail("$.codec", "expected \"plain\" or \"compact\"");
  s.crypto = get<std::string>(j, "crypto", "$", s.crypto);
  if (s.crypto != "mac" && s.crypto != "ed25519") fail("$.crypto", "expected \"mac\" or \"ed25519\"");
  if (j.contains("delay")) {
    const auto &d = j.at("delay");
    if (!d.is_object()) fail("$.delay", "expected an object");
    reject_unknown(d, {"delta", "Delta", "gst", "fuzz", "pre_gst_max", "jitter"}, "$.delay");
    if (d.contains("delta")) s.delay.delta = parse_time(d.at("delta"), "$.delay.delta");
    if (d.contains("Delta")) s.delay.delta_cap = parse_time(d.at("Delta"), "$.delay.Delta");
    if (d.contains("gst")) s.delay.gst = parse_time(d.at("gst"), "$.delay.gst");
    if (d.contains("pre_gst_max")) s.delay.pre_gst_max = parse_time(d.at("pre_gst_max"), "$.delay.pre_gst_max");
    s.delay.fuzz = get<bool>(d, "fuzz", "$.delay", false);
    s.delay.jitter = get<bool>(d, "jitter", "$.delay", false);
  }
  s.seed = get<uint64_t>(j, "seed", "$", s.seed);
  if (j.contains("max_time")) s.max_time = parse_time(j.at("max_time"), "$.max_time");
  s.slots = get<uint64_t>(j, "slots", "$", s.slots);
  if (j.contains("inputs")) {
    const auto &in = j.at("inputs");
    if (!in.is_array()) fail("$.inputs", "expected an array");
    for (size_t i = 0; i < in.size(); i++) {
      std::string path = "$.inputs[" + std::to_string(i) + "]";
      if (s.protocol == Protocol::kBinary && in[i].is_number_integer())
        s.inputs.push_back(PrefixVector{Value(std::to_string(in[i].get<int64_t>()))});
      else
        s.inputs.push_back(parse_vector(in[i], path));
    }
  }
  s.generator = get<std::string>(j, "generator", "$", s.generator);
  s.alphabet = get<uint32_t>(j, "alphabet", "$", s.alphabet);
  s.payloads = get<std::vector<std::string>>(j, "payloads", "$", {});
  s.validity = get<std::string>(j, "validity", "$", "");
  for (auto p : get<std::vector<uint32_t>>(j, "rank", "$", {})) s.rank.push_back(PartyId(p));
  if (j.contains("adversary")) {
    const auto &arr = j.at("adversary");
    if (!arr.is_array()) fail("$.adversary", "expected an array");
    for (size_t i = 0; i < arr.size(); i++) {
      std::string path = "$.adversary[" + std::to_string(i) + "]";
      const auto &a = arr[i];
      if (!a.is_object()) fail(path, "expected an object");
      reject_unknown(
          a, {"type", "parties", "reveal_to", "link_fraction", "kinds", "view", "targets", "start_round", "split"},
          path);
      AdversarySpec spec;
      spec.type = get<std::string>(a, "type", path, "");
      spec.parties = parse_parties(a, "parties", path);
      spec.reveal_to = parse_parties(a, "reveal_to", path);
      spec.link_fraction = get<double>(a, "link_fraction", path, 1.0);
      spec.kinds = get<std::vector<std::string>>(a, "kinds", path, {});
      if (a.contains("view")) spec.view = get<uint64_t>(a, "view", path, 0);
      spec.targets = parse_parties(a, "targets", path);
      spec.start_round = get<uint64_t>(a, "start_round", path, 0);
      spec.split = get<std::string>(a, "split", path, "both");
      s.adversaries.push_back(spec);
    }
  }
  s.checks = get<bool>(j, "checks", "$", true);
  s.keep_transcript = get<bool>(j, "transcript", "$", false);
  s.count_bytes = get<bool>(j, "count_bytes", "$", true);
  try {
    s.validate();
  } catch (const ScenarioError &e) {
    throw ScenarioError(std::string("$.") + e.what());
  }
  return s;
}

json scenario_to_json(const Scenario &s) {
  json j;
  j["version"] = Scenario::kVersion;
  j["name"] = s.name;
  j["protocol"] = protocol_name(s.protocol);
  j["n"] = s.n;
  j["f"] = s.f;
  j["L"] = s.capacity;
  j["codec"] = codec_name(s.codec);
  j["crypto"] = s.crypto;
  j["delay"] = {{"delta", time_json(s.delay.delta)},
                {"Delta", time_json(s.delay.delta_cap)},
                {"gst", time_json(s.delay.gst)},
                {"fuzz", s.delay.fuzz},
                {"pre_gst_max", time_json(s.delay.pre_gst_max)},
                {"jitter", s.delay.jitter}};
  j["seed"] = s.seed;
  j["max_time"] = time_json(s.max_time);
  j["slots"] = s.slots;
  if (!s.inputs.empty()) {
    j["inputs"] = json::array();
    for (const auto &v : s.inputs) j["inputs"].push_back(vector_json(v));
  }
  j["generator"] = s.generator;
  j["alphabet"] = s.alphabet;
  if (!s.payloads.empty()) j["payloads"] = s.payloads;
  if (!s.validity.empty()) j["validity"] = s.validity;
  if (!s.rank.empty()) {
    j["rank"] = json::array();
    for (auto p : s.rank) j["rank"].push_back(p.index);
  }
  j["adversary"] = json::array();
  for (const auto &a : s.adversaries) {
    json x{{"type", a.type}};
    if (!a.parties.empty()) x["parties"] = a.parties;
    if (!a.reveal_to.empty()) x["reveal_to"] = a.reveal_to;
    if (a.type == "delayer") x["link_fraction"] = a.link_fraction;
    if (!a.kinds.empty()) x["kinds"] = a.kinds;
    if (a.view) x["view"] = *a.view;
    if (!a.targets.empty()) x["targets"] = a.targets;
    if (a.start_round) x["start_round"] = a.start_round;
    if (a.split != "both") x["split"] = a.split;
    j["adversary"].push_back(x);
  }
  j["checks"] = s.checks;
  j["transcript"] = s.keep_transcript;
  j["count_bytes"] = s.count_bytes;
  return j;
}

namespace {

PcConfigFn pc_config_fn(const Scenario &s) {
  if (is_pc_family(s.protocol)) {
    PcConfig cfg = s.pc_config();
    return [cfg](const InstanceId &inst) -> std::optional<PcConfig> {
      if (inst != cfg.instance) return std::nullopt;
      return cfg;
    };
  }
  if (s.protocol == Protocol::kGraded) {
    PcConfig cfg = s.pc_config();
    cfg.capacity = 1;
    cfg.instance.protocol = static_cast<uint8_t>(ProtocolId::kGraded);
    uint32_t lanes = s.capacity;
    return [cfg, lanes](const InstanceId &inst) -> std::optional<PcConfig> {
      if (inst.protocol != cfg.instance.protocol || inst.slot || inst.view || inst.lane >= lanes) return std::nullopt;
      PcConfig c = cfg;
      c.instance.lane = inst.lane;
      return c;
    };
  }
  SpcConfig sc;
  sc.n = s.n;
  sc.f = s.f;
  sc.capacity = is_slotted(s.protocol) ? s.n : s.capacity;
  sc.codec = s.codec;
  sc.instance.protocol = static_cast<uint8_t>(wire_protocol(s.protocol));
  bool slotted = is_slotted(s.protocol);
  return [sc, slotted](const InstanceId &inst) -> std::optional<PcConfig> {
    if (inst.protocol != sc.instance.protocol || inst.view == 0 || inst.lane != 0) return std::nullopt;
    if (slotted ? inst.slot == 0 : inst.slot != 0) return std::nullopt;
    SpcConfig c = sc;
    c.instance.slot = inst.slot;
    return c.vpc(inst.view);
  };
}

std::vector<std::shared_ptr<Adversary>> build_adversaries(const Scenario &s,
                                                          std::shared_ptr<DoctoredProofAdversary> &doctored) {
  std::vector<std::shared_ptr<Adversary>> out;
  std::set<PartyId> byz;
  for (const auto &a : s.adversaries)
    if (a.type != "delayer" && a.type != "suspender")
      for (auto p : a.parties) byz.insert(PartyId(p));
  for (const auto &a : s.adversaries) {
    auto parties = party_set(a.parties);
    if (a.type == "silent") {
      out.push_back(std::make_shared<SilentAdversary>(parties));
    } else if (a.type == "equivocate") {
      out.push_back(
          std::make_shared<EquivocateAdversary>(parties, pc_config_fn(s), a.split != "votes", a.split != "proposals"));
    } else if (a.type == "censor") {
      out.push_back(std::make_shared<CensorAdversary>(parties, party_set(a.reveal_to), pc_config_fn(s)));
    } else if (a.type == "delayer") {
      DelayerAdversary::Options o;
      o.link_fraction = a.link_fraction;
      o.kinds.insert(a.kinds.begin(), a.kinds.end());
      o.view = a.view;
      o.seed = s.seed;
      out.push_back(std::make_shared<DelayerAdversary>(o));
    } else if (a.type == "suspender") {
      std::vector<PartyId> targets;
      if (a.targets.empty()) {
        for (uint32_t i = 0; i < s.n; i++)
          if (!byz.count(PartyId(i))) targets.push_back(PartyId(i));
      } else {
        for (auto t : a.targets) targets.push_back(PartyId(t));
      }
      out.push_back(std::make_shared<SuspenderAdversary>(targets, a.start_round));
    } else if (a.type == "withhold_body") {
      out.push_back(std::make_shared<WithholdBodyAdversary>(parties, PartyId(a.reveal_to.front())));
    } else if (a.type == "doctored_proof") {
      doctored = std::make_shared<DoctoredProofAdversary>(parties, pc_config_fn(s));
      out.push_back(doctored);
    }
  }
  return out;
}

Simulation::Factory factory_for(const Scenario &s, const Simulation &sim) {
  const SignatureScheme &scheme = sim.scheme();
  auto wire = static_cast<uint8_t>(wire_protocol(s.protocol));
  Time timer_delta = s.delay.delta_cap;
  switch (s.protocol) {
    case Protocol::kPc3:
    case Protocol::kPcOpt:
    case Protocol::kPc5f1:
      return [&s, &scheme](PartyId p, const Signer &signer, Context &ctx) -> std::unique_ptr<Reactor> {
        return std::make_unique<PcReactor>(s.pc_config(), signer, scheme, ctx, input_for(s, p));
      };
    case Protocol::kGraded:
      return [&s, &scheme, wire](PartyId p, const Signer &signer, Context &ctx) -> std::unique_ptr<Reactor> {
        return std::make_unique<GradedReactor>(s.n, s.f, s.capacity, signer, scheme, ctx, input_for(s, p), wire);
      };
    case Protocol::kSpc:
    case Protocol::kBinary:
      return
          [&s, &scheme, wire, timer_delta](PartyId p, const Signer &signer, Context &ctx) -> std::unique_ptr<Reactor> {
            SpcConfig c;
            c.n = s.n;
            c.f = s.f;
            c.capacity = s.capacity;
            c.codec = s.codec;
            c.instance.protocol = wire;
            c.delta = timer_delta;
            c.rank = s.rank;
            if (s.protocol == Protocol::kBinary)
              return std::make_unique<BinaryReactor>(c, signer, scheme, ctx, input_for(s, p)[0] == Value("1"));
            return std::make_unique<SpcReactor>(c, signer, scheme, ctx, input_for(s, p));
          };
    case Protocol::kMsc:
    case Protocol::kValidated:
      return
          [&s, &scheme, wire, timer_delta](PartyId p, const Signer &signer, Context &ctx) -> std::unique_ptr<Reactor> {
            MscConfig c;
            c.n = s.n;
            c.f = s.f;
            c.codec = s.codec;
            c.protocol = wire;
            c.delta = timer_delta;
            c.rank = s.rank.empty() ? identity_rank(s.n) : s.rank;
            c.max_slots = s.protocol == Protocol::kMsc ? s.slots : 1;
            if (s.protocol == Protocol::kValidated) {
              if (!s.validity.empty())
                c.valid = [prefix = s.validity](const std::string &x) { return x.rfind(prefix, 0) == 0; };
              return std::make_unique<ValidatedReactor>(c, signer, scheme, ctx, s.payload_of(p, 1));
            }
            return std::make_unique<MscReactor>(c, signer, scheme, ctx,
                                                [&s, p](uint64_t slot) { return s.payload_of(p, slot); });
          };
  }
  throw std::logic_error("unhandled protocol");
}

json party_outputs(const Metrics &m, uint32_t p) {
  json j = json::object();
  auto it = m.outputs.find(p);
  if (it == m.outputs.end()) return j;
  json starts = json::array();
  uint64_t commits = 0;
  for (const auto &o : it->second) {
    switch (o.event.kind) {
      case OutputKind::kSlotStart: starts.push_back(time_json(o.at)); break;
      case OutputKind::kCommit: commits++; break;
      case OutputKind::kDecide:
        if (o.event.slot == 0 && o.event.note.rfind("grade=", 0) == 0) {
          j["lanes"].push_back({{"t", time_json(o.at)}, {"value", vector_json(o.event.value)}, {"note", o.event.note}});
          break;
        }
        [[fallthrough]];
      default: {
        std::string key = output_kind_str(o.event.kind);
        if (j.contains(key)) break;
        j[key] = {{"t", time_json(o.at)}, {"value", vector_json(o.event.value)}};
        if (!o.event.note.empty()) j[key]["note"] = o.event.note;
      }
    }
  }
  if (!starts.empty()) j["slot_starts"] = starts.size() > 8 ? json::array({starts[0], starts[1]}) : starts;
  if (commits) j["commits"] = commits;
  if (auto last = m.first(p, OutputKind::kCommit, 1)) {
    // Time the last slot-1 commit happened.
    Time t = *last;
    for (const auto &o : it->second)
      if (o.event.kind == OutputKind::kCommit && o.event.slot == 1) t = o.at;
    j["slot1_committed_at"] = time_json(t);
  }
  return j;
}

}  // namespace

RunReport run_scenario(Scenario s, const std::function<void(const Simulation &)> &inspect) {
  s.validate();
  s.materialize();
  RunReport report;
  std::shared_ptr<DoctoredProofAdversary> doctored;
  SimConfig sc;
  sc.n = s.n;
  sc.f = s.f;
  sc.delay = s.delay;
  sc.seed = s.seed;
  sc.max_time = s.max_time;
  sc.scheme = s.crypto;
  sc.count_bytes = s.count_bytes;
  sc.keep_transcript = s.keep_transcript;
  Simulation sim(sc, build_adversaries(s, doctored));
  sim.build(factory_for(s, sim));
  sim.run();

  report.metrics = sim.metrics();
  report.completed = report.metrics.all_done;
  report.transcript_hash = sim.transcript_hash();
  report.transcript = sim.transcript();
  report.byzantine = sim.byzantine();
  auto honest = sim.honest();
  auto &v = report.violations;

  if (s.checks) {
    switch (s.protocol) {
      case Protocol::kPc3:
      case Protocol::kPcOpt:
      case Protocol::kPc5f1: {
        std::vector<PcObservation> obs;
        for (auto p : honest) obs.push_back(observe(p, s.inputs[p.index], sim.as<PcReactor>(p)->engine()));
        check_pc(s.pc_config(), obs, sim.byzantine().empty(), report.completed, v);
        if (doctored) check_candidates(sim.scheme(), doctored->candidates(), {{s.pc_config().instance, obs}}, v);
        break;
      }
      case Protocol::kGraded: {
        std::map<InstanceId, std::vector<PcObservation>> lanes;
        std::vector<PcObservation> whole;
        std::vector<PrefixVector> honest_inputs;
        for (auto p : honest) honest_inputs.push_back(s.inputs[p.index]);
        for (uint32_t k = 0; k < s.capacity; k++) {
          std::vector<GradedOutput> graded;
          std::vector<PrefixVector> lane_inputs;
          std::vector<PcObservation> lane_obs;
          for (auto p : honest) {
            const auto *g = sim.as<GradedReactor>(p);
            PrefixVector in;
            if (k < s.inputs[p.index].size()) in.push_back(s.inputs[p.index][k]);
            lane_inputs.push_back(in);
            lane_obs.push_back(observe(p, in, g->lane(k)));
            if (g->graded()[k]) graded.push_back(*g->graded()[k]);
          }
          check_pc(sim.as<GradedReactor>(honest.front())->lane(k).config(), lane_obs, sim.byzantine().empty(),
                   report.completed, v);
          check_graded(graded, lane_inputs, v);
          lanes[sim.as<GradedReactor>(honest.front())->lane(k).config().instance] = lane_obs;
        }
        for (auto p : honest) {
          PcObservation o;
          o.party = p;
          o.input = s.inputs[p.index];
          if (const auto &r = sim.as<GradedReactor>(p)->result()) {
            o.low = r->first;
            o.high = r->second;
          }
          whole.push_back(o);
        }
        PcConfig whole_cfg = s.pc_config();
        check_pc(whole_cfg, whole, sim.byzantine().empty(), report.completed, v);
        if (doctored) check_candidates(sim.scheme(), doctored->candidates(), lanes, v);
        break;
      }
      case Protocol::kSpc:
      case Protocol::kBinary: {
        std::vector<SpcObservation> obs;
        std::optional<bool> first;
        bool unanimous = true;
        for (auto p : honest) {
          if (s.protocol == Protocol::kSpc) {
            obs.push_back({p, s.inputs[p.index], &sim.as<SpcReactor>(p)->engine()});
            continue;
          }
          const auto *b = sim.as<BinaryReactor>(p);
          obs.push_back({p, s.inputs[p.index], &b->engine()});
          if (s.inputs[p.index] != s.inputs[honest.front().index]) unanimous = false;
          if (!b->decision()) continue;
          if (first && *first != *b->decision()) v.add("binary-agreement", p.to_string() + " decided differently");
          first = b->decision();
        }
        if (s.protocol == Protocol::kBinary && unanimous && first &&
            *first != (s.inputs[honest.front().index][0] == Value("1")))
          v.add("binary-validity", "unanimous honest bit not decided");
        check_spc(obs, report.completed, v);
        break;
      }
      case Protocol::kMsc: {
        std::vector<MscObservation> obs;
        for (auto p : honest) obs.push_back({p, sim.as<MscReactor>(p)});
        report.audit = audit_censorship(
            obs, report.metrics, [&s](PartyId p, uint64_t slot) { return s.payload_of(p, slot); }, sim.byzantine(),
            s.delay.gst, s.slots);
        check_msc(obs, *report.audit, s.f, s.slots, report.completed, v);
        break;
      }
      case Protocol::kValidated: {
        std::optional<std::optional<std::string>> first;
        for (auto p : honest) {
          const auto *r = sim.as<ValidatedReactor>(p);
          for (const auto &fl : r->msc().faults()) v.add("fault", p.to_string() + " " + fl);
          if (!r->done()) {
            if (report.completed) v.add("termination", p.to_string());
            continue;
          }
          if (first && *first != r->decision()) v.add("validated-agreement", p.to_string() + " decided differently");
          first = r->decision();
          if (r->decision() && !s.validity.empty() && r->decision()->rfind(s.validity, 0) != 0)
            v.add("validated-validity", "decided an invalid payload");
        }
        if (!report.completed) v.add("termination", "run stopped before every honest party decided");
        break;
      }
    }
  }

  json sum;
  sum["scenario"] = s.name;
  sum["protocol"] = protocol_name(s.protocol);
  sum["n"] = s.n;
  sum["f"] = s.f;
  sum["L"] = s.capacity;
  sum["codec"] = codec_name(s.codec);
  sum["seed"] = s.seed;
  sum["completed"] = report.completed;
  sum["timed_out"] = report.metrics.timed_out;
  sum["end_time"] = time_json(report.metrics.end_time);
  sum["messages"] = report.metrics.messages;
  sum["bytes"] = report.metrics.bytes;
  sum["events"] = report.metrics.events;
  sum["messages_by_kind"] = report.metrics.messages_by_kind;
  sum["byzantine"] = json::array();
  for (auto p : report.byzantine) sum["byzantine"].push_back(p.index);
  sum["outputs"] = json::object();
  for (auto p : honest) sum["outputs"][p.to_string()] = party_outputs(report.metrics, p.index);
  if (report.audit) {
    const auto &a = *report.audit;
    json dem = json::array();
    for (const auto &d : a.demotions)
      dem.push_back({{"slot", d.slot}, {"party", d.party.index}, {"byzantine", d.byzantine}, {"post_gst", d.post_gst}});
    sum["censorship"] = {{"post_gst_slots", a.post_gst_slots},
                         {"censored_slots", a.censored.size()},
                         {"censored", a.censored},
                         {"demotions", dem},
                         {"censored_after_last_demotion", a.censored_after_last_demotion}};
  }
  if (doctored) sum["doctored"] = {{"sent", doctored->doctored_sent()}, {"candidates", doctored->candidates().size()}};
  sum["checks"] = s.checks;
  sum["violations"] = v.items;
  sum["transcript_hash"] = report.transcript_hash;
  report.summary = sum;
  if (inspect) inspect(sim);
  return report;
}

}  // namespace prefixcons
