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

#include "prefixcons/checks.h"

#include <map>

#include "prefixcons/pc_verify.h"

namespace prefixcons {

namespace {

std::string who(PartyId p) { return p.to_string(); }

std::vector<PrefixVector> inputs_of(std::span<const PcObservation> honest) {
  std::vector<PrefixVector> out;
  for (const auto &o : honest) out.push_back(o.input);
  return out;
}

void check_outputs(std::span<const PrefixVector> inputs, const std::vector<std::pair<PartyId, PrefixVector>> &lows,
                   const std::vector<std::pair<PartyId, PrefixVector>> &highs, Violations &out) {
  for (const auto &[i, low] : lows)
    for (const auto &[j, high] : highs)
      if (!is_prefix(low, high))
        out.add("upper-bound", "low of " + who(i) + " " + low.to_string() + " not a prefix of high of " + who(j) + " " +
                                   high.to_string());
  if (!inputs.empty()) {
    PrefixVector floor = mcp(inputs);
    for (const auto &[i, low] : lows)
      if (!is_prefix(floor, low))
        out.add("validity", "mcp of honest inputs " + floor.to_string() + " not a prefix of low of " + who(i));
  }
  for (const auto *set : {&lows, &highs})
    for (const auto &[i, v] : *set)
      if (!available(v, inputs)) out.add("availability", "output " + v.to_string() + " of " + who(i));
}

}  // namespace

std::string Violations::first_property() const {
  if (items.empty()) return "";
  return items.front().substr(0, items.front().find(':'));
}

PcObservation observe(PartyId p, const PrefixVector &input, const PcEngine &e) {
  PcObservation o;
  o.party = p;
  o.input = input;
  const auto &out = e.outputs();
  if (out.opt) o.opt = out.opt->value;
  if (out.low) o.low = out.low->value;
  if (out.high) o.high = out.high->value;
  if (e.certified(1)) o.qc1_x = e.certified(1)->first;
  return o;
}

bool available(const PrefixVector &out, std::span<const PrefixVector> honest_inputs) {
  for (size_t k = 0; k < out.size(); k++) {
    bool found = false;
    for (const auto &in : honest_inputs)
      if (k < in.size() && in[k] == out[k]) {
        found = true;
        break;
      }
    if (!found) return false;
  }
  return true;
}

void check_pc(const PcConfig &cfg, std::span<const PcObservation> honest, bool byzantine_free, bool completed,
              Violations &out) {
  auto inputs = inputs_of(honest);
  std::vector<std::pair<PartyId, PrefixVector>> lows, highs;
  for (const auto &o : honest) {
    if (o.low) lows.emplace_back(o.party, *o.low);
    if (o.high) highs.emplace_back(o.party, *o.high);
    if (completed && (!o.low || !o.high)) out.add("termination", who(o.party) + " has no output");
  }
  if (!completed) out.add("termination", "run stopped before every honest party output");
  check_outputs(inputs, lows, highs, out);
  // The optimistic protocol makes no Consistency claim: two honest QC1s can
  // certify conflicting x values, and the early-high rule may extend either.
  for (size_t a = 0; a < highs.size() && cfg.variant != PcVariant::kOptimistic; a++)
    for (size_t b = a + 1; b < highs.size(); b++)
      if (!consistent(highs[a].second, highs[b].second))
        out.add("consistency", "highs of " + who(highs[a].first) + " and " + who(highs[b].first) + " conflict");

  if (cfg.variant == PcVariant::kOptimistic) {
    for (const auto &o : honest) {
      if (o.opt && o.low && !is_prefix(*o.opt, *o.low)) out.add("optimistic-prefix", "opt of " + who(o.party));
      if (byzantine_free && o.opt && !is_prefix(mcp(inputs), *o.opt))
        out.add("optimistic-validity", "opt of " + who(o.party));
    }
  }
  if (cfg.variant == PcVariant::kFast) {
    for (size_t a = 0; a < honest.size(); a++)
      for (size_t b = a + 1; b < honest.size(); b++)
        if (honest[a].qc1_x && honest[b].qc1_x && !consistent(*honest[a].qc1_x, *honest[b].qc1_x))
          out.add("fast-qc1-consistency", who(honest[a].party) + " vs " + who(honest[b].party));
  }
}

void check_candidates(const SignatureScheme &scheme, std::span<const DoctoredCandidate> candidates,
                      const std::map<InstanceId, std::vector<PcObservation>> &honest_by_instance, Violations &out) {
  // Candidates of one instance are compared with each other and with honest outputs of that instance.
  std::map<InstanceId, std::vector<const DoctoredCandidate *>> by_instance;
  for (const auto &c : candidates) by_instance[c.cfg.instance].push_back(&c);
  for (const auto &[inst, list] : by_instance) {
    auto hit = honest_by_instance.find(inst);
    std::span<const PcObservation> honest;
    if (hit != honest_by_instance.end()) honest = hit->second;
    auto inputs = inputs_of(honest);
    std::vector<std::pair<std::string, PrefixVector>> lows, highs;
    for (const auto *c : list) {
      if (predicate_low(c->cfg, scheme, c->value, c->proof)) lows.emplace_back(c->origin, c->value);
      if (predicate_high(c->cfg, scheme, c->value, c->proof)) highs.emplace_back(c->origin, c->value);
    }
    for (const auto &o : honest) {
      if (o.low) lows.emplace_back(who(o.party) + " low", *o.low);
      if (o.high) highs.emplace_back(who(o.party) + " high", *o.high);
    }
    for (const auto &[a, low] : lows)
      for (const auto &[b, high] : highs)
        if (!is_prefix(low, high))
          out.add("verifiability", inst.to_string() + " accepted low (" + a + ") " + low.to_string() +
                                       " not a prefix of accepted high (" + b + ") " + high.to_string());
    if (!inputs.empty()) {
      PrefixVector floor = mcp(inputs);
      for (const auto &[a, low] : lows)
        if (!is_prefix(floor, low)) out.add("verifiability", "accepted low (" + a + ") misses mcp of honest inputs");
    }
  }
}

void check_spc(std::span<const SpcObservation> honest, bool completed, Violations &out) {
  std::vector<PrefixVector> inputs;
  std::vector<std::pair<PartyId, PrefixVector>> lows, highs;
  for (const auto &o : honest) {
    inputs.push_back(o.input);
    if (o.engine->low()) lows.emplace_back(o.party, *o.engine->low());
    if (o.engine->high())
      highs.emplace_back(o.party, *o.engine->high());
    else if (completed)
      out.add("termination", who(o.party) + " has no high");
    for (const auto &f : o.engine->faults()) out.add("fault", who(o.party) + " " + f);
  }
  if (!completed) out.add("termination", "run stopped before every honest party output high");
  check_outputs(inputs, lows, highs, out);
  for (size_t a = 1; a < highs.size(); a++)
    if (highs[a].second != highs[0].second)
      out.add("agreement", "high of " + who(highs[a].first) + " " + highs[a].second.to_string() + " differs from " +
                               who(highs[0].first) + " " + highs[0].second.to_string());

  // Every verifiable low of the skipped views must be parentless.
  for (const auto &o : honest)
    for (const auto &[prev, parent_view] : o.engine->indirect_certs()) {
      if (parent_view >= prev) continue;
      for (uint64_t u = parent_view + 1; u <= prev; u++)
        for (const auto &h : honest) {
          auto it = h.engine->vpc_lows().find(u);
          if (it == h.engine->vpc_lows().end()) continue;
          for (const auto &resolver : honest) {
            auto p = resolver.engine->parent(it->second);
            if (!p.ready) continue;
            if (p.view != 0)
              out.add("skip-conservatism", "view " + std::to_string(u) + " low of " + who(h.party) +
                                               " has parent view " + std::to_string(p.view) +
                                               " but an indirect certificate skipped to " +
                                               std::to_string(parent_view));
            break;
          }
        }
    }
}

CensorshipAudit audit_censorship(std::span<const MscObservation> honest, const Metrics &metrics,
                                 const std::function<std::string(PartyId, uint64_t)> &payload,
                                 const std::set<PartyId> &byzantine, const Time &gst, uint64_t slots) {
  CensorshipAudit a;
  if (honest.empty()) return a;
  const MscReactor &ref = *honest.front().reactor;
  std::optional<uint64_t> last_demotion;
  std::vector<std::pair<uint64_t, bool>> censored_flags;
  for (uint64_t s = 1; s <= slots; s++) {
    const auto *high = ref.high(s);
    const Rank *rank = ref.rank(s);
    if (!high || !*high || !rank) break;
    bool post_gst = true;
    for (const auto &h : honest) {
      auto t = metrics.first(h.party.index, OutputKind::kSlotStart, s);
      if (!t || *t < gst) post_gst = false;
    }
    std::set<std::string> committed;
    for (const auto &e : ref.log())
      if (e.slot == s) committed.insert(e.payload);
    bool censored = false;
    for (const auto &h : honest)
      if (!committed.count(payload(h.party, s))) censored = true;
    if (post_gst) {
      a.post_gst_slots++;
      if (censored) a.censored.push_back(s);
    }
    censored_flags.emplace_back(s, censored && post_gst);
    if ((*high)->size() < rank->size()) {
      PartyId p = (*rank)[(*high)->size()];
      a.demotions.push_back({s, p, byzantine.count(p) > 0, post_gst});
      last_demotion = s;
    }
  }
  for (const auto &[s, c] : censored_flags)
    if (c && (!last_demotion || s > *last_demotion)) a.censored_after_last_demotion.push_back(s);
  return a;
}

void check_msc(std::span<const MscObservation> honest, const CensorshipAudit &audit, uint32_t f, uint64_t slots,
               bool completed, Violations &out) {
  if (!completed) out.add("termination", "run stopped before every honest party committed all slots");
  for (const auto &o : honest) {
    for (const auto &fl : o.reactor->faults()) out.add("fault", who(o.party) + " " + fl);
    if (completed && !o.reactor->done()) out.add("termination", who(o.party));
  }
  if (honest.empty()) return;
  const MscReactor &ref = *honest.front().reactor;
  auto entries = [](const MscReactor &r, uint64_t s) {
    std::vector<std::pair<uint64_t, Digest>> v;
    for (const auto &e : r.log())
      if (e.slot == s) v.emplace_back(e.index, e.digest);
    return v;
  };
  for (uint64_t s = 1; s <= slots; s++) {
    for (const auto &o : honest) {
      const auto *ra = ref.rank(s);
      const auto *rb = o.reactor->rank(s);
      if (ra && rb && *ra != *rb) out.add("ranking-agreement", "slot " + std::to_string(s) + " " + who(o.party));
      const auto *ha = ref.high(s);
      const auto *hb = o.reactor->high(s);
      if (ha && hb && *ha && *hb) {
        if (**ha != **hb) out.add("slot-agreement", "slot " + std::to_string(s) + " " + who(o.party));
        if (entries(ref, s) != entries(*o.reactor, s))
          out.add("slot-agreement", "commit log of slot " + std::to_string(s) + " at " + who(o.party));
      }
      if (const auto *spc = o.reactor->spc(s);
          spc && spc->low() && spc->high() && !is_prefix(*spc->low(), *spc->high()))
        out.add("commit-before-advance", "slot " + std::to_string(s) + " " + who(o.party));
    }
  }
  if (audit.censored.size() > f)
    out.add("censorship",
            std::to_string(audit.censored.size()) + " censored post-GST slots exceed f = " + std::to_string(f));
  for (const auto &d : audit.demotions)
    if (d.post_gst && !d.byzantine)
      out.add("censorship", "slot " + std::to_string(d.slot) + " demoted honest " + who(d.party));
}

void check_graded(std::span<const GradedOutput> outputs, std::span<const PrefixVector> honest_inputs, Violations &out) {
  for (const auto &a : outputs) {
    if ((a.grade == 0) != !a.value) out.add("graded-shape", "grade and value disagree");
    for (const auto &b : outputs) {
      if (a.grade == 2 && (b.grade == 0 || b.value != a.value))
        out.add("graded-agreement", "grade-2 output not matched by another honest party");
      if (a.grade >= 1 && b.grade >= 1 && a.value != b.value) out.add("graded-agreement", "different values");
    }
  }
  if (honest_inputs.empty()) return;
  bool unanimous = !honest_inputs[0].empty();
  for (const auto &in : honest_inputs)
    if (in != honest_inputs[0]) unanimous = false;
  if (!unanimous) return;
  for (const auto &a : outputs)
    if (a.grade != 2 || a.value != honest_inputs[0][0])
      out.add("graded-validity", "unanimous input " + honest_inputs[0].to_string() + " not decided with grade 2");
}

}  // namespace prefixcons
