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

#include "prefixcons/prefix.h"

#include <algorithm>
#include <cassert>
#include <cctype>
#include <map>

namespace prefixcons {

std::string Value::to_string() const {
  if (bot_) return "_";
  bool printable =
      !bytes_.empty() && bytes_.size() <= 8 &&
      std::all_of(bytes_.begin(), bytes_.end(), [](unsigned char c) { return std::isalnum(c) || c == '-'; });
  if (printable) return bytes_;
  static const char *kHex = "0123456789abcdef";
  std::string out;
  for (size_t i = 0; i < bytes_.size() && i < 4; i++) {
    auto c = static_cast<unsigned char>(bytes_[i]);
    out.push_back(kHex[c >> 4]);
    out.push_back(kHex[c & 15]);
  }
  if (bytes_.size() > 4) out += "..";
  return "0x" + out;
}

PrefixVector PrefixVector::of_symbols(std::string_view symbols) {
  PrefixVector v;
  for (char c : symbols) v.elems_.emplace_back(std::string(1, c));
  return v;
}

PrefixVector PrefixVector::prefix(size_t k) const {
  k = std::min(k, elems_.size());
  return PrefixVector(std::vector<Value>(elems_.begin(), elems_.begin() + k));
}

PrefixVector PrefixVector::padded(size_t capacity) const {
  PrefixVector out = *this;
  while (out.elems_.size() < capacity) out.elems_.push_back(Value::bot());
  return out;
}

size_t PrefixVector::logical_length() const {
  size_t len = elems_.size();
  while (len > 0 && elems_[len - 1].is_bot()) len--;
  return len;
}

PrefixVector PrefixVector::unpadded() const { return prefix(logical_length()); }

bool PrefixVector::contains_bot() const {
  return std::any_of(elems_.begin(), elems_.end(), [](const Value &v) { return v.is_bot(); });
}

std::string PrefixVector::to_string() const {
  std::string out = "[";
  for (size_t i = 0; i < elems_.size(); i++) {
    if (i) out += ",";
    out += elems_[i].to_string();
  }
  return out + "]";
}

bool is_prefix(const PrefixVector &y, const PrefixVector &x) {
  if (y.size() > x.size()) return false;
  return std::equal(y.begin(), y.end(), x.begin());
}

bool consistent(const PrefixVector &x, const PrefixVector &y) {
  return x.size() <= y.size() ? is_prefix(x, y) : is_prefix(y, x);
}

bool pairwise_consistent(std::span<const PrefixVector> s) {
  // Consistency is checked against the longest member: a set is pairwise
  // consistent iff every member is a prefix of the longest one.
  if (s.empty()) return true;
  const PrefixVector *longest = &s[0];
  for (const auto &v : s)
    if (v.size() > longest->size()) longest = &v;
  return std::all_of(s.begin(), s.end(), [&](const PrefixVector &v) { return is_prefix(v, *longest); });
}

PrefixVector mcp(std::span<const PrefixVector> s) {
  if (s.empty()) throw PreconditionError("mcp of an empty vector set");
  size_t len = s[0].size();
  for (const auto &v : s.subspan(1)) {
    len = std::min(len, v.size());
    size_t i = 0;
    while (i < len && v[i] == s[0][i]) i++;
    len = i;
  }
  return s[0].prefix(len);
}

std::optional<PrefixVector> mce(std::span<const PrefixVector> s) {
  if (s.empty()) throw PreconditionError("mce of an empty vector set");
  if (!pairwise_consistent(s)) return std::nullopt;
  return *std::max_element(s.begin(), s.end(),
                           [](const PrefixVector &a, const PrefixVector &b) { return a.size() < b.size(); });
}

namespace {

struct TrieNode {
  std::map<Value, size_t> children;
  size_t support = 0;
  size_t depth = 0;
  size_t parent = 0;
  const Value *label = nullptr;
};

}  // namespace

PrefixVector longest_supported_prefix(std::span<const PrefixVector> s, size_t k) {
  if (s.empty()) throw PreconditionError("longest_supported_prefix of an empty vector set");
  if (k == 0 || k > s.size())
    throw PreconditionError("longest_supported_prefix: support " + std::to_string(k) + " outside [1, " +
                            std::to_string(s.size()) + "]");

  std::vector<TrieNode> nodes(1);
  nodes[0].support = s.size();
  size_t best = 0;
  for (const auto &v : s) {
    size_t cur = 0;
    for (const auto &elem : v) {
      auto it = nodes[cur].children.find(elem);
      size_t next;
      if (it == nodes[cur].children.end()) {
        next = nodes.size();
        nodes[cur].children.emplace(elem, next);
        TrieNode node;
        node.depth = nodes[cur].depth + 1;
        node.parent = cur;
        node.label = &elem;
        nodes.push_back(std::move(node));
      } else {
        next = it->second;
      }
      cur = next;
      if (++nodes[cur].support >= k && nodes[cur].depth > nodes[best].depth) best = cur;
    }
  }

#ifndef NDEBUG
  // Any two supported nodes of maximal depth must coincide.
  for (size_t i = 0; i < nodes.size(); i++)
    assert(!(nodes[i].support >= k && nodes[i].depth == nodes[best].depth) || i == best);
#endif

  std::vector<Value> out(nodes[best].depth);
  for (size_t cur = best; cur != 0; cur = nodes[cur].parent) out[nodes[cur].depth - 1] = *nodes[cur].label;
  return PrefixVector(std::move(out));
}

}  // namespace prefixcons
