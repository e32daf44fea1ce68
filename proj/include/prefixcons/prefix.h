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

#ifndef PREFIXCONS_PREFIX_H
#define PREFIXCONS_PREFIX_H

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace prefixcons {

/** Raised when an operation is called outside its domain (empty set, k too large, ...). */
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/**
 * Opaque vector element. BOT is a reserved sentinel that compares equal only
 * to itself; it is used for padding at the codec boundary and never appears
 * in application inputs.
 */
class Value {
 public:
  Value() = default;
  explicit Value(std::string bytes) : bytes_(std::move(bytes)) {}
  explicit Value(std::string_view bytes) : bytes_(bytes) {}
  explicit Value(const char *bytes) : bytes_(bytes) {}

  static Value bot() {
    Value v;
    v.bot_ = true;
    return v;
  }

  bool is_bot() const { return bot_; }
  const std::string &bytes() const { return bytes_; }
  size_t size() const { return bytes_.size(); }

  friend bool operator==(const Value &a, const Value &b) { return a.bot_ == b.bot_ && a.bytes_ == b.bytes_; }
  friend std::strong_ordering operator<=>(const Value &a, const Value &b) {
    if (a.bot_ != b.bot_) return a.bot_ ? std::strong_ordering::less : std::strong_ordering::greater;
    return a.bytes_.compare(b.bytes_) <=> 0;
  }

  /** Printable rendering: short printable strings verbatim, otherwise hex prefix. */
  std::string to_string() const;

 private:
  std::string bytes_;
  bool bot_ = false;
};

/** Ordered sequence of values with prefix/extension algebra. */
class PrefixVector {
 public:
  PrefixVector() = default;
  explicit PrefixVector(std::vector<Value> elems) : elems_(std::move(elems)) {}
  PrefixVector(std::initializer_list<Value> elems) : elems_(elems) {}

  /** Builds a vector whose elements are the single characters of `symbols`. */
  static PrefixVector of_symbols(std::string_view symbols);

  size_t size() const { return elems_.size(); }
  bool empty() const { return elems_.empty(); }
  const Value &operator[](size_t i) const { return elems_[i]; }
  const std::vector<Value> &elems() const { return elems_; }
  auto begin() const { return elems_.begin(); }
  auto end() const { return elems_.end(); }

  void push_back(Value v) { elems_.push_back(std::move(v)); }

  /** First k elements (k clamped to size). */
  PrefixVector prefix(size_t k) const;

  /** Copy padded with BOT up to length `capacity`. */
  PrefixVector padded(size_t capacity) const;

  /** Length ignoring trailing BOT padding. */
  size_t logical_length() const;

  /** Copy with trailing BOT padding removed. */
  PrefixVector unpadded() const;

  bool contains_bot() const;

  friend bool operator==(const PrefixVector &, const PrefixVector &) = default;
  friend auto operator<=>(const PrefixVector &a, const PrefixVector &b) { return a.elems_ <=> b.elems_; }

  std::string to_string() const;

 private:
  std::vector<Value> elems_;
};

using VectorSet = std::vector<PrefixVector>;

/** True iff y is a prefix of x. */
bool is_prefix(const PrefixVector &y, const PrefixVector &x);

/** True iff one of x, y is a prefix of the other. */
bool consistent(const PrefixVector &x, const PrefixVector &y);

/** True iff every pair in s is consistent. */
bool pairwise_consistent(std::span<const PrefixVector> s);

/** Maximum common prefix. Throws PreconditionError on an empty set. */
PrefixVector mcp(std::span<const PrefixVector> s);

/**
 * Minimum common extension, or nullopt when two members conflict.
 * Throws PreconditionError on an empty set.
 */
std::optional<PrefixVector> mce(std::span<const PrefixVector> s);

/**
 * Deepest prefix extended by at least k members of s, computed with a
 * support-counting trie. Equals the longest mcp over all size-k subsets.
 * Throws PreconditionError when s is empty, k == 0 or k > |s|.
 */
PrefixVector longest_supported_prefix(std::span<const PrefixVector> s, size_t k);

}  // namespace prefixcons

#endif
