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

#ifndef PREFIXCONS_BYTES_H
#define PREFIXCONS_BYTES_H

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace prefixcons {

/** Raised on truncated or garbled input; what() names the offending field. */
class DecodeError : public std::runtime_error {
 public:
  DecodeError(const std::string &field, const std::string &problem)
      : std::runtime_error(field + ": " + problem), field_(field) {}
  const std::string &field() const { return field_; }

 private:
  std::string field_;
};

class ByteWriter {
 public:
  void u8(uint8_t v) { out_.push_back(static_cast<char>(v)); }

  /** Unsigned LEB128. */
  void varint(uint64_t v) {
    while (v >= 0x80) {
      out_.push_back(static_cast<char>((v & 0x7f) | 0x80));
      v >>= 7;
    }
    out_.push_back(static_cast<char>(v));
  }

  void raw(std::string_view b) { out_.append(b); }

  /** Length-prefixed byte string. */
  void bytes(std::string_view b) {
    varint(b.size());
    raw(b);
  }

  const std::string &str() const { return out_; }
  std::string take() { return std::move(out_); }
  size_t size() const { return out_.size(); }

 private:
  std::string out_;
};

class ByteReader {
 public:
  explicit ByteReader(std::string_view in) : in_(in) {}

  uint8_t u8(const std::string &field) {
    need(1, field);
    return static_cast<uint8_t>(in_[pos_++]);
  }

  uint64_t varint(const std::string &field) {
    uint64_t v = 0;
    for (int shift = 0; shift < 64; shift += 7) {
      need(1, field);
      auto b = static_cast<uint8_t>(in_[pos_++]);
      v |= static_cast<uint64_t>(b & 0x7f) << shift;
      if (!(b & 0x80)) return v;
    }
    throw DecodeError(field, "varint overflow");
  }

  /** varint bounded by `limit` (inclusive). */
  uint64_t bounded(const std::string &field, uint64_t limit) {
    uint64_t v = varint(field);
    if (v > limit) throw DecodeError(field, "value " + std::to_string(v) + " exceeds " + std::to_string(limit));
    return v;
  }

  std::string raw(size_t len, const std::string &field) {
    need(len, field);
    std::string out(in_.substr(pos_, len));
    pos_ += len;
    return out;
  }

  std::string bytes(const std::string &field) { return raw(bounded(field, remaining()), field); }

  size_t remaining() const { return in_.size() - pos_; }
  bool done() const { return pos_ == in_.size(); }
  size_t pos() const { return pos_; }

 private:
  void need(size_t len, const std::string &field) const {
    if (in_.size() - pos_ < len) throw DecodeError(field, "truncated input");
  }

  std::string_view in_;
  size_t pos_ = 0;
};

std::string to_hex(std::string_view bytes);
/** Throws std::invalid_argument on non-hex input; whitespace is skipped. */
std::string from_hex(std::string_view hex);

}  // namespace prefixcons

#endif
