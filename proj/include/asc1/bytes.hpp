#pragma once

#include <cstdint>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace asc1 {

using Bytes = std::vector<std::uint8_t>;
using u64 = std::uint64_t;
using u32 = std::uint32_t;

inline Bytes toBytes(const std::string& s) {
  return Bytes(s.begin(), s.end());
}

inline std::string hexEncode(const Bytes& b) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(b.size() * 2);
  for (auto c : b) {
    out.push_back(digits[c >> 4]);
    out.push_back(digits[c & 0x0f]);
  }
  return out;
}

inline int hexNibble(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

inline Bytes hexDecode(const std::string& s) {
  if (s.size() % 2 != 0) throw std::invalid_argument("hex string has odd length");
  Bytes out;
  out.reserve(s.size() / 2);
  for (std::size_t i = 0; i < s.size(); i += 2) {
    int hi = hexNibble(s[i]), lo = hexNibble(s[i + 1]);
    if (hi < 0 || lo < 0) throw std::invalid_argument("invalid hex digit");
    out.push_back(static_cast<std::uint8_t>((hi << 4) | lo));
  }
  return out;
}

// Append-only writer for the canonical encoding format: all integers
// big-endian, u64 fixed 8 bytes, sequences as u32 count then elements,
// byte strings as u32 length then bytes.
class ByteWriter {
 public:
  void byte(std::uint8_t b) { out_.push_back(b); }

  void u64be(u64 v) {
    for (int i = 7; i >= 0; --i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }

  void u32be(u32 v) {
    for (int i = 3; i >= 0; --i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }

  void raw(const Bytes& b) { out_.insert(out_.end(), b.begin(), b.end()); }

  void lengthPrefixed(const Bytes& b) {
    u32be(static_cast<u32>(b.size()));
    raw(b);
  }

  Bytes take() { return std::move(out_); }
  const Bytes& peek() const { return out_; }

 private:
  Bytes out_;
};

// Cursor-based reader matching ByteWriter. Throws DecodeError on truncation.
struct DecodeError : std::runtime_error {
  explicit DecodeError(const std::string& what) : std::runtime_error(what) {}
};

class ByteReader {
 public:
  explicit ByteReader(const Bytes& data) : data_(data) {}

  std::uint8_t byte() {
    need(1);
    return data_[pos_++];
  }

  u64 u64be() {
    need(8);
    u64 v = 0;
    for (int i = 0; i < 8; ++i) v = (v << 8) | data_[pos_++];
    return v;
  }

  u32 u32be() {
    need(4);
    u32 v = 0;
    for (int i = 0; i < 4; ++i) v = (v << 8) | data_[pos_++];
    return v;
  }

  Bytes raw(std::size_t n) {
    need(n);
    Bytes out(data_.begin() + static_cast<std::ptrdiff_t>(pos_),
              data_.begin() + static_cast<std::ptrdiff_t>(pos_ + n));
    pos_ += n;
    return out;
  }

  Bytes lengthPrefixed() { return raw(u32be()); }

  bool atEnd() const { return pos_ == data_.size(); }
  std::size_t position() const { return pos_; }

  void expectEnd() const {
    if (!atEnd()) throw DecodeError("trailing bytes after decoded object");
  }

 private:
  void need(std::size_t n) const {
    if (pos_ + n > data_.size()) throw DecodeError("unexpected end of input");
  }

  const Bytes& data_;
  std::size_t pos_ = 0;
};

inline Bytes u64beBytes(u64 v) {
  ByteWriter w;
  w.u64be(v);
  return w.take();
}

}  // namespace asc1
