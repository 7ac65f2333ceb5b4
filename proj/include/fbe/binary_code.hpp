#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace fbe {

// Bit-packed sign code. Bit i lives in word i / 64 at position i % 64 and is 1
// iff the i-th projected value is >= 0. Bits past size() are always zero.
class BinaryCode {
 public:
  BinaryCode() = default;
  explicit BinaryCode(std::size_t bits) : bits_(bits), words_((bits + 63) / 64, 0) {}

  // sign(0) is taken as +1, so zero maps to a set bit.
  static BinaryCode from_values(std::span<const double> values) {
    BinaryCode code(values.size());
    // Branch-free packing: projected signs are random, so a branch per bit
    // would mispredict half the time.
    const std::size_t n = values.size();
    for (std::size_t w = 0; w < code.words_.size(); ++w) {
      const std::size_t begin = w * 64;
      const std::size_t end = begin + 64 < n ? begin + 64 : n;
      std::uint64_t word = 0;
      for (std::size_t i = begin; i < end; ++i) word |= std::uint64_t{values[i] >= 0.0} << (i - begin);
      code.words_[w] = word;
    }
    return code;
  }

  std::size_t size() const { return bits_; }
  std::span<const std::uint64_t> words() const { return words_; }

  bool bit(std::size_t i) const { return ((words_[i >> 6] >> (i & 63)) & 1U) != 0; }
  void set(std::size_t i, bool value) {
    const std::uint64_t mask = std::uint64_t{1} << (i & 63);
    if (value) {
      words_[i >> 6] |= mask;
    } else {
      words_[i >> 6] &= ~mask;
    }
  }

  std::size_t popcount() const {
    std::size_t total = 0;
    for (auto w : words_) total += static_cast<std::size_t>(std::popcount(w));
    return total;
  }

  // Flips the first size() bits; padding stays zero.
  BinaryCode complement() const {
    BinaryCode out(bits_);
    for (std::size_t w = 0; w < words_.size(); ++w) out.words_[w] = ~words_[w];
    out.clear_padding();
    return out;
  }

  friend bool operator==(const BinaryCode&, const BinaryCode&) = default;

 private:
  void clear_padding() {
    if (bits_ % 64 != 0 && !words_.empty()) {
      words_.back() &= (std::uint64_t{1} << (bits_ % 64)) - 1;
    }
  }

  std::size_t bits_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace fbe
