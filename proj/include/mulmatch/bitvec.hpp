#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mulmatch {

struct SplitMix64;

// Fixed-width unsigned bit-vector value. Arithmetic wraps modulo 2^width.
// Widths up to 64 bits stay in a single word; wider values spill into limbs
// (least-significant limb first). All values are kept masked to their width.
class BitVec {
 public:
  BitVec() = default;

  static BitVec zeros(uint32_t width);
  static BitVec ones(uint32_t width);
  static BitVec from_u64(uint32_t width, uint64_t value);
  // `bits` is MSB-first, e.g. "0110"; width = bits.size()
  static BitVec from_binary(const std::string& bits);

  uint32_t width() const { return width_; }
  bool is_zero() const;
  bool bit(uint32_t i) const;  // i = 0 is the LSB
  uint64_t low_u64() const;    // low 64 bits
  std::string to_binary() const;  // MSB-first, exactly width chars

  friend BitVec bv_add(const BitVec& a, const BitVec& b);
  friend BitVec bv_mul(const BitVec& a, const BitVec& b);
  friend BitVec bv_and(const BitVec& a, const BitVec& b);
  friend BitVec bv_or(const BitVec& a, const BitVec& b);
  friend BitVec bv_xor(const BitVec& a, const BitVec& b);
  friend BitVec bv_not(const BitVec& a);
  friend BitVec bv_concat(const BitVec& hi, const BitVec& lo);
  friend BitVec bv_extract(uint32_t hi, uint32_t lo, const BitVec& a);
  friend struct SplitMix64;

  bool operator==(const BitVec& o) const;
  bool operator<(const BitVec& o) const;  // by width, then value

 private:
  uint32_t limb_count() const { return (width_ + 63) / 64; }
  uint64_t limb(uint32_t i) const;
  void set_limb(uint32_t i, uint64_t v);
  void mask_top();

  uint32_t width_ = 0;
  uint64_t lo_ = 0;                 // sole storage while width <= 64
  std::vector<uint64_t> limbs_;     // used instead of lo_ when width > 64
};

// SplitMix64: the fixed 64-bit mixing generator used everywhere randomness is
// needed, so any falsified instance replays from its seed on any platform.
struct SplitMix64 {
  explicit SplitMix64(uint64_t seed) : state(seed) {}
  uint64_t next() {
    state += 0x9E3779B97F4A7C15ULL;
    uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  // uniformly random value of the given bit width
  BitVec next_bits(uint32_t width);
  uint64_t state;
};

}  // namespace mulmatch
