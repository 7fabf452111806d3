#include "mulmatch/bitvec.hpp"

#include <algorithm>
#include <cassert>

namespace mulmatch {

BitVec BitVec::zeros(uint32_t width) {
  BitVec v;
  v.width_ = width;
  if (width > 64) v.limbs_.assign((width + 63) / 64, 0);
  return v;
}

BitVec BitVec::ones(uint32_t width) {
  BitVec v = zeros(width);
  for (uint32_t i = 0; i < v.limb_count(); ++i) v.set_limb(i, ~0ULL);
  v.mask_top();
  return v;
}

BitVec BitVec::from_u64(uint32_t width, uint64_t value) {
  BitVec v = zeros(width);
  v.set_limb(0, value);
  v.mask_top();
  return v;
}

BitVec BitVec::from_binary(const std::string& bits) {
  BitVec v = zeros(static_cast<uint32_t>(bits.size()));
  for (size_t i = 0; i < bits.size(); ++i) {
    assert(bits[i] == '0' || bits[i] == '1');
    if (bits[bits.size() - 1 - i] == '1') {
      uint32_t li = static_cast<uint32_t>(i / 64);
      v.set_limb(li, v.limb(li) | (1ULL << (i % 64)));
    }
  }
  return v;
}

uint64_t BitVec::limb(uint32_t i) const {
  if (width_ <= 64) return i == 0 ? lo_ : 0;
  return i < limbs_.size() ? limbs_[i] : 0;
}

void BitVec::set_limb(uint32_t i, uint64_t v) {
  if (width_ <= 64) {
    assert(i == 0);
    lo_ = v;
  } else {
    assert(i < limbs_.size());
    limbs_[i] = v;
  }
}

void BitVec::mask_top() {
  if (width_ == 0) {
    lo_ = 0;
    return;
  }
  uint32_t rem = width_ % 64;
  if (rem == 0) return;
  uint64_t mask = (~0ULL) >> (64 - rem);
  set_limb(limb_count() - 1, limb(limb_count() - 1) & mask);
}

bool BitVec::is_zero() const {
  if (width_ <= 64) return lo_ == 0;
  return std::all_of(limbs_.begin(), limbs_.end(),
                     [](uint64_t l) { return l == 0; });
}

bool BitVec::bit(uint32_t i) const {
  assert(i < width_);
  return (limb(i / 64) >> (i % 64)) & 1;
}

uint64_t BitVec::low_u64() const { return limb(0); }

std::string BitVec::to_binary() const {
  std::string s(width_, '0');
  for (uint32_t i = 0; i < width_; ++i)
    if (bit(i)) s[width_ - 1 - i] = '1';
  return s;
}

BitVec bv_add(const BitVec& a, const BitVec& b) {
  assert(a.width_ == b.width_);
  BitVec r = BitVec::zeros(a.width_);
  unsigned __int128 carry = 0;
  for (uint32_t i = 0; i < r.limb_count(); ++i) {
    unsigned __int128 s = (unsigned __int128)a.limb(i) + b.limb(i) + carry;
    r.set_limb(i, (uint64_t)s);
    carry = s >> 64;
  }
  r.mask_top();
  return r;
}

BitVec bv_mul(const BitVec& a, const BitVec& b) {
  assert(a.width_ == b.width_);
  BitVec r = BitVec::zeros(a.width_);
  uint32_t n = r.limb_count();
  // schoolbook, truncated to the result width
  for (uint32_t i = 0; i < n; ++i) {
    if (a.limb(i) == 0) continue;
    uint64_t carry = 0;
    for (uint32_t j = 0; i + j < n; ++j) {
      unsigned __int128 cur = (unsigned __int128)a.limb(i) * b.limb(j) +
                              r.limb(i + j) + carry;
      r.set_limb(i + j, (uint64_t)cur);
      carry = (uint64_t)(cur >> 64);
    }
  }
  r.mask_top();
  return r;
}

BitVec bv_and(const BitVec& a, const BitVec& b) {
  assert(a.width_ == b.width_);
  BitVec r = BitVec::zeros(a.width_);
  for (uint32_t i = 0; i < r.limb_count(); ++i)
    r.set_limb(i, a.limb(i) & b.limb(i));
  return r;
}

BitVec bv_or(const BitVec& a, const BitVec& b) {
  assert(a.width_ == b.width_);
  BitVec r = BitVec::zeros(a.width_);
  for (uint32_t i = 0; i < r.limb_count(); ++i)
    r.set_limb(i, a.limb(i) | b.limb(i));
  return r;
}

BitVec bv_xor(const BitVec& a, const BitVec& b) {
  assert(a.width_ == b.width_);
  BitVec r = BitVec::zeros(a.width_);
  for (uint32_t i = 0; i < r.limb_count(); ++i)
    r.set_limb(i, a.limb(i) ^ b.limb(i));
  return r;
}

BitVec bv_not(const BitVec& a) {
  BitVec r = BitVec::zeros(a.width_);
  for (uint32_t i = 0; i < r.limb_count(); ++i) r.set_limb(i, ~a.limb(i));
  r.mask_top();
  return r;
}

BitVec bv_concat(const BitVec& hi, const BitVec& lo) {
  BitVec r = BitVec::zeros(hi.width_ + lo.width_);
  for (uint32_t i = 0; i < lo.width_; ++i)
    if (lo.bit(i)) r.set_limb(i / 64, r.limb(i / 64) | (1ULL << (i % 64)));
  for (uint32_t i = 0; i < hi.width_; ++i) {
    uint32_t p = lo.width_ + i;
    if (hi.bit(i)) r.set_limb(p / 64, r.limb(p / 64) | (1ULL << (p % 64)));
  }
  return r;
}

BitVec bv_extract(uint32_t hi, uint32_t lo, const BitVec& a) {
  assert(lo <= hi && hi < a.width_);
  BitVec r = BitVec::zeros(hi - lo + 1);
  for (uint32_t i = 0; i <= hi - lo; ++i)
    if (a.bit(lo + i)) r.set_limb(i / 64, r.limb(i / 64) | (1ULL << (i % 64)));
  return r;
}

bool BitVec::operator==(const BitVec& o) const {
  if (width_ != o.width_) return false;
  for (uint32_t i = 0; i < limb_count(); ++i)
    if (limb(i) != o.limb(i)) return false;
  return true;
}

bool BitVec::operator<(const BitVec& o) const {
  if (width_ != o.width_) return width_ < o.width_;
  for (uint32_t i = limb_count(); i-- > 0;)
    if (limb(i) != o.limb(i)) return limb(i) < o.limb(i);
  return false;
}

BitVec SplitMix64::next_bits(uint32_t width) {
  BitVec v = BitVec::zeros(width);
  for (uint32_t i = 0; i < (width + 63) / 64; ++i) v.set_limb(i, next());
  v.mask_top();
  return v;
}

}  // namespace mulmatch
