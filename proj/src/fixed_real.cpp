#include "hittingdim/fixed_real.hpp"

#include <cmath>
#include <stdexcept>

namespace hittingdim {

FixedReal::FixedReal(int width_bits) : width_(width_bits) {
  if (width_bits < 64) throw std::invalid_argument("FixedReal width must be >= 64 bits");
  limbs_.assign((width_bits + 63) / 64, 0);
}

void FixedReal::mask_top() {
  int top_bits = width_ % 64;
  if (top_bits != 0) limbs_.back() &= (~0ull >> (64 - top_bits));
}

FixedReal FixedReal::from_double(double x, int width_bits) {
  FixedReal f(width_bits);
  if (x < 0.0 || x >= 1.0) throw std::invalid_argument("FixedReal::from_double needs x in [0,1)");
  // peel 64 bits at a time, most significant limb first
  double rem = x;
  for (int limb = int(f.limbs_.size()) - 1; limb >= 0; --limb) {
    rem *= 0x1.0p64;
    double ip = std::floor(rem);
    rem -= ip;
    f.limbs_[limb] = std::uint64_t(ip);
  }
  // the representation is aligned so fraction bit 1 is bit width-1 of N;
  // shift down when width is not a limb multiple
  int slack = int(f.limbs_.size()) * 64 - width_bits;
  if (slack > 0) {
    for (std::size_t i = 0; i + 1 < f.limbs_.size(); ++i)
      f.limbs_[i] = (f.limbs_[i] >> slack) | (f.limbs_[i + 1] << (64 - slack));
    f.limbs_.back() >>= slack;
  }
  f.mask_top();
  return f;
}

FixedReal FixedReal::from_tape(const BitTape& tape, int width_bits) {
  FixedReal f(width_bits);
  for (int i = 1; i <= width_bits; ++i) {
    if (tape.bit(i)) {
      int pos = width_bits - i;  // bit index within N
      f.limbs_[pos / 64] |= (1ull << (pos % 64));
    }
  }
  return f;
}

bool FixedReal::is_zero() const {
  for (auto l : limbs_)
    if (l) return false;
  return true;
}

int FixedReal::bit(int i) const {
  int pos = width_ - i;
  return int((limbs_[pos / 64] >> (pos % 64)) & 1u);
}

void FixedReal::shl1_mod1() {
  std::uint64_t carry = 0;
  for (auto& l : limbs_) {
    std::uint64_t next = l >> 63;
    l = (l << 1) | carry;
    carry = next;
  }
  mask_top();
}

void FixedReal::complement_mod1() {
  // (2^B - N) mod 2^B is the two's complement; N = 0 maps to 0
  std::uint64_t carry = 1;
  for (auto& l : limbs_) {
    std::uint64_t inv = ~l;
    std::uint64_t v = inv + carry;
    carry = (v < inv) ? 1 : 0;
    l = v;
  }
  mask_top();
}

void FixedReal::add_mod1(const FixedReal& o) {
  unsigned __int128 carry = 0;
  for (std::size_t i = 0; i < limbs_.size(); ++i) {
    unsigned __int128 s = (unsigned __int128)limbs_[i] + o.limbs_[i] + carry;
    limbs_[i] = std::uint64_t(s);
    carry = s >> 64;
  }
  mask_top();  // dropping overflow == mod 1
}

FixedReal FixedReal::sub_mod1(const FixedReal& o) const {
  FixedReal r = *this;
  std::uint64_t borrow = 0;
  for (std::size_t i = 0; i < r.limbs_.size(); ++i) {
    unsigned __int128 lhs = r.limbs_[i];
    unsigned __int128 rhs = (unsigned __int128)o.limbs_[i] + borrow;
    if (lhs >= rhs) {
      r.limbs_[i] = std::uint64_t(lhs - rhs);
      borrow = 0;
    } else {
      r.limbs_[i] = std::uint64_t(((unsigned __int128)1 << 64) + lhs - rhs);
      borrow = 1;
    }
  }
  r.mask_top();
  return r;
}

bool FixedReal::lt(const FixedReal& o) const {
  for (int i = int(limbs_.size()) - 1; i >= 0; --i) {
    if (limbs_[i] != o.limbs_[i]) return limbs_[i] < o.limbs_[i];
  }
  return false;
}

bool FixedReal::le_half() const {
  // x <= 1/2  <=>  bit 1 clear, or bit 1 set and all lower bits clear
  if (!bit(1)) return true;
  int pos = width_ - 1;
  for (std::size_t i = 0; i < limbs_.size(); ++i) {
    std::uint64_t expect = (int(i) == pos / 64) ? (1ull << (pos % 64)) : 0ull;
    if (limbs_[i] != expect) return false;
  }
  return true;
}

double FixedReal::to_double() const {
  std::uint64_t w = 0;
  for (int i = 1; i <= 53; ++i) w = (w << 1) | std::uint64_t(bit(i));
  return double(w) * 0x1.0p-53;
}

bool FixedReal::circle_dist_lt(const FixedReal& x, const FixedReal& y, const FixedReal& r) {
  FixedReal d = x.sub_mod1(y);
  FixedReal c = d;
  c.complement_mod1();
  if (d.is_zero()) return !r.is_zero();  // distance 0
  const FixedReal& dist = d.lt(c) ? d : c;
  return dist.lt(r);
}

bool operator==(const FixedReal& a, const FixedReal& b) {
  return a.width_ == b.width_ && a.limbs_ == b.limbs_;
}

}  // namespace hittingdim
