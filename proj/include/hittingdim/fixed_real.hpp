#ifndef HITTINGDIM_FIXED_REAL_HPP
#define HITTINGDIM_FIXED_REAL_HPP

#include <cstdint>
#include <vector>

#include "hittingdim/bittape.hpp"

namespace hittingdim {

// A number in [0,1) stored as an exact binary fraction N / 2^B with a fixed
// width B.  All arithmetic is mod 1.  Maps whose branches are integer-affine
// (doubling, tent, cat, rotation by a B-bit angle) act exactly on this
// representation, which is what makes orbit-level verification possible.
//
// Fraction bit i (i = 1..B, bit 1 most significant) is bit B-i of N.
class FixedReal {
 public:
  FixedReal() = default;
  explicit FixedReal(int width_bits);

  static FixedReal from_double(double x, int width_bits);  // truncates beyond B bits
  static FixedReal from_tape(const BitTape& tape, int width_bits);

  int width() const { return width_; }
  bool is_zero() const;
  int bit(int i) const;  // i in [1, width]

  void shl1_mod1();                    // x -> 2x mod 1
  void complement_mod1();              // x -> (1 - x) mod 1, i.e. 2^B - N mod 2^B
  void add_mod1(const FixedReal& o);   // x -> x + y mod 1
  FixedReal sub_mod1(const FixedReal& o) const;  // (x - y) mod 1

  bool lt(const FixedReal& o) const;       // N < M
  bool le_half() const;                    // x <= 1/2
  double to_double() const;                // truncation to the top 53 bits

  // exact open-ball test on the circle: min(|x-y|, 1-|x-y|) < r
  static bool circle_dist_lt(const FixedReal& x, const FixedReal& y, const FixedReal& r);

 private:
  int width_ = 0;
  std::vector<std::uint64_t> limbs_;  // little-endian; top limb masked to width % 64 bits

  void mask_top();
  friend bool operator==(const FixedReal&, const FixedReal&);
};

bool operator==(const FixedReal& a, const FixedReal& b);

}  // namespace hittingdim

#endif
