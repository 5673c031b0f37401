#ifndef HITTINGDIM_BITTAPE_HPP
#define HITTINGDIM_BITTAPE_HPP

#include <cstdint>
#include <vector>

#include "hittingdim/rng.hpp"

namespace hittingdim {

// An infinite bit sequence with O(1) indexed access, indices starting at 1.
// The default form is a seeded fair-coin sequence: word w is a fixed function
// of (seed, w), so re-reads always agree and no shared cache is needed.
// Explicit prefixes and periodic patterns are supported for exact tests
// (e.g. the tape 010101... is the binary expansion of 1/3).
class BitTape {
 public:
  explicit BitTape(std::uint64_t seed) : seed_(seed) {}

  // prefix bits 1..prefix.size(), seeded fair bits afterwards
  BitTape(std::vector<int> prefix, std::uint64_t seed)
      : seed_(seed), pattern_(std::move(prefix)) {}

  // pattern repeated forever: bit i = pattern[(i-1) mod len]
  static BitTape periodic(std::vector<int> pattern) {
    BitTape t(0);
    t.pattern_ = std::move(pattern);
    t.periodic_ = true;
    return t;
  }

  // view of the same sequence shifted left by k bits (bit i -> bit i+k)
  BitTape shifted(std::uint64_t k) const {
    BitTape t = *this;
    t.base_ += k;
    return t;
  }

  int bit(std::uint64_t i) const {  // i >= 1
    std::uint64_t j = i + base_;
    if (!pattern_.empty()) {
      if (periodic_) return pattern_[(j - 1) % pattern_.size()];
      if (j <= pattern_.size()) return pattern_[j - 1];
    }
    std::uint64_t w = word((j - 1) >> 6);
    return int((w >> (63 - ((j - 1) & 63))) & 1u);
  }

  // bits shift+1 .. shift+53 as a double in [0,1)
  double value_at(std::uint64_t shift) const {
    std::uint64_t w = 0;
    for (int b = 0; b < 53; ++b) w = (w << 1) | std::uint64_t(bit(shift + 1 + b));
    return double(w) * 0x1.0p-53;
  }

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t word(std::uint64_t w) const { return mix64(seed_, w); }

  std::uint64_t seed_;
  std::uint64_t base_ = 0;
  std::vector<int> pattern_;
  bool periodic_ = false;
};

}  // namespace hittingdim

#endif
