#ifndef HITTINGDIM_RNG_HPP
#define HITTINGDIM_RNG_HPP

#include <cstdint>

namespace hittingdim {

// splitmix64 finalizer, used for seeding and for stateless stream derivation.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = a + 0x9e3779b97f4a7c15ull * (b + 1);
  std::uint64_t z = splitmix64(s);
  return splitmix64(s) ^ z;
}

// xoshiro256++ with splitmix64 seeding.  Deterministic across platforms,
// splittable into independent child streams keyed by an integer.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed) {
    std::uint64_t s = seed;
    for (auto& w : s_) w = splitmix64(s);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // uniform in [0,1), 53 random bits
  double next_unit() { return double(next_u64() >> 11) * 0x1.0p-53; }

  // independent child stream; (seed, key) -> child seed is a fixed function,
  // so splits commute with threading
  Rng split(std::uint64_t key) const { return Rng(mix64(seed_, key)); }

  std::uint64_t seed() const { return seed_; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::uint64_t seed_;
  std::uint64_t s_[4];
};

}  // namespace hittingdim

#endif
