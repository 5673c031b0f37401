#ifndef HITTINGDIM_ORACLE_HPP
#define HITTINGDIM_ORACLE_HPP

#include <cstdint>
#include <string>

#include "hittingdim/bittape.hpp"
#include "hittingdim/errors.hpp"

namespace hittingdim {

// [index * 2^-rank, (index+1) * 2^-rank), exactly representable under the
// doubling map: its m-fold preimage is a disjoint union of 2^m dyadic
// intervals of rank rank+m
struct DyadicInterval {
  int rank = 0;
  std::uint64_t index = 0;

  DyadicInterval() = default;
  DyadicInterval(int rank_, std::uint64_t index_);

  double lo() const;
  double hi() const;
};

// Exact dyadic rational num / 2^pow2 with num >= 0.  Widths are bounded by
// the rank caps below, so 128-bit intermediates never overflow.
struct BinaryRational {
  std::uint64_t num = 0;
  int pow2 = 0;  // denominator exponent

  static BinaryRational make(std::uint64_t num, int pow2);
  BinaryRational normalized() const;
  double to_double() const;
  std::string to_string() const;
};

BinaryRational operator+(BinaryRational a, BinaryRational b);
BinaryRational operator*(BinaryRational a, BinaryRational b);
bool operator==(BinaryRational a, BinaryRational b);
bool operator<=(BinaryRational a, BinaryRational b);

BinaryRational dyadic_measure(const DyadicInterval& I);  // 2^-rank

// Exact Lebesgue measure of T^{-m}(I) together with J for the doubling map,
// by enumerating the 2^m preimage branches in integer arithmetic.
// Ranks are capped at 30 and m at 24 (desk-scale enumeration budget).
BinaryRational exact_preimage_intersection(const DyadicInterval& I, const DyadicInterval& J,
                                           int m);

struct OracleHit {
  long long tau = 0;       // valid when !censored
  bool censored = false;
  long long n_max = 0;
};

// First n in [1, n_max] with T^n(x) in B(0, 2^-m) for the doubling map acting
// on the infinite binary expansion x = 0.b1 b2 b3...; membership at step n is
// "bits n+1..n+m all equal" (all zero: right arc, all one: left arc), exact
// for the point the tape represents.
OracleHit exact_hitting_bitstream(const BitTape& tape, int m, long long n_max);

// Expected value of the bitstream hitting time above for fair bits, from the
// run-length Markov chain: E(first length-m equal run) = 2^m - m.
double expected_bitstream_tau(int m);

struct CrosscheckResult {
  bool agree = true;
  long long first_disagreement = -1;  // hitting-time value mismatch marker
  long long tau_fixed = 0, tau_tape = 0;
  bool censored_fixed = false, censored_tape = false;
};

// Runs the same hitting query through the fixed_point doubling backend
// (initialized with the tape's first `budget` bits) and through the bit rule
// above; the two computations are definitionally identical while the fixed
// orbit retains more than m valid bits.  budget <= 0 selects n_max + m + 64.
CrosscheckResult crosscheck_backends(std::uint64_t seed, int m, long long n_max,
                                     int budget = 0);

}  // namespace hittingdim

#endif
