#include "hittingdim/oracle.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "hittingdim/systems.hpp"

namespace hittingdim {

static constexpr int kMaxRank = 30;
static constexpr int kMaxShift = 24;

DyadicInterval::DyadicInterval(int rank_, std::uint64_t index_) : rank(rank_), index(index_) {
  if (rank < 0 || rank > kMaxRank)
    throw BranchBudgetExceeded("dyadic rank out of range [0," + std::to_string(kMaxRank) + "]");
  if (index >= (1ull << rank)) throw std::invalid_argument("dyadic index out of range");
}

double DyadicInterval::lo() const { return std::ldexp(double(index), -rank); }
double DyadicInterval::hi() const { return std::ldexp(double(index + 1), -rank); }

BinaryRational BinaryRational::make(std::uint64_t num, int pow2) {
  BinaryRational r{num, pow2};
  return r.normalized();
}

BinaryRational BinaryRational::normalized() const {
  BinaryRational r = *this;
  while (r.pow2 > 0 && r.num != 0 && (r.num & 1u) == 0) {
    r.num >>= 1;
    --r.pow2;
  }
  if (r.num == 0) r.pow2 = 0;
  return r;
}

double BinaryRational::to_double() const { return std::ldexp(double(num), -pow2); }

std::string BinaryRational::to_string() const {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%llu/2^%d", (unsigned long long)num, pow2);
  return buf;
}

BinaryRational operator+(BinaryRational a, BinaryRational b) {
  int p = std::max(a.pow2, b.pow2);
  if (p > 62) throw std::overflow_error("BinaryRational sum denominator too wide");
  std::uint64_t na = a.num << (p - a.pow2);
  std::uint64_t nb = b.num << (p - b.pow2);
  return BinaryRational::make(na + nb, p);
}

BinaryRational operator*(BinaryRational a, BinaryRational b) {
  unsigned __int128 n = (unsigned __int128)a.num * b.num;
  int p = a.pow2 + b.pow2;
  while (p > 0 && n != 0 && (n & 1u) == 0) {
    n >>= 1;
    --p;
  }
  if (n >> 64) throw std::overflow_error("BinaryRational product numerator too wide");
  return BinaryRational::make(std::uint64_t(n), p);
}

bool operator==(BinaryRational a, BinaryRational b) {
  a = a.normalized();
  b = b.normalized();
  return a.num == b.num && a.pow2 == b.pow2;
}

bool operator<=(BinaryRational a, BinaryRational b) {
  int p = std::max(a.pow2, b.pow2);
  return (a.num << (p - a.pow2)) <= (b.num << (p - b.pow2));
}

BinaryRational dyadic_measure(const DyadicInterval& I) { return BinaryRational::make(1, I.rank); }

BinaryRational exact_preimage_intersection(const DyadicInterval& I, const DyadicInterval& J,
                                           int m) {
  if (m < 0) throw std::invalid_argument("shift m must be >= 0");
  if (m > kMaxShift)
    throw BranchBudgetExceeded("preimage shift " + std::to_string(m) + " exceeds cap " +
                               std::to_string(kMaxShift));
  // T^{-m}(I) = union over branches b of [ (b*2^rI + iI) / 2^(rI+m), +1 ),
  // each a dyadic interval of rank rI+m; intersect each with J by prefix
  const int rp = I.rank + m;  // rank of each preimage piece
  const int rJ = J.rank;
  std::uint64_t pieces_in_J = 0;
  bool piece_contains_J = false;
  for (std::uint64_t b = 0; b < (1ull << m); ++b) {
    std::uint64_t piece = (b << I.rank) | I.index;
    if (rp >= rJ) {
      if ((piece >> (rp - rJ)) == J.index) ++pieces_in_J;  // piece inside J
    } else {
      if ((J.index >> (rJ - rp)) == piece) {  // J inside this piece
        piece_contains_J = true;
        break;
      }
    }
  }
  if (rp < rJ) return piece_contains_J ? dyadic_measure(J) : BinaryRational::make(0, 0);
  return BinaryRational::make(pieces_in_J, rp);
}

OracleHit exact_hitting_bitstream(const BitTape& tape, int m, long long n_max) {
  if (m < 2) throw std::invalid_argument("ball rank m must be >= 2 (radius < 1/2)");
  if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
  OracleHit h;
  h.n_max = n_max;
  // run length of equal bits ending at the bit just read; window n+1..n+m is
  // all-equal exactly when the run reaches m at bit n+m
  int run = 1;
  int prev = tape.bit(2);
  long long pos = 2;  // bit index just read
  while (true) {
    if (run >= m) {
      h.tau = pos - m;  // window starts at pos-m+1 = tau+1
      return h;
    }
    ++pos;
    if (pos - m > n_max) break;  // any completion now would give tau > n_max
    int b = tape.bit(std::uint64_t(pos));
    run = (b == prev) ? run + 1 : 1;
    prev = b;
  }
  h.censored = true;
  return h;
}

double expected_bitstream_tau(int m) {
  // Run-length chain: from run length s the next bit extends (prob 1/2) or
  // resets to 1.  With E_s the expected further bits to reach run m,
  // E_m = 0 and E_s = 1 + (E_{s+1} + E_1)/2.  Back-substitute with
  // E_s = a_s + b_s E_1 and close the loop at s = 1.
  double a = 0.0, b = 0.0;  // coefficients for E_m
  for (int s = m - 1; s >= 1; --s) {
    a = 1.0 + 0.5 * a;
    b = 0.5 * b + 0.5;
  }
  double e1 = a / (1.0 - b);  // = 2^m - 2
  // the scan starts at bit 2; completion at bit position q gives tau = q - m
  return (2.0 + e1) - double(m);
}

CrosscheckResult crosscheck_backends(std::uint64_t seed, int m, long long n_max, int budget) {
  if (m < 2) throw std::invalid_argument("ball rank m must be >= 2 (radius 2^-m < 1/2)");
  if (budget <= 0) budget = int(n_max) + m + 64;
  if (budget < n_max + m + 10)
    throw std::invalid_argument("fixed_point budget must be >= n_max + m + 10 bits");
  BitTape tape(seed);

  OracleHit ref = exact_hitting_bitstream(tape, m, n_max);

  SystemSpec sys = SystemSpec::make(Family::doubling, {}, {BackendKind::fixed_point, budget});
  Orbit orbit = Orbit::fixed_from_tape(sys, tape, budget);
  Point x0 = point1(0.0);
  double r = std::ldexp(1.0, -m);
  long long tau_fixed = 0;
  bool censored_fixed = true;
  for (long long n = 1; n <= n_max; ++n) {
    orbit.advance();
    if (orbit.in_ball(x0, r)) {
      tau_fixed = n;
      censored_fixed = false;
      break;
    }
  }

  CrosscheckResult res;
  res.tau_fixed = tau_fixed;
  res.tau_tape = ref.tau;
  res.censored_fixed = censored_fixed;
  res.censored_tape = ref.censored;
  res.agree = (censored_fixed == ref.censored) && (censored_fixed || tau_fixed == ref.tau);
  if (!res.agree) res.first_disagreement = censored_fixed ? ref.tau : tau_fixed;
  return res;
}

}  // namespace hittingdim
