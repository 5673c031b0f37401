#ifndef HITTINGDIM_SBC_HPP
#define HITTINGDIM_SBC_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "hittingdim/correlation.hpp"
#include "hittingdim/dimension.hpp"
#include "hittingdim/hitting.hpp"
#include "hittingdim/oracle.hpp"
#include "hittingdim/systems.hpp"

namespace hittingdim {

// Shrinking targets S_k = B(x0, r_k); the sets stay implicit, membership is
// tested as T^n(x) in S_n.  The ladder formula extends the radii to every
// n >= 1 for counting series (radii at or above 1/2 mean S_n = X).
struct TargetSequence {
  Point x0;
  RadiusLadder ladder;
};

TargetSequence build_targets(const Point& x0, const RadiusLadder& ladder);

// Visit-counting process along one orbit: Z_N = #{n <= N : T^n(x) in S_n},
// EZ_N = sum of mu(S_n), and their ratio at each checkpoint.
struct SbcSeries {
  std::vector<long long> checkpoints;
  std::vector<long long> Z;
  std::vector<double> EZ;
  std::vector<double> ratio;
  bool divergence_warning = false;  // EZ(N_max) < 10: ratio statistically meaningless
};

std::vector<long long> default_checkpoints(long long N_max);  // powers of 10

SbcSeries sbc_series(Orbit orbit, const TargetSequence& targets, long long N_max,
                     const MeasureRef& mu, const std::vector<long long>& checkpoints);

struct SbcEnsembleRow {
  long long N = 0;
  double mean_ratio = 0.0, sd_ratio = 0.0;
  double EZ = 0.0;
  double var_emp = 0.0;   // Var(Z_N) across trials
  double bound = 0.0;     // (2 N^alpha + 1) EZ + 2 N^{2+c1+c2} Phi(N^alpha)
  double bound_ratio = 0.0;
};

struct VarianceBoundParams {
  DecayModel phi;
  double alpha = 0.2;
  double c1 = 0.0, c2 = 0.0;
};

struct SbcEnsembleResult {
  std::vector<SbcEnsembleRow> rows;
  std::vector<SbcSeries> trials;
  bool divergence_warning = false;
};

// trials independent seeded orbits; Var(Z_N) across trials is compared with
// the mixing-driven bound when params are supplied
SbcEnsembleResult sbc_ensemble(const SystemSpec& sys, const TargetSequence& targets,
                               long long N_max, int trials, std::uint64_t seed,
                               const MeasureRef& mu, const std::vector<long long>& checkpoints,
                               const std::optional<VarianceBoundParams>& bound_params,
                               int jobs = 0);

// One checked instance of the ball-mixing inequality
//   mu(A_k n A_j) <= mu(A_{k-1}) mu(A_{j-1}) + Phi(k-j) / ((r_{k-1}-r_k)(r_{j-1}-r_j))
// with A_n = T^{-n}(S_n) and A_0 evaluated through the extended ladder
// formula (an index whose radius reaches 1/2 contributes mu = 1, i.e. X).
struct MixingPairRecord {
  long long k = 0, j = 0;
  double lhs = 0.0, lhs_se = 0.0;
  double rhs_product = 0.0, rhs_correction = 0.0;
  bool satisfied = false;  // lhs <= rhs within 2 lhs_se
  bool exact = false;
};

// empirical mode: lhs estimated from M seeded initial points
std::vector<MixingPairRecord> mixing_bound_check(const SystemSpec& sys,
                                                 const TargetSequence& targets,
                                                 const std::vector<std::pair<long long, long long>>& pairs,
                                                 const MeasureRef& mu, const DecayModel& phi,
                                                 long long M, std::uint64_t seed, int jobs = 0);

// exact mode for the doubling map with dyadic-interval targets
// S_k = [0, 2^-k): both sides are exact rationals from the preimage oracle
std::vector<MixingPairRecord> mixing_bound_check_dyadic(
    const std::vector<std::pair<long long, long long>>& pairs, const DecayModel& phi);

enum class CorollaryVerdict { sbc_expected, inconclusive, fails };

// Checks the sufficient conditions for the strong Borel-Cantelli property:
//   z > 0 for the growth exponent of sum mu(S_k),
//   c the decay exponent of r_{n-1} - r_n (giving factors c1 = c2 = -c),
//   summability of n^{2-2c+eps} Phi(n^alpha) / EZ_n^2 for alpha < z/2.
// Summability is decided symbolically from the exponents (exact for the
// synthetic threshold cases); the partial sum to 10^6 terms is reported.
struct CorollaryReport {
  double z = 0.0, c = 0.0;
  double c1 = 0.0, c2 = 0.0;
  double alpha = 0.0, epsilon = 0.0;
  bool summable = false;
  double term_exponent = 0.0;   // polynomial / none classes
  double partial_sum = 0.0;     // to 10^6 terms
  CorollaryVerdict verdict = CorollaryVerdict::inconclusive;

  std::string to_text() const;  // flat key-value block
};

CorollaryReport check_corollary(const TargetSequence& targets, const MeasureRef& mu,
                                const DecayModel& phi, double alpha, double epsilon);

const char* verdict_name(CorollaryVerdict v);

}  // namespace hittingdim

#endif
