#include "hittingdim/sbc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "hittingdim/fitting.hpp"
#include "hittingdim/parallel.hpp"

namespace hittingdim {

TargetSequence build_targets(const Point& x0, const RadiusLadder& ladder) {
  for (long long k = ladder.k_min; k < ladder.k_max; ++k) {
    if (!(ladder.radius(k + 1) < ladder.radius(k)))
      throw LadderNotDecreasing("target radii must be strictly decreasing");
  }
  if (!(ladder.radius(ladder.k_min) < 0.5))
    throw LadderNotDecreasing("target radii must lie below 1/2 inside the ladder range");
  return TargetSequence{x0, ladder};
}

std::vector<long long> default_checkpoints(long long N_max) {
  std::vector<long long> cps;
  for (long long c = 10; c < N_max; c *= 10) cps.push_back(c);
  cps.push_back(N_max);
  return cps;
}

SbcSeries sbc_series(Orbit orbit, const TargetSequence& targets, long long N_max,
                     const MeasureRef& mu, const std::vector<long long>& checkpoints) {
  if (N_max < 1) throw std::invalid_argument("N_max must be >= 1");
  if (!std::is_sorted(checkpoints.begin(), checkpoints.end()))
    throw std::invalid_argument("checkpoints must be increasing");
  SbcSeries out;
  out.checkpoints = checkpoints;
  long long Z = 0;
  double EZ = 0.0;
  std::size_t ci = 0;
  for (long long n = 1; n <= N_max && ci < checkpoints.size(); ++n) {
    double r = targets.ladder.radius(n);  // extended by the ladder formula
    orbit.advance();
    // r >= 1/2 means S_n is the whole space (sup distance never exceeds 1/2)
    if (r >= 0.5 || orbit.in_ball(targets.x0, r)) ++Z;
    EZ += ball_measure_extended(mu, targets.x0, r);
    if (n == checkpoints[ci]) {
      out.Z.push_back(Z);
      out.EZ.push_back(EZ);
      out.ratio.push_back(EZ > 0.0 ? double(Z) / EZ : 0.0);
      ++ci;
    }
  }
  // the ratio is only meaningful when EZ diverges: warn when the partial
  // sums are tiny or their growth exponent across checkpoints is flat
  if (!out.EZ.empty() && out.EZ.back() < 10.0) out.divergence_warning = true;
  if (out.EZ.size() >= 2) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < out.EZ.size(); ++i) {
      if (out.EZ[i] > 0.0) {
        lx.push_back(std::log(double(out.checkpoints[i])));
        ly.push_back(std::log(out.EZ[i]));
      }
    }
    if (lx.size() < 2 || least_squares(lx, ly).slope <= 0.05) out.divergence_warning = true;
  }
  return out;
}

SbcEnsembleResult sbc_ensemble(const SystemSpec& sys, const TargetSequence& targets,
                               long long N_max, int trials, std::uint64_t seed,
                               const MeasureRef& mu, const std::vector<long long>& checkpoints,
                               const std::optional<VarianceBoundParams>& bound_params,
                               int jobs) {
  if (trials < 30) throw std::invalid_argument("ensemble needs at least 30 trials");
  SbcEnsembleResult res;
  res.trials.resize(std::size_t(trials));
  parallel_for(std::size_t(trials), jobs, [&](std::size_t t) {
    Orbit orbit = trial_orbit(sys, mix64(seed, t));
    res.trials[t] = sbc_series(std::move(orbit), targets, N_max, mu, checkpoints);
  });

  res.rows.resize(checkpoints.size());
  for (std::size_t ci = 0; ci < checkpoints.size(); ++ci) {
    std::vector<double> ratios, zs;
    ratios.reserve(res.trials.size());
    zs.reserve(res.trials.size());
    for (const auto& tr : res.trials) {
      ratios.push_back(tr.ratio[ci]);
      zs.push_back(double(tr.Z[ci]));
    }
    SbcEnsembleRow row;
    row.N = checkpoints[ci];
    row.mean_ratio = mean(ratios);
    row.sd_ratio = sample_sd(ratios);
    row.EZ = res.trials.front().EZ[ci];
    row.var_emp = sample_variance(zs);
    if (bound_params) {
      double N = double(row.N);
      double na = std::pow(N, bound_params->alpha);
      row.bound = (2.0 * na + 1.0) * row.EZ +
                  2.0 * std::pow(N, 2.0 + bound_params->c1 + bound_params->c2) *
                      bound_params->phi.eval(na);
      row.bound_ratio = row.var_emp / row.bound;
    }
    res.rows[ci] = row;
  }
  res.divergence_warning = res.trials.front().divergence_warning;
  return res;
}

// mu(A_{k-1}) via invariance: A_n = T^{-n}(S_n) has the measure of S_n; an
// out-of-range index (radius >= 1/2 or k-1 = 0 on a power ladder, where the
// formula blows up) contributes mu = 1, matching the A_{-1} = X convention
static double set_measure_extended(const MeasureRef& mu, const TargetSequence& targets,
                                   long long n) {
  double r = targets.ladder.radius(n);
  if (!std::isfinite(r) || r >= 0.5) return 1.0;
  return ball_measure_extended(mu, targets.x0, r);
}

static double radius_gap(const RadiusLadder& ladder, long long k) {
  return ladder.radius(k - 1) - ladder.radius(k);  // may be +inf at a power ladder's k = 1
}

std::vector<MixingPairRecord> mixing_bound_check(
    const SystemSpec& sys, const TargetSequence& targets,
    const std::vector<std::pair<long long, long long>>& pairs, const MeasureRef& mu,
    const DecayModel& phi, long long M, std::uint64_t seed, int jobs) {
  if (M < 1) throw std::invalid_argument("M must be >= 1");
  long long max_k = 0;
  for (auto [k, j] : pairs) {
    if (!(k > j && j >= 1)) throw std::invalid_argument("mixing pairs need k > j >= 1");
    max_k = std::max(max_k, k);
  }

  // joint hit indicators per pair, estimated from M seeded initial points
  std::vector<std::vector<std::uint32_t>> hits(pairs.size());
  const std::size_t nchunks = (std::size_t(M) + 8191) / 8192;
  std::vector<std::vector<std::uint32_t>> chunk_hits(nchunks,
                                                     std::vector<std::uint32_t>(pairs.size(), 0));
  parallel_for(nchunks, jobs, [&](std::size_t c) {
    std::size_t begin = c * 8192, end = std::min(std::size_t(M), begin + 8192);
    std::vector<std::uint8_t> in_target(std::size_t(max_k) + 1);
    for (std::size_t i = begin; i < end; ++i) {
      Orbit orbit = trial_orbit(sys, mix64(seed, i));
      for (long long n = 1; n <= max_k; ++n) {
        orbit.advance();
        double r = targets.ladder.radius(n);
        in_target[std::size_t(n)] =
            (!std::isfinite(r) || r >= 0.5) ? 1 : (orbit.in_ball(targets.x0, r) ? 1 : 0);
      }
      for (std::size_t p = 0; p < pairs.size(); ++p) {
        if (in_target[std::size_t(pairs[p].first)] && in_target[std::size_t(pairs[p].second)])
          ++chunk_hits[c][p];
      }
    }
  });

  std::vector<MixingPairRecord> out(pairs.size());
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    long long k = pairs[p].first, j = pairs[p].second;
    long long count = 0;
    for (std::size_t c = 0; c < nchunks; ++c) count += chunk_hits[c][p];
    MixingPairRecord rec;
    rec.k = k;
    rec.j = j;
    rec.lhs = double(count) / double(M);
    rec.lhs_se = std::sqrt(std::max(0.0, rec.lhs * (1.0 - rec.lhs)) / double(M));
    rec.rhs_product = set_measure_extended(mu, targets, k - 1) *
                      set_measure_extended(mu, targets, j - 1);
    double gap_k = radius_gap(targets.ladder, k), gap_j = radius_gap(targets.ladder, j);
    rec.rhs_correction = phi.eval(double(k - j)) / (gap_k * gap_j);
    if (!std::isfinite(rec.rhs_correction)) rec.rhs_correction = 0.0;  // infinite gap
    rec.satisfied = rec.lhs <= rec.rhs_product + rec.rhs_correction + 2.0 * rec.lhs_se;
    out[p] = rec;
  }
  return out;
}

std::vector<MixingPairRecord> mixing_bound_check_dyadic(
    const std::vector<std::pair<long long, long long>>& pairs, const DecayModel& phi) {
  std::vector<MixingPairRecord> out;
  out.reserve(pairs.size());
  for (auto [k, j] : pairs) {
    if (!(k > j && j >= 1)) throw std::invalid_argument("mixing pairs need k > j >= 1");
    // S_n = [0, 2^-n); mu(A_k n A_j) = mu(T^{-(k-j)} S_k n S_j) by invariance
    DyadicInterval Sk(int(k), 0), Sj(int(j), 0);
    BinaryRational lhs = exact_preimage_intersection(Sk, Sj, int(k - j));
    MixingPairRecord rec;
    rec.k = k;
    rec.j = j;
    rec.exact = true;
    rec.lhs = lhs.to_double();
    double mu_km1 = k - 1 == 0 ? 1.0 : std::ldexp(1.0, -int(k - 1));
    double mu_jm1 = j - 1 == 0 ? 1.0 : std::ldexp(1.0, -int(j - 1));
    rec.rhs_product = mu_km1 * mu_jm1;
    double gap_k = std::ldexp(1.0, -int(k));  // 2^-(k-1) - 2^-k
    double gap_j = std::ldexp(1.0, -int(j));
    rec.rhs_correction = phi.eval(double(k - j)) / (gap_k * gap_j);
    rec.satisfied = rec.lhs <= rec.rhs_product + rec.rhs_correction;
    out.push_back(rec);
  }
  return out;
}

const char* verdict_name(CorollaryVerdict v) {
  switch (v) {
    case CorollaryVerdict::sbc_expected: return "SBC_expected";
    case CorollaryVerdict::inconclusive: return "inconclusive";
    case CorollaryVerdict::fails: return "fails";
  }
  return "?";
}

std::string CorollaryReport::to_text() const {
  std::ostringstream os;
  char buf[256];
  std::snprintf(buf, sizeof buf, "z = %.6g\n", z);
  os << buf;
  std::snprintf(buf, sizeof buf, "c = %.6g\n", c);
  os << buf;
  std::snprintf(buf, sizeof buf, "c1 = %.6g\nc2 = %.6g\n", c1, c2);
  os << buf;
  std::snprintf(buf, sizeof buf, "alpha = %.6g\nepsilon = %.6g\n", alpha, epsilon);
  os << buf;
  os << "summable = " << (summable ? "true" : "false") << "\n";
  std::snprintf(buf, sizeof buf, "term_exponent = %.6g\n", term_exponent);
  os << buf;
  std::snprintf(buf, sizeof buf, "partial_sum_1e6 = %.6g\n", partial_sum);
  os << buf;
  os << "verdict = " << verdict_name(verdict) << "\n";
  return os.str();
}

CorollaryReport check_corollary(const TargetSequence& targets, const MeasureRef& mu,
                                const DecayModel& phi, double alpha, double epsilon) {
  if (phi.cls == DecayModel::Class::undetermined)
    throw UndeterminedDecay("corollary check needs a classified decay model");
  if (!(alpha > 0.0) || !(epsilon > 0.0))
    throw std::invalid_argument("alpha and epsilon must be > 0");

  CorollaryReport rep;
  rep.alpha = alpha;
  rep.epsilon = epsilon;

  const RadiusLadder& ladder = targets.ladder;
  // z: tail slope of log sum_{i<=k} mu(S_i) against log k (top half of the range)
  long long k_lo = (ladder.k_min + ladder.k_max + 1) / 2;
  double running = 0.0;
  std::vector<double> log_k, log_sum;
  for (long long k = 1; k <= ladder.k_max; ++k) {
    running += set_measure_extended(mu, targets, k);
    if (k >= k_lo) {
      log_k.push_back(std::log(double(k)));
      log_sum.push_back(std::log(running));
    }
  }
  rep.z = least_squares(log_k, log_sum).slope;

  // c: tail slope of log (r_{n-1} - r_n) against log n
  std::vector<double> log_n, log_gap;
  for (long long n = std::max<long long>(2, k_lo); n <= ladder.k_max; ++n) {
    double gap = radius_gap(ladder, n);
    if (std::isfinite(gap) && gap > 0.0) {
      log_n.push_back(std::log(double(n)));
      log_gap.push_back(std::log(gap));
    }
  }
  rep.c = least_squares(log_n, log_gap).slope;
  rep.c1 = rep.c2 = -rep.c;  // ball targets: the Lipschitz factors are 1/(r_{n-1}-r_n)

  // symbolic summability of sum n^{2-2c+eps} Phi(n^alpha) / EZ_n^2
  switch (phi.cls) {
    case DecayModel::Class::exponential:
      rep.summable = phi.param > 0.0;  // superpolynomial beats every power
      rep.term_exponent = -std::numeric_limits<double>::infinity();
      break;
    case DecayModel::Class::polynomial:
      rep.term_exponent = 2.0 - 2.0 * rep.c + epsilon - phi.param * alpha - 2.0 * rep.z;
      rep.summable = rep.term_exponent < -1.0;
      break;
    case DecayModel::Class::none:
      rep.term_exponent = 2.0 - 2.0 * rep.c + epsilon - 2.0 * rep.z;
      rep.summable = rep.term_exponent < -1.0;  // constant Phi: the term does not vanish
      break;
    default: break;
  }

  // numerical cross-check: partial sums of the actual terms to 10^6
  {
    const long long K = 1000000;
    double ez = 0.0, s = 0.0;
    for (long long n = 1; n <= K; ++n) {
      ez += set_measure_extended(mu, targets, n);
      double term = std::pow(double(n), 2.0 - 2.0 * rep.c + epsilon) *
                    phi.eval(std::pow(double(n), alpha)) / (ez * ez);
      s += term;
      if (!std::isfinite(s)) break;
    }
    rep.partial_sum = s;
  }

  if (rep.z <= 0.0 || !rep.summable) {
    rep.verdict = CorollaryVerdict::fails;
  } else if (!(alpha < rep.z / 2.0)) {
    rep.verdict = CorollaryVerdict::inconclusive;  // this alpha cannot witness the condition
  } else {
    rep.verdict = CorollaryVerdict::sbc_expected;
  }
  return rep;
}

}  // namespace hittingdim
