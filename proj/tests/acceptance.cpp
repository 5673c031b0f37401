// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failed criteria.  Each criterion pins its tolerances in code; seeds are
// frozen so every run is reproducible.

#include <algorithm>
#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "hittingdim/correlation.hpp"
#include "hittingdim/dimension.hpp"
#include "hittingdim/fitting.hpp"
#include "hittingdim/hitting.hpp"
#include "hittingdim/oracle.hpp"
#include "hittingdim/parallel.hpp"
#include "hittingdim/sbc.hpp"
#include "hittingdim/verify.hpp"

using namespace hittingdim;

namespace {

constexpr std::uint64_t kSeed = 20260808;

struct Criterion {
  int number;
  std::string label;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

std::vector<Criterion> results;

class Timer {
 public:
  Timer() : t0_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
  }

 private:
  std::chrono::steady_clock::time_point t0_;
};

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

struct HitEnsemble {
  std::vector<double> slopes_ls, slopes_upper;
  int infinite = 0;
};

HitEnsemble run_hit_ensemble(const SystemSpec& sys, const Point& x0, const RadiusLadder& ladder,
                             long long n_max, int trials, std::uint64_t seed,
                             bool recurrence = false) {
  std::vector<ScalingEstimate> ests;
  ests.resize(std::size_t(trials));
  parallel_for(std::size_t(trials), 0, [&](std::size_t t) {
    Orbit orbit = trial_orbit(sys, mix64(seed, t));
    ests[t] = recurrence ? recurrence_indicator(std::move(orbit), ladder, n_max, 0)
                         : hitting_indicator(std::move(orbit), x0, ladder, n_max, 0);
  });
  HitEnsemble out;
  for (const auto& e : ests) {
    if (e.infinite) {
      ++out.infinite;
      continue;
    }
    out.slopes_ls.push_back(e.slope_ls);
    out.slopes_upper.push_back(e.slope_upper);
  }
  return out;
}

// shared across criteria: the criterion-1 ensembles feed criterion 2, the
// criterion-8 doubling fit feeds criteria 6 and 9
HitEnsemble g_doubling_hits, g_cat_hits;
DecayModel g_doubling_phi;
bool g_have_phi = false;

void criterion_1() {
  Criterion c{1, "hitting slope matches the exact dimension on fast mixers"};
  Timer timer;

  auto dsys = SystemSpec::make(Family::doubling, {}, {BackendKind::bitstream, 0});
  auto dladder = RadiusLadder::geometric(1.0, 0.5, 4, 18);
  Point dx0 = point1(0.3);
  Timer dt;
  g_doubling_hits = run_hit_ensemble(dsys, dx0, dladder, 10000000, 100, mix64(kSeed, 1));
  double d_seconds = dt.seconds();
  double d_median = median(g_doubling_hits.slopes_ls);
  double d_dim = local_dimension(LebesgueExact{Space::circle}, dx0, dladder, 0).slope_ls;

  auto csys = SystemSpec::make(Family::cat);
  auto cladder = RadiusLadder::geometric(1.0, 0.5, 2, 8);
  Point cx0 = point2(0.3, 0.3);
  Timer ct;
  g_cat_hits = run_hit_ensemble(csys, cx0, cladder, 10000000, 100, mix64(kSeed, 2));
  double c_seconds = ct.seconds();
  double c_median = median(g_cat_hits.slopes_ls);
  double c_dim = local_dimension(LebesgueExact{Space::torus2}, cx0, cladder, 0).slope_ls;

  c.pass = d_median >= 0.85 && d_median <= 1.15 && d_dim == 1.0 && d_seconds < 120.0 &&
           c_median >= 1.7 && c_median <= 2.3 && c_dim == 2.0 && c_seconds < 300.0 &&
           g_doubling_hits.infinite == 0 && g_cat_hits.infinite == 0;
  c.detail = fmt("doubling median %.3f in [0.85,1.15], dim %.17g == 1 (%.1fs); "
                 "cat median %.3f in [1.7,2.3], dim %.17g == 2 (%.1fs)",
                 d_median, d_dim, d_seconds, c_median, c_dim, c_seconds);
  c.seconds = timer.seconds();
  results.push_back(c);
}

void criterion_2() {
  Criterion c{2, "hitting slope rarely falls below dimension - 0.2"};
  Timer timer;
  auto frac_below = [](const HitEnsemble& e, double dim) {
    int below = 0;
    for (double s : e.slopes_ls) below += (s < dim - 0.2);
    return double(below) / double(e.slopes_ls.size());
  };
  double fd = frac_below(g_doubling_hits, 1.0);
  double fc = frac_below(g_cat_hits, 2.0);
  c.pass = fd <= 0.05 && fc <= 0.05;
  c.detail = fmt("doubling %.0f%% of trials below 0.8, cat %.0f%% below 1.8 (allowed 5%%)",
                 100.0 * fd, 100.0 * fc);
  c.seconds = timer.seconds();
  results.push_back(c);
}

void criterion_3() {
  Criterion c{3, "recurrence upper bound: few trials above 1.2"};
  Timer timer;
  auto sys = SystemSpec::make(Family::doubling, {}, {BackendKind::bitstream, 0});
  auto ladder = RadiusLadder::geometric(1.0, 0.5, 3, 24);
  auto ens = run_hit_ensemble(sys, point1(0.0), ladder, 100000000, 100, mix64(kSeed, 3), true);
  int above = 0;
  for (double s : ens.slopes_ls) above += (s > 1.2);
  double frac = double(above) / double(ens.slopes_ls.size());
  c.pass = frac <= 0.05 && ens.infinite == 0;
  c.detail = fmt("%d of %zu recurrence slopes above 1.2 (median %.3f)", above,
                 ens.slopes_ls.size(), median(ens.slopes_ls));
  c.seconds = timer.seconds();
  results.push_back(c);
}

void criterion_4() {
  Criterion c{4, "negative control: liouville rotation overshoots, golden stays at 1"};
  Timer timer;
  auto ladder = RadiusLadder::geometric(1.0, 0.5, 3, 20);  // radii down to 9.5e-7

  auto lsys = SystemSpec::make(Family::rotation, {liouville6_angle()});
  auto lens = run_hit_ensemble(lsys, point1(0.3), ladder, 10000000, 100, mix64(kSeed, 4));
  double l_upper = median(lens.slopes_upper);
  double l_dim = local_dimension(LebesgueExact{Space::circle}, point1(0.3), ladder, 0).slope_ls;

  auto gsys = SystemSpec::make(Family::rotation, {golden_angle()});
  auto gens = run_hit_ensemble(gsys, point1(0.3), ladder, 10000000, 100, mix64(kSeed, 5));
  double g_ls = median(gens.slopes_ls);

  c.pass = l_upper > 2.0 && l_dim == 1.0 && g_ls >= 0.8 && g_ls <= 1.2 &&
           lens.infinite == 0 && gens.infinite == 0;
  c.detail = fmt("liouville median slope_upper %.2f > 2 with dim %.17g == 1; "
                 "golden median slope_ls %.3f in [0.8,1.2]",
                 l_upper, l_dim, g_ls);
  c.seconds = timer.seconds();
  results.push_back(c);
}

SbcEnsembleResult g_sbc;
std::vector<long long> g_sbc_checkpoints;

void criterion_5() {
  Criterion c{5, "strong Borel-Cantelli: visit counts track their expectation"};
  Timer timer;
  auto sys = SystemSpec::make(Family::doubling, {}, {BackendKind::bitstream, 0});
  auto targets = build_targets(point1(0.3), RadiusLadder::power(0.5, 1, 100000));
  g_sbc_checkpoints = default_checkpoints(100000);
  g_sbc = sbc_ensemble(sys, targets, 100000, 200, mix64(kSeed, 6), LebesgueExact{Space::circle},
                       g_sbc_checkpoints, std::nullopt);
  const auto& rows = g_sbc.rows;
  double mean_final = rows.back().mean_ratio;
  double sd_final = rows.back().sd_ratio;
  double sd_prev = rows[rows.size() - 2].sd_ratio;  // N = 10^4
  double secs = timer.seconds();
  c.pass = mean_final >= 0.92 && mean_final <= 1.08 && sd_final < sd_prev && secs < 180.0;
  c.detail = fmt("mean Z/EZ at N=1e5: %.4f in [0.92,1.08]; sd %.4f < %.4f at N=1e4 (%.1fs)",
                 mean_final, sd_final, sd_prev, secs);
  c.seconds = secs;
  results.push_back(c);
}

void criterion_8();  // runs before 6 and 9: they reuse its fitted model

void criterion_6() {
  Criterion c{6, "variance bound from the ball-mixing inequality"};
  Timer timer;
  if (!g_have_phi) {
    c.detail = "no exponential model available from criterion 8";
    c.seconds = timer.seconds();
    results.push_back(c);
    return;
  }
  const double alpha = 0.2, c1 = 1.5, c2 = 1.5;
  bool all_ok = true;
  std::string worst;
  double worst_ratio = 0.0;
  for (const auto& row : g_sbc.rows) {
    double N = double(row.N);
    double na = std::pow(N, alpha);
    double bound = (2.0 * na + 1.0) * row.EZ +
                   2.0 * std::pow(N, 2.0 + c1 + c2) * g_doubling_phi.eval(na);
    double ratio = row.var_emp / bound;
    if (ratio > worst_ratio) {
      worst_ratio = ratio;
      worst = fmt("N=%lld var=%.3g bound=%.3g", row.N, row.var_emp, bound);
    }
    if (!(row.var_emp <= bound)) all_ok = false;
  }
  c.pass = all_ok;
  c.detail = fmt("Var(Z_N) under the bound at all %zu checkpoints; tightest ratio %.2g (%s)",
                 g_sbc.rows.size(), worst_ratio, worst.c_str());
  c.seconds = timer.seconds();
  results.push_back(c);
}

void criterion_7() {
  Criterion c{7, "oracle equivalence: Monte Carlo vs exact rationals, backend crosscheck"};
  Timer timer;

  // Monte Carlo vs exact preimage measures, 3 standard errors, frozen seed
  const long long M = 1000000;
  struct Cell {
    DyadicInterval I, J;
    int m;
    long long count = 0;
  };
  std::vector<Cell> cells;
  Rng grid_rng(mix64(kSeed, 7));
  for (int m = 0; m <= 12; ++m) {
    const std::pair<int, int> rank_pairs[4] = {{1, 10}, {10, 3}, {5, 5}, {2, 7}};
    for (auto [rI, rJ] : rank_pairs) {
      Cell cell;
      cell.I = DyadicInterval(rI, grid_rng.next_u64() % (1ull << rI));
      cell.J = DyadicInterval(rJ, grid_rng.next_u64() % (1ull << rJ));
      cell.m = m;
      cells.push_back(cell);
    }
  }
  const std::size_t chunk_count = 64;
  std::vector<std::vector<long long>> partial(chunk_count,
                                              std::vector<long long>(cells.size(), 0));
  parallel_for(chunk_count, 0, [&](std::size_t ch) {
    long long begin = (M * (long long)ch) / (long long)chunk_count;
    long long end = (M * (long long)(ch + 1)) / (long long)chunk_count;
    for (long long i = begin; i < end; ++i) {
      double x = Rng(mix64(mix64(kSeed, 10), i)).next_unit();
      double orbit13[13];
      orbit13[0] = x;
      for (int j = 1; j <= 12; ++j) {
        double v = 2.0 * orbit13[j - 1];
        orbit13[j] = v >= 1.0 ? v - 1.0 : v;
      }
      for (std::size_t q = 0; q < cells.size(); ++q) {
        const Cell& cell = cells[q];
        if (x >= cell.J.lo() && x < cell.J.hi() && orbit13[cell.m] >= cell.I.lo() &&
            orbit13[cell.m] < cell.I.hi())
          ++partial[ch][q];
      }
    }
  });
  int mc_failures = 0;
  for (std::size_t q = 0; q < cells.size(); ++q) {
    long long count = 0;
    for (std::size_t ch = 0; ch < chunk_count; ++ch) count += partial[ch][q];
    double exact = exact_preimage_intersection(cells[q].I, cells[q].J, cells[q].m).to_double();
    double est = double(count) / double(M);
    double se = std::sqrt(exact * (1.0 - exact) / double(M));
    if (std::fabs(est - exact) > 3.0 * se) ++mc_failures;
  }

  // independence identity, exact over the full rank grid
  bool indep_ok = true;
  Rng idx_rng(mix64(kSeed, 9));
  for (int m = 0; m <= 12; ++m) {
    for (int rI = 1; rI <= 10; ++rI) {
      for (int rJ = 1; rJ <= std::min(m, 10); ++rJ) {
        DyadicInterval I(rI, idx_rng.next_u64() % (1ull << rI));
        DyadicInterval J(rJ, idx_rng.next_u64() % (1ull << rJ));
        if (!(exact_preimage_intersection(I, J, m) == dyadic_measure(I) * dyadic_measure(J)))
          indep_ok = false;
      }
    }
  }

  // fixed_point vs bitstream hitting agreement, 100 seeds x m in [2,10]
  int cross_failures = 0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    for (int m = 2; m <= 10; ++m) {
      if (!crosscheck_backends(mix64(kSeed, 1000 + s), m, 10000).agree) ++cross_failures;
    }
  }

  c.pass = mc_failures == 0 && indep_ok && cross_failures == 0;
  c.detail = fmt("%zu MC cells within 3 se (%d out), independence identity exact, "
                 "900 backend crosschecks agree (%d out)",
                 cells.size(), mc_failures, cross_failures);
  c.seconds = timer.seconds();
  results.push_back(c);
}

void criterion_8() {
  Criterion c{8, "decay classification: exponential / polynomial / no decay"};
  Timer timer;
  const long long M = 1000000;
  auto lags = default_lags(1000);

  // doubling: the 1/6-ball near-indicator keeps |sin(pi 2^n / 3)| constant,
  // so the decay envelope is a clean 2^-n; at M = 1e6 at most ~8 lags can
  // clear the 3 se floor (c(1)/se <= sqrt(M)), hence the explicit minimum
  Timer t1;
  auto dsys = SystemSpec::make(Family::doubling, {}, {BackendKind::bitstream, 0});
  auto dsample = sample_measure(dsys, M, {GenerationSpec::Kind::iid_lebesgue,
                                          mix64(kSeed, 20), 0, 1});
  Observable dbump = Observable::bump(point1(1.0 / 6.0), 0.166, 0.1675);
  auto dseries = correlation_series(dbump, dbump, lags, dsample);
  DecayModel dfit = decay_fit(dseries, 6);
  double d_secs = t1.seconds();
  bool d_ok = dfit.cls == DecayModel::Class::exponential && d_secs < 300.0;
  if (d_ok) {
    g_doubling_phi = normalized_decay_model(dseries, dfit, dbump, dbump);
    g_have_phi = true;
  }

  Timer t2;
  auto msys = SystemSpec::make(Family::manneville_pomeau, {0.5});
  auto msample = sample_measure(msys, M, {GenerationSpec::Kind::orbit_sample,
                                          mix64(kSeed, 21), 10000, 16});
  Observable mbump = Observable::bump(point1(0.0), 0.05, 0.15);
  auto mseries = correlation_series(mbump, mbump, lags, msample);
  DecayModel mfit = decay_fit(mseries);
  double m_secs = t2.seconds();
  bool m_ok = mfit.cls == DecayModel::Class::polynomial && mfit.param >= 0.5 &&
              mfit.param <= 1.5 && m_secs < 300.0;

  Timer t3;
  auto rsys = SystemSpec::make(Family::rotation, {golden_angle()});
  auto rsample = sample_measure(rsys, M, {GenerationSpec::Kind::iid_lebesgue,
                                          mix64(kSeed, 22), 0, 1});
  Observable rbump = Observable::bump(point1(1.0 / 6.0), 0.166, 0.1675);
  auto rseries = correlation_series(rbump, rbump, lags, rsample);
  DecayModel rfit;
  try {
    rfit = decay_fit(rseries);
  } catch (const InsufficientSignal&) {
    rfit.cls = DecayModel::Class::undetermined;
  }
  double r_secs = t3.seconds();
  bool r_ok = (rfit.cls == DecayModel::Class::none ||
               rfit.cls == DecayModel::Class::undetermined) &&
              r_secs < 300.0;

  c.pass = d_ok && m_ok && r_ok;
  c.detail = fmt("doubling %s rate %.3f (%.0fs); mp %s p=%.2f in [0.5,1.5] (%.0fs); "
                 "rotation %s (%.0fs)",
                 dfit.class_name(), dfit.param, d_secs, mfit.class_name(), mfit.param, m_secs,
                 rfit.class_name(), r_secs);
  c.seconds = timer.seconds();
  results.push_back(c);
}

void criterion_9() {
  Criterion c{9, "corollary checker: growth, gap and summability conditions"};
  Timer timer;
  auto targets = build_targets(point1(0.3), RadiusLadder::power(0.5, 1, 10000));
  MeasureRef mu = LebesgueExact{Space::circle};
  const double alpha = 0.2, eps = 0.01;

  bool exp_ok = false;
  double z = 0.0, cc = 0.0;
  if (g_have_phi) {
    auto rep = check_corollary(targets, mu, g_doubling_phi, alpha, eps);
    z = rep.z;
    cc = rep.c;
    exp_ok = rep.verdict == CorollaryVerdict::sbc_expected && z >= 0.4 && z <= 0.6 &&
             cc >= -1.7 && cc <= -1.3;
  }

  DecayModel flat;
  flat.cls = DecayModel::Class::none;
  flat.C = 1.0;
  auto flat_rep = check_corollary(targets, mu, flat, alpha, eps);
  bool flat_ok = flat_rep.verdict == CorollaryVerdict::fails && !flat_rep.summable;

  // synthetic polynomial models around the symbolic summability threshold
  bool thresh_ok = true;
  auto probe = check_corollary(targets, mu, [] {
    DecayModel m;
    m.cls = DecayModel::Class::polynomial;
    m.C = 1.0;
    m.param = 1.0;
    return m;
  }(), alpha, eps);
  double p_star = (2.0 - 2.0 * probe.c + eps - 2.0 * probe.z + 1.0) / alpha;
  for (double dp : {-3.0, -0.05, 0.05, 3.0}) {
    DecayModel m;
    m.cls = DecayModel::Class::polynomial;
    m.C = 2.7;
    m.param = p_star + dp;
    auto rep = check_corollary(targets, mu, m, alpha, eps);
    bool oracle = (2.0 - 2.0 * rep.c + eps - m.param * alpha - 2.0 * rep.z) < -1.0;
    if (rep.summable != oracle) thresh_ok = false;
    if ((rep.verdict == CorollaryVerdict::sbc_expected) != oracle) thresh_ok = false;
    if (oracle != (dp > 0.0)) thresh_ok = false;
  }

  c.pass = exp_ok && flat_ok && thresh_ok;
  c.detail = fmt("exponential model: SBC_expected with z=%.3f in [0.4,0.6], c=%.3f in "
                 "[-1.7,-1.3]; flat model fails; thresholds match the symbolic oracle",
                 z, cc);
  c.seconds = timer.seconds();
  results.push_back(c);
}

void criterion_10() {
  Criterion c{10, "definition-level invariants (exact) under verify"};
  Timer timer;
  auto checks = run_verify(mix64(kSeed, 99));
  int failed = 0;
  for (const auto& chk : checks) failed += !chk.pass;
  c.pass = failed == 0;
  c.detail = fmt("%zu checks, %d failed", checks.size(), failed);
  if (failed) {
    for (const auto& chk : checks)
      if (!chk.pass) c.detail += "; FAILED " + chk.name;
  }
  c.seconds = timer.seconds();
  results.push_back(c);
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_8();  // fits the decay model used by 6 and 9
  criterion_6();
  criterion_7();
  criterion_9();
  criterion_10();

  std::sort(results.begin(), results.end(),
            [](const Criterion& a, const Criterion& b) { return a.number < b.number; });
  int failures = 0;
  for (const auto& c : results) {
    failures += !c.pass;
    std::printf("[%s] criterion %d: %s -- %s (%.1fs)\n", c.pass ? "PASS" : "FAIL", c.number,
                c.label.c_str(), c.detail.c_str(), c.seconds);
  }
  std::printf("%d/%zu criteria passed\n", int(results.size()) - failures, results.size());
  return failures;
}
