#include "hittingdim/verify.hpp"

#include <cmath>
#include <cstdio>

#include "hittingdim/correlation.hpp"
#include "hittingdim/dimension.hpp"
#include "hittingdim/hitting.hpp"
#include "hittingdim/oracle.hpp"
#include "hittingdim/sbc.hpp"
#include "hittingdim/systems.hpp"

namespace hittingdim {

bool all_passed(const std::vector<CheckResult>& checks) {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

namespace {

void add(std::vector<CheckResult>& out, const std::string& name, bool pass,
         const std::string& detail = "") {
  out.push_back({name, pass, detail});
}

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

// tau(T(x)) = tau(x) - 1 whenever tau(x) >= 2, exactly, for every backend
void check_shift_identity(std::vector<CheckResult>& out, Rng& rng) {
  struct Case {
    SystemSpec sys;
    const char* label;
  };
  std::vector<Case> cases = {
      {SystemSpec::make(Family::doubling, {}, {BackendKind::bitstream, 0}), "doubling/bitstream"},
      {SystemSpec::make(Family::doubling, {}, {BackendKind::fixed_point, 2048}),
       "doubling/fixed"},
      {SystemSpec::make(Family::tent), "tent/float64"},
      {SystemSpec::make(Family::rotation, {golden_angle()}), "rotation/float64"},
      {SystemSpec::make(Family::cat), "cat/float64"},
  };
  for (const auto& cs : cases) {
    int checked = 0;
    bool ok = true;
    for (int trial = 0; trial < 40 && checked < 20; ++trial) {
      std::uint64_t s = rng.next_u64();
      Point x0 = random_point(cs.sys, rng);
      double r = 0.02 + 0.2 * rng.next_unit();
      long long n_max = 1000;
      Orbit o1 = trial_orbit(cs.sys, s);
      Orbit shifted = trial_orbit(cs.sys, s);
      shifted.advance();
      shifted.rebase();  // the orbit of T(x), exact for every backend
      HittingRecord a = hitting_time(o1, x0, r, n_max);
      if (a.censored || a.tau < 2) continue;
      HittingRecord b = hitting_time(shifted, x0, r, n_max);
      ++checked;
      if (b.censored || b.tau != a.tau - 1) {
        ok = false;
        break;
      }
    }
    add(out, std::string("shift identity ") + cs.label, ok && checked >= 10,
        fmt("%g cases", double(checked)));
  }
}

void check_monotonicity(std::vector<CheckResult>& out, Rng& rng) {
  auto sys = SystemSpec::make(Family::doubling, {}, {BackendKind::bitstream, 0});
  auto ladder = RadiusLadder::geometric(1.0, 0.5, 2, 14);
  bool mono = true, resume_matches = true;
  for (int t = 0; t < 10; ++t) {
    std::uint64_t s = rng.next_u64();
    Point x0 = point1(rng.next_unit());
    auto recs = hitting_records(trial_orbit(sys, s), x0, ladder, 100000);
    long long prev = 0;
    for (std::size_t i = 0; i < recs.size(); ++i) {
      if (recs[i].censored) break;
      if (recs[i].tau < prev) mono = false;
      prev = recs[i].tau;
      // independent non-resumed search must agree with the resumed one
      Orbit fresh = trial_orbit(sys, s);
      HittingRecord alone = hitting_time(fresh, x0, recs[i].radius, 100000);
      if (alone.censored != recs[i].censored || (!alone.censored && alone.tau != recs[i].tau))
        resume_matches = false;
    }
  }
  add(out, "tau nonincreasing in r (nested balls)", mono);
  add(out, "resumed search equals independent search", resume_matches);

  bool mu_mono = true;
  LebesgueExact ex{Space::circle};
  auto sample_sys = SystemSpec::make(Family::doubling);
  auto emp = sample_measure(sample_sys, 20000, {GenerationSpec::Kind::iid_lebesgue, 99, 0, 1});
  MeasureRef e = &emp;
  for (int t = 0; t < 20; ++t) {
    Point x0 = point1(rng.next_unit());
    double prev_ex = 0.0, prev_em = 0.0;
    for (double r = 0.01; r < 0.5; r *= 1.7) {
      double m1 = ball_measure(MeasureRef(ex), x0, r);
      double m2 = ball_measure(e, x0, r);
      if (m1 < prev_ex || m2 < prev_em) mu_mono = false;
      prev_ex = m1;
      prev_em = m2;
    }
  }
  add(out, "ball_measure nondecreasing in r", mu_mono);
}

void check_censoring(std::vector<CheckResult>& out) {
  // the period-2 tape 0101... is the point 1/3; its doubling orbit keeps
  // distance >= 1/3 from 0, so every search around 0 with r < 1/3 censors
  auto sys = SystemSpec::make(Family::doubling, {}, {BackendKind::bitstream, 0});
  BitTape third = BitTape::periodic({0, 1});
  Orbit o(sys, third);
  HittingRecord rec = hitting_time(o, point1(0.0), 0.1, 10000);
  bool censored_long = rec.censored && rec.n_max == 10000;
  Orbit o2(sys, third);
  HittingRecord rec2 = hitting_time(o2, point1(0.0), 0.1, 50);
  add(out, "censoring consistency (smaller cap stays censored)", censored_long && rec2.censored);

  // a finite tau computed under a cap below tau must censor
  BitTape t(424242);
  Orbit o3(sys, t);
  HittingRecord full = hitting_time(o3, point1(0.25), 0.001, 100000);
  bool ok = true;
  if (!full.censored && full.tau > 1) {
    Orbit o4(sys, t);
    HittingRecord capped = hitting_time(o4, point1(0.25), 0.001, full.tau - 1);
    ok = capped.censored;
  }
  add(out, "cap below tau censors", ok);
}

void check_linearity(std::vector<CheckResult>& out) {
  auto sys = SystemSpec::make(Family::doubling, {}, {BackendKind::bitstream, 0});
  auto sample = sample_measure(sys, 10000, {GenerationSpec::Kind::iid_lebesgue, 7, 0, 1});
  Observable phi = Observable::bump(point1(0.37), 0.05, 0.2);
  Observable psi = Observable::bump(point1(0.61), 0.05, 0.2);
  bool exact = true;
  for (double s : {2.0, 0.25, 8.0}) {  // power-of-two scales commute with fp rounding
    for (long long n : {1LL, 3LL, 7LL}) {
      auto [c1, se1] = correlation_at(phi, psi, n, sample);
      auto [c2, se2] = correlation_at(phi.scaled(s), psi, n, sample);
      if (c2 != s * c1 || se2 != s * se1) exact = false;
    }
  }
  add(out, "correlation estimator linear in phi (exact)", exact);

  auto [c0, se0] = correlation_at(phi, Observable::constant(1.0), 5, sample);
  add(out, "constant psi gives exactly zero correlation", c0 == 0.0 && se0 == 0.0,
      fmt("c=%g se=%g", c0, se0));
}

void check_bump(std::vector<CheckResult>& out, Rng& rng) {
  Observable b = Observable::bump(point1(0.5), 0.1, 0.2);
  double L = lipschitz_norm(b);
  bool values_ok = eval_observable(b, Space::circle, point1(0.5)) == 1.0 &&
                   eval_observable(b, Space::circle, point1(0.85)) == 0.0 &&
                   std::fabs(eval_observable(b, Space::circle, point1(0.65)) - 0.5) < 1e-12;
  add(out, "bump values (inner 1, outer 0, midpoint 1/2)", values_ok);
  bool lip_ok = true;
  for (int i = 0; i < 100000; ++i) {
    Point x = point1(rng.next_unit()), y = point1(rng.next_unit());
    double lhs = std::fabs(eval_observable(b, Space::circle, x) -
                           eval_observable(b, Space::circle, y));
    if (lhs > L * distance(Space::circle, x, y) + 1e-12) {
      lip_ok = false;
      break;
    }
  }
  add(out, "bump Lipschitz bound on 1e5 random pairs", lip_ok, fmt("L=%g", L));
}

void check_metric(std::vector<CheckResult>& out, Rng& rng) {
  bool ok = true;
  for (int i = 0; i < 100000 && ok; ++i) {
    bool torus = (i % 2) == 1;
    Space sp = torus ? Space::torus2 : Space::circle;
    auto rnd = [&]() {
      return torus ? point2(rng.next_unit(), rng.next_unit()) : point1(rng.next_unit());
    };
    Point x = rnd(), y = rnd(), z = rnd();
    double dxy = distance(sp, x, y), dyx = distance(sp, y, x);
    if (dxy != dyx) ok = false;                                  // symmetry, exact
    if (distance(sp, x, x) != 0.0) ok = false;                   // identity
    if (dxy < 0.0 || dxy > 0.5) ok = false;                      // range
    if (dxy > distance(sp, x, z) + distance(sp, z, y) + 1e-15) ok = false;  // triangle
  }
  add(out, "metric axioms on 1e5 random triples", ok);
}

void check_oracle(std::vector<CheckResult>& out) {
  // partition identity: summing mu(T^-m I n J) over the rank-rJ partition
  // recovers mu(I) exactly
  bool partition_ok = true, additive_ok = true, selfsim_ok = true;
  for (int m : {0, 1, 3, 6}) {
    for (int rI : {1, 2, 5}) {
      for (std::uint64_t iI = 0; iI < (1ull << rI); iI += (1ull << rI) > 4 ? 3 : 1) {
        DyadicInterval I(rI, iI);
        int rJ = 4;
        BinaryRational sum = BinaryRational::make(0, 0);
        for (std::uint64_t iJ = 0; iJ < (1ull << rJ); ++iJ)
          sum = sum + exact_preimage_intersection(I, DyadicInterval(rJ, iJ), m);
        if (!(sum == dyadic_measure(I))) partition_ok = false;

        // splitting I into its two rank+1 children reproduces the parent
        DyadicInterval J(rJ, 5);
        BinaryRational whole = exact_preimage_intersection(I, J, m);
        BinaryRational left = exact_preimage_intersection(DyadicInterval(rI + 1, 2 * iI), J, m);
        BinaryRational right =
            exact_preimage_intersection(DyadicInterval(rI + 1, 2 * iI + 1), J, m);
        if (!(left + right == whole)) additive_ok = false;

        // rank(J) <= m: T^-m I is independent of J
        if (rJ <= m) {
          if (!(whole == dyadic_measure(I) * dyadic_measure(J))) selfsim_ok = false;
        }
      }
    }
  }
  add(out, "oracle partition identity (exact rationals)", partition_ok);
  add(out, "oracle additivity over dyadic children", additive_ok);
  add(out, "oracle self-similarity product rule", selfsim_ok);

  bool cross_ok = true;
  long long checked = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    for (int m = 2; m <= 10; ++m) {
      auto res = crosscheck_backends(seed, m, 2000);
      ++checked;
      if (!res.agree) cross_ok = false;
    }
  }
  add(out, "fixed_point vs bitstream hitting agreement", cross_ok,
      fmt("%g queries", double(checked)));
}

}  // namespace

std::vector<CheckResult> run_verify(std::uint64_t seed) {
  std::vector<CheckResult> out;
  Rng rng(seed);
  check_shift_identity(out, rng);
  check_monotonicity(out, rng);
  check_censoring(out);
  check_linearity(out);
  check_bump(out, rng);
  check_metric(out, rng);
  check_oracle(out);
  return out;
}

}  // namespace hittingdim
