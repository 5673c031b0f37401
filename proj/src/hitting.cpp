#include "hittingdim/hitting.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "hittingdim/fitting.hpp"

namespace hittingdim {

RadiusLadder RadiusLadder::power(double beta, long long k_min, long long k_max) {
  if (!(beta > 0.0)) throw LadderNotDecreasing("power ladder needs beta > 0");
  RadiusLadder l;
  l.kind = Kind::power;
  l.beta = beta;
  l.k_min = std::max<long long>(1, k_min);
  l.k_max = k_max;
  // clamp to radii < 1/2: k^-beta < 1/2  <=>  k > 2^(1/beta)
  while (l.k_min <= k_max && !(l.radius(l.k_min) < 0.5)) ++l.k_min;
  if (l.k_min > l.k_max) throw LadderNotDecreasing("power ladder has no radii below 1/2");
  return l;
}

RadiusLadder RadiusLadder::geometric(double r0, double lambda, long long k_min, long long k_max) {
  if (!(r0 > 0.0) || !(lambda > 0.0 && lambda < 1.0))
    throw LadderNotDecreasing("geometric ladder needs r0 > 0 and lambda in (0,1)");
  RadiusLadder l;
  l.kind = Kind::geometric;
  l.r0 = r0;
  l.lambda = lambda;
  l.k_min = std::max<long long>(0, k_min);
  l.k_max = k_max;
  while (l.k_min <= k_max && !(l.radius(l.k_min) < 0.5)) ++l.k_min;
  if (l.k_min > l.k_max) throw LadderNotDecreasing("geometric ladder has no radii below 1/2");
  return l;
}

double RadiusLadder::radius(long long k) const {
  if (kind == Kind::power) return std::pow(double(k), -beta);
  return r0 * std::pow(lambda, double(k));
}

std::vector<long long> RadiusLadder::ks() const {
  std::vector<long long> v;
  v.reserve(size());
  for (long long k = k_min; k <= k_max; ++k) v.push_back(k);
  return v;
}

std::string RadiusLadder::to_string() const {
  char buf[128];
  if (kind == Kind::power) {
    std::snprintf(buf, sizeof buf, "pow:beta=%.17g,kmin=%lld,kmax=%lld", beta, k_min, k_max);
  } else {
    std::snprintf(buf, sizeof buf, "geom:r0=%.17g,lambda=%.17g,kmin=%lld,kmax=%lld", r0, lambda,
                  k_min, k_max);
  }
  return buf;
}

ScalingEstimate fit_scaling(ScalingEstimate::Role role,
                            std::vector<std::pair<double, double>> log_points, int tail_window) {
  ScalingEstimate est;
  est.role = role;
  est.points = std::move(log_points);
  if (est.points.size() < 2) throw std::invalid_argument("fit_scaling needs >= 2 points");
  int W = tail_window <= 0 ? int(est.points.size())
                           : std::min<int>(tail_window, int(est.points.size()));
  if (W < 2) W = 2;
  est.tail_window = W;

  // tail = smallest radii = last W points (radii decrease along the ladder)
  std::vector<double> xs, ys;
  xs.reserve(W);
  ys.reserve(W);
  for (std::size_t i = est.points.size() - std::size_t(W); i < est.points.size(); ++i) {
    double lr = est.points[i].first, lv = est.points[i].second;
    xs.push_back(role == ScalingEstimate::Role::hitting ? -lr : lr);
    ys.push_back(lv);
  }
  est.slope_ls = least_squares(xs, ys).slope;
  double up = -std::numeric_limits<double>::infinity();
  double lo = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    double s = (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]);
    up = std::max(up, s);
    lo = std::min(lo, s);
  }
  est.slope_upper = up;
  est.slope_lower = lo;
  return est;
}

HittingRecord hitting_time(Orbit& orbit, const Point& x0, double r, long long n_max) {
  if (!(r > 0.0 && r < 0.5)) throw std::invalid_argument("radius must lie in (0, 1/2)");
  if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
  HittingRecord rec;
  rec.radius = r;
  rec.n_max = n_max;
  // n = 0 is never accepted, even if the start lies inside the ball
  if (orbit.index() >= 1 && orbit.index() <= n_max && orbit.in_ball(x0, r)) {
    rec.tau = orbit.index();
    return rec;
  }
  while (orbit.index() < n_max) {
    orbit.advance();
    if (orbit.in_ball(x0, r)) {
      rec.tau = orbit.index();
      return rec;
    }
  }
  rec.censored = true;
  return rec;
}

HittingRecord hitting_time(const SystemSpec& sys, const Point& x, const Point& x0, double r,
                           long long n_max) {
  Orbit orbit(sys, x);
  return hitting_time(orbit, x0, r, n_max);
}

std::vector<HittingRecord> hitting_records(Orbit orbit, const Point& x0,
                                           const RadiusLadder& ladder, long long n_max) {
  std::vector<HittingRecord> recs;
  recs.reserve(ladder.size());
  bool dead = false;
  for (long long k = ladder.k_min; k <= ladder.k_max; ++k) {
    double r = ladder.radius(k);
    if (dead) {
      recs.push_back({r, 0, true, n_max});  // nested balls: censored stays censored
      continue;
    }
    HittingRecord rec = hitting_time(orbit, x0, r, n_max);
    if (rec.censored) dead = true;
    recs.push_back(rec);
  }
  return recs;
}

static ScalingEstimate indicator_from_records(const std::vector<HittingRecord>& recs,
                                              const RadiusLadder& ladder, int tail_window) {
  std::vector<std::pair<double, double>> pts;
  pts.reserve(recs.size());
  bool any_censored = false;
  for (const auto& rec : recs) {
    if (rec.censored) {
      any_censored = true;
      continue;
    }
    pts.emplace_back(std::log(rec.radius), std::log(double(rec.tau)));
  }
  if (any_censored || pts.size() < 2) {
    // censored radii poison the tail window: the indicator is reported infinite
    ScalingEstimate est;
    est.role = ScalingEstimate::Role::hitting;
    est.points = std::move(pts);
    est.infinite = true;
    double nan = std::numeric_limits<double>::quiet_NaN();
    est.slope_ls = est.slope_upper = est.slope_lower = nan;
    est.tail_window = tail_window <= 0 ? int(ladder.size()) : tail_window;
    return est;
  }
  return fit_scaling(ScalingEstimate::Role::hitting, std::move(pts), tail_window);
}

ScalingEstimate hitting_indicator(Orbit orbit, const Point& x0, const RadiusLadder& ladder,
                                  long long n_max, int tail_window,
                                  std::vector<HittingRecord>* records_out) {
  auto recs = hitting_records(std::move(orbit), x0, ladder, n_max);
  auto est = indicator_from_records(recs, ladder, tail_window);
  if (records_out) *records_out = std::move(recs);
  return est;
}

ScalingEstimate hitting_indicator(const SystemSpec& sys, const Point& x, const Point& x0,
                                  const RadiusLadder& ladder, long long n_max, int tail_window) {
  return hitting_indicator(Orbit(sys, x), x0, ladder, n_max, tail_window);
}

ScalingEstimate recurrence_indicator(Orbit orbit, const RadiusLadder& ladder, long long n_max,
                                     int tail_window, std::vector<HittingRecord>* records_out) {
  Point x0 = orbit.start();
  auto recs = hitting_records(std::move(orbit), x0, ladder, n_max);
  auto est = indicator_from_records(recs, ladder, tail_window);
  if (records_out) *records_out = std::move(recs);
  return est;
}

ScalingEstimate recurrence_indicator(const SystemSpec& sys, const Point& x,
                                     const RadiusLadder& ladder, long long n_max,
                                     int tail_window) {
  return recurrence_indicator(Orbit(sys, x), ladder, n_max, tail_window);
}

ApproachSeries approach_rate(Orbit orbit, const Point& x0, double alpha, long long N) {
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be > 0");
  if (N < 1) throw std::invalid_argument("N must be >= 1");
  ApproachSeries out;
  out.N = N;
  double inv_alpha = 1.0 / alpha;
  double run_min = std::numeric_limits<double>::infinity();
  double tail_min = std::numeric_limits<double>::infinity();
  long long tail_start = N / 2;  // minimum over m in (N/2, N]
  Space space = orbit.system().space;
  for (long long m = 1; m <= N; ++m) {
    orbit.advance();
    double v = std::pow(double(m), inv_alpha) * distance(space, orbit.current(), x0);
    if (v < run_min) {
      run_min = v;
      out.drops.emplace_back(m, v);
    }
    if (m > tail_start && v < tail_min) tail_min = v;
  }
  out.final_min = run_min;
  out.tail_min = tail_min;
  if (out.drops.empty() || out.drops.back().first != N) out.drops.emplace_back(N, run_min);
  return out;
}

}  // namespace hittingdim
