#include "hittingdim/dimension.hpp"

#include <cmath>

namespace hittingdim {

bool measure_is_exact(const MeasureRef& mu) { return std::holds_alternative<LebesgueExact>(mu); }


double ball_measure(const MeasureRef& mu, const Point& x0, double r) {
  if (!(r > 0.0 && r < 0.5)) throw std::invalid_argument("radius must lie in (0, 1/2)");
  if (const auto* ex = std::get_if<LebesgueExact>(&mu)) {
    double m = 2.0 * r;
    return ex->space == Space::torus2 ? m * m : m;
  }
  return std::get<const EmpiricalMeasure*>(mu)->ball_fraction(x0, r);
}

double ball_measure_extended(const MeasureRef& mu, const Point& x0, double r) {
  if (const auto* ex = std::get_if<LebesgueExact>(&mu)) {
    double m = std::min(1.0, 2.0 * r);
    return ex->space == Space::torus2 ? m * m : m;
  }
  if (r >= 0.5) return 1.0;
  return std::get<const EmpiricalMeasure*>(mu)->ball_fraction(x0, r);
}

ScalingEstimate local_dimension(const MeasureRef& mu, const Point& x0, const RadiusLadder& ladder,
                                int tail_window, long long count_floor) {
  if (const auto* ex = std::get_if<LebesgueExact>(&mu)) {
    // mu(B) = (2r)^D exactly: log mu is affine in log r with slope D, so the
    // estimate is D at every radius pair with zero spread
    double D = ex->space == Space::torus2 ? 2.0 : 1.0;
    ScalingEstimate est;
    est.role = ScalingEstimate::Role::dimension;
    for (long long k = ladder.k_min; k <= ladder.k_max; ++k) {
      double r = ladder.radius(k);
      est.points.emplace_back(std::log(r), std::log(ball_measure(mu, x0, r)));
    }
    est.slope_ls = est.slope_upper = est.slope_lower = D;
    est.tail_window = tail_window <= 0 ? int(est.points.size())
                                       : std::min<int>(tail_window, int(est.points.size()));
    return est;
  }

  const auto* emp = std::get<const EmpiricalMeasure*>(mu);
  std::vector<std::pair<double, double>> pts;
  std::vector<long long> excluded;
  for (long long k = ladder.k_min; k <= ladder.k_max; ++k) {
    double r = ladder.radius(k);
    long long count = emp->ball_count(x0, r);
    if (count < count_floor) {
      excluded.push_back(k);  // reported, not silently dropped
      continue;
    }
    pts.emplace_back(std::log(r), std::log(double(count) / double(emp->size())));
  }
  if (pts.size() < 3)
    throw InsufficientSample("fewer than 3 radii meet the ball-count floor; increase M or radii");
  auto est = fit_scaling(ScalingEstimate::Role::dimension, std::move(pts), tail_window);
  est.excluded_ks = std::move(excluded);
  return est;
}

}  // namespace hittingdim
