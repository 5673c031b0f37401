#ifndef HITTINGDIM_DIMENSION_HPP
#define HITTINGDIM_DIMENSION_HPP

#include <variant>

#include "hittingdim/hitting.hpp"
#include "hittingdim/systems.hpp"

namespace hittingdim {

struct LebesgueExact {
  Space space = Space::circle;
};

// exact Lebesgue descriptor or an empirical sample; exact mode is used
// whenever an exact formula exists so slope tests are sharp
using MeasureRef = std::variant<LebesgueExact, const EmpiricalMeasure*>;

bool measure_is_exact(const MeasureRef& mu);

// mu(B(x0, r)): exact mode gives 2r on the circle and (2r)^2 on the torus
// (sup metric); empirical mode counts sample points through the grid index
double ball_measure(const MeasureRef& mu, const Point& x0, double r);

// ball measure extended past r >= 1/2 (the whole space), for counting series
// that extend a ladder down to index 1
double ball_measure_extended(const MeasureRef& mu, const Point& x0, double r);

// Local dimension estimate at x0: fits (log r_k, log mu(B(x0, r_k))).
// Exact mode is exactly affine in log r, so the slopes are reported exactly
// (1 on the circle, 2 on the torus) with zero upper/lower spread.
// Empirical mode drops radii whose ball count is below count_floor (the
// dropped ks are reported in excluded_ks) and throws InsufficientSample when
// fewer than 3 radii survive.
ScalingEstimate local_dimension(const MeasureRef& mu, const Point& x0, const RadiusLadder& ladder,
                                int tail_window, long long count_floor = 100);

}  // namespace hittingdim

#endif
