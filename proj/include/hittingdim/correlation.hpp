#ifndef HITTINGDIM_CORRELATION_HPP
#define HITTINGDIM_CORRELATION_HPP

#include <vector>

#include "hittingdim/systems.hpp"

namespace hittingdim {

// Radial Lipschitz bump: 1 on B(x0, r_in), linear ramp down to 0 on
// B(x0, r_out), 0 beyond; the sandwich observable for ball indicators.
// scale multiplies the whole profile (used for linearity checks).
struct Observable {
  enum class Kind { bump, constant };
  Kind kind = Kind::constant;
  Point x0;
  double r_in = 0.0, r_out = 0.0;
  double value = 1.0;  // constant kind
  double scale = 1.0;

  static Observable bump(const Point& x0, double r_in, double r_out);
  static Observable constant(double v);
  Observable scaled(double factor) const;
  std::string to_string() const;
};

double eval_observable(const Observable& obs, Space space, const Point& x);

// max(sup |phi|, Lipschitz constant); for a unit bump this is
// max(1, 1/(r_out - r_in))
double lipschitz_norm(const Observable& obs);

struct CorrEntry {
  long long n = 0;
  double c_hat = 0.0;
  double se = 0.0;
  bool used_in_fit = false;
};

struct CorrelationSeries {
  std::vector<CorrEntry> entries;  // lags strictly increasing
};

// Fitted decay law Phi(n).  exponential: C e^{-rate n}; polynomial:
// C n^{-p}; none: the constant C (no significant decrease); undetermined
// refuses evaluation.
struct DecayModel {
  enum class Class { exponential, polynomial, none, undetermined };
  Class cls = Class::undetermined;
  double param = 0.0;  // rate or exponent p
  double C = 1.0;
  double quality_exp = 0.0, quality_poly = 0.0;  // r^2 per candidate

  double eval(double n) const;
  double quality() const;
  const char* class_name() const;
  std::string to_string() const;
};

// Ensemble estimator of | E[phi o T^n . psi] - E[phi] E[psi] | (signed):
// mean over sample points of phi(T^n x) psi(x) minus the product of the
// pushed-phi and psi means, with a delta-method standard error.  The second
// pass works on centered products, so a constant psi gives exactly zero.
std::pair<double, double> correlation_at(const Observable& phi, const Observable& psi,
                                         long long n, const EmpiricalMeasure& sample,
                                         int jobs = 0);

// one orbit sweep per sample point, all requested lags at once
CorrelationSeries correlation_series(const Observable& phi, const Observable& psi,
                                     const std::vector<long long>& lags,
                                     const EmpiricalMeasure& sample, int jobs = 0);

// lags 1..50 dense, then geometric steps up to max_lag
std::vector<long long> default_lags(long long max_lag);

// Classifies decay from the entries above the noise floor (c_hat > 3 se):
// fits log c against n (exponential) and against log n (polynomial), keeps
// the candidate whose residual misfit (1 - r^2) undercuts the other by 10%,
// reports none when the series does not significantly decrease, undetermined
// otherwise.  Throws InsufficientSignal when fewer than min_above_noise
// entries clear the floor.  The default floor of 10 suits slow decay; fast
// mixers cannot push 10 lags past the 3 se floor at desk-scale sample sizes
// (the signal-to-noise ceiling is c(1)/se <= sqrt(M)), so their experiments
// lower it explicitly.
DecayModel decay_fit(CorrelationSeries& series, std::size_t min_above_noise = 10);

// Decay model normalized for Lipschitz pairs: the fitted amplitude is divided
// by ||phi|| ||psi|| and inflated to envelope every above-noise entry, so
// c_hat(n) <= ||phi|| ||psi|| Phi(n) holds on the fitted series.
DecayModel normalized_decay_model(const CorrelationSeries& series, const DecayModel& fit,
                                  const Observable& phi, const Observable& psi);

}  // namespace hittingdim

#endif
