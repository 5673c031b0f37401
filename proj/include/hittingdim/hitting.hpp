#ifndef HITTINGDIM_HITTING_HPP
#define HITTINGDIM_HITTING_HPP

#include <utility>
#include <vector>

#include "hittingdim/systems.hpp"

namespace hittingdim {

// Strictly decreasing radii, all below 1/2 once k_min is clamped to the
// first valid index.  radius(k) stays evaluable outside [k_min, k_max] so
// counting series can extend a ladder by its own formula.
struct RadiusLadder {
  enum class Kind { power, geometric };
  Kind kind = Kind::power;
  double beta = 1.0;           // power: r_k = k^-beta
  double r0 = 1.0, lambda = 0.5;  // geometric: r_k = r0 * lambda^k
  long long k_min = 1, k_max = 10;

  static RadiusLadder power(double beta, long long k_min, long long k_max);
  static RadiusLadder geometric(double r0, double lambda, long long k_min, long long k_max);

  double radius(long long k) const;
  std::size_t size() const { return std::size_t(k_max - k_min + 1); }
  std::vector<long long> ks() const;
  std::string to_string() const;
};

struct HittingRecord {
  double radius = 0.0;
  long long tau = 0;  // valid when !censored; always >= 1 (n = 0 never accepted)
  bool censored = false;
  long long n_max = 0;
};

// Log-log slope summary of a scaling experiment.  slope_ls is the ordinary
// least-squares slope over the tail window (the smallest tail_window radii);
// slope_upper / slope_lower are the extreme slopes between consecutive tail
// points, finite-scale stand-ins for the limsup / liminf indicators.  The
// least-squares slope always lies between them.
struct ScalingEstimate {
  enum class Role { hitting, dimension };
  Role role = Role::hitting;
  std::vector<std::pair<double, double>> points;  // (log r_k, log v_k)
  double slope_ls = 0.0, slope_upper = 0.0, slope_lower = 0.0;
  int tail_window = 0;
  bool infinite = false;               // some tail record censored
  std::vector<long long> excluded_ks;  // dimension role: radii under the count floor
};

// core fit shared by the hitting and dimension estimators; orientation makes
// both slope conventions positive for typical data
ScalingEstimate fit_scaling(ScalingEstimate::Role role,
                            std::vector<std::pair<double, double>> log_points, int tail_window);

// tau_r(x, x0): least n in [1, n_max] with T^n(x) inside the open ball
// B(x0, r); CENSORED(n_max) when the cap is reached
HittingRecord hitting_time(const SystemSpec& sys, const Point& x, const Point& x0, double r,
                           long long n_max);
// resumable form: continues from the orbit's current position, so nested
// balls can reuse the search prefix (tau is nonincreasing in r)
HittingRecord hitting_time(Orbit& orbit, const Point& x0, double r, long long n_max);

std::vector<HittingRecord> hitting_records(Orbit orbit, const Point& x0,
                                           const RadiusLadder& ladder, long long n_max);

ScalingEstimate hitting_indicator(Orbit orbit, const Point& x0, const RadiusLadder& ladder,
                                  long long n_max, int tail_window,
                                  std::vector<HittingRecord>* records_out = nullptr);
ScalingEstimate hitting_indicator(const SystemSpec& sys, const Point& x, const Point& x0,
                                  const RadiusLadder& ladder, long long n_max, int tail_window);

// recurrence: x0 = x (the orbit's start)
ScalingEstimate recurrence_indicator(Orbit orbit, const RadiusLadder& ladder, long long n_max,
                                     int tail_window,
                                     std::vector<HittingRecord>* records_out = nullptr);
ScalingEstimate recurrence_indicator(const SystemSpec& sys, const Point& x,
                                     const RadiusLadder& ladder, long long n_max,
                                     int tail_window);

// Running minimum of m^{1/alpha} * d(T^m(x), x0) for m <= N.  drops holds
// (n, new minimum) at each strict decrease plus the final state; tail_min
// restricts the minimum to m in (N/2, N], the window that tracks the liminf
// (the all-m minimum is frozen by early small values).
struct ApproachSeries {
  std::vector<std::pair<long long, double>> drops;
  double final_min = 0.0;
  double tail_min = 0.0;
  long long N = 0;
};

ApproachSeries approach_rate(Orbit orbit, const Point& x0, double alpha, long long N);

}  // namespace hittingdim

#endif
