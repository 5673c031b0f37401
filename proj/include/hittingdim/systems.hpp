#ifndef HITTINGDIM_SYSTEMS_HPP
#define HITTINGDIM_SYSTEMS_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hittingdim/bittape.hpp"
#include "hittingdim/errors.hpp"
#include "hittingdim/fixed_real.hpp"
#include "hittingdim/rng.hpp"

namespace hittingdim {

enum class Family { doubling, tent, cat, rotation, manneville_pomeau };
enum class Space { circle, torus2 };
enum class BackendKind { float64, fixed_point, bitstream };
enum class MeasureKind { lebesgue_exact, orbit_empirical };

const char* family_name(Family f);

struct Backend {
  BackendKind kind = BackendKind::float64;
  int bit_budget = 0;  // fixed_point only
};

// A point of the phase space, coordinates reduced mod 1 into [0,1).
struct Point {
  double c[2] = {0.0, 0.0};
  int dim = 1;
};

Point point1(double x);
Point point2(double x, double y);
double reduce_mod1(double x);
std::string format_point(const Point& p);

// One suite member: map family with parameters, phase space, iteration
// backend and reference-measure descriptor.  Validation enforces the
// family/space/backend/measure consistency rules.
struct SystemSpec {
  Family family = Family::doubling;
  Space space = Space::circle;
  std::vector<double> params;  // rotation angle alpha, or intermittency exponent s
  Backend backend;
  MeasureKind measure = MeasureKind::lebesgue_exact;

  double map_param() const { return params.empty() ? 0.0 : params[0]; }
  void validate() const;
  std::string to_string() const;

  static SystemSpec make(Family f, std::vector<double> params = {},
                         Backend b = {}, std::optional<MeasureKind> m = std::nullopt);
};

// Grammar: doubling | tent | cat | rotation:alpha=X | mp:s=X
// with alpha accepting the keywords "golden" and "liouville6".
// Backend grammar: float64 | fixed:BITS | bitstream.
SystemSpec parse_system(const std::string& system, const std::string& backend = "");
Backend parse_backend(const std::string& s);

// True if alpha is (numerically) a rational with denominator <= max_den:
// some continued-fraction convergent p/q approximates alpha far better than
// an irrational's convergents could.  Such rotations are periodic-in-effect
// and refused by experiments unless explicitly allowed.
bool rotation_angle_is_rational(double alpha, long long max_den = 1000000);

double liouville6_angle();  // sum of 2^{-n!}, n = 1..6, as a double
double golden_angle();      // (sqrt(5)-1)/2

// metric: circle distance min(|x-y|, 1-|x-y|); torus2 takes the sup over
// coordinates so that a ball of radius r has Lebesgue measure exactly (2r)^2
double distance(Space space, const Point& a, const Point& b);

// one application of T at double precision, reduced mod 1
Point step(const SystemSpec& sys, const Point& x);

double map_lipschitz_constant(const SystemSpec& sys);

// Stateful orbit iterator honoring the backend.
//  float64:     repeated double-precision step (exact for dyadic-affine maps,
//               which also means a float64 doubling/tent orbit truncates to 0
//               after ~1075 steps; use bitstream or fixed_point for long runs)
//  fixed_point: exact binary-fraction arithmetic; expanding maps consume
//               budget bits (doubling/tent 1 per step, cat 2), a 10-bit guard
//               triggers PrecisionExhausted
//  bitstream:   doubling only; the point is an infinite seeded bit tape and
//               the orbit is the shift, exact and O(1) per step forever
class Orbit {
 public:
  Orbit(const SystemSpec& sys, const Point& start);
  Orbit(const SystemSpec& sys, const BitTape& tape);
  static Orbit fixed_from_tape(const SystemSpec& sys, const BitTape& tape, int width_bits);

  const Point& current() const { return cur_; }
  const Point& start() const { return start_; }
  const SystemSpec& system() const { return sys_; }
  long long index() const { return index_; }

  void advance();  // throws PrecisionExhausted

  // make the current point the new origin: index resets to 0, consumed
  // precision is kept (the orbit of T(x) as its own orbit)
  void rebase() {
    index_ = 0;
    start_ = cur_;
  }

  // open-ball membership of the current point; exact integer comparison for
  // fixed_point orbits, double comparison otherwise
  bool in_ball(const Point& x0, double r) const;

  const FixedReal* fixed_x() const { return fx_ ? &*fx_ : nullptr; }
  bool is_bitstream() const { return kind_ == BackendKind::bitstream; }

 private:
  SystemSpec sys_;
  BackendKind kind_;
  Point start_, cur_;
  long long index_ = 0;

  // fixed_point state
  std::optional<FixedReal> fx_, fy_;
  std::optional<FixedReal> alpha_fixed_;
  int consumed_ = 0;
  int per_step_cost_ = 0;

  // bitstream state
  std::optional<BitTape> tape_;
  std::uint64_t tape_pos_ = 0;  // absolute shift; survives rebase()
  std::uint64_t window_ = 0;    // bits tape_pos+1 .. tape_pos+64 of the tape

  void refresh_from_fixed();
  void refresh_from_window();
};

// Spatial grid over sample points supporting exact ball-count queries
// (identical to a linear scan by construction: interior cells are counted
// a full cell away from the ball boundary, boundary cells are scanned).
class GridIndex {
 public:
  GridIndex() = default;
  GridIndex(Space space, const std::vector<Point>& pts, int cells_per_axis);
  long long ball_count(const std::vector<Point>& pts, const Point& x0, double r) const;

 private:
  Space space_ = Space::circle;
  int cells_ = 0;
  std::vector<std::uint32_t> cell_start_;  // CSR offsets
  std::vector<std::uint32_t> order_;       // point indices grouped by cell
};

struct GenerationSpec {
  enum class Kind { iid_lebesgue, orbit_sample } kind = Kind::iid_lebesgue;
  std::uint64_t seed = 0;
  long long burn_in = 10000;  // orbit_sample only
  long long stride = 1;
};

// Monte Carlo estimator of the invariant measure: M stored points plus a
// grid index for ball counting.  Deterministic given (system, generation).
class EmpiricalMeasure {
 public:
  EmpiricalMeasure(SystemSpec sys, std::vector<Point> pts, GenerationSpec gen,
                   int cells_per_axis = 0);

  const SystemSpec& system() const { return sys_; }
  const std::vector<Point>& points() const { return pts_; }
  std::size_t size() const { return pts_.size(); }
  const GenerationSpec& generation() const { return gen_; }

  long long ball_count(const Point& x0, double r) const;
  long long ball_count_scan(const Point& x0, double r) const;  // reference path
  double ball_fraction(const Point& x0, double r) const;

  // rebuild the orbit of sample point i (tape-backed when the system's
  // backend is bitstream, so long-lag pushforwards stay exact)
  Orbit orbit_of(std::size_t i) const;

 private:
  SystemSpec sys_;
  std::vector<Point> pts_;
  GenerationSpec gen_;
  GridIndex index_;
};

// iid_lebesgue draws M independent uniform points; orbit_sample runs one
// orbit from a seeded start, discards burn_in steps and keeps every
// stride-th point.  Both are deterministic given (seed, M, method).
EmpiricalMeasure sample_measure(const SystemSpec& sys, long long M, const GenerationSpec& gen,
                                int jobs = 0, int cells_per_axis = 0);

Point random_point(const SystemSpec& sys, Rng& rng);

// orbit construction for a seeded trial: bitstream systems get a fresh tape,
// others a uniform float64 start
Orbit trial_orbit(const SystemSpec& sys, std::uint64_t trial_seed);

}  // namespace hittingdim

#endif
