#include "hittingdim/systems.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <thread>

#include "hittingdim/parallel.hpp"

namespace hittingdim {

const char* family_name(Family f) {
  switch (f) {
    case Family::doubling: return "doubling";
    case Family::tent: return "tent";
    case Family::cat: return "cat";
    case Family::rotation: return "rotation";
    case Family::manneville_pomeau: return "mp";
  }
  return "?";
}

double reduce_mod1(double x) {
  double r = x - std::floor(x);
  if (r >= 1.0) r -= 1.0;  // x just below an integer can round up
  if (r < 0.0) r = 0.0;
  return r;
}

Point point1(double x) {
  Point p;
  p.c[0] = reduce_mod1(x);
  p.dim = 1;
  return p;
}

Point point2(double x, double y) {
  Point p;
  p.c[0] = reduce_mod1(x);
  p.c[1] = reduce_mod1(y);
  p.dim = 2;
  return p;
}

std::string format_point(const Point& p) {
  char buf[64];
  if (p.dim == 1) {
    std::snprintf(buf, sizeof buf, "%.17g", p.c[0]);
  } else {
    std::snprintf(buf, sizeof buf, "%.17g|%.17g", p.c[0], p.c[1]);
  }
  return buf;
}

double golden_angle() { return (std::sqrt(5.0) - 1.0) / 2.0; }

double liouville6_angle() {
  // 2^{-1} + 2^{-2} + 2^{-6} + 2^{-24}; the 2^{-120} and 2^{-720} terms are
  // below double resolution and do not affect orbits at the scales we probe
  return 0x1.0p-1 + 0x1.0p-2 + 0x1.0p-6 + 0x1.0p-24;
}

bool rotation_angle_is_rational(double alpha, long long max_den) {
  if (alpha <= 0.0 || alpha >= 1.0) return true;
  // continued-fraction convergents p/q of alpha; an approximation quality far
  // beyond the 1/q^2 an irrational can sustain marks an intended rational
  double x = alpha;
  long long p_prev = 1, q_prev = 0, p = 0, q = 1;  // convergents of [0; a1, a2, ...]
  for (int it = 0; it < 64; ++it) {
    if (x < 1e-18) return q <= max_den;  // expansion terminated
    double inv = 1.0 / x;
    double a_f = std::floor(inv);
    if (a_f > 9.0e18) return q <= max_den;
    long long a = (long long)a_f;
    long long p_next = a * p + p_prev;
    long long q_next = a * q + q_prev;
    if (q_next > max_den || q_next <= 0) return false;
    p_prev = p; q_prev = q; p = p_next; q = q_next;
    double err = std::fabs(alpha - double(p) / double(q));
    if (err < 1e-9 / (double(q) * double(q))) return true;
    x = inv - a_f;
  }
  return false;
}

void SystemSpec::validate() const {
  bool torus = (family == Family::cat);
  if (torus != (space == Space::torus2))
    throw ConfigError("family/space mismatch: cat lives on torus2, all others on the circle");
  if (family == Family::rotation) {
    if (params.size() != 1 || !(params[0] > 0.0 && params[0] < 1.0))
      throw ConfigError("rotation needs alpha in (0,1)");
  } else if (family == Family::manneville_pomeau) {
    if (params.size() != 1 || !(params[0] > 0.0 && params[0] < 1.0))
      throw ConfigError("manneville_pomeau needs s in (0,1)");
  } else if (!params.empty()) {
    throw ConfigError("unexpected parameters for this family");
  }
  if (backend.kind == BackendKind::bitstream && family != Family::doubling)
    throw ConfigError("bitstream backend is valid only for the doubling map");
  if (backend.kind == BackendKind::fixed_point) {
    if (backend.bit_budget < 64) throw ConfigError("fixed_point bit budget must be >= 64");
    if (family == Family::manneville_pomeau)
      throw ConfigError("fixed_point backend needs an exactly representable map");
  }
  if (measure == MeasureKind::lebesgue_exact && family == Family::manneville_pomeau)
    throw ConfigError("manneville_pomeau invariant measure is not Lebesgue; use orbit_empirical");
}

SystemSpec SystemSpec::make(Family f, std::vector<double> params, Backend b,
                            std::optional<MeasureKind> m) {
  SystemSpec s;
  s.family = f;
  s.space = (f == Family::cat) ? Space::torus2 : Space::circle;
  s.params = std::move(params);
  s.backend = b;
  s.measure = m.value_or(f == Family::manneville_pomeau ? MeasureKind::orbit_empirical
                                                        : MeasureKind::lebesgue_exact);
  s.validate();
  return s;
}

std::string SystemSpec::to_string() const {
  std::string s = family_name(family);
  char buf[64];
  if (family == Family::rotation) {
    std::snprintf(buf, sizeof buf, ":alpha=%.17g", params[0]);
    s += buf;
  } else if (family == Family::manneville_pomeau) {
    std::snprintf(buf, sizeof buf, ":s=%.17g", params[0]);
    s += buf;
  }
  return s;
}

Backend parse_backend(const std::string& s) {
  Backend b;
  if (s.empty() || s == "float64") {
    b.kind = BackendKind::float64;
  } else if (s == "bitstream") {
    b.kind = BackendKind::bitstream;
  } else if (s.rfind("fixed:", 0) == 0) {
    b.kind = BackendKind::fixed_point;
    try {
      b.bit_budget = std::stoi(s.substr(6));
    } catch (...) {
      throw ConfigError("bad fixed-point budget in backend spec '" + s + "'");
    }
  } else {
    throw ConfigError("unknown backend '" + s + "' (float64 | fixed:BITS | bitstream)");
  }
  return b;
}

SystemSpec parse_system(const std::string& system, const std::string& backend) {
  std::string name = system, args;
  if (auto pos = system.find(':'); pos != std::string::npos) {
    name = system.substr(0, pos);
    args = system.substr(pos + 1);
  }
  auto parse_value = [&](const std::string& key) -> double {
    if (args.rfind(key + "=", 0) != 0)
      throw ConfigError("expected " + key + "=VALUE in system spec '" + system + "'");
    std::string v = args.substr(key.size() + 1);
    if (v == "golden") return golden_angle();
    if (v == "liouville6") return liouville6_angle();
    try {
      return std::stod(v);
    } catch (...) {
      throw ConfigError("bad numeric value in system spec '" + system + "'");
    }
  };
  Backend b = parse_backend(backend);
  if (name == "doubling") return SystemSpec::make(Family::doubling, {}, b);
  if (name == "tent") return SystemSpec::make(Family::tent, {}, b);
  if (name == "cat") return SystemSpec::make(Family::cat, {}, b);
  if (name == "rotation") return SystemSpec::make(Family::rotation, {parse_value("alpha")}, b);
  if (name == "mp") return SystemSpec::make(Family::manneville_pomeau, {parse_value("s")}, b);
  throw ConfigError("unknown system family '" + name + "'");
}

static double circle_dist(double a, double b) {
  double d = std::fabs(a - b);
  return std::min(d, 1.0 - d);
}

double distance(Space space, const Point& a, const Point& b) {
  if (space == Space::circle) return circle_dist(a.c[0], b.c[0]);
  return std::max(circle_dist(a.c[0], b.c[0]), circle_dist(a.c[1], b.c[1]));
}

Point step(const SystemSpec& sys, const Point& x) {
  switch (sys.family) {
    case Family::doubling: {
      double v = 2.0 * x.c[0];
      return point1(v >= 1.0 ? v - 1.0 : v);
    }
    case Family::tent: {
      double v = (x.c[0] <= 0.5) ? 2.0 * x.c[0] : 2.0 - 2.0 * x.c[0];
      return point1(v >= 1.0 ? v - 1.0 : v);  // tent(1/2) = 1 == 0 mod 1
    }
    case Family::rotation: {
      double v = x.c[0] + sys.params[0];
      return point1(v >= 1.0 ? v - 1.0 : v);
    }
    case Family::cat: {
      double xx = 2.0 * x.c[0] + x.c[1];
      double yy = x.c[0] + x.c[1];
      return point2(xx - std::floor(xx), yy - std::floor(yy));
    }
    case Family::manneville_pomeau: {
      double s = sys.params[0];
      double u = x.c[0];
      double inc = (s == 0.5) ? u * std::sqrt(u) : std::pow(u, 1.0 + s);
      double v = u + inc;
      return point1(v >= 1.0 ? v - 1.0 : v);
    }
  }
  return x;
}

double map_lipschitz_constant(const SystemSpec& sys) {
  switch (sys.family) {
    case Family::doubling:
    case Family::tent: return 2.0;
    case Family::rotation: return 1.0;
    // sup-metric operator norm of [[2,1],[1,1]] is the max row sum
    case Family::cat: return 3.0;
    case Family::manneville_pomeau: return 2.0 + sys.params[0];
  }
  return 1.0;
}

// ---- Orbit ------------------------------------------------------------

Orbit::Orbit(const SystemSpec& sys, const Point& start)
    : sys_(sys), kind_(sys.backend.kind), start_(start), cur_(start) {
  sys_.validate();
  if (kind_ == BackendKind::bitstream)
    throw ConfigError("bitstream orbits start from a tape, not a point");
  if (kind_ == BackendKind::fixed_point) {
    int w = sys.backend.bit_budget;
    fx_ = FixedReal::from_double(start.c[0], w);
    if (sys.space == Space::torus2) fy_ = FixedReal::from_double(start.c[1], w);
    if (sys.family == Family::rotation) alpha_fixed_ = FixedReal::from_double(sys.params[0], w);
    per_step_cost_ = (sys.family == Family::doubling || sys.family == Family::tent) ? 1
                     : (sys.family == Family::cat)                                  ? 2
                                                                                    : 0;
    refresh_from_fixed();
    start_ = cur_;
  }
}

Orbit::Orbit(const SystemSpec& sys, const BitTape& tape)
    : sys_(sys), kind_(BackendKind::bitstream), tape_(tape) {
  sys_.validate();
  if (sys.backend.kind != BackendKind::bitstream || sys.family != Family::doubling)
    throw ConfigError("tape orbits require the doubling map with the bitstream backend");
  window_ = 0;
  for (int b = 1; b <= 64; ++b) window_ = (window_ << 1) | std::uint64_t(tape_->bit(b));
  refresh_from_window();
  start_ = cur_;
}

Orbit Orbit::fixed_from_tape(const SystemSpec& sys, const BitTape& tape, int width_bits) {
  SystemSpec fixed_sys = sys;
  fixed_sys.backend = {BackendKind::fixed_point, width_bits};
  Orbit o(fixed_sys, point1(0.0));
  o.fx_ = FixedReal::from_tape(tape, width_bits);
  o.refresh_from_fixed();
  o.start_ = o.cur_;
  return o;
}

void Orbit::refresh_from_fixed() {
  cur_.c[0] = fx_->to_double();
  if (fy_) {
    cur_.c[1] = fy_->to_double();
    cur_.dim = 2;
  }
}

void Orbit::refresh_from_window() {
  cur_ = point1(double(window_ >> 11) * 0x1.0p-53);
}

void Orbit::advance() {
  switch (kind_) {
    case BackendKind::float64:
      cur_ = step(sys_, cur_);
      break;
    case BackendKind::fixed_point: {
      int budget = sys_.backend.bit_budget;
      if (budget - (consumed_ + per_step_cost_) < 10) throw PrecisionExhausted(index_ + 1);
      switch (sys_.family) {
        case Family::doubling:
          fx_->shl1_mod1();
          break;
        case Family::tent:
          if (!fx_->le_half()) fx_->complement_mod1();
          fx_->shl1_mod1();
          break;
        case Family::rotation:
          fx_->add_mod1(*alpha_fixed_);
          break;
        case Family::cat: {
          FixedReal old_x = *fx_;
          fx_->shl1_mod1();
          fx_->add_mod1(*fy_);
          fy_->add_mod1(old_x);
          break;
        }
        default: throw ConfigError("unsupported family for fixed_point backend");
      }
      consumed_ += per_step_cost_;
      refresh_from_fixed();
      break;
    }
    case BackendKind::bitstream:
      ++tape_pos_;
      window_ = (window_ << 1) | std::uint64_t(tape_->bit(tape_pos_ + 64));
      refresh_from_window();
      break;
  }
  ++index_;
}

bool Orbit::in_ball(const Point& x0, double r) const {
  if (kind_ == BackendKind::fixed_point) {
    int w = fx_->width();
    FixedReal rr = FixedReal::from_double(r, w);
    FixedReal cx = FixedReal::from_double(x0.c[0], w);
    bool in_x = FixedReal::circle_dist_lt(*fx_, cx, rr);
    if (!fy_) return in_x;
    FixedReal cy = FixedReal::from_double(x0.c[1], w);
    return in_x && FixedReal::circle_dist_lt(*fy_, cy, rr);
  }
  return distance(sys_.space, cur_, x0) < r;
}

// ---- grid index --------------------------------------------------------

static int cell_of(double x, int cells) {
  int c = int(x * cells);
  if (c >= cells) c = cells - 1;
  if (c < 0) c = 0;
  return c;
}

GridIndex::GridIndex(Space space, const std::vector<Point>& pts, int cells_per_axis)
    : space_(space), cells_(cells_per_axis) {
  std::size_t ncell = (space == Space::circle) ? std::size_t(cells_)
                                               : std::size_t(cells_) * std::size_t(cells_);
  std::vector<std::uint32_t> count(ncell, 0);
  auto cell_id = [&](const Point& p) -> std::size_t {
    if (space_ == Space::circle) return std::size_t(cell_of(p.c[0], cells_));
    return std::size_t(cell_of(p.c[0], cells_)) * cells_ + cell_of(p.c[1], cells_);
  };
  for (const auto& p : pts) count[cell_id(p)]++;
  cell_start_.assign(ncell + 1, 0);
  for (std::size_t i = 0; i < ncell; ++i) cell_start_[i + 1] = cell_start_[i] + count[i];
  order_.resize(pts.size());
  std::vector<std::uint32_t> fill(cell_start_.begin(), cell_start_.end() - 1);
  for (std::size_t i = 0; i < pts.size(); ++i) order_[fill[cell_id(pts[i])]++] = std::uint32_t(i);
}

long long GridIndex::ball_count(const std::vector<Point>& pts, const Point& x0, double r) const {
  const double C = double(cells_);
  // cells within one cell width of the boundary are scanned point by point,
  // so the count matches a linear scan bit for bit
  auto axis_range = [&](double center, long long& k_lo, long long& k_hi) {
    k_lo = (long long)std::floor((center - r) * C);
    k_hi = (long long)std::floor((center + r) * C);
  };
  auto axis_interior = [&](double center, long long k) {
    double kd = double(k);
    return kd >= (center - r) * C + 1.0 && kd + 1.0 <= (center + r) * C - 1.0;
  };

  if (space_ == Space::circle) {
    long long k_lo, k_hi;
    axis_range(x0.c[0], k_lo, k_hi);
    if (k_hi - k_lo + 4 >= cells_) {  // ball covers most of the circle: scan all
      long long n = 0;
      for (const auto& p : pts) n += (distance(space_, p, x0) < r);
      return n;
    }
    long long n = 0;
    for (long long k = k_lo; k <= k_hi; ++k) {
      std::size_t cell = std::size_t(((k % cells_) + cells_) % cells_);
      if (axis_interior(x0.c[0], k)) {
        n += cell_start_[cell + 1] - cell_start_[cell];
      } else {
        for (std::uint32_t idx = cell_start_[cell]; idx < cell_start_[cell + 1]; ++idx)
          n += (distance(space_, pts[order_[idx]], x0) < r);
      }
    }
    return n;
  }

  long long kx_lo, kx_hi, ky_lo, ky_hi;
  axis_range(x0.c[0], kx_lo, kx_hi);
  axis_range(x0.c[1], ky_lo, ky_hi);
  if (kx_hi - kx_lo + 4 >= cells_ || ky_hi - ky_lo + 4 >= cells_) {
    long long n = 0;
    for (const auto& p : pts) n += (distance(space_, p, x0) < r);
    return n;
  }
  long long n = 0;
  for (long long kx = kx_lo; kx <= kx_hi; ++kx) {
    std::size_t cx = std::size_t(((kx % cells_) + cells_) % cells_);
    bool ix = axis_interior(x0.c[0], kx);
    for (long long ky = ky_lo; ky <= ky_hi; ++ky) {
      std::size_t cy = std::size_t(((ky % cells_) + cells_) % cells_);
      std::size_t cell = cx * cells_ + cy;
      if (ix && axis_interior(x0.c[1], ky)) {
        n += cell_start_[cell + 1] - cell_start_[cell];
      } else {
        for (std::uint32_t idx = cell_start_[cell]; idx < cell_start_[cell + 1]; ++idx)
          n += (distance(space_, pts[order_[idx]], x0) < r);
      }
    }
  }
  return n;
}

// ---- empirical measure ---------------------------------------------------

static int default_cells(Space space, std::size_t M) {
  if (space == Space::circle) return M >= 100000 ? 2048 : 256;
  return M >= 100000 ? 256 : 64;
}

EmpiricalMeasure::EmpiricalMeasure(SystemSpec sys, std::vector<Point> pts, GenerationSpec gen,
                                   int cells_per_axis)
    : sys_(std::move(sys)), pts_(std::move(pts)), gen_(gen) {
  if (pts_.empty()) throw InsufficientSample("empirical measure needs M >= 1 points");
  int cells = cells_per_axis > 0 ? cells_per_axis : default_cells(sys_.space, pts_.size());
  index_ = GridIndex(sys_.space, pts_, cells);
}

long long EmpiricalMeasure::ball_count(const Point& x0, double r) const {
  return index_.ball_count(pts_, x0, r);
}

long long EmpiricalMeasure::ball_count_scan(const Point& x0, double r) const {
  long long n = 0;
  for (const auto& p : pts_) n += (distance(sys_.space, p, x0) < r);
  return n;
}

double EmpiricalMeasure::ball_fraction(const Point& x0, double r) const {
  return double(ball_count(x0, r)) / double(pts_.size());
}

Orbit EmpiricalMeasure::orbit_of(std::size_t i) const {
  if (sys_.backend.kind == BackendKind::bitstream &&
      gen_.kind == GenerationSpec::Kind::iid_lebesgue) {
    return Orbit(sys_, BitTape(mix64(gen_.seed, i)));
  }
  return Orbit(sys_, pts_[i]);
}

Point random_point(const SystemSpec& sys, Rng& rng) {
  if (sys.space == Space::circle) return point1(rng.next_unit());
  return point2(rng.next_unit(), rng.next_unit());
}

EmpiricalMeasure sample_measure(const SystemSpec& sys, long long M, const GenerationSpec& gen,
                                int jobs, int cells_per_axis) {
  sys.validate();
  if (M < 1) throw InsufficientSample("sample size must be >= 1");
  if (sys.measure == MeasureKind::orbit_empirical &&
      gen.kind != GenerationSpec::Kind::orbit_sample)
    throw ConfigError("this system has no exact sampler; use orbit_sample");

  std::vector<Point> pts;
  pts.resize(std::size_t(M));
  if (gen.kind == GenerationSpec::Kind::iid_lebesgue) {
    parallel_for(std::size_t(M), jobs, [&](std::size_t i) {
      if (sys.backend.kind == BackendKind::bitstream) {
        pts[i] = point1(BitTape(mix64(gen.seed, i)).value_at(0));
      } else {
        Rng rng(mix64(gen.seed, i));
        pts[i] = random_point(sys, rng);
      }
    });
  } else {
    Rng rng(gen.seed);
    Point start = random_point(sys, rng);
    long long stride = std::max<long long>(1, gen.stride);
    if (sys.backend.kind == BackendKind::bitstream) {
      Orbit o(sys, BitTape(rng.next_u64()));
      for (long long i = 0; i < gen.burn_in; ++i) o.advance();
      for (long long i = 0; i < M; ++i) {
        for (long long s = 0; s < stride; ++s) o.advance();
        pts[std::size_t(i)] = o.current();
      }
    } else {
      Orbit o(sys, start);
      for (long long i = 0; i < gen.burn_in; ++i) o.advance();
      for (long long i = 0; i < M; ++i) {
        for (long long s = 0; s < stride; ++s) o.advance();
        pts[std::size_t(i)] = o.current();
      }
    }
  }
  return EmpiricalMeasure(sys, std::move(pts), gen, cells_per_axis);
}

Orbit trial_orbit(const SystemSpec& sys, std::uint64_t trial_seed) {
  switch (sys.backend.kind) {
    case BackendKind::bitstream: return Orbit(sys, BitTape(trial_seed));
    case BackendKind::fixed_point:
      return Orbit::fixed_from_tape(sys, BitTape(trial_seed), sys.backend.bit_budget);
    default: {
      Rng rng(trial_seed);
      return Orbit(sys, random_point(sys, rng));
    }
  }
}


}  // namespace hittingdim
