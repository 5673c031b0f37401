#include "hittingdim/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "hittingdim/fitting.hpp"
#include "hittingdim/parallel.hpp"

namespace hittingdim {

Observable Observable::bump(const Point& x0, double r_in, double r_out) {
  if (!(0.0 < r_in && r_in < r_out && r_out < 0.5))
    throw std::invalid_argument("bump needs 0 < r_in < r_out < 1/2");
  Observable o;
  o.kind = Kind::bump;
  o.x0 = x0;
  o.r_in = r_in;
  o.r_out = r_out;
  return o;
}

Observable Observable::constant(double v) {
  Observable o;
  o.kind = Kind::constant;
  o.value = v;
  return o;
}

Observable Observable::scaled(double factor) const {
  Observable o = *this;
  o.scale *= factor;
  return o;
}

std::string Observable::to_string() const {
  char buf[128];
  if (kind == Kind::constant) {
    std::snprintf(buf, sizeof buf, "constant:%.17g", value * scale);
  } else {
    std::snprintf(buf, sizeof buf, "bump:x0=%s,rin=%.17g,rout=%.17g", format_point(x0).c_str(),
                  r_in, r_out);
  }
  return buf;
}

double eval_observable(const Observable& obs, Space space, const Point& x) {
  if (obs.kind == Observable::Kind::constant) return obs.scale * obs.value;
  double d = distance(space, obs.x0, x);
  if (d <= obs.r_in) return obs.scale;
  if (d >= obs.r_out) return 0.0;
  return obs.scale * (obs.r_out - d) / (obs.r_out - obs.r_in);
}

double lipschitz_norm(const Observable& obs) {
  double s = std::fabs(obs.scale);
  if (obs.kind == Observable::Kind::constant) return s * std::fabs(obs.value);
  return s * std::max(1.0, 1.0 / (obs.r_out - obs.r_in));
}

std::vector<long long> default_lags(long long max_lag) {
  std::vector<long long> lags;
  for (long long n = 1; n <= std::min<long long>(50, max_lag); ++n) lags.push_back(n);
  long long n = 50;
  while (n < max_lag) {
    n = std::max(n + 1, (long long)std::llround(double(n) * 1.25));
    lags.push_back(std::min(n, max_lag));
  }
  lags.erase(std::unique(lags.begin(), lags.end()), lags.end());
  return lags;
}

namespace {

constexpr std::size_t kChunk = 4096;

// one orbit sweep over a block of sample points, calling sink(lag_idx, i, a)
// with a = phi(T^n x_i) at every requested lag
template <typename Sink>
void sweep_block(const EmpiricalMeasure& sample, const Observable& phi,
                 const std::vector<long long>& lags, std::size_t begin, std::size_t end,
                 Sink&& sink) {
  Space space = sample.system().space;
  long long max_lag = lags.back();
  for (std::size_t i = begin; i < end; ++i) {
    Orbit orbit = sample.orbit_of(i);
    std::size_t li = 0;
    for (long long n = 1; n <= max_lag; ++n) {
      orbit.advance();
      if (n == lags[li]) {
        sink(li, i, eval_observable(phi, space, orbit.current()));
        if (++li == lags.size()) break;
      }
    }
  }
}

}  // namespace

CorrelationSeries correlation_series(const Observable& phi, const Observable& psi,
                                     const std::vector<long long>& lags,
                                     const EmpiricalMeasure& sample, int jobs) {
  if (lags.empty() || lags.front() < 1 || !std::is_sorted(lags.begin(), lags.end()) ||
      std::adjacent_find(lags.begin(), lags.end()) != lags.end())
    throw std::invalid_argument("lags must be strictly increasing and >= 1");

  const std::size_t M = sample.size();
  const std::size_t L = lags.size();
  const std::size_t nchunks = (M + kChunk - 1) / kChunk;
  Space space = sample.system().space;

  // pass 1: per-lag means of the pushed phi, and the psi mean
  std::vector<double> sum_a(nchunks * L, 0.0), sum_b(nchunks, 0.0);
  parallel_for(nchunks, jobs, [&](std::size_t c) {
    std::size_t begin = c * kChunk, end = std::min(M, begin + kChunk);
    double* sa = &sum_a[c * L];
    sweep_block(sample, phi, lags, begin, end, [&](std::size_t li, std::size_t, double a) {
      sa[li] += a;
    });
    double sb = 0.0;
    for (std::size_t i = begin; i < end; ++i)
      sb += eval_observable(psi, space, sample.points()[i]);
    sum_b[c] = sb;
  });
  std::vector<double> abar(L, 0.0);
  double bbar = 0.0;
  for (std::size_t c = 0; c < nchunks; ++c) {  // serial reduce: same result any thread count
    for (std::size_t li = 0; li < L; ++li) abar[li] += sum_a[c * L + li];
    bbar += sum_b[c];
  }
  for (auto& v : abar) v /= double(M);
  bbar /= double(M);

  // pass 2: centered products, so a constant psi yields exactly zero
  std::vector<double> sum_u(nchunks * L, 0.0), sum_u2(nchunks * L, 0.0);
  parallel_for(nchunks, jobs, [&](std::size_t c) {
    std::size_t begin = c * kChunk, end = std::min(M, begin + kChunk);
    double* su = &sum_u[c * L];
    double* su2 = &sum_u2[c * L];
    std::vector<double> db(end - begin);
    for (std::size_t i = begin; i < end; ++i)
      db[i - begin] = eval_observable(psi, space, sample.points()[i]) - bbar;
    sweep_block(sample, phi, lags, begin, end, [&](std::size_t li, std::size_t i, double a) {
      double u = (a - abar[li]) * db[i - begin];
      su[li] += u;
      su2[li] += u * u;
    });
  });

  CorrelationSeries out;
  out.entries.resize(L);
  for (std::size_t li = 0; li < L; ++li) {
    double su = 0.0, su2 = 0.0;
    for (std::size_t c = 0; c < nchunks; ++c) {
      su += sum_u[c * L + li];
      su2 += sum_u2[c * L + li];
    }
    double c_hat = su / double(M);
    double var_u = su2 / double(M) - c_hat * c_hat;
    if (var_u < 0.0) var_u = 0.0;
    out.entries[li] = {lags[li], c_hat, std::sqrt(var_u / double(M)), false};
  }
  return out;
}

std::pair<double, double> correlation_at(const Observable& phi, const Observable& psi,
                                         long long n, const EmpiricalMeasure& sample, int jobs) {
  auto series = correlation_series(phi, psi, {n}, sample, jobs);
  return {series.entries[0].c_hat, series.entries[0].se};
}

double DecayModel::eval(double n) const {
  switch (cls) {
    case Class::exponential: return C * std::exp(-param * n);
    case Class::polynomial: return C * std::pow(n, -param);
    case Class::none: return C;
    case Class::undetermined: throw UndeterminedDecay("decay model is undetermined");
  }
  return C;
}

double DecayModel::quality() const {
  return cls == Class::polynomial ? quality_poly : quality_exp;
}

const char* DecayModel::class_name() const {
  switch (cls) {
    case Class::exponential: return "exponential";
    case Class::polynomial: return "polynomial";
    case Class::none: return "none";
    case Class::undetermined: return "undetermined";
  }
  return "?";
}

std::string DecayModel::to_string() const {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%s:param=%.17g,C=%.17g", class_name(), param, C);
  return buf;
}

DecayModel decay_fit(CorrelationSeries& series, std::size_t min_above_noise) {
  std::vector<double> ns, cs;
  for (auto& e : series.entries) {
    e.used_in_fit = (e.c_hat > 3.0 * e.se);
    if (e.used_in_fit) {
      ns.push_back(double(e.n));
      cs.push_back(e.c_hat);
    }
  }
  if (ns.size() < min_above_noise || ns.size() < 3)
    throw InsufficientSignal("only " + std::to_string(ns.size()) +
                             " lags above the noise floor (c_hat > 3 se), need " +
                             std::to_string(std::max<std::size_t>(min_above_noise, 3)));

  DecayModel model;

  // no significant decrease across the above-noise range -> no decay
  std::size_t q = std::max<std::size_t>(1, ns.size() / 4);
  std::vector<double> head(cs.begin(), cs.begin() + q);
  std::vector<double> tail(cs.end() - q, cs.end());
  if (median(tail) > 0.5 * median(head)) {
    model.cls = DecayModel::Class::none;
    model.C = median(cs);
    model.param = 0.0;
    return model;
  }

  std::vector<double> log_c(cs.size()), log_n(ns.size());
  for (std::size_t i = 0; i < cs.size(); ++i) {
    log_c[i] = std::log(cs[i]);
    log_n[i] = std::log(ns[i]);
  }
  LinearFit fe = least_squares(ns, log_c);      // log c = log C - rate * n
  LinearFit fp = least_squares(log_n, log_c);   // log c = log C - p * log n
  model.quality_exp = fe.slope < 0.0 ? fe.r2 : 0.0;
  model.quality_poly = fp.slope < 0.0 ? fp.r2 : 0.0;

  // margin rule on the residual misfit 1 - r^2: the loser must leave at
  // least 10% more variance unexplained, and the winner must be a real fit
  double me = 1.0 - model.quality_exp, mp = 1.0 - model.quality_poly;
  if (model.quality_exp >= 0.5 && mp > 1.1 * me) {
    model.cls = DecayModel::Class::exponential;
    model.param = -fe.slope;
    model.C = std::exp(fe.intercept);
  } else if (model.quality_poly >= 0.5 && me > 1.1 * mp) {
    model.cls = DecayModel::Class::polynomial;
    model.param = -fp.slope;
    model.C = std::exp(fp.intercept);
  } else {
    model.cls = DecayModel::Class::undetermined;
  }
  return model;
}

DecayModel normalized_decay_model(const CorrelationSeries& series, const DecayModel& fit,
                                  const Observable& phi, const Observable& psi) {
  if (fit.cls == DecayModel::Class::undetermined)
    throw UndeterminedDecay("cannot normalize an undetermined model");
  double norm = lipschitz_norm(phi) * lipschitz_norm(psi);
  DecayModel m = fit;
  m.C = fit.C / norm;
  // inflate to an envelope: c_hat(n) <= norm * Phi(n) on every fitted entry
  double factor = 1.0;
  for (const auto& e : series.entries) {
    if (!e.used_in_fit) continue;
    double bound = norm * m.eval(double(e.n));
    if (bound > 0.0 && e.c_hat > bound) factor = std::max(factor, e.c_hat / bound);
  }
  m.C *= factor;
  return m;
}

}  // namespace hittingdim
