#include "hittingdim/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "hittingdim/csvio.hpp"
#include "hittingdim/fitting.hpp"
#include "hittingdim/parallel.hpp"
#include "hittingdim/sbc.hpp"
#include "hittingdim/verify.hpp"

namespace hittingdim {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  parts.push_back(cur);
  return parts;
}

std::map<std::string, std::string> parse_kv_list(const std::string& s) {
  std::map<std::string, std::string> kv;
  if (trim(s).empty()) return kv;
  for (const auto& part : split(s, ',')) {
    auto eq = part.find('=');
    if (eq == std::string::npos) throw ConfigError("expected key=value in '" + part + "'");
    kv[trim(part.substr(0, eq))] = trim(part.substr(eq + 1));
  }
  return kv;
}

double num_of(const std::map<std::string, std::string>& kv, const std::string& key) {
  auto it = kv.find(key);
  if (it == kv.end()) throw ConfigError("missing '" + key + "'");
  try {
    return std::stod(it->second);
  } catch (...) {
    throw ConfigError("bad number for '" + key + "': " + it->second);
  }
}

long long int_of(const std::map<std::string, std::string>& kv, const std::string& key) {
  return (long long)std::llround(num_of(kv, key));
}

}  // namespace

std::string ExperimentConfig::get(const std::string& key, const std::string& fallback) const {
  auto it = kv.find(key);
  return it == kv.end() ? fallback : it->second;
}

double ExperimentConfig::get_num(const std::string& key, double fallback) const {
  auto it = kv.find(key);
  if (it == kv.end()) return fallback;
  try {
    return std::stod(it->second);
  } catch (...) {
    throw ConfigError("bad number for key '" + key + "': " + it->second);
  }
}

long long ExperimentConfig::get_int(const std::string& key, long long fallback) const {
  return (long long)std::llround(get_num(key, double(fallback)));
}

bool ExperimentConfig::get_bool(const std::string& key, bool fallback) const {
  auto it = kv.find(key);
  if (it == kv.end()) return fallback;
  const std::string& v = it->second;
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("bad boolean for key '" + key + "': " + v);
}

void ExperimentConfig::set_default(const std::string& key, const std::string& value) {
  kv.emplace(key, value);
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  ExperimentConfig cfg;
  std::string line;
  while (std::getline(in, line)) {
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto eq = t.find('=');
    if (eq == std::string::npos) throw ConfigError("bad config line: " + line);
    cfg.kv[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
  }
  return cfg;
}

void ExperimentConfig::apply_override(const std::string& assignment) {
  auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("--set expects key=value, got " + assignment);
  kv[trim(assignment.substr(0, eq))] = trim(assignment.substr(eq + 1));
}

std::string ExperimentConfig::manifest_text() const {
  std::ostringstream os;
  os << "# resolved run configuration; rerunning from this file reproduces all outputs\n";
  for (const auto& [k, v] : kv) os << k << " = " << v << "\n";
  return os.str();
}

namespace {

RadiusLadder parse_ladder(const std::string& s) {
  auto colon = s.find(':');
  if (colon == std::string::npos) throw ConfigError("ladder spec needs pow:... or geom:...");
  std::string kind = s.substr(0, colon);
  auto kv = parse_kv_list(s.substr(colon + 1));
  if (kind == "pow")
    return RadiusLadder::power(num_of(kv, "beta"), int_of(kv, "kmin"), int_of(kv, "kmax"));
  if (kind == "geom")
    return RadiusLadder::geometric(num_of(kv, "r0"), num_of(kv, "lambda"), int_of(kv, "kmin"),
                                   int_of(kv, "kmax"));
  throw ConfigError("unknown ladder kind '" + kind + "'");
}

Point parse_x0(const std::string& s, const SystemSpec& sys, std::uint64_t seed) {
  if (s == "random") {
    Rng rng(mix64(seed, 0xa11ce));
    return random_point(sys, rng);
  }
  auto parts = split(s, '|');
  try {
    if (sys.space == Space::circle) {
      if (parts.size() != 1) throw ConfigError("");
      return point1(std::stod(parts[0]));
    }
    if (parts.size() != 2) throw ConfigError("");
    return point2(std::stod(parts[0]), std::stod(parts[1]));
  } catch (...) {
    throw ConfigError("bad x0 spec '" + s + "' (number, a|b, or random)");
  }
}

Observable parse_observable(const std::string& s, const SystemSpec& sys, std::uint64_t seed) {
  if (s.rfind("constant:", 0) == 0) return Observable::constant(std::stod(s.substr(9)));
  if (s.rfind("bump:", 0) == 0) {
    auto kv = parse_kv_list(s.substr(5));
    auto it = kv.find("x0");
    if (it == kv.end()) throw ConfigError("bump needs x0=");
    Point x0 = parse_x0(it->second, sys, seed);
    return Observable::bump(x0, num_of(kv, "rin"), num_of(kv, "rout"));
  }
  throw ConfigError("observable spec needs bump:... or constant:V, got '" + s + "'");
}

DecayModel parse_phi_model(const std::string& s) {
  auto colon = s.find(':');
  if (colon == std::string::npos) throw ConfigError("phi_model needs exp:/poly:/none:");
  std::string kind = s.substr(0, colon);
  auto kv = parse_kv_list(s.substr(colon + 1));
  DecayModel m;
  m.C = kv.count("C") ? num_of(kv, "C") : 1.0;
  if (kind == "exp") {
    m.cls = DecayModel::Class::exponential;
    m.param = num_of(kv, "rho");
  } else if (kind == "poly") {
    m.cls = DecayModel::Class::polynomial;
    m.param = num_of(kv, "p");
  } else if (kind == "none") {
    m.cls = DecayModel::Class::none;
    m.param = 0.0;
  } else {
    throw ConfigError("unknown phi_model kind '" + kind + "'");
  }
  return m;
}

std::vector<long long> parse_checkpoints(const std::string& s, long long N_max) {
  if (s.empty() || s == "pow10") return default_checkpoints(N_max);
  std::vector<long long> cps;
  for (const auto& p : split(s, ',')) cps.push_back((long long)std::llround(std::stod(p)));
  return cps;
}

struct RunContext {
  std::filesystem::path dir;
  bool quiet = false;
  std::ofstream report;

  void note(const std::string& line) {
    report << line << "\n";
    if (!quiet) std::cout << line << "\n";
  }
};

// backend default: doubling orbits longer than ~1000 steps need the tape
// (a float64 doubling orbit is exact dyadic arithmetic and hits 0 after at
// most ~1075 steps), everything else runs float64
std::string default_backend(const std::string& system) {
  return system.rfind("doubling", 0) == 0 ? "bitstream" : "float64";
}

int run_hit(ExperimentConfig& cfg, RunContext& ctx, bool recurrence) {
  SystemSpec sys = parse_system(cfg.get("system"), cfg.get("backend"));
  std::uint64_t seed = std::uint64_t(cfg.get_int("seed", 20260808));
  if (sys.family == Family::rotation && !cfg.get_bool("allow_rational", false) &&
      rotation_angle_is_rational(sys.map_param()))
    throw ConfigError("rotation angle is rational (non-ergodic); set allow_rational=true");
  RadiusLadder ladder = parse_ladder(cfg.get("ladder"));
  Point x0 = parse_x0(cfg.get("x0"), sys, seed);
  long long trials = cfg.get_int("trials", 100);
  long long n_max = cfg.get_int("n_max", 10000000);
  int tail = int(cfg.get_int("tail_window", 0));
  int jobs = int(cfg.get_int("jobs", 0));

  struct TrialOut {
    std::uint64_t seed = 0;
    ScalingEstimate est;
    std::vector<HittingRecord> records;
    Point x0_used;
  };
  std::vector<TrialOut> outs;
  outs.resize(std::size_t(trials));
  parallel_for(std::size_t(trials), jobs, [&](std::size_t t) {
    std::uint64_t ts = mix64(seed, t);
    outs[t].seed = ts;
    Orbit orbit = trial_orbit(sys, ts);
    if (recurrence) {
      outs[t].x0_used = orbit.start();
      outs[t].est = recurrence_indicator(std::move(orbit), ladder, n_max, tail, &outs[t].records);
    } else {
      outs[t].x0_used = x0;
      outs[t].est = hitting_indicator(std::move(orbit), x0, ladder, n_max, tail, &outs[t].records);
    }
  });

  CsvWriter trials_csv((ctx.dir / "trials.csv").string(), "trial,seed,system,x0,k,r,tau,censored");
  CsvWriter summary_csv((ctx.dir / "summary.csv").string(),
                        "trial,slope_ls,slope_upper,slope_lower,infinite");
  std::vector<double> ls, up, lo;
  long long infinite_count = 0;
  for (std::size_t t = 0; t < outs.size(); ++t) {
    const auto& o = outs[t];
    auto ks = ladder.ks();
    for (std::size_t i = 0; i < o.records.size(); ++i) {
      const auto& rec = o.records[i];
      trials_csv.fields((long long)t, std::to_string(o.seed), sys.to_string(),
                        format_point(o.x0_used), ks[i], rec.radius,
                        rec.censored ? 0ll : rec.tau, rec.censored);
    }
    summary_csv.fields((long long)t, o.est.slope_ls, o.est.slope_upper, o.est.slope_lower,
                       o.est.infinite);
    if (o.est.infinite) {
      ++infinite_count;
    } else {
      ls.push_back(o.est.slope_ls);
      up.push_back(o.est.slope_upper);
      lo.push_back(o.est.slope_lower);
    }
  }

  ctx.note(std::string(recurrence ? "recurrence" : "hitting") + " experiment on " +
           sys.to_string());
  ctx.note("ladder " + ladder.to_string());
  ctx.note("trials = " + std::to_string(trials) +
           ", censored(all-slope) trials = " + std::to_string(infinite_count));
  if (!ls.empty()) {
    ctx.note("median slope_ls = " + csv_num(median(ls)));
    ctx.note("median slope_upper = " + csv_num(median(up)));
    ctx.note("median slope_lower = " + csv_num(median(lo)));
  }
  if (sys.measure == MeasureKind::lebesgue_exact) {
    auto dim = local_dimension(LebesgueExact{sys.space}, x0, ladder, tail);
    ctx.note("dimension slope (exact mode) = " + csv_num(dim.slope_ls));
  }
  if (ls.empty()) {
    ctx.note("degenerate: every trial censored");
    return 3;
  }
  return 0;
}

int run_dim(ExperimentConfig& cfg, RunContext& ctx) {
  SystemSpec sys = parse_system(cfg.get("system"), cfg.get("backend"));
  std::uint64_t seed = std::uint64_t(cfg.get_int("seed", 20260808));
  RadiusLadder ladder = parse_ladder(cfg.get("ladder"));
  Point x0 = parse_x0(cfg.get("x0"), sys, seed);
  int tail = int(cfg.get_int("tail_window", 0));
  long long floor_count = cfg.get_int("count_floor", 100);
  int jobs = int(cfg.get_int("jobs", 0));

  std::optional<EmpiricalMeasure> sample;
  MeasureRef mu = LebesgueExact{sys.space};
  const char* mode = "exact";
  if (sys.measure == MeasureKind::orbit_empirical) {
    GenerationSpec gen{GenerationSpec::Kind::orbit_sample, seed, cfg.get_int("burn_in", 10000),
                       cfg.get_int("stride", 4)};
    sample.emplace(sample_measure(sys, cfg.get_int("M", 1000000), gen, jobs));
    mu = &*sample;
    mode = "empirical";
  }

  auto est = local_dimension(mu, x0, ladder, tail, floor_count);

  CsvWriter balls_csv((ctx.dir / "balls.csv").string(), "x0,k,r,mu_ball,mode");
  auto ks = ladder.ks();
  std::size_t pi = 0;
  for (long long k : ks) {
    double r = ladder.radius(k);
    bool excluded = std::find(est.excluded_ks.begin(), est.excluded_ks.end(), k) !=
                    est.excluded_ks.end();
    double mu_ball = excluded ? std::get<const EmpiricalMeasure*>(mu)->ball_fraction(x0, r)
                              : std::exp(est.points[pi++].second);
    balls_csv.fields(format_point(x0), k, r, mu_ball, excluded ? "excluded" : mode);
  }
  CsvWriter summary_csv((ctx.dir / "summary.csv").string(), "x0,d_ls,d_upper,d_lower");
  summary_csv.fields(format_point(x0), est.slope_ls, est.slope_upper, est.slope_lower);

  ctx.note("local dimension at x0 = " + format_point(x0) + " on " + sys.to_string());
  ctx.note(std::string("measure mode = ") + mode);
  ctx.note("d_ls = " + csv_num(est.slope_ls) + ", d_upper = " + csv_num(est.slope_upper) +
           ", d_lower = " + csv_num(est.slope_lower));
  if (!est.excluded_ks.empty())
    ctx.note("radii excluded by the count floor: " + std::to_string(est.excluded_ks.size()));
  return 0;
}

int run_sbc(ExperimentConfig& cfg, RunContext& ctx) {
  SystemSpec sys = parse_system(cfg.get("system"), cfg.get("backend"));
  std::uint64_t seed = std::uint64_t(cfg.get_int("seed", 20260808));
  if (sys.family == Family::rotation && !cfg.get_bool("allow_rational", false) &&
      rotation_angle_is_rational(sys.map_param()))
    throw ConfigError("rotation angle is rational (non-ergodic); set allow_rational=true");
  RadiusLadder ladder = parse_ladder(cfg.get("ladder"));
  Point x0 = parse_x0(cfg.get("x0"), sys, seed);
  TargetSequence targets = build_targets(x0, ladder);
  long long N_max = cfg.get_int("n_max", 100000);
  int trials = int(cfg.get_int("trials", 200));
  int jobs = int(cfg.get_int("jobs", 0));
  auto checkpoints = parse_checkpoints(cfg.get("checkpoints", "pow10"), N_max);
  MeasureRef mu = LebesgueExact{sys.space};
  std::optional<EmpiricalMeasure> sample;
  if (sys.measure == MeasureKind::orbit_empirical) {
    GenerationSpec gen{GenerationSpec::Kind::orbit_sample, seed, cfg.get_int("burn_in", 10000),
                       cfg.get_int("stride", 4)};
    sample.emplace(sample_measure(sys, cfg.get_int("M", 1000000), gen, jobs));
    mu = &*sample;
  }

  std::optional<VarianceBoundParams> bound;
  std::optional<CorollaryReport> report;
  if (cfg.has("phi_model")) {
    DecayModel phi = parse_phi_model(cfg.get("phi_model"));
    double alpha = cfg.get_num("alpha", 0.2);
    double epsilon = cfg.get_num("epsilon", 0.01);
    report = check_corollary(targets, mu, phi, alpha, epsilon);
    VarianceBoundParams bp;
    bp.phi = phi;
    bp.alpha = alpha;
    bp.c1 = cfg.has("c1") ? cfg.get_num("c1", 0.0) : report->c1;
    bp.c2 = cfg.has("c2") ? cfg.get_num("c2", 0.0) : report->c2;
    bound = bp;
  }

  auto res = sbc_ensemble(sys, targets, N_max, trials, seed, mu, checkpoints, bound, jobs);

  CsvWriter trials_csv((ctx.dir / "trials.csv").string(), "trial,seed,N,Z,EZ,ratio");
  for (std::size_t t = 0; t < res.trials.size(); ++t) {
    for (std::size_t ci = 0; ci < checkpoints.size(); ++ci) {
      trials_csv.fields((long long)t, std::to_string(mix64(seed, t)), checkpoints[ci],
                        res.trials[t].Z[ci], res.trials[t].EZ[ci], res.trials[t].ratio[ci]);
    }
  }
  CsvWriter var_csv((ctx.dir / "variance.csv").string(), "N,var_emp,bound,ratio");
  for (const auto& row : res.rows)
    var_csv.fields(row.N, row.var_emp, row.bound, row.bound_ratio);

  ctx.note("strong Borel-Cantelli ensemble on " + sys.to_string());
  ctx.note("targets at x0 = " + format_point(x0) + ", ladder " + ladder.to_string());
  for (const auto& row : res.rows)
    ctx.note("N = " + std::to_string(row.N) + ": mean ratio = " + csv_num(row.mean_ratio) +
             ", sd = " + csv_num(row.sd_ratio) +
             (bound ? ", var/bound = " + csv_num(row.bound_ratio) : std::string()));
  if (res.divergence_warning)
    ctx.note("warning: EZ(N_max) < 10, the ratio is statistically meaningless");
  if (report) {
    std::ofstream rep(ctx.dir / "corollary.txt");
    rep << report->to_text();
    ctx.note("corollary verdict = " + std::string(verdict_name(report->verdict)) +
             " (z = " + csv_num(report->z) + ", c = " + csv_num(report->c) + ")");
  }
  return 0;
}

int run_corr(ExperimentConfig& cfg, RunContext& ctx) {
  SystemSpec sys = parse_system(cfg.get("system"), cfg.get("backend"));
  std::uint64_t seed = std::uint64_t(cfg.get_int("seed", 20260808));
  if (sys.family == Family::rotation && !cfg.get_bool("allow_rational", false) &&
      rotation_angle_is_rational(sys.map_param()))
    throw ConfigError("rotation angle is rational (non-ergodic); set allow_rational=true");
  long long M = cfg.get_int("M", 1000000);
  int jobs = int(cfg.get_int("jobs", 0));
  Observable phi = parse_observable(cfg.get("phi"), sys, seed);
  Observable psi = cfg.get("psi", "same") == "same"
                       ? phi
                       : parse_observable(cfg.get("psi"), sys, seed);

  GenerationSpec gen;
  if (sys.measure == MeasureKind::orbit_empirical) {
    gen = {GenerationSpec::Kind::orbit_sample, seed, cfg.get_int("burn_in", 10000),
           cfg.get_int("stride", 16)};
  } else {
    gen = {GenerationSpec::Kind::iid_lebesgue, seed, 0, 1};
  }
  auto sample = sample_measure(sys, M, gen, jobs);
  auto lags = default_lags(cfg.get_int("max_lag", 1000));
  auto series = correlation_series(phi, psi, lags, sample, jobs);

  DecayModel fit;
  bool insufficient = false;
  std::string fit_error;
  try {
    fit = decay_fit(series, std::size_t(cfg.get_int("min_above_noise", 10)));
  } catch (const InsufficientSignal& e) {
    insufficient = true;
    fit_error = e.what();
  }

  CsvWriter series_csv((ctx.dir / "series.csv").string(), "n,c_hat,se,used_in_fit");
  for (const auto& e : series.entries) series_csv.fields(e.n, e.c_hat, e.se, e.used_in_fit);

  ctx.note("correlation decay on " + sys.to_string());
  ctx.note("phi = " + phi.to_string() + ", psi = " + psi.to_string());
  if (insufficient) {
    ctx.note("degenerate: " + fit_error);
    return 3;
  }
  DecayModel norm = fit.cls == DecayModel::Class::undetermined
                        ? fit
                        : normalized_decay_model(series, fit, phi, psi);
  CsvWriter model_csv((ctx.dir / "model.csv").string(), "class,param,C,quality");
  model_csv.fields(fit.class_name(), fit.param, fit.C, fit.quality());
  model_csv.fields(std::string("normalized_") + norm.class_name(), norm.param, norm.C,
                   norm.quality());
  ctx.note(std::string("decay class = ") + fit.class_name() + " (param = " + csv_num(fit.param) +
           ", C = " + csv_num(fit.C) + ", r2_exp = " + csv_num(fit.quality_exp) +
           ", r2_poly = " + csv_num(fit.quality_poly) + ")");
  return 0;
}

int run_verify_cmd(RunContext& ctx, std::uint64_t seed) {
  auto checks = run_verify(seed);
  for (const auto& c : checks)
    ctx.note(std::string(c.pass ? "[PASS] " : "[FAIL] ") + c.name +
             (c.detail.empty() ? "" : " (" + c.detail + ")"));
  if (!all_passed(checks)) {
    ctx.note("verification FAILED");
    return 4;
  }
  ctx.note("verification passed");
  return 0;
}

void check_known_keys(const ExperimentConfig& cfg) {
  static const std::map<std::string, std::vector<std::string>> per_exp = {
      {"hit", {"recurrence", "ladder", "x0", "trials", "n_max", "tail_window"}},
      {"dim", {"ladder", "x0", "tail_window", "M", "count_floor", "burn_in", "stride"}},
      {"sbc",
       {"ladder", "x0", "trials", "n_max", "checkpoints", "alpha", "epsilon", "phi_model",
        "c1", "c2", "M", "burn_in", "stride"}},
      {"corr", {"phi", "psi", "M", "max_lag", "min_above_noise", "burn_in", "stride"}},
      {"verify", {}},
  };
  static const std::vector<std::string> global = {"experiment", "system",        "backend",
                                                  "seed",       "jobs",          "allow_rational"};
  std::string exp = cfg.get("experiment");
  auto it = per_exp.find(exp);
  if (it == per_exp.end()) throw ConfigError("unknown experiment '" + exp + "'");
  for (const auto& [key, value] : cfg.kv) {
    (void)value;
    bool known = std::find(global.begin(), global.end(), key) != global.end() ||
                 std::find(it->second.begin(), it->second.end(), key) != it->second.end();
    if (!known)
      throw ConfigError("unknown config key '" + key + "' for experiment '" + exp + "'");
  }
}

void resolve_defaults(ExperimentConfig& cfg) {
  std::string exp = cfg.get("experiment");
  cfg.set_default("system", "doubling");
  cfg.set_default("backend", default_backend(cfg.get("system")));
  cfg.set_default("seed", "20260808");
  cfg.set_default("jobs", "0");
  cfg.set_default("allow_rational", "false");
  if (exp == "hit") {
    cfg.set_default("recurrence", "false");
    cfg.set_default("ladder", "geom:r0=1,lambda=0.5,kmin=4,kmax=18");
    cfg.set_default("x0", "0.3");
    cfg.set_default("trials", "100");
    cfg.set_default("n_max", "10000000");
    cfg.set_default("tail_window", "8");  // smallest 8 radii; 0 = full ladder
  } else if (exp == "dim") {
    cfg.set_default("ladder", "geom:r0=1,lambda=0.5,kmin=4,kmax=10");
    cfg.set_default("x0", "0.3");
    cfg.set_default("tail_window", "8");
    cfg.set_default("M", "1000000");
    cfg.set_default("count_floor", "100");
  } else if (exp == "sbc") {
    cfg.set_default("ladder", "pow:beta=0.5,kmin=1,kmax=10000");
    cfg.set_default("x0", "0.3");
    cfg.set_default("trials", "200");
    cfg.set_default("n_max", "100000");
    cfg.set_default("checkpoints", "pow10");
    cfg.set_default("alpha", "0.2");
    cfg.set_default("epsilon", "0.01");
  } else if (exp == "corr") {
    cfg.set_default("phi", "bump:x0=0.37,rin=0.04,rout=0.14");
    cfg.set_default("psi", "same");
    cfg.set_default("M", "1000000");
    cfg.set_default("max_lag", "1000");
  }
}

}  // namespace

int run_experiment(ExperimentConfig cfg, const std::string& out_dir, int jobs, bool quiet) {
  try {
    std::string exp = cfg.get("experiment");
    if (exp.empty()) throw ConfigError("missing experiment (hit|dim|sbc|corr|verify)");
    if (jobs > 0) cfg.kv["jobs"] = std::to_string(jobs);
    check_known_keys(cfg);
    resolve_defaults(cfg);

    RunContext ctx;
    ctx.dir = out_dir.empty() ? std::filesystem::path(".") : std::filesystem::path(out_dir);
    std::filesystem::create_directories(ctx.dir);
    ctx.quiet = quiet;

    {
      std::ofstream manifest(ctx.dir / "manifest.cfg");
      manifest << cfg.manifest_text();
    }
    ctx.report.open(ctx.dir / "report.txt");

    if (exp == "hit") return run_hit(cfg, ctx, cfg.get_bool("recurrence", false));
    if (exp == "dim") return run_dim(cfg, ctx);
    if (exp == "sbc") return run_sbc(cfg, ctx);
    if (exp == "corr") return run_corr(cfg, ctx);
    if (exp == "verify") return run_verify_cmd(ctx, std::uint64_t(cfg.get_int("seed", 20260808)));
    throw ConfigError("unknown experiment '" + exp + "'");
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const InsufficientSample& e) {
    std::cerr << "degenerate result: " << e.what() << "\n";
    return 3;
  } catch (const InsufficientSignal& e) {
    std::cerr << "degenerate result: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace hittingdim
