#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hittingdim/correlation.hpp"
#include "hittingdim/oracle.hpp"

using namespace hittingdim;

TEST_CASE("bump evaluation") {
  Observable b = Observable::bump(point1(0.5), 0.1, 0.2);
  CHECK(eval_observable(b, Space::circle, point1(0.5)) == 1.0);
  CHECK(eval_observable(b, Space::circle, point1(0.85)) == 0.0);  // distance 0.35
  CHECK(eval_observable(b, Space::circle, point1(0.65)) == doctest::Approx(0.5));
}

TEST_CASE("bump on the torus uses the sup metric") {
  Observable b = Observable::bump(point2(0.5, 0.5), 0.1, 0.2);
  CHECK(eval_observable(b, Space::torus2, point2(0.5, 0.55)) == 1.0);
  CHECK(eval_observable(b, Space::torus2, point2(0.65, 0.5)) == doctest::Approx(0.5));
  CHECK(eval_observable(b, Space::torus2, point2(0.95, 0.5)) == 0.0);
}

TEST_CASE("lipschitz norm convention") {
  CHECK(lipschitz_norm(Observable::bump(point1(0.1), 0.1, 0.2)) == doctest::Approx(10.0));
  CHECK(lipschitz_norm(Observable::constant(1.0)) == 1.0);
  CHECK_THROWS_AS(Observable::bump(point1(0.1), 0.1, 0.6), std::invalid_argument);
  CHECK_THROWS_AS(Observable::bump(point1(0.1), 0.2, 0.1), std::invalid_argument);
}

TEST_CASE("near-indicator correlation against the dyadic oracle") {
  // mu(T^-1 [0,1/4) n [0,1/4)) - mu^2 = 1/8 - 1/16 = 1/16 exactly; bumps
  // squeezed around the interval approach the indicator value
  BinaryRational lhs = exact_preimage_intersection(DyadicInterval(2, 0), DyadicInterval(2, 0), 1);
  double oracle = lhs.to_double() - 0.25 * 0.25;
  CHECK(oracle == doctest::Approx(1.0 / 16.0));

  auto sys = SystemSpec::make(Family::doubling, {}, {BackendKind::bitstream, 0});
  auto sample = sample_measure(sys, 400000, {GenerationSpec::Kind::iid_lebesgue, 123, 0, 1});
  // ball of radius ~1/8 at 1/8 is the arc (0, 1/4); tight ramps on each side
  Observable phi = Observable::bump(point1(0.125), 0.1225, 0.1275);
  auto [c_hat, se] = correlation_at(phi, phi, 1, sample);
  CHECK(std::fabs(c_hat - oracle) < 4.0 * se + 0.004);  // ramp bias ~ ramp width
}

TEST_CASE("constant psi vanishes identically") {
  auto sys = SystemSpec::make(Family::doubling, {}, {BackendKind::bitstream, 0});
  auto sample = sample_measure(sys, 50000, {GenerationSpec::Kind::iid_lebesgue, 5, 0, 1});
  Observable phi = Observable::bump(point1(0.3), 0.05, 0.15);
  for (long long n : {1LL, 4LL, 16LL}) {
    auto [c, se] = correlation_at(phi, Observable::constant(1.0), n, sample);
    CHECK(c == 0.0);
    CHECK(se == 0.0);
  }
}

TEST_CASE("estimator is exactly linear in phi under power-of-two scaling") {
  auto sys = SystemSpec::make(Family::doubling, {}, {BackendKind::bitstream, 0});
  auto sample = sample_measure(sys, 30000, {GenerationSpec::Kind::iid_lebesgue, 50, 0, 1});
  Observable phi = Observable::bump(point1(0.4), 0.03, 0.2);
  Observable psi = Observable::bump(point1(0.7), 0.05, 0.25);
  auto [c1, se1] = correlation_at(phi, psi, 3, sample);
  auto [c2, se2] = correlation_at(phi.scaled(4.0), psi, 3, sample);
  CHECK(c2 == 4.0 * c1);
  CHECK(se2 == 4.0 * se1);
}

TEST_CASE("default lag grid is dense then geometric") {
  auto lags = default_lags(1000);
  CHECK(lags.front() == 1);
  CHECK(lags.back() == 1000);
  CHECK(std::is_sorted(lags.begin(), lags.end()));
  CHECK(lags[49] == 50);
  CHECK(lags.size() < 80);
}

static CorrelationSeries synthetic(const std::vector<long long>& lags,
                                   double (*f)(double)) {
  CorrelationSeries s;
  for (long long n : lags) s.entries.push_back({n, f(double(n)), 0.0, false});
  return s;
}

TEST_CASE("decay_fit on synthetic exponential data") {
  auto s = synthetic(default_lags(1000), [](double n) { return std::pow(2.0, -n); });
  auto m = decay_fit(s);
  CHECK(m.cls == DecayModel::Class::exponential);
  CHECK(m.param == doctest::Approx(std::log(2.0)).epsilon(0.01));
  CHECK(m.C == doctest::Approx(1.0).epsilon(0.01));
  for (const auto& e : s.entries) CHECK(e.used_in_fit);
}

TEST_CASE("decay_fit on synthetic polynomial data") {
  auto s = synthetic(default_lags(1000), [](double n) { return std::pow(n, -2.0); });
  auto m = decay_fit(s);
  CHECK(m.cls == DecayModel::Class::polynomial);
  CHECK(m.param == doctest::Approx(2.0).epsilon(0.01));
  CHECK(m.eval(10.0) == doctest::Approx(0.01).epsilon(0.05));
}

TEST_CASE("decay_fit on flat data reports none") {
  auto s = synthetic(default_lags(1000), [](double) { return 0.125; });
  auto m = decay_fit(s);
  CHECK(m.cls == DecayModel::Class::none);
  CHECK(m.eval(77.0) == doctest::Approx(0.125));
}

TEST_CASE("decay_fit class is invariant under positive rescaling") {
  for (auto f : {+[](double n) { return std::pow(2.0, -n); },
                 +[](double n) { return std::pow(n, -2.0); }}) {
    auto a = synthetic(default_lags(1000), f);
    auto b = a;
    for (auto& e : b.entries) {
      e.c_hat *= 37.5;
      e.se *= 37.5;
    }
    auto ma = decay_fit(a);
    auto mb = decay_fit(b);
    CHECK(ma.cls == mb.cls);
    CHECK(ma.param == doctest::Approx(mb.param).epsilon(1e-9));
    CHECK(mb.C == doctest::Approx(37.5 * ma.C).epsilon(1e-6));
  }
}

TEST_CASE("decay_fit refuses starved series") {
  CorrelationSeries s;
  for (long long n = 1; n <= 30; ++n)
    s.entries.push_back({n, n <= 5 ? 0.1 : 1e-9, 1e-3, false});
  CHECK_THROWS_AS(decay_fit(s), InsufficientSignal);
}

TEST_CASE("undetermined model refuses evaluation") {
  DecayModel m;
  CHECK_THROWS_AS(m.eval(3.0), UndeterminedDecay);
}

TEST_CASE("doubling series drops below the noise floor quickly") {
  auto sys = SystemSpec::make(Family::doubling, {}, {BackendKind::bitstream, 0});
  auto sample = sample_measure(sys, 200000, {GenerationSpec::Kind::iid_lebesgue, 2718, 0, 1});
  Observable phi = Observable::bump(point1(1.0 / 6.0), 0.166, 0.1675);
  auto series = correlation_series(phi, phi, default_lags(60), sample);
  long long last_used = 0;
  for (const auto& e : series.entries)
    if (e.c_hat > 3.0 * e.se) last_used = e.n;
  CHECK(last_used >= 4);
  CHECK(last_used <= 35);
}

TEST_CASE("def-3 style envelope bounds the fitted series") {
  auto sys = SystemSpec::make(Family::doubling, {}, {BackendKind::bitstream, 0});
  auto sample = sample_measure(sys, 300000, {GenerationSpec::Kind::iid_lebesgue, 31415, 0, 1});
  for (auto geom : {std::pair{0.166, 0.1675}, {0.16, 0.17}, {0.15, 0.18}}) {
    Observable phi = Observable::bump(point1(1.0 / 6.0), geom.first, geom.second);
    auto series = correlation_series(phi, phi, default_lags(50), sample);
    auto fit = decay_fit(series, 4);
    REQUIRE(fit.cls == DecayModel::Class::exponential);
    auto envelope = normalized_decay_model(series, fit, phi, phi);
    double norm = lipschitz_norm(phi) * lipschitz_norm(phi);
    for (const auto& e : series.entries)
      CHECK(e.c_hat <= norm * envelope.eval(double(e.n)) + 3.0 * e.se + 1e-15);
  }
}
