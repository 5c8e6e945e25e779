#include <doctest.h>

#include <cmath>
#include <numeric>

#include "fso/error.hpp"
#include "fso/resilience.hpp"

using namespace fso::resilience;

namespace {

// Independent oracle: raise k until p^k, computed with std::pow, reaches eps.
std::uint32_t brute_replicas(double p, double eps) {
  std::uint32_t k = 1;
  while (std::pow(p, k) > eps) ++k;
  return k;
}

StrategyConfig strategy(StrategyConfig::Kind kind) {
  StrategyConfig s;
  s.kind = kind;
  return s;
}

Candidate fixed(std::string name, std::uint32_t k) {
  Candidate c;
  c.name = std::move(name);
  c.kind = Candidate::Kind::Fixed;
  c.fixed_replicas = k;
  return c;
}

}  // namespace

TEST_CASE("min_replicas examples") {
  CHECK(min_replicas(0.0, 0.05) == 1);
  CHECK(min_replicas(0.5, 0.05) == 5);
  CHECK(min_replicas(0.9, 0.01) == 44);
}

TEST_CASE("min_replicas errors") {
  try {
    min_replicas(1.0, 0.05);
    FAIL("expected Unreliable");
  } catch (const fso::Error& e) {
    CHECK(e.code() == fso::ErrorCode::Unreliable);
  }
  CHECK_THROWS_AS(min_replicas(-0.1, 0.05), fso::Error);
  CHECK_THROWS_AS(min_replicas(0.5, 0.0), fso::Error);
  CHECK_THROWS_AS(min_replicas(0.5, 1.0), fso::Error);
}

TEST_CASE("min_replicas agrees with brute force and is monotone") {
  std::uint32_t previous_row = 0;
  for (int i = 0; i < 100; ++i) {
    const double p = i / 100.0;
    std::uint32_t previous = 0xffffffffu;
    for (int j = 1; j < 100; ++j) {
      const double eps = j / 100.0;
      const auto k = min_replicas(p, eps);
      CHECK(k == brute_replicas(p, eps));
      CHECK(k <= previous);  // nonincreasing in epsilon
      previous = k;
    }
    const auto k = min_replicas(p, 0.05);
    CHECK(k >= previous_row);  // nondecreasing in p
    previous_row = k;
  }
}

TEST_CASE("elastic plan") {
  const std::vector<double> window{0.1, 0.5, 0.2};
  CHECK(elastic_plan(window, 0.05) == 5);
  const std::vector<double> clean{0.0, 0.0};
  CHECK(elastic_plan(clean, 0.05) == 1);
  CHECK_THROWS_AS(elastic_plan({}, 0.05), fso::Error);

  // The plan is frozen: a later shift to p = 0.9 keeps k = 5.
  auto channel = ChannelModel::piecewise({{0, 0.5}, {1000, 0.9}});
  const auto report = simulate(channel, strategy(StrategyConfig::Kind::Elastic), 20000, 11);
  std::uint64_t late = 0, late_failed = 0;
  for (const TickLog& l : report.log) {
    CHECK(l.replicas == 5);
    if (l.tick >= 1000) {
      ++late;
      late_failed += !l.delivered;
    }
  }
  const double expected = std::pow(0.9, 5);
  CHECK(expected == doctest::Approx(0.59).epsilon(0.01));
  const double sigma = std::sqrt(expected * (1 - expected) / late);
  CHECK(std::abs(late_failed / double(late) - expected) < 4 * sigma);
}

TEST_CASE("entelechic plan") {
  EstimatorConfig est;
  const std::vector<double> none;
  CHECK(entelechic_plan(none, est, 0.05) == std::vector<std::uint32_t>{5});  // prior 0.5
  est.prior = 0.1;
  CHECK(entelechic_plan(none, est, 0.05) == std::vector<std::uint32_t>{2});
  est.prior = 0.5;

  const std::vector<double> steady(200, 0.5);
  const auto plan = entelechic_plan(steady, est, 0.05);
  CHECK(plan.size() == 201);
  for (auto k : plan) CHECK(k == 5);

  std::vector<double> step(100, 0.5);
  step.resize(200, 0.1);
  const auto decay = entelechic_plan(step, est, 0.05);
  CHECK(decay[100] == 5);
  for (std::size_t t = 101; t < decay.size(); ++t) CHECK(decay[t] <= decay[t - 1]);
  CHECK(decay[100 + 30] <= 3);  // ~3/alpha ticks after the step
  CHECK(decay.back() == 2);
}

TEST_CASE("forecaster trend and clamp") {
  EstimatorConfig est;
  est.trend = true;
  est.alpha = 0.5;
  est.beta = 0.5;
  LossForecaster f(est);
  for (int i = 0; i < 50; ++i) f.observe(1.0);
  CHECK(f.forecast() <= kMaxForecast);
  CHECK(f.forecast() == doctest::Approx(kMaxForecast));
  for (int i = 0; i < 50; ++i) f.observe(0.0);
  CHECK(f.forecast() >= 0.0);

  EstimatorConfig bad;
  bad.alpha = 0.0;
  CHECK_THROWS_AS(LossForecaster{bad}, fso::Error);
}

TEST_CASE("antifragile with a single candidate follows it") {
  LearnerConfig cfg;
  Candidate c;
  c.name = "ewma";
  cfg.candidates.push_back(c);
  HedgeLearner learner(cfg, 0.05, 300);
  std::vector<double> history(300);
  std::vector<std::vector<bool>> outcomes(300, std::vector<bool>(64));
  fso::Rng draw(3);
  for (std::size_t t = 0; t < history.size(); ++t) {
    history[t] = t < 150 ? 0.5 : 0.1;
    for (std::size_t j = 0; j < 64; ++j) outcomes[t][j] = draw.bernoulli(history[t]);
  }
  fso::Rng rng(4);
  const auto plan = antifragile_plan(history, outcomes, learner, rng);
  auto expected = entelechic_plan(history, c.estimator, 0.05);
  expected.pop_back();
  CHECK(plan == expected);
  CHECK(learner.weights() == std::vector<double>{1.0});
}

TEST_CASE("antifragile weight concentrates on a dominant candidate") {
  StrategyConfig s = strategy(StrategyConfig::Kind::Antifragile);
  s.learner.candidates = {fixed("k1", 1), fixed("k5", 5)};
  const auto report = simulate(ChannelModel::constant(0.5), s, 10000, 5);
  REQUIRE(report.learner);
  CHECK(report.learner->weights[1] > 0.95);
  CHECK(report.learner->average_regret <= report.learner->regret_bound);
}

TEST_CASE("antifragile regret on a switching channel") {
  StrategyConfig s = strategy(StrategyConfig::Kind::Antifragile);
  Candidate adaptive;
  adaptive.name = "ewma";
  s.learner.candidates = {fixed("k2", 2), fixed("k8", 8), adaptive};
  const auto channel = ChannelModel::piecewise({{0, 0.1}, {2000, 0.6}, {4000, 0.05}, {6000, 0.7}, {8000, 0.2}});
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const auto r = simulate(channel, s, 10000, seed);
    REQUIRE(r.learner);
    CHECK(r.learner->average_regret <= r.learner->regret_bound);
    double sum = 0.0;
    for (double w : r.learner->weights) sum += w;
    CHECK(sum == doctest::Approx(1.0));
  }
}

TEST_CASE("simulate on a lossless channel") {
  for (auto kind : {StrategyConfig::Kind::Elastic, StrategyConfig::Kind::Entelechic}) {
    const auto r = simulate(ChannelModel::constant(0.0), strategy(kind), 5000, 1);
    CHECK(r.delivery_rate == 1.0);
    // After burn-in every message travels alone.
    for (std::size_t t = 100; t < r.log.size(); ++t) CHECK(r.log[t].replicas == 1);
  }
  const auto elastic = simulate(ChannelModel::constant(0.0), strategy(StrategyConfig::Kind::Elastic), 5000, 1);
  CHECK(elastic.mean_replicas == 1.0);
}

TEST_CASE("simulate elastic k = 5 at p = 0.5") {
  const auto r = simulate(ChannelModel::constant(0.5), strategy(StrategyConfig::Kind::Elastic), 100000, 2024, false);
  CHECK(r.mean_replicas == 5.0);
  CHECK(std::abs(r.delivery_rate - 0.96875) < 0.005);
  CHECK(r.log.empty());
}

TEST_CASE("failure rate stays within epsilon plus three sigma") {
  const double eps = 0.05;
  for (double p : {0.2, 0.5, 0.7, 0.9}) {
    const auto r = simulate(ChannelModel::constant(p), strategy(StrategyConfig::Kind::Elastic), 20000, 9, false);
    const double fail = 1.0 - r.delivery_rate;
    CHECK(fail <= eps + 3 * std::sqrt(eps * (1 - eps) / 20000));
  }
}

TEST_CASE("entelechic uses fewer replicas than elastic on a sinusoid") {
  const auto channel = ChannelModel::sinusoid(0.1, 0.5, 1000);
  const auto elastic = simulate(channel, strategy(StrategyConfig::Kind::Elastic), 20000, 3, false);
  const auto ent = simulate(channel, strategy(StrategyConfig::Kind::Entelechic), 20000, 3, false);
  CHECK(elastic.mean_replicas == 5.0);
  CHECK(ent.mean_replicas < elastic.mean_replicas);
  CHECK(ent.delivery_rate >= 1 - 0.05 - 0.01);
}

TEST_CASE("report accounting and determinism") {
  StrategyConfig s = strategy(StrategyConfig::Kind::Antifragile);
  Candidate adaptive;
  adaptive.name = "ewma";
  s.learner.candidates = {fixed("k3", 3), adaptive};
  const auto channel = ChannelModel::from_trace({0.1, 0.3, 0.6, 0.2});
  const auto a = simulate(channel, s, 3000, 77);
  const auto b = simulate(channel, s, 3000, 77);
  CHECK(a.delivered + a.failed == 3000);
  std::uint64_t sum = 0;
  for (std::size_t t = 0; t < a.log.size(); ++t) {
    sum += a.log[t].replicas;
    CHECK(a.log[t].loss == channel.loss_at(t));
    CHECK(a.log[t].replicas == b.log[t].replicas);
    CHECK(a.log[t].lost == b.log[t].lost);
    CHECK(a.log[t].delivered == (a.log[t].lost < a.log[t].replicas));
  }
  CHECK(sum == a.total_replicas);
  CHECK(a.delivery_rate == double(a.delivered) / 3000.0);
  CHECK(a.learner->expected_reward == b.learner->expected_reward);
}

TEST_CASE("channel models") {
  CHECK(ChannelModel::from_trace({0.1, 0.2}).loss_at(3) == 0.2);
  const auto pw = ChannelModel::piecewise({{0, 0.1}, {10, 0.4}});
  CHECK(pw.loss_at(9) == 0.1);
  CHECK(pw.loss_at(10) == 0.4);
  const auto sine = ChannelModel::sinusoid(0.1, 0.5, 100);
  for (Tick t = 0; t < 200; ++t) {
    CHECK(sine.loss_at(t) >= 0.1);
    CHECK(sine.loss_at(t) <= 0.5);
  }
  CHECK(sine.loss_at(25) == doctest::Approx(0.5));
  CHECK_THROWS_AS(ChannelModel::constant(1.5).validate(), fso::Error);
  CHECK_THROWS_AS(ChannelModel::piecewise({{5, 0.1}}).validate(), fso::Error);
  CHECK_THROWS_AS(ChannelModel::piecewise({{0, 0.1}, {0, 0.2}}).validate(), fso::Error);
  CHECK_THROWS_AS(ChannelModel::sinusoid(0.5, 0.1, 10).validate(), fso::Error);
  CHECK_THROWS_AS(ChannelModel::from_trace({}).validate(), fso::Error);
  CHECK_THROWS_AS(simulate(ChannelModel::constant(0.1), strategy(StrategyConfig::Kind::Elastic), 0, 1), fso::Error);
}
