#include "fso/resilience.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fso/error.hpp"

namespace fso::resilience {

namespace {

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

void check_epsilon(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "target epsilon must lie in (0, 1), got " + std::to_string(epsilon));
  }
}

void check_estimator(const EstimatorConfig& e) {
  if (!(e.alpha > 0.0 && e.alpha <= 1.0) || !(e.beta >= 0.0 && e.beta <= 1.0) || !is_probability(e.prior)) {
    throw Error(ErrorCode::InvalidArgument, "estimator needs alpha in (0, 1], beta in [0, 1], prior in [0, 1]");
  }
}

std::uint32_t count_lost(std::uint32_t replicas, double loss, Rng& rng) {
  std::uint32_t lost = 0;
  for (std::uint32_t j = 0; j < replicas; ++j) lost += rng.bernoulli(loss) ? 1 : 0;
  return lost;
}

}  // namespace

ChannelModel ChannelModel::constant(double p) {
  ChannelModel c;
  c.kind = Kind::Constant;
  c.loss = p;
  return c;
}

ChannelModel ChannelModel::piecewise(std::vector<Segment> segments) {
  ChannelModel c;
  c.kind = Kind::Piecewise;
  c.segments = std::move(segments);
  return c;
}

ChannelModel ChannelModel::sinusoid(double low, double high, double period, double phase) {
  ChannelModel c;
  c.kind = Kind::Sinusoid;
  c.low = low;
  c.high = high;
  c.period = period;
  c.phase = phase;
  return c;
}

ChannelModel ChannelModel::from_trace(std::vector<double> values) {
  ChannelModel c;
  c.kind = Kind::Trace;
  c.trace = std::move(values);
  return c;
}

void ChannelModel::validate() const {
  switch (kind) {
    case Kind::Constant:
      if (!is_probability(loss)) throw Error(ErrorCode::InvalidArgument, "constant loss outside [0, 1]");
      break;
    case Kind::Piecewise:
      if (segments.empty() || segments.front().start != 0) {
        throw Error(ErrorCode::InvalidArgument, "piecewise channel needs a first segment starting at tick 0");
      }
      for (std::size_t i = 0; i < segments.size(); ++i) {
        if (!is_probability(segments[i].loss)) throw Error(ErrorCode::InvalidArgument, "segment loss outside [0, 1]");
        if (i > 0 && segments[i].start <= segments[i - 1].start) {
          throw Error(ErrorCode::InvalidArgument, "segment starts must be strictly ascending");
        }
      }
      break;
    case Kind::Sinusoid:
      if (!is_probability(low) || !is_probability(high) || low > high || !(period > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "sinusoid needs 0 <= low <= high <= 1 and a positive period");
      }
      break;
    case Kind::Trace:
      if (trace.empty()) throw Error(ErrorCode::InvalidArgument, "trace channel needs at least one value");
      for (double p : trace) {
        if (!is_probability(p)) throw Error(ErrorCode::InvalidArgument, "trace loss outside [0, 1]");
      }
      break;
  }
}

double ChannelModel::loss_at(Tick t) const {
  switch (kind) {
    case Kind::Constant:
      return loss;
    case Kind::Piecewise: {
      auto it = std::upper_bound(segments.begin(), segments.end(), t,
                                 [](Tick tick, const Segment& s) { return tick < s.start; });
      return std::prev(it)->loss;
    }
    case Kind::Sinusoid: {
      const double mid = 0.5 * (low + high);
      const double amp = 0.5 * (high - low);
      const double p = mid + amp * std::sin(2.0 * std::numbers::pi * static_cast<double>(t) / period + phase);
      return std::clamp(p, low, high);
    }
    case Kind::Trace:
      return trace[t % trace.size()];
  }
  return 0.0;
}

std::uint32_t min_replicas(double p, double epsilon) {
  check_epsilon(epsilon);
  if (p == 1.0) throw Error(ErrorCode::Unreliable, "every replica is lost when p = 1");
  if (!(p >= 0.0 && p < 1.0)) throw Error(ErrorCode::InvalidArgument, "loss probability outside [0, 1)");
  std::uint32_t k = 1;
  for (double failure = p; failure > epsilon; failure *= p) ++k;
  return k;
}

std::uint32_t elastic_plan(std::span<const double> observed, double epsilon) {
  if (observed.empty()) throw Error(ErrorCode::InvalidArgument, "elastic plan needs at least one observation");
  return min_replicas(*std::max_element(observed.begin(), observed.end()), epsilon);
}

LossForecaster::LossForecaster(const EstimatorConfig& config) : config_(config), level_(config.prior) {
  check_estimator(config);
}

void LossForecaster::observe(double sample) {
  if (!config_.trend) {
    level_ = (1.0 - config_.alpha) * level_ + config_.alpha * sample;
    return;
  }
  const double previous = level_;
  level_ = config_.alpha * sample + (1.0 - config_.alpha) * (level_ + slope_);
  slope_ = config_.beta * (level_ - previous) + (1.0 - config_.beta) * slope_;
}

double LossForecaster::forecast() const noexcept {
  return std::clamp(level_ + (config_.trend ? slope_ : 0.0), 0.0, kMaxForecast);
}

std::vector<std::uint32_t> entelechic_plan(std::span<const double> history, const EstimatorConfig& estimator,
                                           double epsilon) {
  check_epsilon(epsilon);
  LossForecaster f(estimator);
  std::vector<std::uint32_t> plan;
  plan.reserve(history.size() + 1);
  plan.push_back(min_replicas(f.forecast(), epsilon));
  for (double sample : history) {
    f.observe(sample);
    plan.push_back(min_replicas(f.forecast(), epsilon));
  }
  return plan;
}

HedgeLearner::HedgeLearner(LearnerConfig config, double epsilon, Tick horizon)
    : config_(std::move(config)), epsilon_(epsilon) {
  check_epsilon(epsilon);
  if (config_.candidates.empty()) throw Error(ErrorCode::InvalidArgument, "learner needs at least one candidate");
  if (config_.max_replicas == 0) throw Error(ErrorCode::InvalidArgument, "max_replicas must be positive");
  if (!(config_.cost_weight >= 0.0) || !(config_.learning_rate >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "cost weight and learning rate must be nonnegative");
  }
  for (const Candidate& c : config_.candidates) {
    if (c.kind == Candidate::Kind::Fixed && c.fixed_replicas == 0) {
      throw Error(ErrorCode::InvalidArgument, "candidate " + c.name + " sends no replicas");
    }
    if (c.kind == Candidate::Kind::Adaptive) check_epsilon(epsilon * c.epsilon_scale);
    forecasters_.emplace_back(c.estimator);
  }
  const double n = static_cast<double>(config_.candidates.size());
  const double t = static_cast<double>(std::max<Tick>(horizon, 1));
  eta_ = config_.learning_rate > 0.0 ? config_.learning_rate
                                     : std::sqrt(8.0 * std::log(n) / t) / (1.0 + config_.cost_weight);
  cumulative_.assign(config_.candidates.size(), 0.0);
  refresh_weights();
}

std::vector<std::uint32_t> HedgeLearner::proposals() const {
  std::vector<std::uint32_t> out;
  out.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) {
    const Candidate& c = config_.candidates[i];
    const std::uint32_t k = c.kind == Candidate::Kind::Fixed
                                ? c.fixed_replicas
                                : min_replicas(forecasters_[i].forecast(), epsilon_ * c.epsilon_scale);
    out.push_back(std::min(k, config_.max_replicas));
  }
  return out;
}

std::size_t HedgeLearner::choose(Rng& rng) const {
  const double u = rng.uniform01();
  double acc = 0.0;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    acc += weights_[i];
    if (u < acc) return i;
  }
  return weights_.size() - 1;
}

double HedgeLearner::reward(bool delivered, std::uint32_t replicas) const noexcept {
  return (delivered ? 1.0 : 0.0) -
         config_.cost_weight * static_cast<double>(replicas) / static_cast<double>(config_.max_replicas);
}

void HedgeLearner::update(std::span<const double> rewards, double monitor_sample) {
  for (std::size_t i = 0; i < size(); ++i) {
    cumulative_[i] += rewards[i];
    forecasters_[i].observe(monitor_sample);
  }
  refresh_weights();
}

void HedgeLearner::refresh_weights() {
  const double best = *std::max_element(cumulative_.begin(), cumulative_.end());
  weights_.resize(cumulative_.size());
  double total = 0.0;
  for (std::size_t i = 0; i < cumulative_.size(); ++i) {
    weights_[i] = std::exp(eta_ * (cumulative_[i] - best));
    total += weights_[i];
  }
  for (double& w : weights_) w /= total;
}

namespace {

// Rewards of every candidate given one message's replica outcomes, where
// lost[j] tells whether replica j was lost.
std::vector<double> candidate_rewards(const HedgeLearner& learner, const std::vector<std::uint32_t>& proposals,
                                      const std::vector<bool>& lost) {
  std::vector<double> rewards(proposals.size());
  for (std::size_t i = 0; i < proposals.size(); ++i) {
    bool delivered = false;
    for (std::uint32_t j = 0; j < proposals[i] && !delivered; ++j) delivered = !lost[j];
    rewards[i] = learner.reward(delivered, proposals[i]);
  }
  return rewards;
}

}  // namespace

std::vector<std::uint32_t> antifragile_plan(std::span<const double> history,
                                            std::span<const std::vector<bool>> outcomes, HedgeLearner& learner,
                                            Rng& rng) {
  if (history.size() != outcomes.size()) {
    throw Error(ErrorCode::InvalidArgument, "history and outcomes differ in length");
  }
  std::vector<std::uint32_t> plan;
  plan.reserve(history.size());
  for (std::size_t t = 0; t < history.size(); ++t) {
    const auto proposals = learner.proposals();
    const std::uint32_t widest = *std::max_element(proposals.begin(), proposals.end());
    if (outcomes[t].size() < widest) {
      throw Error(ErrorCode::InvalidArgument, "message " + std::to_string(t) + " has too few replica outcomes");
    }
    plan.push_back(proposals[learner.choose(rng)]);
    learner.update(candidate_rewards(learner, proposals, outcomes[t]), history[t]);
  }
  return plan;
}

void StrategyConfig::validate() const {
  check_epsilon(target_epsilon);
  if (window < 1) throw Error(ErrorCode::InvalidArgument, "window must be at least 1");
  check_estimator(estimator);
}

TransmissionReport simulate(const ChannelModel& channel, const StrategyConfig& strategy, std::uint64_t messages,
                            std::uint64_t rng_seed, bool keep_log) {
  channel.validate();
  strategy.validate();
  if (messages < 1) throw Error(ErrorCode::InvalidArgument, "at least one message must be sent");

  Rng rng(rng_seed);
  TransmissionReport report;
  if (keep_log) report.log.reserve(messages);
  const double eps = strategy.target_epsilon;

  auto record = [&](Tick t, double p, std::uint32_t k, std::uint32_t lost) {
    const bool delivered = lost < k;
    report.total_replicas += k;
    (delivered ? report.delivered : report.failed) += 1;
    if (keep_log) report.log.push_back({t, p, k, lost, delivered});
  };
  auto monitor = [&](double p, std::uint32_t k, std::uint32_t lost) {
    return strategy.monitor == Monitor::Exact ? p : static_cast<double>(lost) / static_cast<double>(k);
  };

  switch (strategy.kind) {
    case StrategyConfig::Kind::Elastic: {
      std::vector<double> snapshot(strategy.window);
      for (Tick t = 0; t < strategy.window; ++t) snapshot[t] = channel.loss_at(t);
      const std::uint32_t k = elastic_plan(snapshot, eps);
      for (Tick t = 0; t < messages; ++t) {
        const double p = channel.loss_at(t);
        record(t, p, k, count_lost(k, p, rng));
      }
      break;
    }
    case StrategyConfig::Kind::Entelechic: {
      LossForecaster forecaster(strategy.estimator);
      for (Tick t = 0; t < messages; ++t) {
        const double p = channel.loss_at(t);
        const std::uint32_t k = min_replicas(forecaster.forecast(), eps);
        const std::uint32_t lost = count_lost(k, p, rng);
        record(t, p, k, lost);
        forecaster.observe(monitor(p, k, lost));
      }
      break;
    }
    case StrategyConfig::Kind::Antifragile: {
      HedgeLearner learner(strategy.learner, eps, messages);
      LearnerSummary summary;
      for (Tick t = 0; t < messages; ++t) {
        const double p = channel.loss_at(t);
        const auto proposals = learner.proposals();
        const std::size_t chosen = learner.choose(rng);
        const std::uint32_t k = proposals[chosen];
        const std::uint32_t widest = *std::max_element(proposals.begin(), proposals.end());
        std::vector<bool> lost(widest);
        for (std::uint32_t j = 0; j < widest; ++j) lost[j] = rng.bernoulli(p);
        const auto rewards = candidate_rewards(learner, proposals, lost);
        for (std::size_t i = 0; i < rewards.size(); ++i) summary.expected_reward += learner.weights()[i] * rewards[i];
        summary.realized_reward += rewards[chosen];
        const auto lost_sent = static_cast<std::uint32_t>(std::count(lost.begin(), lost.begin() + k, true));
        record(t, p, k, lost_sent);
        learner.update(rewards, monitor(p, k, lost_sent));
      }
      for (const Candidate& c : learner.config().candidates) summary.names.push_back(c.name);
      summary.weights = learner.weights();
      summary.cumulative_rewards = learner.cumulative_rewards();
      summary.learning_rate = learner.learning_rate();
      summary.best_fixed_reward =
          *std::max_element(summary.cumulative_rewards.begin(), summary.cumulative_rewards.end());
      const double horizon = static_cast<double>(messages);
      summary.average_regret = (summary.best_fixed_reward - summary.expected_reward) / horizon;
      summary.regret_bound = 2.0 * std::sqrt(std::log(static_cast<double>(learner.size())) / horizon);
      report.learner = std::move(summary);
      break;
    }
  }

  report.delivery_rate = static_cast<double>(report.delivered) / static_cast<double>(messages);
  report.mean_replicas = static_cast<double>(report.total_replicas) / static_cast<double>(messages);
  return report;
}

}  // namespace fso::resilience
