#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fso/rng.hpp"

namespace fso::resilience {

using Tick = std::uint64_t;

/// Per-tick probability that a single replica is lost. One message is sent
/// per tick; replicas are lost independently.
struct ChannelModel {
  enum class Kind { Constant, Piecewise, Sinusoid, Trace };

  struct Segment {
    Tick start = 0;
    double loss = 0.0;
  };

  Kind kind = Kind::Constant;
  double loss = 0.0;               // Constant
  std::vector<Segment> segments;   // Piecewise, starts ascending, first at 0
  double low = 0.0, high = 0.0;    // Sinusoid range
  double period = 1.0;             // Sinusoid period in ticks
  double phase = 0.0;              // Sinusoid phase in radians
  std::vector<double> trace;       // Trace, repeated cyclically

  static ChannelModel constant(double p);
  static ChannelModel piecewise(std::vector<Segment> segments);
  static ChannelModel sinusoid(double low, double high, double period, double phase = 0.0);
  static ChannelModel from_trace(std::vector<double> values);

  /// Throws InvalidArgument when any loss probability leaves [0, 1] or the
  /// shape parameters are unusable.
  void validate() const;
  double loss_at(Tick t) const;
};

/// Smallest k >= 1 with p^k <= epsilon. Throws Unreliable for p = 1 and
/// InvalidArgument outside 0 <= p < 1, 0 < epsilon < 1.
std::uint32_t min_replicas(double p, double epsilon);

/// Elastic strategy: size redundancy once for the worst loss seen in the
/// observation window and never revisit it.
std::uint32_t elastic_plan(std::span<const double> observed, double epsilon);

struct EstimatorConfig {
  double alpha = 0.1;
  /// Adds a linear trend term (Holt smoothing) to the forecast.
  bool trend = false;
  double beta = 0.1;
  /// Forecast before any observation.
  double prior = 0.5;
};

inline constexpr double kMaxForecast = 0.999;

/// Entelechic strategy: forecast next-tick loss from an exponentially
/// weighted history and size redundancy to match the forecast.
class LossForecaster {
 public:
  explicit LossForecaster(const EstimatorConfig& config);

  void observe(double sample);
  /// Forecast for the next tick, clamped to [0, kMaxForecast].
  double forecast() const noexcept;

 private:
  EstimatorConfig config_;
  double level_;
  double slope_ = 0.0;
};

/// k for every prefix of `history`: element t is planned after observing
/// history[0..t), so the result has history.size() + 1 entries.
std::vector<std::uint32_t> entelechic_plan(std::span<const double> history, const EstimatorConfig& estimator,
                                           double epsilon);

/// One option the antifragile learner can follow.
struct Candidate {
  enum class Kind { Fixed, Adaptive };
  std::string name;
  Kind kind = Kind::Adaptive;
  std::uint32_t fixed_replicas = 1;  // Fixed
  EstimatorConfig estimator;         // Adaptive
  double epsilon_scale = 1.0;        // Adaptive: plans for epsilon * scale
};

struct LearnerConfig {
  std::vector<Candidate> candidates;
  /// Zero selects sqrt(8 ln N / T) / (1 + cost_weight).
  double learning_rate = 0.0;
  double cost_weight = 0.1;
  std::uint32_t max_replicas = 64;
};

/// Hedge (exponential weights) over candidate plans with full-information
/// rewards: delivered indicator minus cost_weight * k / max_replicas.
class HedgeLearner {
 public:
  HedgeLearner(LearnerConfig config, double epsilon, Tick horizon);

  std::size_t size() const noexcept { return config_.candidates.size(); }
  const LearnerConfig& config() const noexcept { return config_; }
  double learning_rate() const noexcept { return eta_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  const std::vector<double>& cumulative_rewards() const noexcept { return cumulative_; }

  /// Replica count each candidate proposes for the next message.
  std::vector<std::uint32_t> proposals() const;
  /// Samples a candidate index from the current weights.
  std::size_t choose(Rng& rng) const;
  double reward(bool delivered, std::uint32_t replicas) const noexcept;

  /// Feeds the per-candidate rewards of the last message and the channel
  /// sample seen by the adaptive candidates.
  void update(std::span<const double> rewards, double monitor_sample);

 private:
  void refresh_weights();

  LearnerConfig config_;
  double epsilon_;
  double eta_;
  std::vector<LossForecaster> forecasters_;
  std::vector<double> cumulative_;
  std::vector<double> weights_;
};

/// Replays a learner on pre-drawn per-message replica outcomes.
/// outcomes[t][j] is true when replica j of message t is lost. Returns the
/// replica count of the candidate chosen at each message.
std::vector<std::uint32_t> antifragile_plan(std::span<const double> history,
                                            std::span<const std::vector<bool>> outcomes, HedgeLearner& learner,
                                            Rng& rng);

/// What the adaptive strategies see after each message.
enum class Monitor {
  ReplicaLoss,  ///< fraction of the sent replicas that were lost
  Exact,        ///< the channel's true loss probability for that tick
};

struct StrategyConfig {
  enum class Kind { Elastic, Entelechic, Antifragile };
  Kind kind = Kind::Elastic;
  double target_epsilon = 0.05;
  /// Elastic: ticks of the channel sampled before the run.
  Tick window = 1000;
  EstimatorConfig estimator;
  Monitor monitor = Monitor::ReplicaLoss;
  LearnerConfig learner;

  void validate() const;
};

struct TickLog {
  Tick tick = 0;
  double loss = 0.0;
  std::uint32_t replicas = 0;
  std::uint32_t lost = 0;
  bool delivered = false;
};

struct LearnerSummary {
  std::vector<std::string> names;
  std::vector<double> weights;
  std::vector<double> cumulative_rewards;
  double learning_rate = 0.0;
  /// Sum over messages of the weight-averaged candidate reward.
  double expected_reward = 0.0;
  /// Sum of the rewards of the candidates actually followed.
  double realized_reward = 0.0;
  double best_fixed_reward = 0.0;
  double average_regret = 0.0;
  /// 2 sqrt(ln N / T).
  double regret_bound = 0.0;
};

struct TransmissionReport {
  std::uint64_t delivered = 0;
  std::uint64_t failed = 0;
  std::uint64_t total_replicas = 0;
  double delivery_rate = 0.0;
  double mean_replicas = 0.0;
  std::vector<TickLog> log;
  std::optional<LearnerSummary> learner;
};

/// Sends `messages` messages, one per tick from tick 0, each as k_t
/// replicas; a message is delivered when at least one replica survives.
/// Deterministic for a given rng seed.
TransmissionReport simulate(const ChannelModel& channel, const StrategyConfig& strategy, std::uint64_t messages,
                            std::uint64_t rng_seed, bool keep_log = true);

}  // namespace fso::resilience
