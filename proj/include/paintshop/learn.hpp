#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "paintshop/core.hpp"
#include "paintshop/generate.hpp"
#include "paintshop/masks.hpp"
#include "paintshop/nn.hpp"

namespace paintshop {

class AllMasked : public Error {
 public:
  AllMasked() : Error("mask admits no action") {}
};

class NonFiniteLoss : public Error {
 public:
  NonFiniteLoss() : Error("PPO loss or gradient is not finite; update aborted") {}
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

struct PolicyArchitecture {
  std::vector<int> hidden{64, 64};
  std::string activation = "tanh";

  bool operator==(const PolicyArchitecture&) const = default;
};

// Policy (2L logits) and value (scalar) networks over the observation of
// length (L*W + K + 1) * C. Bound to the (L, W, K, C) it was built for.
struct PolicyParams {
  int lanes = 0;
  int width = 0;
  int lookahead = 5;
  int num_colors = 0;
  PolicyArchitecture architecture;
  MaskVariant mask = MaskVariant::All;
  std::vector<double> policy_weights;
  std::vector<double> value_weights;

  [[nodiscard]] int input_size() const;
  [[nodiscard]] int action_count() const { return 2 * lanes; }
  [[nodiscard]] nn::Mlp policy_net() const;
  [[nodiscard]] nn::Mlp value_net() const;
  // Throws DimensionMismatch when `instance` does not fit.
  void check_dimensions(const Instance& instance) const;
  // Throws on non-finite weights or wrong parameter counts.
  void validate() const;

  bool operator==(const PolicyParams&) const = default;
};

PolicyParams init_policy(int lanes, int width, int lookahead, int num_colors, const PolicyArchitecture& arch,
                         MaskVariant mask, std::uint64_t seed);

std::vector<double> policy_logits(const PolicyParams& policy, std::span<const double> observation);
double policy_value(const PolicyParams& policy, std::span<const double> observation);

// Softmax over admitted actions; masked entries are exactly 0.
std::vector<double> masked_distribution(std::span<const double> logits, const ActionMask& mask);

// Base-2 entropy over admitted actions.
double masked_entropy(std::span<const double> probabilities);

struct PPOConfig {
  double clip_epsilon = 0.2;
  double value_coef = 0.5;    // c1
  double entropy_coef = 0.01; // c2
  std::size_t horizon = 2048;
  double learning_rate = 3e-4;
  int epochs = 10;
  std::size_t minibatch_size = 64;
  std::uint64_t total_timesteps = 200'000;
  MaskVariant mask = MaskVariant::All;
  std::uint64_t seed = 0;
  int lookahead = 5;
  PolicyArchitecture architecture;
  double max_grad_norm = 0.5;
  bool normalize_advantages = true;
  // Off: plain suffix returns minus value. On: generalized advantage estimate.
  bool use_gae = false;
  double gamma = 1.0;
  double gae_lambda = 0.95;
  // Per-episode step cap (only reachable when invalid actions are admitted);
  // 0 means 10 * (upstream + buffer size).
  std::size_t max_episode_steps = 0;

  void validate() const;
};

struct Step {
  std::vector<double> observation;
  ActionMask mask;
  int action = 0;
  double reward = 0.0;
  std::vector<double> logits;  // snapshot at collection time
  double log_prob = 0.0;       // log pi_old(action)
  double value = 0.0;          // V_old(s)
};

struct Trajectory {
  std::vector<Step> steps;
  std::vector<double> returns;
  std::vector<double> advantages;
  std::vector<double> episode_rewards;
  std::vector<int> episode_color_changes;
  std::size_t invalid_rewards = 0;  // count of reward == invalid
  std::size_t truncated_episodes = 0;
};

// R_t = r_t + gamma * R_{t+1} within one episode.
std::vector<double> suffix_returns(std::span<const double> rewards, double gamma = 1.0);

using InstanceSampler = std::function<Instance(std::mt19937_64&)>;

// Rolls out complete episodes until at least `horizon` steps are collected.
Trajectory collect_rollouts(const PolicyParams& policy, const InstanceSampler& sampler, std::size_t horizon,
                            std::mt19937_64& rng, const PPOConfig& config);

// Weights of the three loss terms in the optimized objective.
struct LossWeights {
  double clip = 1.0;
  double value = 0.5;
  double entropy = 0.01;
};

struct ObjectiveValue {
  double clip = 0.0;     // mean clipped surrogate
  double value = 0.0;    // mean (R - V)^2
  double entropy = 0.0;  // mean base-2 entropy
  double total = 0.0;    // weights.clip*clip - weights.value*value + weights.entropy*entropy
};

double clip_ratio(double ratio, double epsilon);
// min(r A, clip(r, 1-eps, 1+eps) A)
double clipped_surrogate(double ratio, double advantage, double epsilon);

// Objective over `indices` of `batch`, with `advantages` per step (already
// normalized if desired). When given, gradients of `total` (ascent direction)
// are accumulated into the gradient vectors.
ObjectiveValue ppo_objective(const PolicyParams& policy, const Trajectory& batch, std::span<const std::size_t> indices,
                             std::span<const double> advantages, double epsilon, const LossWeights& weights,
                             std::vector<double>* grad_policy = nullptr, std::vector<double>* grad_value = nullptr);

struct Optimizer {
  nn::Adam policy;
  nn::Adam value;
};

Optimizer make_optimizer(const PolicyParams& policy, double learning_rate);

struct UpdateStats {
  double mean_objective = 0.0;
  std::size_t minibatches = 0;
};

// Ascends the objective with Adam over the configured epochs and minibatches.
UpdateStats ppo_update(PolicyParams& policy, const Trajectory& batch, const PPOConfig& config, Optimizer& optimizer,
                       std::mt19937_64& rng);

struct CurvePoint {
  std::uint64_t timesteps = 0;
  double mean_episode_reward = 0.0;
  double mean_color_changes = 0.0;
  std::size_t episodes = 0;
  std::size_t invalid_rewards = 0;
};

struct TrainResult {
  PolicyParams policy;
  std::vector<CurvePoint> curve;
  std::size_t invalid_rewards = 0;
  std::uint64_t timesteps = 0;
};

struct TrainTask {
  int num_colors = 5;
  int lanes = 2;
  int width = 2;
  int seq_len = 20;
  ColorDistribution distribution;
  bool fill = false;
};

InstanceSampler random_instance_sampler(const TrainTask& task);

// Called after every update; e.g. to write checkpoints.
using TrainCallback = std::function<void(const PolicyParams&, const CurvePoint&)>;

TrainResult train(const PPOConfig& config, const TrainTask& task, const TrainCallback& callback = {});
TrainResult train(const PPOConfig& config, const TrainTask& task, const InstanceSampler& sampler,
                  const TrainCallback& callback = {});

// Argmax of the masked distribution, ties to the lowest action index.
// Actions illegal in the state (possible only with mask `none`) are skipped
// over, since applying them would change nothing.
Solution apply_deterministic(const PolicyParams& policy, const Instance& instance);

struct SamplingBudget {
  std::optional<std::size_t> samples;
  std::optional<double> seconds;
};

// Best of the deterministic rollout and repeated sampled rollouts.
Solution apply_sampling(const PolicyParams& policy, const Instance& instance, const SamplingBudget& budget,
                        std::uint64_t seed);

// Uniform choice among the actions admitted by full_mask(variant), restricted
// to legal actions.
Solution random_policy_solve(const Instance& instance, MaskVariant variant, std::mt19937_64& rng);

}  // namespace paintshop
