#include "paintshop/learn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>

namespace paintshop {

namespace {

constexpr double kLn2 = 0.69314718055994530942;

std::vector<int> layer_sizes(int input, const PolicyArchitecture& arch, int output) {
  std::vector<int> sizes{input};
  sizes.insert(sizes.end(), arch.hidden.begin(), arch.hidden.end());
  sizes.push_back(output);
  return sizes;
}

// log softmax over admitted entries; masked entries get -inf.
std::vector<double> masked_log_softmax(std::span<const double> logits, const ActionMask& mask) {
  if (logits.size() != mask.size()) throw Error("logits and mask differ in size");
  double hi = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < logits.size(); ++j) {
    if (mask[j]) hi = std::max(hi, logits[j]);
  }
  if (!mask.any()) throw AllMasked();
  double sum = 0.0;
  for (std::size_t j = 0; j < logits.size(); ++j) {
    if (mask[j]) sum += std::exp(logits[j] - hi);
  }
  const double log_sum = std::log(sum) + hi;
  std::vector<double> out(logits.size(), -std::numeric_limits<double>::infinity());
  for (std::size_t j = 0; j < logits.size(); ++j) {
    if (mask[j]) out[j] = logits[j] - log_sum;
  }
  return out;
}

// Index drawn from `weights` (need not sum to one); `fallback` if all zero.
int draw_index(std::span<const double> weights, std::mt19937_64& rng, int fallback) {
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(total > 0.0)) return fallback;
  const double u = std::uniform_real_distribution<double>(0.0, total)(rng);
  double acc = 0.0;
  int last = fallback;
  for (std::size_t j = 0; j < weights.size(); ++j) {
    if (weights[j] <= 0.0) continue;
    acc += weights[j];
    last = static_cast<int>(j);
    if (u < acc) return last;
  }
  return last;
}

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

ActionMask policy_mask(const ShopState& state, MaskVariant variant) { return full_mask(state, variant); }

std::size_t episode_cap(const PPOConfig& config, const Instance& inst) {
  if (config.max_episode_steps > 0) return config.max_episode_steps;
  return 10 * (inst.total_cars() + static_cast<std::size_t>(inst.buffer_size()));
}

// Probabilities restricted to legal actions; used at application time.
std::vector<double> legal_weights(const ShopState& state, std::span<const double> probs) {
  std::vector<double> w(probs.begin(), probs.end());
  for (std::size_t j = 0; j < w.size(); ++j) {
    if (!legal(state, Action::from_flat(static_cast<int>(j), state.lanes()))) w[j] = 0.0;
  }
  return w;
}

int first_legal(const ShopState& state) {
  for (int j = 0; j < 2 * state.lanes(); ++j) {
    if (legal(state, Action::from_flat(j, state.lanes()))) return j;
  }
  throw Error("no legal action in a non-terminal state");
}

Solution rollout(const PolicyParams& policy, const Instance& instance, std::mt19937_64* rng, const char* producer) {
  policy.check_dimensions(instance);
  Stopwatch clock;
  auto inst = std::make_shared<const Instance>(instance);
  ShopState state = new_state(inst);
  std::vector<Action> actions;
  while (!is_terminal(state)) {
    const auto obs = encode_observation(state, policy.lookahead);
    const auto probs = masked_distribution(policy_logits(policy, obs), policy_mask(state, policy.mask));
    const auto weights = legal_weights(state, probs);
    int pick = -1;
    if (rng == nullptr) {
      double best = -1.0;
      for (std::size_t j = 0; j < weights.size(); ++j) {
        if (!legal(state, Action::from_flat(static_cast<int>(j), state.lanes()))) continue;
        if (weights[j] > best) {
          best = weights[j];
          pick = static_cast<int>(j);
        }
      }
    } else {
      pick = draw_index(weights, *rng, first_legal(state));
    }
    const Action a = Action::from_flat(pick, state.lanes());
    state.advance(a);
    actions.push_back(a);
  }
  return make_solution(instance, std::move(actions), producer, clock.seconds());
}

}  // namespace

int PolicyParams::input_size() const {
  return static_cast<int>(observation_size(lanes, width, lookahead, num_colors));
}

nn::Mlp PolicyParams::policy_net() const { return nn::Mlp(layer_sizes(input_size(), architecture, action_count())); }

nn::Mlp PolicyParams::value_net() const { return nn::Mlp(layer_sizes(input_size(), architecture, 1)); }

void PolicyParams::check_dimensions(const Instance& instance) const {
  if (instance.lanes != lanes || instance.width != width || instance.num_colors != num_colors) {
    throw DimensionMismatch("policy trained for L=" + std::to_string(lanes) + " W=" + std::to_string(width) +
                            " C=" + std::to_string(num_colors) + ", instance has L=" +
                            std::to_string(instance.lanes) + " W=" + std::to_string(instance.width) +
                            " C=" + std::to_string(instance.num_colors));
  }
}

void PolicyParams::validate() const {
  if (lanes < 1 || width < 1 || num_colors < 1 || lookahead < 0) throw Error("policy: invalid dimensions");
  if (architecture.activation != "tanh") throw Error("policy: unsupported activation " + architecture.activation);
  if (policy_weights.size() != policy_net().parameter_count() ||
      value_weights.size() != value_net().parameter_count()) {
    throw Error("policy: weight count does not match the architecture");
  }
  if (!all_finite(policy_weights) || !all_finite(value_weights)) throw Error("policy: non-finite weights");
}

PolicyParams init_policy(int lanes, int width, int lookahead, int num_colors, const PolicyArchitecture& arch,
                         MaskVariant mask, std::uint64_t seed) {
  PolicyParams p;
  p.lanes = lanes;
  p.width = width;
  p.lookahead = lookahead;
  p.num_colors = num_colors;
  p.architecture = arch;
  p.mask = mask;
  std::mt19937_64 rng(seed);
  const nn::Mlp pnet = p.policy_net();
  const nn::Mlp vnet = p.value_net();
  p.policy_weights.assign(pnet.parameter_count(), 0.0);
  p.value_weights.assign(vnet.parameter_count(), 0.0);
  pnet.initialize(p.policy_weights, rng, 0.01);
  vnet.initialize(p.value_weights, rng, 1.0);
  return p;
}

std::vector<double> policy_logits(const PolicyParams& policy, std::span<const double> observation) {
  return policy.policy_net().forward(policy.policy_weights, observation);
}

double policy_value(const PolicyParams& policy, std::span<const double> observation) {
  return policy.value_net().forward(policy.value_weights, observation)[0];
}

std::vector<double> masked_distribution(std::span<const double> logits, const ActionMask& mask) {
  std::vector<double> p = masked_log_softmax(logits, mask);
  for (std::size_t j = 0; j < p.size(); ++j) p[j] = mask[j] ? std::exp(p[j]) : 0.0;
  return p;
}

double masked_entropy(std::span<const double> probabilities) {
  double h = 0.0;
  for (double p : probabilities) {
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h;
}

void PPOConfig::validate() const {
  if (!(clip_epsilon > 0.0)) throw Error("ppo: clip epsilon must be positive");
  if (value_coef < 0.0 || entropy_coef < 0.0) throw Error("ppo: coefficients must be non-negative");
  if (horizon < 1) throw Error("ppo: horizon must be >= 1");
  if (!(learning_rate > 0.0)) throw Error("ppo: learning rate must be positive");
  if (epochs < 1) throw Error("ppo: epochs must be >= 1");
  if (minibatch_size < 1) throw Error("ppo: minibatch size must be >= 1");
  if (lookahead < 0) throw Error("ppo: lookahead must be >= 0");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw Error("ppo: gamma must lie in (0, 1]");
}

std::vector<double> suffix_returns(std::span<const double> rewards, double gamma) {
  std::vector<double> out(rewards.size());
  double acc = 0.0;
  for (std::size_t i = rewards.size(); i-- > 0;) {
    acc = rewards[i] + gamma * acc;
    out[i] = acc;
  }
  return out;
}

Trajectory collect_rollouts(const PolicyParams& policy, const InstanceSampler& sampler, std::size_t horizon,
                            std::mt19937_64& rng, const PPOConfig& config) {
  const RewardModel model;
  const nn::Mlp pnet = policy.policy_net();
  const nn::Mlp vnet = policy.value_net();
  Trajectory traj;
  while (traj.steps.size() < horizon) {
    auto inst = std::make_shared<const Instance>(sampler(rng));
    policy.check_dimensions(*inst);
    ShopState state = new_state(inst);
    const std::size_t cap = episode_cap(config, *inst);
    const std::size_t first = traj.steps.size();
    while (!is_terminal(state) && traj.steps.size() - first < cap) {
      Step step;
      step.observation = encode_observation(state, policy.lookahead);
      step.mask = policy_mask(state, policy.mask);
      step.logits = pnet.forward(policy.policy_weights, step.observation);
      const auto logp = masked_log_softmax(step.logits, step.mask);
      std::vector<double> probs(logp.size());
      for (std::size_t j = 0; j < logp.size(); ++j) probs[j] = step.mask[j] ? std::exp(logp[j]) : 0.0;
      int fallback = 0;
      while (!step.mask[static_cast<std::size_t>(fallback)]) ++fallback;
      step.action = draw_index(probs, rng, fallback);
      step.log_prob = logp[static_cast<std::size_t>(step.action)];
      step.value = vnet.forward(policy.value_weights, step.observation)[0];
      step.reward = state.advance(Action::from_flat(step.action, policy.lanes), model);
      if (step.reward == model.invalid) ++traj.invalid_rewards;
      traj.steps.push_back(std::move(step));
    }
    const bool terminal = is_terminal(state);
    if (!terminal) ++traj.truncated_episodes;
    const std::size_t len = traj.steps.size() - first;
    std::vector<double> rewards(len);
    std::vector<double> values(len);
    for (std::size_t i = 0; i < len; ++i) {
      rewards[i] = traj.steps[first + i].reward;
      values[i] = traj.steps[first + i].value;
    }
    if (config.use_gae) {
      double gae = 0.0;
      std::vector<double> adv(len);
      for (std::size_t i = len; i-- > 0;) {
        const double next_value = i + 1 < len ? values[i + 1] : 0.0;
        const double delta = rewards[i] + config.gamma * next_value - values[i];
        gae = delta + config.gamma * config.gae_lambda * gae;
        adv[i] = gae;
      }
      for (std::size_t i = 0; i < len; ++i) {
        traj.advantages.push_back(adv[i]);
        traj.returns.push_back(adv[i] + values[i]);
      }
    } else {
      const auto ret = suffix_returns(rewards, config.gamma);
      for (std::size_t i = 0; i < len; ++i) {
        traj.returns.push_back(ret[i]);
        traj.advantages.push_back(ret[i] - values[i]);
      }
    }
    traj.episode_rewards.push_back(std::accumulate(rewards.begin(), rewards.end(), 0.0));
    traj.episode_color_changes.push_back(color_changes(state.downstream()));
  }
  return traj;
}

double clip_ratio(double ratio, double epsilon) { return std::clamp(ratio, 1.0 - epsilon, 1.0 + epsilon); }

double clipped_surrogate(double ratio, double advantage, double epsilon) {
  return std::min(ratio * advantage, clip_ratio(ratio, epsilon) * advantage);
}

ObjectiveValue ppo_objective(const PolicyParams& policy, const Trajectory& batch, std::span<const std::size_t> indices,
                             std::span<const double> advantages, double epsilon, const LossWeights& weights,
                             std::vector<double>* grad_policy, std::vector<double>* grad_value) {
  ObjectiveValue out;
  if (indices.empty()) return out;
  const nn::Mlp pnet = policy.policy_net();
  const nn::Mlp vnet = policy.value_net();
  const double n = static_cast<double>(indices.size());
  nn::Mlp::Cache pcache;
  nn::Mlp::Cache vcache;
  const std::size_t actions = static_cast<std::size_t>(policy.action_count());
  std::vector<double> dlogits(actions);
  for (std::size_t idx : indices) {
    const Step& s = batch.steps[idx];
    const double adv = advantages[idx];
    pnet.forward(policy.policy_weights, s.observation, pcache);
    const std::vector<double>& logits = pcache.activations.back();
    const auto logp = masked_log_softmax(logits, s.mask);
    std::vector<double> probs(actions);
    double h_nat = 0.0;
    for (std::size_t j = 0; j < actions; ++j) {
      probs[j] = s.mask[j] ? std::exp(logp[j]) : 0.0;
      if (probs[j] > 0.0) h_nat -= probs[j] * logp[j];
    }
    const auto a = static_cast<std::size_t>(s.action);
    const double ratio = std::exp(logp[a] - s.log_prob);
    const double unclipped = ratio * adv;
    const double clipped = clip_ratio(ratio, epsilon) * adv;
    out.clip += std::min(unclipped, clipped);
    out.entropy += h_nat / kLn2;

    vnet.forward(policy.value_weights, s.observation, vcache);
    const double v = vcache.activations.back()[0];
    const double err = batch.returns[idx] - v;
    out.value += err * err;

    if (grad_policy != nullptr) {
      const bool unclipped_active = unclipped <= clipped;
      for (std::size_t j = 0; j < actions; ++j) {
        double g = 0.0;
        if (s.mask[j]) {
          if (unclipped_active) g += weights.clip * adv * ratio * ((j == a ? 1.0 : 0.0) - probs[j]);
          if (probs[j] > 0.0) g += weights.entropy * (-probs[j] * (logp[j] + h_nat) / kLn2);
        }
        dlogits[j] = g / n;
      }
      pnet.backward(policy.policy_weights, pcache, dlogits, *grad_policy);
    }
    if (grad_value != nullptr) {
      const double dv = weights.value * 2.0 * err / n;
      vnet.backward(policy.value_weights, vcache, std::span<const double>(&dv, 1), *grad_value);
    }
  }
  out.clip /= n;
  out.value /= n;
  out.entropy /= n;
  out.total = weights.clip * out.clip - weights.value * out.value + weights.entropy * out.entropy;
  return out;
}

Optimizer make_optimizer(const PolicyParams& policy, double learning_rate) {
  return {nn::Adam(policy.policy_weights.size(), learning_rate), nn::Adam(policy.value_weights.size(), learning_rate)};
}

UpdateStats ppo_update(PolicyParams& policy, const Trajectory& batch, const PPOConfig& config, Optimizer& optimizer,
                       std::mt19937_64& rng) {
  const std::size_t n = batch.steps.size();
  if (n == 0) throw Error("ppo_update: empty batch");
  std::vector<double> adv = batch.advantages;
  if (config.normalize_advantages && n > 1) {
    const double mean = std::accumulate(adv.begin(), adv.end(), 0.0) / static_cast<double>(n);
    double var = 0.0;
    for (double a : adv) var += (a - mean) * (a - mean);
    const double sd = std::sqrt(var / static_cast<double>(n));
    for (double& a : adv) a = (a - mean) / (sd + 1e-8);
  }
  const LossWeights weights{1.0, config.value_coef, config.entropy_coef};
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<double> gp(policy.policy_weights.size());
  std::vector<double> gv(policy.value_weights.size());
  UpdateStats stats;
  double objective_sum = 0.0;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < n; start += config.minibatch_size) {
      const std::size_t len = std::min(config.minibatch_size, n - start);
      std::fill(gp.begin(), gp.end(), 0.0);
      std::fill(gv.begin(), gv.end(), 0.0);
      const auto obj = ppo_objective(policy, batch, std::span<const std::size_t>(order).subspan(start, len), adv,
                                     config.clip_epsilon, weights, &gp, &gv);
      if (!std::isfinite(obj.total) || !all_finite(gp) || !all_finite(gv)) throw NonFiniteLoss();
      // descent on the negated objective
      double norm = 0.0;
      for (double& g : gp) {
        g = -g;
        norm += g * g;
      }
      for (double& g : gv) {
        g = -g;
        norm += g * g;
      }
      norm = std::sqrt(norm);
      if (config.max_grad_norm > 0.0 && norm > config.max_grad_norm) {
        const double scale = config.max_grad_norm / norm;
        for (double& g : gp) g *= scale;
        for (double& g : gv) g *= scale;
      }
      optimizer.policy.step(policy.policy_weights, gp);
      optimizer.value.step(policy.value_weights, gv);
      objective_sum += obj.total;
      ++stats.minibatches;
    }
  }
  stats.mean_objective = objective_sum / static_cast<double>(stats.minibatches);
  return stats;
}

InstanceSampler random_instance_sampler(const TrainTask& task) {
  return [task](std::mt19937_64& rng) {
    return generate_instance(task.num_colors, task.seq_len, task.lanes, task.width, task.distribution, rng(),
                             task.fill);
  };
}

TrainResult train(const PPOConfig& config, const TrainTask& task, const TrainCallback& callback) {
  return train(config, task, random_instance_sampler(task), callback);
}

TrainResult train(const PPOConfig& config, const TrainTask& task, const InstanceSampler& sampler,
                  const TrainCallback& callback) {
  config.validate();
  TrainResult result;
  result.policy = init_policy(task.lanes, task.width, config.lookahead, task.num_colors, config.architecture,
                              config.mask, config.seed);
  Optimizer optimizer = make_optimizer(result.policy, config.learning_rate);
  std::mt19937_64 rng(config.seed ^ 0x9E3779B97F4A7C15ULL);
  while (result.timesteps < config.total_timesteps) {
    Trajectory traj = collect_rollouts(result.policy, sampler, config.horizon, rng, config);
    result.timesteps += traj.steps.size();
    result.invalid_rewards += traj.invalid_rewards;
    ppo_update(result.policy, traj, config, optimizer, rng);
    CurvePoint point;
    point.timesteps = result.timesteps;
    point.episodes = traj.episode_rewards.size();
    point.mean_episode_reward = std::accumulate(traj.episode_rewards.begin(), traj.episode_rewards.end(), 0.0) /
                                static_cast<double>(point.episodes);
    point.mean_color_changes =
        std::accumulate(traj.episode_color_changes.begin(), traj.episode_color_changes.end(), 0.0) /
        static_cast<double>(point.episodes);
    point.invalid_rewards = traj.invalid_rewards;
    result.curve.push_back(point);
    if (callback) callback(result.policy, point);
  }
  return result;
}

Solution apply_deterministic(const PolicyParams& policy, const Instance& instance) {
  return rollout(policy, instance, nullptr, "policy-det");
}

Solution apply_sampling(const PolicyParams& policy, const Instance& instance, const SamplingBudget& budget,
                        std::uint64_t seed) {
  Stopwatch clock;
  Solution best = apply_deterministic(policy, instance);
  std::mt19937_64 rng(seed);
  for (std::size_t k = 0;; ++k) {
    if (budget.samples && k >= *budget.samples) break;
    if (budget.seconds && clock.seconds() >= *budget.seconds) break;
    if (!budget.samples && !budget.seconds) break;
    Solution s = rollout(policy, instance, &rng, "policy-sample");
    if (s.color_changes < best.color_changes) best = std::move(s);
    if (best.color_changes == 0) break;
  }
  best.producer = "policy-sample";
  best.runtime_seconds = clock.seconds();
  return best;
}

Solution random_policy_solve(const Instance& instance, MaskVariant variant, std::mt19937_64& rng) {
  Stopwatch clock;
  auto inst = std::make_shared<const Instance>(instance);
  ShopState state = new_state(inst);
  std::vector<Action> actions;
  while (!is_terminal(state)) {
    const ActionMask mask = full_mask(state, variant);
    std::vector<double> w(mask.size());
    for (std::size_t j = 0; j < w.size(); ++j) w[j] = mask[j] ? 1.0 : 0.0;
    w = legal_weights(state, w);
    const Action a = Action::from_flat(draw_index(w, rng, first_legal(state)), state.lanes());
    state.advance(a);
    actions.push_back(a);
  }
  return make_solution(instance, std::move(actions), "random", clock.seconds());
}

}  // namespace paintshop
