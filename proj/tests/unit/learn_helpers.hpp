#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "paintshop/learn.hpp"

namespace testutil {

using namespace paintshop;

inline double norm(const std::vector<double>& v) { return std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0)); }

struct ToyBatch {
  PolicyParams policy;
  Trajectory batch;
  std::vector<double> adv;
};

// Rollouts on C=3, 2x2, N=6 with perturbed weights and stale log-probs, so
// that ratios land on both sides of the clip range.
inline ToyBatch toy_batch(std::uint64_t seed, std::size_t steps) {
  PPOConfig cfg;
  cfg.architecture.hidden = {8, 8};
  cfg.lookahead = 2;
  TrainTask task;
  task.num_colors = 3;
  task.lanes = 2;
  task.width = 2;
  task.seq_len = 6;

  ToyBatch toy;
  toy.policy = init_policy(2, 2, 2, 3, cfg.architecture, MaskVariant::Inv, seed);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 0.5);
  for (double& x : toy.policy.policy_weights) x += noise(rng);
  toy.batch = collect_rollouts(toy.policy, random_instance_sampler(task), steps, rng, cfg);
  toy.batch.steps.resize(steps);
  toy.batch.returns.resize(steps);
  std::uniform_real_distribution<double> shift(-0.4, 0.4);
  toy.adv.resize(steps);
  for (std::size_t i = 0; i < steps; ++i) {
    toy.batch.steps[i].log_prob += shift(rng);
    toy.adv[i] = (i % 2 == 0 ? 1.0 : -1.0) * (0.5 + shift(rng));
  }
  return toy;
}

// ||analytic - central difference|| / max norm over all policy and value weights.
inline double gradient_error(PolicyParams policy, const Trajectory& batch, const std::vector<double>& adv,
                             const LossWeights& w, double eps) {
  std::vector<std::size_t> idx(batch.steps.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::vector<double> gp(policy.policy_weights.size(), 0.0);
  std::vector<double> gv(policy.value_weights.size(), 0.0);
  ppo_objective(policy, batch, idx, adv, eps, w, &gp, &gv);
  std::vector<double> analytic = gp;
  analytic.insert(analytic.end(), gv.begin(), gv.end());

  std::vector<double> numeric;
  const double h = 1e-6;
  for (auto* weights : {&policy.policy_weights, &policy.value_weights}) {
    for (double& x : *weights) {
      const double keep = x;
      x = keep + h;
      const double up = ppo_objective(policy, batch, idx, adv, eps, w).total;
      x = keep - h;
      const double down = ppo_objective(policy, batch, idx, adv, eps, w).total;
      x = keep;
      numeric.push_back((up - down) / (2 * h));
    }
  }
  std::vector<double> diff(analytic.size());
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = analytic[i] - numeric[i];
  const double scale = std::max(norm(analytic), norm(numeric));
  return scale > 0.0 ? norm(diff) / scale : norm(diff);
}

}  // namespace testutil
