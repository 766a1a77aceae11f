#include "paintshop/anneal.hpp"

#include <cmath>
#include <utility>

#include "paintshop/heuristics.hpp"

namespace paintshop {

void AnnealConfig::validate() const {
  if (!(t0 > 0.0)) throw Error("anneal: t0 must be positive");
  if (!(beta > 0.0 && beta < 1.0)) throw Error("anneal: beta must lie in (0, 1)");
  if (!(time_scale >= 1.0)) throw Error("anneal: time_scale must be >= 1");
  if (swaps_per_step < 1) throw Error("anneal: swaps_per_step must be >= 1");
}

double AnnealConfig::temperature(std::uint64_t iteration) const {
  return t0 * std::pow(beta, static_cast<double>(iteration) / time_scale);
}

std::vector<Segment> segments(const std::vector<Action>& actions) {
  std::vector<Segment> out;
  for (std::size_t i = 0; i < actions.size(); ++i) {
    if (out.empty() || out.back().kind != actions[i].kind) {
      out.push_back({i, 1, actions[i].kind});
    } else {
      ++out.back().length;
    }
  }
  return out;
}

std::vector<Action> perturb(const std::vector<Action>& actions, std::mt19937_64& rng, int swaps) {
  std::vector<Action> out = actions;
  std::vector<Segment> candidates;
  for (const auto& s : segments(actions)) {
    if (s.length >= 2) candidates.push_back(s);
  }
  if (candidates.empty()) return out;
  for (int k = 0; k < swaps; ++k) {
    std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
    const Segment& s = candidates[pick(rng)];
    std::uniform_int_distribution<std::size_t> first(0, s.length - 1);
    std::uniform_int_distribution<std::size_t> second(0, s.length - 2);
    const std::size_t a = first(rng);
    std::size_t b = second(rng);
    if (b >= a) ++b;
    std::swap(out[s.start + a], out[s.start + b]);
  }
  return out;
}

double acceptance_probability(int delta, double temperature) {
  if (delta <= 0) return 1.0;
  return std::exp(-static_cast<double>(delta) / temperature);
}

AnnealResult simulated_annealing(const Instance& instance, const Solution& init, const AnnealConfig& config) {
  config.validate();
  Stopwatch clock;
  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  AnnealResult result;
  Solution current = replay(instance, init.actions);
  Solution best = current;
  for (std::uint64_t i = 0;; ++i) {
    if (config.max_iterations && i >= *config.max_iterations) break;
    if (config.cutoff_seconds && (i & 63U) == 0 && clock.seconds() >= *config.cutoff_seconds) break;
    if (!config.max_iterations && !config.cutoff_seconds) break;

    std::vector<Action> candidate = perturb(current.actions, rng, config.swaps_per_step);
    Solution next = replay(instance, candidate);
    const int delta = next.color_changes - current.color_changes;
    const double t = config.temperature(i);
    if (delta <= 0 || unit(rng) < acceptance_probability(delta, t)) {
      current = std::move(next);
      ++result.accepted;
      if (current.color_changes < best.color_changes) best = current;
    }
    ++result.iterations;
    if (config.record_trace) result.trace.push_back(best.color_changes);
    // Nothing left to permute.
    if (segments(current.actions).size() == current.actions.size()) break;
  }
  best.producer = "sa";
  best.runtime_seconds = clock.seconds();
  result.solution = std::move(best);
  return result;
}

AnnealResult simulated_annealing(const Instance& instance, const AnnealConfig& config) {
  return simulated_annealing(instance, greedy_solve(instance), config);
}

}  // namespace paintshop
