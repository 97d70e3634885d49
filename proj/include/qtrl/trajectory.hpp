#pragma once

#include <span>
#include <vector>

#include "qtrl/dense_net.hpp"
#include "qtrl/envs.hpp"
#include "qtrl/rng.hpp"

namespace qtrl::rl {

// One finished episode. All per-step sequences share the same length.
struct Trajectory {
  std::vector<std::vector<double>> observations;
  std::vector<int> actions;
  std::vector<double> rewards;
  std::vector<double> returns;             // discounted returns-to-go
  std::vector<double> normalized_returns;  // episode-standardized

  int length() const { return static_cast<int>(rewards.size()); }
  double total_reward() const;
};

// R_t = sum_{u>=t} gamma^(u-t) r_u by backward recursion.
std::vector<double> compute_returns(std::span<const double> rewards, double gamma);

// (R - mean) / (population stddev + eps); the zero vector when the stddev
// itself falls below eps.
std::vector<double> normalize_returns(std::span<const double> returns, double eps);

struct LossGrad {
  double loss = 0.0;
  nn::FlatWeights grad_theta;
};

// Policy-gradient episode loss: -sum_t log pi(a_t|s_t) * Rn_t, summed (not
// averaged) over timesteps. Log-probabilities come from a log-sum-exp so
// large logit gaps cannot underflow. The gradient uses the fused
// softmax/NLL rule (prob - onehot) * Rn_t per step.
LossGrad episode_loss_and_grad_theta(const nn::DenseNetSpec& policy_spec,
                                     std::span<const double> theta,
                                     const Trajectory& trajectory);

// Plays one episode sampling actions from the softmax policy and fills
// returns and normalized returns.
Trajectory rollout(envs::Environment& env, const nn::DenseNetSpec& policy_spec,
                   std::span<const double> theta, Rng& rng, double gamma,
                   double norm_eps);

struct EvalStats {
  double mean_reward = 0.0;
  double min_reward = 0.0;
  double max_reward = 0.0;
  int episodes = 0;
};

// Greedy evaluation: argmax action, ties broken by the lowest index. Pure
// classical path; runs without the quantum simulator in the build.
EvalStats evaluate(const nn::DenseNetSpec& policy_spec,
                   std::span<const double> theta, envs::Environment& env,
                   int episodes, std::uint64_t seed);

int greedy_action(std::span<const double> logits);

}  // namespace qtrl::rl
