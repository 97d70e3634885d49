#include "qtrl/trajectory.hpp"

#include <cmath>
#include <numeric>

#include "qtrl/errors.hpp"

namespace qtrl::rl {

double Trajectory::total_reward() const {
  return std::accumulate(rewards.begin(), rewards.end(), 0.0);
}

std::vector<double> compute_returns(std::span<const double> rewards, double gamma) {
  if (rewards.empty()) throw ConfigError("compute_returns needs a non-empty episode");
  std::vector<double> returns(rewards.size());
  double acc = 0.0;
  for (std::size_t t = rewards.size(); t-- > 0;) {
    acc = rewards[t] + gamma * acc;
    returns[t] = acc;
  }
  return returns;
}

std::vector<double> normalize_returns(std::span<const double> returns, double eps) {
  if (returns.empty()) throw ConfigError("normalize_returns needs a non-empty episode");
  const double n = static_cast<double>(returns.size());
  double mean = 0.0;
  for (double r : returns) mean += r;
  mean /= n;
  double var = 0.0;
  for (double r : returns) var += (r - mean) * (r - mean);
  const double sigma = std::sqrt(var / n);

  std::vector<double> out(returns.size(), 0.0);
  if (sigma < eps) return out;
  for (std::size_t t = 0; t < returns.size(); ++t)
    out[t] = (returns[t] - mean) / (sigma + eps);
  return out;
}

namespace {

double log_softmax_at(std::span<const double> logits, int index) {
  double max = logits[0];
  for (double z : logits) max = std::max(max, z);
  double sum = 0.0;
  for (double z : logits) sum += std::exp(z - max);
  return logits[static_cast<std::size_t>(index)] - max - std::log(sum);
}

}  // namespace

LossGrad episode_loss_and_grad_theta(const nn::DenseNetSpec& policy_spec,
                                     std::span<const double> theta,
                                     const Trajectory& trajectory) {
  const int T = trajectory.length();
  if (T < 1) throw ConfigError("episode loss needs a non-empty trajectory");
  if (static_cast<int>(trajectory.normalized_returns.size()) != T ||
      static_cast<int>(trajectory.actions.size()) != T ||
      static_cast<int>(trajectory.observations.size()) != T)
    throw ConfigError("trajectory sequences have inconsistent lengths");

  LossGrad out;
  out.grad_theta.assign(theta.size(), 0.0);
  const int action_dim = policy_spec.layer_sizes.back();

  for (int t = 0; t < T; ++t) {
    const double weight = trajectory.normalized_returns[static_cast<std::size_t>(t)];
    const int action = trajectory.actions[static_cast<std::size_t>(t)];
    const std::vector<double> logits =
        nn::forward_logits(policy_spec, theta, trajectory.observations[static_cast<std::size_t>(t)]);
    const double logp = log_softmax_at(logits, action);
    if (!std::isfinite(logp))
      throw NumericalError("log probability underflow in episode loss");
    out.loss += -logp * weight;

    if (weight == 0.0) continue;  // zero upstream contributes nothing
    std::vector<double> dlogits = nn::softmax(logits);
    for (int a = 0; a < action_dim; ++a)
      dlogits[static_cast<std::size_t>(a)] =
          (dlogits[static_cast<std::size_t>(a)] - (a == action ? 1.0 : 0.0)) * weight;
    const nn::BackwardResult bw = nn::backward_from_logits(
        policy_spec, theta, trajectory.observations[static_cast<std::size_t>(t)], dlogits);
    for (std::size_t w = 0; w < out.grad_theta.size(); ++w)
      out.grad_theta[w] += bw.grad_weights[w];
  }
  return out;
}

Trajectory rollout(envs::Environment& env, const nn::DenseNetSpec& policy_spec,
                   std::span<const double> theta, Rng& rng, double gamma,
                   double norm_eps) {
  Trajectory traj;
  std::vector<double> obs = env.reset(rng);
  while (true) {
    const std::vector<double> probs = nn::forward(policy_spec, theta, obs);
    const int action = rng.categorical(probs);
    envs::StepResult sr = env.step(action);
    traj.observations.push_back(std::move(obs));
    traj.actions.push_back(action);
    traj.rewards.push_back(sr.reward);
    if (sr.done) break;
    obs = std::move(sr.observation);
  }
  traj.returns = compute_returns(traj.rewards, gamma);
  traj.normalized_returns = normalize_returns(traj.returns, norm_eps);
  return traj;
}

int greedy_action(std::span<const double> logits) {
  int best = 0;
  for (std::size_t a = 1; a < logits.size(); ++a)
    if (logits[a] > logits[static_cast<std::size_t>(best)]) best = static_cast<int>(a);
  return best;
}

EvalStats evaluate(const nn::DenseNetSpec& policy_spec,
                   std::span<const double> theta, envs::Environment& env,
                   int episodes, std::uint64_t seed) {
  if (episodes < 1) throw UsageError("evaluation needs at least one episode");
  EvalStats stats;
  stats.episodes = episodes;
  Rng rng(seed);
  for (int e = 0; e < episodes; ++e) {
    std::vector<double> obs = env.reset(rng);
    double total = 0.0;
    while (true) {
      const std::vector<double> logits = nn::forward_logits(policy_spec, theta, obs);
      envs::StepResult sr = env.step(greedy_action(logits));
      total += sr.reward;
      if (sr.done) break;
      obs = std::move(sr.observation);
    }
    stats.mean_reward += total;
    if (e == 0 || total < stats.min_reward) stats.min_reward = total;
    if (e == 0 || total > stats.max_reward) stats.max_reward = total;
  }
  stats.mean_reward /= episodes;
  return stats;
}

}  // namespace qtrl::rl
