#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "qtrl/dense_net.hpp"
#include "qtrl/envs.hpp"
#include "qtrl/trajectory.hpp"

namespace qtrl::rl {

enum class Mode { kClassical, kQtrl };

Mode mode_from_name(const std::string& name);
const char* mode_name(Mode mode);

struct TrainConfig {
  envs::EnvId env = envs::EnvId::kCartPole;
  Mode mode = Mode::kClassical;
  int depth = 1;          // circuit blocks, qtrl mode only
  int episodes = 0;
  double gamma = 0.99;
  double lr = 0.0;        // <= 0 selects the per-mode default
  std::uint64_t seed = 0;
  double norm_eps = 1e-8;
  int policy_hidden = 0;  // 0 selects the per-env width (128 / 32)
};

double default_lr(Mode mode);
nn::DenseNetSpec policy_spec_for(envs::EnvId env, int hidden_override = 0);

struct EpisodeRecord {
  int episode = 0;  // 1-based
  double total_reward = 0.0;
  double loss = 0.0;
  double delta_theta_sq_cum = 0.0;  // running sum of ||theta_e - theta_{e-1}||^2
  std::int64_t elapsed_ms = 0;      // wall clock since training start
};

struct TrainLog {
  std::vector<EpisodeRecord> episodes;

  // Mean total reward of the last n completed episodes (fewer if the run
  // is shorter).
  double last_n_average(int n) const;
};

struct TrainResult {
  TrainLog log;
  nn::DenseNetSpec policy_spec;
  std::vector<double> theta;  // trained policy weights (generated in qtrl mode)
  int qubits = 0;             // qtrl mode only
  std::vector<double> circuit_angles;   // qtrl mode only
  std::vector<double> mapping_weights;  // qtrl mode only
  // Most recent observations seen while training, capped at 1000. Used by
  // export fidelity checks.
  std::vector<std::vector<double>> recent_observations;
};

struct TrainHooks {
  // Called after each episode; return true to stop the run early.
  std::function<bool(const EpisodeRecord&)> should_stop;
};

// Runs REINFORCE for cfg.episodes episodes with one update per episode.
// Classical mode optimizes the policy weights directly; qtrl mode
// regenerates them each episode from the circuit and mapping parameters
// and applies the chained gradient to those instead.
TrainResult train(const TrainConfig& cfg);
TrainResult train(const TrainConfig& cfg, const TrainHooks& hooks);

}  // namespace qtrl::rl
