#include "qtrl/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "qtrl/errors.hpp"
#include "qtrl/qt_generator.hpp"

namespace qtrl::rl {

namespace {

constexpr std::size_t kMaxRetainedObservations = 1000;

void check_config(const TrainConfig& cfg) {
  if (cfg.episodes < 1) throw UsageError("training needs at least one episode");
  if (cfg.gamma < 0.0 || cfg.gamma > 1.0)
    throw UsageError("discount factor must lie in [0, 1]");
  if (cfg.mode == Mode::kQtrl && cfg.depth < 1)
    throw UsageError("qtrl mode needs a circuit depth >= 1");
  if (cfg.norm_eps <= 0.0) throw UsageError("normalization epsilon must be positive");
}

void retain_observations(std::vector<std::vector<double>>& store,
                         const Trajectory& traj) {
  for (const auto& obs : traj.observations) store.push_back(obs);
  if (store.size() > kMaxRetainedObservations)
    store.erase(store.begin(),
                store.begin() + static_cast<std::ptrdiff_t>(store.size() - kMaxRetainedObservations));
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

}  // namespace

Mode mode_from_name(const std::string& name) {
  if (name == "classical") return Mode::kClassical;
  if (name == "qtrl") return Mode::kQtrl;
  throw UsageError("unknown mode '" + name + "' (expected classical or qtrl)");
}

const char* mode_name(Mode mode) {
  return mode == Mode::kClassical ? "classical" : "qtrl";
}

double default_lr(Mode mode) {
  // Classical REINFORCE is happy at the usual Adam default. The generator
  // couples every policy weight to the shared mapping parameters, which
  // makes the effective policy-space step larger; it needs a gentler rate.
  return mode == Mode::kClassical ? 1e-3 : 7e-4;
}

nn::DenseNetSpec policy_spec_for(envs::EnvId env, int hidden_override) {
  nn::DenseNetSpec spec;
  spec.hidden_activation = nn::Activation::kRelu;
  spec.output_head = nn::Head::kSoftmax;
  if (env == envs::EnvId::kCartPole)
    spec.layer_sizes = {4, hidden_override > 0 ? hidden_override : 128, 2};
  else
    spec.layer_sizes = {147, hidden_override > 0 ? hidden_override : 32, 3};
  return spec;
}

double TrainLog::last_n_average(int n) const {
  if (episodes.empty()) return 0.0;
  const std::size_t count = std::min<std::size_t>(static_cast<std::size_t>(n), episodes.size());
  double sum = 0.0;
  for (std::size_t i = episodes.size() - count; i < episodes.size(); ++i)
    sum += episodes[i].total_reward;
  return sum / static_cast<double>(count);
}

TrainResult train(const TrainConfig& cfg) { return train(cfg, TrainHooks{}); }

TrainResult train(const TrainConfig& cfg, const TrainHooks& hooks) {
  check_config(cfg);
  const double lr = cfg.lr > 0.0 ? cfg.lr : default_lr(cfg.mode);

  TrainResult result;
  result.policy_spec = policy_spec_for(cfg.env, cfg.policy_hidden);
  const int k = nn::param_count(result.policy_spec);

  std::unique_ptr<envs::Environment> env = envs::make_env(cfg.env);
  Rng rng(cfg.seed);

  // Parameter setup. Draw order is fixed so runs are reproducible:
  // circuit angles (qtrl), then mapping/policy weights, then episode draws.
  std::vector<double> theta;
  qt::QTConfig qt_cfg;
  qsim::CircuitParams circuit;
  std::vector<double> qparams;  // circuit angles followed by mapping weights
  std::size_t angle_count = 0;

  if (cfg.mode == Mode::kQtrl) {
    qt_cfg = qt::make_config(k, cfg.depth);
    circuit = qsim::random_circuit(qt_cfg.n, qt_cfg.depth, rng);
    const nn::FlatWeights beta = qt::init_mapping_weights(qt_cfg, rng);
    angle_count = circuit.angle_count();
    qparams = circuit.angles;
    qparams.insert(qparams.end(), beta.begin(), beta.end());
    result.qubits = qt_cfg.n;
  } else {
    theta = nn::init_weights(result.policy_spec, rng);
  }

  nn::AdamState adam(cfg.mode == Mode::kQtrl ? qparams.size() : theta.size(),
                     nn::AdamConfig{.lr = lr});

  std::vector<double> prev_theta;
  double delta_theta_sq_cum = 0.0;
  const auto start = std::chrono::steady_clock::now();

  for (int ep = 1; ep <= cfg.episodes; ++ep) {
    try {
      if (cfg.mode == Mode::kQtrl) {
        std::copy(qparams.begin(), qparams.begin() + static_cast<std::ptrdiff_t>(angle_count),
                  circuit.angles.begin());
        const std::span<const double> beta{qparams.data() + angle_count,
                                           qparams.size() - angle_count};
        theta = qt::generate_theta(circuit, beta, qt_cfg);
      }

      Trajectory traj =
          rollout(*env, result.policy_spec, theta, rng, cfg.gamma, cfg.norm_eps);
      LossGrad lg = episode_loss_and_grad_theta(result.policy_spec, theta, traj);

      if (cfg.mode == Mode::kQtrl) {
        const std::span<const double> beta{qparams.data() + angle_count,
                                           qparams.size() - angle_count};
        qt::QtBackwardResult qg = qt::qt_backward(circuit, beta, qt_cfg, lg.grad_theta);
        std::vector<double> grad = std::move(qg.grad_circuit);
        grad.insert(grad.end(), qg.grad_mapping.begin(), qg.grad_mapping.end());
        nn::adam_step(adam, qparams, grad);
      } else {
        nn::adam_step(adam, theta, lg.grad_theta);
      }

      if (!prev_theta.empty())
        delta_theta_sq_cum += squared_distance(theta, prev_theta);
      prev_theta = theta;

      const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
          std::chrono::steady_clock::now() - start);
      EpisodeRecord record{ep, traj.total_reward(), lg.loss, delta_theta_sq_cum,
                           elapsed.count()};
      result.log.episodes.push_back(record);
      retain_observations(result.recent_observations, traj);

      if (hooks.should_stop && hooks.should_stop(record)) break;
    } catch (const NumericalError& e) {
      throw NumericalError(std::string(e.what()) + " (episode " + std::to_string(ep) + ")",
                           ep);
    }
  }

  if (cfg.mode == Mode::kQtrl) {
    // Export the policy implied by the final parameters.
    std::copy(qparams.begin(), qparams.begin() + static_cast<std::ptrdiff_t>(angle_count),
              circuit.angles.begin());
    const std::span<const double> beta{qparams.data() + angle_count,
                                       qparams.size() - angle_count};
    result.theta = qt::generate_theta(circuit, beta, qt_cfg);
    result.circuit_angles = circuit.angles;
    result.mapping_weights.assign(beta.begin(), beta.end());
  } else {
    result.theta = theta;
  }
  return result;
}

}  // namespace qtrl::rl
