#include <iostream>

#include "qtrl/cli.hpp"
#include "qtrl/envs.hpp"
#include "qtrl/errors.hpp"
#include "qtrl/policy_export.hpp"
#include "qtrl/run_io.hpp"
#include "qtrl/trajectory.hpp"

// Evaluation is deliberately compiled against the core library only. The
// qtrl-eval binary links this file without the simulator objects, which
// makes "inference needs no quantum stack" a link-time guarantee rather
// than a convention.

namespace qtrl::cli {

int cmd_eval(const EvalOpts& opts) {
  try {
    if (opts.model.empty()) throw UsageError("eval requires --model");
    if (opts.eval_episodes < 1)
      throw UsageError("--eval-episodes must be >= 1");

    const io::ExportedPolicy policy = io::load_policy(opts.model);
    const std::string env_name = opts.env.empty() ? policy.provenance.env : opts.env;
    const envs::EnvId env_id = envs::env_from_name(env_name);
    std::unique_ptr<envs::Environment> env = envs::make_env(env_id);
    if (env->observation_size() != policy.policy_spec.layer_sizes.front())
      throw UsageError("policy input width " +
                       std::to_string(policy.policy_spec.layer_sizes.front()) +
                       " does not match environment '" + env_name + "' observation size " +
                       std::to_string(env->observation_size()));
    if (env->action_count() != policy.policy_spec.layer_sizes.back())
      throw UsageError("policy output width does not match environment action count");

    const rl::EvalStats stats = rl::evaluate(policy.policy_spec, policy.theta, *env,
                                             opts.eval_episodes, opts.seed);
    std::cout << "model: " << opts.model << "\n"
              << "env: " << env_name << "\n"
              << "episodes: " << stats.episodes << "\n"
              << "mean_reward: " << io::format_double(stats.mean_reward) << "\n"
              << "min_reward: " << io::format_double(stats.min_reward) << "\n"
              << "max_reward: " << io::format_double(stats.max_reward) << "\n";
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "eval: " << e.what() << "\n";
    return exit_code_for_current_exception();
  }
}

}  // namespace qtrl::cli
