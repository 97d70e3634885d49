#include <CLI11.hpp>

#include "qtrl/cli.hpp"

// Subcommands:
//   train  - run one REINFORCE training run and export the policy
//   eval   - evaluate an exported policy (classical inference only)
//   sweep  - train over seed/depth grids and aggregate the reward curves

int main(int argc, char** argv) {
  CLI::App app{"Quantum-generated policy training for CartPole and MiniGrid"};
  app.require_subcommand(1);

  qtrl::cli::TrainOpts train_opts;
  CLI::App* train = app.add_subcommand("train", "train a policy and export it");
  train->add_option("--env", train_opts.env, "cartpole or minigrid")->required();
  train->add_option("--mode", train_opts.mode, "classical or qtrl")->required();
  train->add_option("--depth", train_opts.depth, "circuit blocks (qtrl mode)");
  train->add_option("--episodes", train_opts.episodes, "training episodes")->required();
  train->add_option("--seed", train_opts.seed, "run seed");
  train->add_option("--gamma", train_opts.gamma, "discount factor");
  train->add_option("--lr", train_opts.lr, "learning rate (default per mode)");
  train->add_option("--out", train_opts.out, "output root (default QTRL_OUT_DIR or ./runs)");

  qtrl::cli::EvalOpts eval_opts;
  CLI::App* eval = app.add_subcommand("eval", "evaluate an exported policy");
  eval->add_option("--model", eval_opts.model, "path to policy.json")->required();
  eval->add_option("--env", eval_opts.env, "environment override");
  eval->add_option("--eval-episodes", eval_opts.eval_episodes, "episodes to run");
  eval->add_option("--seed", eval_opts.seed, "evaluation seed");

  qtrl::cli::SweepOpts sweep_opts;
  CLI::App* sweep = app.add_subcommand("sweep", "multi-seed training with aggregates");
  sweep->add_option("--env", sweep_opts.env, "cartpole or minigrid")->required();
  sweep->add_option("--mode", sweep_opts.mode, "classical or qtrl")->required();
  sweep->add_option("--depth", sweep_opts.depths, "circuit depths (repeatable)");
  sweep->add_option("--episodes", sweep_opts.episodes, "training episodes")->required();
  sweep->add_option("--seed", sweep_opts.seeds, "run seeds (repeatable)");
  sweep->add_option("--gamma", sweep_opts.gamma, "discount factor");
  sweep->add_option("--lr", sweep_opts.lr, "learning rate (default per mode)");
  sweep->add_option("--out", sweep_opts.out, "output root");
  sweep->add_option("--jobs", sweep_opts.jobs, "parallel runs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : qtrl::cli::kExitUsage;
  }

  if (train->parsed()) return qtrl::cli::cmd_train(train_opts);
  if (eval->parsed()) return qtrl::cli::cmd_eval(eval_opts);
  return qtrl::cli::cmd_sweep(sweep_opts);
}
