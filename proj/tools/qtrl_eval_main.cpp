#include <CLI11.hpp>

#include "qtrl/cli.hpp"

// Standalone evaluator. Links only the classical core; a build of this
// binary cannot contain the statevector simulator, which is the point: a
// trained policy is an ordinary classical network.

int main(int argc, char** argv) {
  CLI::App app{"Evaluate an exported policy without the quantum stack"};

  qtrl::cli::EvalOpts opts;
  app.add_option("--model", opts.model, "path to policy.json")->required();
  app.add_option("--env", opts.env, "environment override");
  app.add_option("--eval-episodes", opts.eval_episodes, "episodes to run");
  app.add_option("--seed", opts.seed, "evaluation seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : qtrl::cli::kExitUsage;
  }
  return qtrl::cli::cmd_eval(opts);
}
