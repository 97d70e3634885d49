#include <algorithm>
#include <atomic>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "qtrl/cli.hpp"
#include "qtrl/constants_doc.hpp"
#include "qtrl/errors.hpp"
#include "qtrl/policy_export.hpp"
#include "qtrl/run_io.hpp"
#include "qtrl/sha1.hpp"
#include "qtrl/trainer.hpp"

namespace qtrl::cli {

namespace {

namespace fs = std::filesystem;

struct RunOutput {
  std::string run_id;
  fs::path dir;
  rl::TrainLog log;
};

std::string run_id_for(const rl::TrainConfig& cfg) {
  std::ostringstream id;
  id << envs::env_name(cfg.env) << "_" << rl::mode_name(cfg.mode);
  if (cfg.mode == rl::Mode::kQtrl) id << "_L" << cfg.depth;
  id << "_seed" << cfg.seed;
  return id.str();
}

std::string manifest_json(const rl::TrainConfig& cfg, const std::string& run_id,
                          const std::string& started, const std::string& finished,
                          const rl::TrainResult& result) {
  const double lr = cfg.lr > 0.0 ? cfg.lr : rl::default_lr(cfg.mode);
  std::string out = "{\n";
  out += "  \"format\": \"qtrl-manifest\",\n  \"version\": 1,\n";
  out += "  \"run_id\": \"" + run_id + "\",\n";
  out += "  \"artifact_version\": \"" + std::string(kArtifactVersion) + "\",\n";
  out += "  \"constants_sha1\": \"" + git_blob_sha1(io::kConstantsDoc) + "\",\n";
  out += "  \"config\": {\n";
  out += "    \"env\": \"" + std::string(envs::env_name(cfg.env)) + "\",\n";
  out += "    \"mode\": \"" + std::string(rl::mode_name(cfg.mode)) + "\",\n";
  out += "    \"depth\": " + std::to_string(cfg.mode == rl::Mode::kQtrl ? cfg.depth : 0) + ",\n";
  out += "    \"episodes\": " + std::to_string(cfg.episodes) + ",\n";
  out += "    \"gamma\": " + io::format_double(cfg.gamma) + ",\n";
  out += "    \"lr\": " + io::format_double(lr) + ",\n";
  out += "    \"seed\": " + std::to_string(cfg.seed) + ",\n";
  out += "    \"norm_eps\": " + io::format_double(cfg.norm_eps) + "\n";
  out += "  },\n";
  out += "  \"started\": \"" + started + "\",\n";
  out += "  \"finished\": \"" + finished + "\",\n";
  out += "  \"outputs\": {\n    \"log_csv\": \"log.csv\",\n    \"policy_json\": \"policy.json\"\n  },\n";
  out += "  \"final\": {\n";
  out += "    \"episodes_run\": " + std::to_string(result.log.episodes.size()) + ",\n";
  out += "    \"last10_average_reward\": " + io::format_double(result.log.last_n_average(10)) + ",\n";
  out += "    \"last100_average_reward\": " + io::format_double(result.log.last_n_average(100)) + "\n";
  out += "  }\n}\n";
  return out;
}

RunOutput run_one_training(const rl::TrainConfig& cfg, const fs::path& out_root) {
  const std::string started = iso8601_utc_now();
  rl::TrainResult result = rl::train(cfg);
  const std::string finished = iso8601_utc_now();

  RunOutput out;
  out.run_id = run_id_for(cfg);
  out.dir = out_root / out.run_id;
  std::error_code ec;
  fs::create_directories(out.dir, ec);
  if (ec) throw IoError("cannot create run directory " + out.dir.string());

  io::ExportedPolicy policy;
  policy.policy_spec = result.policy_spec;
  policy.theta = result.theta;
  policy.provenance.env = envs::env_name(cfg.env);
  policy.provenance.mode = rl::mode_name(cfg.mode);
  policy.provenance.depth = cfg.mode == rl::Mode::kQtrl ? cfg.depth : 0;
  policy.provenance.qubits = result.qubits;
  policy.provenance.seed = cfg.seed;
  policy.provenance.episodes = static_cast<int>(result.log.episodes.size());
  policy.provenance.final_last10 = result.log.last_n_average(10);
  policy.provenance.run_id = out.run_id;

  io::write_text_atomic(out.dir / "log.csv", io::log_to_csv(result.log));
  io::save_policy(out.dir / "policy.json", policy);
  io::write_text_atomic(out.dir / "manifest.json",
                        manifest_json(cfg, out.run_id, started, finished, result));
  out.log = std::move(result.log);
  return out;
}

rl::TrainConfig config_from_flags(const std::string& env, const std::string& mode,
                                  int depth, long episodes, std::uint64_t seed,
                                  double gamma, double lr) {
  rl::TrainConfig cfg;
  cfg.env = envs::env_from_name(env);
  cfg.mode = rl::mode_from_name(mode);
  if (episodes < 1) throw UsageError("--episodes must be >= 1");
  cfg.episodes = static_cast<int>(episodes);
  if (cfg.mode == rl::Mode::kQtrl) {
    if (depth < 1) throw UsageError("qtrl mode requires --depth >= 1");
    cfg.depth = depth;
  } else if (depth != 0) {
    throw UsageError("--depth only applies to qtrl mode");
  }
  if (gamma < 0.0 || gamma > 1.0) throw UsageError("--gamma must lie in [0, 1]");
  if (lr < 0.0) throw UsageError("--lr must be positive");
  cfg.gamma = gamma;
  cfg.lr = lr;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

int cmd_train(const TrainOpts& opts) {
  try {
    const rl::TrainConfig cfg = config_from_flags(
        opts.env, opts.mode, opts.depth, opts.episodes, opts.seed, opts.gamma, opts.lr);
    const fs::path out_root = resolve_out_dir(opts.out);
    std::error_code ec;
    fs::create_directories(out_root, ec);
    if (ec) throw IoError("cannot create output directory " + out_root.string());

    const RunOutput run = run_one_training(cfg, out_root);
    std::cout << "run: " << run.run_id << "\n"
              << "episodes: " << run.log.episodes.size() << "\n"
              << "last-10 average reward: " << io::format_double(run.log.last_n_average(10)) << "\n"
              << "last-100 average reward: " << io::format_double(run.log.last_n_average(100)) << "\n"
              << "outputs: " << run.dir.string() << "\n";
    return kExitOk;
  } catch (const NumericalError& e) {
    std::cerr << "train: numerical abort: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "train: " << e.what() << "\n";
    return exit_code_for_current_exception();
  }
}

int cmd_sweep(const SweepOpts& opts) {
  try {
    if (opts.seeds.empty()) throw UsageError("sweep requires at least one --seed");
    if (opts.jobs < 1) throw UsageError("--jobs must be >= 1");

    std::vector<int> depths = opts.depths;
    const rl::Mode mode = rl::mode_from_name(opts.mode);
    if (mode == rl::Mode::kClassical) {
      if (!depths.empty()) throw UsageError("--depth only applies to qtrl mode");
      depths = {0};
    } else if (depths.empty()) {
      throw UsageError("qtrl sweep requires at least one --depth");
    }

    struct Task {
      rl::TrainConfig cfg;
      int depth_index;
    };
    std::vector<Task> tasks;
    for (std::size_t d = 0; d < depths.size(); ++d)
      for (std::uint64_t seed : opts.seeds)
        tasks.push_back(Task{config_from_flags(opts.env, opts.mode, depths[d],
                                               opts.episodes, seed, opts.gamma, opts.lr),
                             static_cast<int>(d)});

    const fs::path out_root = resolve_out_dir(opts.out);
    std::error_code ec;
    fs::create_directories(out_root, ec);
    if (ec) throw IoError("cannot create output directory " + out_root.string());

    std::vector<rl::TrainLog> logs(tasks.size());
    std::vector<std::string> failures(tasks.size());
    std::vector<int> failure_codes(tasks.size(), 0);
    std::atomic<std::size_t> next{0};
    std::mutex print_mutex;

    auto worker = [&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= tasks.size()) return;
        try {
          RunOutput run = run_one_training(tasks[i].cfg, out_root);
          logs[i] = std::move(run.log);
          const std::lock_guard<std::mutex> lock(print_mutex);
          std::cout << "done: " << run.run_id << " (last-100 "
                    << io::format_double(logs[i].last_n_average(100)) << ")\n";
        } catch (const std::exception& e) {
          failures[i] = e.what();
          failure_codes[i] = exit_code_for_current_exception();
        }
      }
    };

    const int jobs = std::min<int>(opts.jobs, static_cast<int>(tasks.size()));
    std::vector<std::thread> pool;
    for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
    worker();
    for (std::thread& t : pool) t.join();

    int exit_code = kExitOk;
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      if (failure_codes[i] != 0) {
        std::cerr << "sweep: run " << run_id_for(tasks[i].cfg)
                  << " failed: " << failures[i] << "\n";
        if (exit_code == kExitOk) exit_code = failure_codes[i];
      }
    }

    // Per-depth aggregate: row e holds the mean/min/max total reward of
    // episode e across the seeds that completed.
    for (std::size_t d = 0; d < depths.size(); ++d) {
      std::vector<const rl::TrainLog*> group;
      for (std::size_t i = 0; i < tasks.size(); ++i)
        if (tasks[i].depth_index == static_cast<int>(d) && failure_codes[i] == 0)
          group.push_back(&logs[i]);
      if (group.empty()) continue;

      std::size_t rows = group.front()->episodes.size();
      for (const rl::TrainLog* log : group) rows = std::min(rows, log->episodes.size());

      std::string csv = "episode,mean_total_reward,min_total_reward,max_total_reward\n";
      for (std::size_t e = 0; e < rows; ++e) {
        double sum = 0.0, lo = 0.0, hi = 0.0;
        for (std::size_t g = 0; g < group.size(); ++g) {
          const double r = group[g]->episodes[e].total_reward;
          sum += r;
          lo = g == 0 ? r : std::min(lo, r);
          hi = g == 0 ? r : std::max(hi, r);
        }
        csv += std::to_string(e + 1) + "," +
               io::format_double(sum / static_cast<double>(group.size())) + "," +
               io::format_double(lo) + "," + io::format_double(hi) + "\n";
      }

      std::ostringstream name;
      name << "sweep_" << opts.env << "_" << opts.mode;
      if (mode == rl::Mode::kQtrl) name << "_L" << depths[d];
      name << ".csv";
      io::write_text_atomic(out_root / name.str(), csv);
      std::cout << "aggregate: " << (out_root / name.str()).string() << "\n";
    }
    if (exit_code != kExitOk)
      std::cerr << "sweep: partial results, one or more runs failed\n";
    else
      std::cout << "plot recipe: python3 -c \"import pandas as pd,matplotlib.pyplot as plt;"
                   "d=pd.read_csv('<aggregate>.csv');plt.plot(d.episode,d.mean_total_reward);"
                   "plt.fill_between(d.episode,d.min_total_reward,d.max_total_reward,alpha=.3);"
                   "plt.savefig('curve.png')\"\n";
    return exit_code;
  } catch (const std::exception& e) {
    std::cerr << "sweep: " << e.what() << "\n";
    return exit_code_for_current_exception();
  }
}

}  // namespace qtrl::cli
