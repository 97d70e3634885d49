// Acceptance suite: runs every release criterion and prints one line per
// criterion. Exit code is the number of failed criteria.
//
//   acceptance [--bin-dir <dir>] [--only <ids>] [--quick]
//
// --quick trims the training criteria for a smoke run; it is NOT the
// release gate and says so on every line it affects.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <deque>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <unistd.h>
#include <vector>

#include "oracles.hpp"
#include "qtrl/circuit.hpp"
#include "qtrl/cli.hpp"
#include "qtrl/dense_net.hpp"
#include "qtrl/envs.hpp"
#include "qtrl/policy_export.hpp"
#include "qtrl/qt_generator.hpp"
#include "qtrl/rng.hpp"
#include "qtrl/run_io.hpp"
#include "qtrl/state_vector.hpp"
#include "qtrl/trainer.hpp"
#include "qtrl/trajectory.hpp"

using namespace qtrl;
namespace fs = std::filesystem;

namespace {

struct Options {
  fs::path bin_dir = ".";
  std::vector<int> only;
  bool quick = false;
  int jobs = static_cast<int>(std::thread::hardware_concurrency());
};

struct Outcome {
  bool pass = false;
  std::string detail;
};

double now_seconds() {
  using clock = std::chrono::steady_clock;
  static const clock::time_point start = clock::now();
  return std::chrono::duration<double>(clock::now() - start).count();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("qtrl_accept_" + tag + "_" +
                                        std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

template <typename Fn>
void parallel_tasks(int count, int jobs, Fn fn) {
  std::atomic<int> next{0};
  auto worker = [&] {
    while (true) {
      const int i = next.fetch_add(1);
      if (i >= count) return;
      fn(i);
    }
  };
  const int threads = std::max(1, std::min(jobs, count));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& th : pool) th.join();
}

// Rolling mean over the trailing `cap` episodes.
struct Window {
  std::deque<double> buf;
  std::size_t cap;
  double sum = 0.0;
  explicit Window(int n) : cap(static_cast<std::size_t>(n)) {}
  void push(double r) {
    buf.push_back(r);
    sum += r;
    if (buf.size() > cap) {
      sum -= buf.front();
      buf.pop_front();
    }
  }
  bool full() const { return buf.size() == cap; }
  double avg() const { return buf.empty() ? 0.0 : sum / static_cast<double>(buf.size()); }
};

struct ReachResult {
  bool reached = false;
  int episodes = 0;
  double best_window = 0.0;
};

// Trains until the trailing-window average crosses `threshold` or the
// episode budget runs out.
ReachResult train_until(const rl::TrainConfig& cfg, int window, double threshold) {
  Window w(window);
  ReachResult res;
  rl::TrainHooks hooks;
  hooks.should_stop = [&](const rl::EpisodeRecord& r) {
    w.push(r.total_reward);
    if (w.full()) {
      res.best_window = std::max(res.best_window, w.avg());
      if (w.avg() >= threshold) {
        res.reached = true;
        return true;
      }
    }
    return false;
  };
  const rl::TrainResult out = rl::train(cfg, hooks);
  res.episodes = static_cast<int>(out.log.episodes.size());
  return res;
}

std::string fmt(double v, int precision = 2) {
  std::ostringstream ss;
  ss.precision(precision);
  ss << std::fixed << v;
  return ss.str();
}

// ---------------------------------------------------------------- criteria

Outcome criterion1_gradients(const Options&) {
  const auto start = std::chrono::steady_clock::now();
  Rng rng(20240601);
  int instances = 0;
  double worst_allowed_violations = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 3;        // 2..4
    const int depth = 1 + (trial / 3) % 3;  // 1..3
    const int lo = (1 << (n - 1)) + 1;
    const int hi = 1 << n;
    const int k = lo + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(hi - lo + 1));

    const qt::QTConfig cfg = qt::make_config(k, depth);
    const qsim::CircuitParams circuit = qsim::random_circuit(cfg.n, cfg.depth, rng);
    const nn::FlatWeights mapping = nn::init_weights(cfg.mapping_spec, rng);

    std::vector<double> wq(static_cast<std::size_t>(k)), vl(static_cast<std::size_t>(k));
    for (double& x : wq) x = rng.uniform(-1.0, 1.0);
    for (double& x : vl) x = rng.uniform(-1.0, 1.0);
    const auto functional = [&](const std::vector<double>& theta) {
      double acc = 0.0;
      for (std::size_t i = 0; i < theta.size(); ++i)
        acc += wq[i] * theta[i] * theta[i] + vl[i] * theta[i];
      return acc;
    };

    const std::vector<double> theta = qt::generate_theta(circuit, mapping, cfg);
    std::vector<double> grad_theta(theta.size());
    for (std::size_t i = 0; i < theta.size(); ++i)
      grad_theta[i] = 2.0 * wq[i] * theta[i] + vl[i];
    const qt::QtBackwardResult bw = qt::qt_backward(circuit, mapping, cfg, grad_theta);

    const std::vector<double> fd_angles = oracle::central_diff(
        circuit.angles, [&](const std::vector<double>& a) {
          qsim::CircuitParams c = circuit;
          c.angles = a;
          return functional(qt::generate_theta(c, mapping, cfg));
        });
    const std::vector<double> fd_mapping = oracle::central_diff(
        mapping, [&](const std::vector<double>& m) {
          return functional(qt::generate_theta(circuit, m, cfg));
        });

    if (!oracle::all_grads_close(bw.grad_circuit, fd_angles) ||
        !oracle::all_grads_close(bw.grad_mapping, fd_mapping))
      worst_allowed_violations += 1;
    ++instances;
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  Outcome out;
  out.pass = worst_allowed_violations == 0 && elapsed < 60.0;
  out.detail = std::to_string(instances) + " instances, " +
               std::to_string(static_cast<int>(worst_allowed_violations)) +
               " gradient mismatches, " + fmt(elapsed) + "s (budget 60s)";
  return out;
}

Outcome criterion2_statevector_oracle(const Options&) {
  const auto start = std::chrono::steady_clock::now();
  Rng rng(20240602);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + static_cast<int>(rng.next_u64() % 3);
    const int depth = 1 + static_cast<int>(rng.next_u64() % 3);
    const qsim::CircuitParams params = qsim::random_circuit(n, depth, rng);
    const qsim::StateVector state = qsim::run_circuit(params);
    const std::vector<qsim::c64> ref = oracle::run_circuit_dense(params);
    for (std::size_t i = 0; i < ref.size(); ++i)
      worst = std::max(worst, std::abs(state.amplitudes[i] - ref[i]));
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  Outcome out;
  out.pass = worst < 1e-12 && elapsed < 5.0;
  out.detail = "max amplitude deviation " + io::format_double(worst) + ", " +
               fmt(elapsed, 3) + "s (budget 5s)";
  return out;
}

Outcome criterion3_normalization(const Options&) {
  Rng rng(20240602);  // same circuit family as criterion 2
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + static_cast<int>(rng.next_u64() % 3);
    const int depth = 1 + static_cast<int>(rng.next_u64() % 3);
    const qsim::CircuitParams params = qsim::random_circuit(n, depth, rng);
    double total = 0.0;
    for (double p : qsim::probabilities(qsim::run_circuit(params))) total += p;
    worst = std::max(worst, std::abs(total - 1.0));
  }
  Outcome out;
  out.pass = worst < 1e-12;
  out.detail = "max |sum p - 1| = " + io::format_double(worst);
  return out;
}

Outcome criterion4_bookkeeping(const Options&) {
  nn::DenseNetSpec cart;
  cart.layer_sizes = {4, 128, 2};
  nn::DenseNetSpec grid;
  grid.layer_sizes = {147, 32, 3};
  const bool counts = nn::param_count(cart) == 898 && nn::param_count(grid) == 4835;
  const bool qubits = qt::qubits_for(898) == 10 && qt::qubits_for(4835) == 13;
  bool compression = true;
  for (int depth : {1, 3, 5})
    compression = compression && qt::qt_param_count(qt::make_config(898, depth)) < 898;
  for (int depth : {3, 7, 13})
    compression = compression && qt::qt_param_count(qt::make_config(4835, depth)) < 4835;
  Outcome out;
  out.pass = counts && qubits && compression;
  out.detail = std::string("param counts ") + (counts ? "ok" : "WRONG") +
               ", qubit counts " + (qubits ? "ok" : "WRONG") +
               ", trainable < generated " + (compression ? "ok" : "WRONG");
  return out;
}

Outcome reach_over_seeds(const std::string& label, rl::TrainConfig base,
                         int episodes, int window, double threshold, int needed,
                         const Options& opts) {
  const int seeds = 5;
  std::vector<ReachResult> results(seeds);
  parallel_tasks(seeds, opts.jobs, [&](int i) {
    rl::TrainConfig cfg = base;
    cfg.episodes = episodes;
    cfg.seed = static_cast<std::uint64_t>(i + 1);
    results[static_cast<std::size_t>(i)] = train_until(cfg, window, threshold);
  });
  int reached = 0;
  std::string per_seed;
  for (int i = 0; i < seeds; ++i) {
    const ReachResult& r = results[static_cast<std::size_t>(i)];
    reached += r.reached ? 1 : 0;
    per_seed += (i ? " " : "") + std::string("s") + std::to_string(i + 1) + ":" +
                (r.reached ? "ep" + std::to_string(r.episodes) : "best " + fmt(r.best_window));
  }
  Outcome out;
  out.pass = reached >= needed;
  out.detail = label + " " + std::to_string(reached) + "/5 seeds reached " +
               fmt(threshold) + " (need " + std::to_string(needed) + "): " + per_seed;
  return out;
}

Outcome criterion5_classical_cartpole(const Options& opts) {
  rl::TrainConfig cfg;
  cfg.env = envs::EnvId::kCartPole;
  cfg.mode = rl::Mode::kClassical;
  const int episodes = opts.quick ? 400 : 2000;
  Outcome out = reach_over_seeds("last-100 avg", cfg, episodes, 100, 195.0, 3, opts);
  if (opts.quick) {
    out.detail += " [QUICK: 400-episode smoke, not the gate]";
    out.pass = true;
  }
  return out;
}

Outcome criterion6_qtrl_cartpole(const Options& opts) {
  rl::TrainConfig cfg;
  cfg.env = envs::EnvId::kCartPole;
  cfg.mode = rl::Mode::kQtrl;
  cfg.depth = 5;
  const int episodes = opts.quick ? 300 : 3000;
  Outcome out = reach_over_seeds("last-100 avg", cfg, episodes, 100, 195.0, 3, opts);
  if (opts.quick) {
    out.detail += " [QUICK: 300-episode smoke, not the gate]";
    out.pass = true;
  }
  return out;
}

Outcome criterion7_depth_ordering(const Options& opts) {
  const std::vector<int> depths = {1, 3, 5};
  const int seeds = 5;
  const int episodes = opts.quick ? 200 : 2000;
  std::vector<double> final_last100(depths.size() * seeds, 0.0);
  parallel_tasks(static_cast<int>(depths.size()) * seeds, opts.jobs, [&](int idx) {
    rl::TrainConfig cfg;
    cfg.env = envs::EnvId::kCartPole;
    cfg.mode = rl::Mode::kQtrl;
    cfg.depth = depths[static_cast<std::size_t>(idx) / seeds];
    cfg.episodes = episodes;
    cfg.seed = static_cast<std::uint64_t>(idx % seeds + 1);
    const rl::TrainResult r = rl::train(cfg);
    final_last100[static_cast<std::size_t>(idx)] = r.log.last_n_average(100);
  });
  std::vector<double> avg(depths.size(), 0.0);
  for (std::size_t d = 0; d < depths.size(); ++d) {
    for (int s = 0; s < seeds; ++s) avg[d] += final_last100[d * seeds + static_cast<std::size_t>(s)];
    avg[d] /= seeds;
  }
  Outcome out;
  out.pass = avg[2] >= avg[1] - 30.0 && avg[1] >= avg[0] - 30.0;
  out.detail = "5-seed avg final last-100: L1 " + fmt(avg[0]) + ", L3 " + fmt(avg[1]) +
               ", L5 " + fmt(avg[2]) + " (chain tolerance 30)";
  if (opts.quick) {
    out.detail += " [QUICK: 200-episode smoke, not the gate]";
    out.pass = true;
  }
  return out;
}

Outcome criterion8_minigrid(const Options& opts) {
  if (opts.quick) {
    // Shrunk-policy variant: wait-free qubit check plus an informational
    // improvement factor over the uniform-random baseline. The factor-5
    // clause is unattainable here (the random baseline is ~0.46 and the
    // reward ceiling is 1.0), so the full criterion below is the gate.
    const nn::DenseNetSpec shrunk = rl::policy_spec_for(envs::EnvId::kMiniGrid, 8);
    const int k = nn::param_count(shrunk);
    const int qubits = qt::qubits_for(k);

    rl::TrainConfig cfg;
    cfg.env = envs::EnvId::kMiniGrid;
    cfg.mode = rl::Mode::kQtrl;
    cfg.depth = 13;
    cfg.policy_hidden = 8;
    cfg.episodes = 600;
    cfg.seed = 1;
    const rl::TrainResult r = rl::train(cfg);

    auto env = envs::make_env(envs::EnvId::kMiniGrid);
    Rng rng(99);
    double random_mean = 0.0;
    const int baseline_episodes = 500;
    for (int e = 0; e < baseline_episodes; ++e) {
      env->reset(rng);
      while (true) {
        const envs::StepResult sr = env->step(static_cast<int>(rng.next_u64() % 3));
        random_mean += sr.reward;
        if (sr.done) break;
      }
    }
    random_mean /= baseline_episodes;

    Outcome out;
    out.pass = k == 1211 && qubits == 11;
    out.detail = "k=" + std::to_string(k) + " qubits=" + std::to_string(qubits) +
                 " trained last-100 " + fmt(r.log.last_n_average(100)) +
                 " vs random baseline " + fmt(random_mean) +
                 " [QUICK: shrunk-policy smoke, not the gate]";
    return out;
  }

  rl::TrainConfig cfg;
  cfg.env = envs::EnvId::kMiniGrid;
  cfg.mode = rl::Mode::kQtrl;
  cfg.depth = 13;
  return reach_over_seeds("last-10 avg", cfg, 6000, 10, 0.80, 3, opts);
}

Outcome criterion9_export_decoupling(const Options& opts) {
  TempDir tmp("c9");
  cli::TrainOpts topts;
  topts.env = "cartpole";
  topts.mode = "qtrl";
  topts.depth = 2;
  topts.episodes = 150;
  topts.seed = 2029;
  topts.out = tmp.path.string();
  {
    std::stringstream sink;
    std::streambuf* old = std::cout.rdbuf(sink.rdbuf());
    const int code = cli::cmd_train(topts);
    std::cout.rdbuf(old);
    if (code != 0) return Outcome{false, "training run failed with exit " + std::to_string(code)};
  }
  const fs::path model = tmp.path / "cartpole_qtrl_L2_seed2029" / "policy.json";

  // Reference distributions from the in-training final policy.
  rl::TrainConfig cfg;
  cfg.env = envs::EnvId::kCartPole;
  cfg.mode = rl::Mode::kQtrl;
  cfg.depth = 2;
  cfg.episodes = 150;
  cfg.seed = 2029;
  const rl::TrainResult result = rl::train(cfg);
  if (result.recent_observations.size() < 1000)
    return Outcome{false, "expected 1000 recorded observations, got " +
                              std::to_string(result.recent_observations.size())};

  const std::uint64_t ops_before = qsim::op_count();
  const io::ExportedPolicy loaded = io::load_policy(model);
  double worst = 0.0;
  for (const std::vector<double>& obs : result.recent_observations) {
    const std::vector<double> expect = nn::forward(result.policy_spec, result.theta, obs);
    const std::vector<double> got = nn::forward(loaded.policy_spec, loaded.theta, obs);
    for (std::size_t i = 0; i < expect.size(); ++i)
      worst = std::max(worst, std::abs(expect[i] - got[i]));
  }

  cli::EvalOpts eopts;
  eopts.model = model.string();
  eopts.eval_episodes = 20;
  eopts.seed = 5;
  std::stringstream sink;
  std::streambuf* old = std::cout.rdbuf(sink.rdbuf());
  const int eval_code = cli::cmd_eval(eopts);
  std::cout.rdbuf(old);
  const std::uint64_t ops_after = qsim::op_count();

  // The standalone evaluator binary must agree with itself run to run.
  const fs::path eval_bin = opts.bin_dir / "qtrl-eval";
  std::string subprocess_note = "qtrl-eval binary ok";
  bool subprocess_ok = true;
  if (fs::exists(eval_bin)) {
    const fs::path out1 = tmp.path / "eval1.txt";
    const fs::path out2 = tmp.path / "eval2.txt";
    const std::string cmd_base = "\"" + eval_bin.string() + "\" --model \"" +
                                 model.string() + "\" --eval-episodes 10 --seed 3 > ";
    const int c1 = std::system((cmd_base + "\"" + out1.string() + "\"").c_str());
    const int c2 = std::system((cmd_base + "\"" + out2.string() + "\"").c_str());
    subprocess_ok = c1 == 0 && c2 == 0 && io::read_text(out1) == io::read_text(out2);
    if (!subprocess_ok) subprocess_note = "qtrl-eval binary outputs disagree";
  } else {
    subprocess_ok = false;
    subprocess_note = "qtrl-eval binary not found in " + opts.bin_dir.string();
  }

  Outcome out;
  out.pass = worst <= 1e-9 && eval_code == 0 && ops_after == ops_before && subprocess_ok;
  out.detail = "max distribution deviation " + io::format_double(worst) +
               " (tol 1e-9), quantum ops during eval " +
               std::to_string(ops_after - ops_before) + ", " + subprocess_note;
  return out;
}

std::string strip_timing_column(const std::string& csv) {
  std::string out;
  std::istringstream in(csv);
  std::string line;
  while (std::getline(in, line)) {
    const std::size_t cut = line.rfind(',');
    out += line.substr(0, cut);
    out += '\n';
  }
  return out;
}

Outcome criterion10_determinism(const Options&) {
  std::vector<cli::TrainOpts> configs(2);
  configs[0].env = "cartpole";
  configs[0].mode = "classical";
  configs[0].episodes = 60;
  configs[0].seed = 9;
  configs[1].env = "cartpole";
  configs[1].mode = "qtrl";
  configs[1].depth = 1;
  configs[1].episodes = 20;
  configs[1].seed = 4;

  bool all_ok = true;
  std::string detail;
  for (std::size_t c = 0; c < configs.size(); ++c) {
    TempDir ta("c10a_" + std::to_string(c));
    TempDir tb("c10b_" + std::to_string(c));
    cli::TrainOpts opts = configs[c];
    std::stringstream sink;
    std::streambuf* old = std::cout.rdbuf(sink.rdbuf());
    opts.out = ta.path.string();
    const int code_a = cli::cmd_train(opts);
    opts.out = tb.path.string();
    const int code_b = cli::cmd_train(opts);
    std::cout.rdbuf(old);
    if (code_a != 0 || code_b != 0) {
      all_ok = false;
      detail += "run failed; ";
      continue;
    }
    fs::path run_a, run_b;
    for (const auto& entry : fs::directory_iterator(ta.path)) run_a = entry.path();
    for (const auto& entry : fs::directory_iterator(tb.path)) run_b = entry.path();

    const std::string log_a = io::read_text(run_a / "log.csv");
    const std::string log_b = io::read_text(run_b / "log.csv");
    const bool logs_equal = strip_timing_column(log_a) == strip_timing_column(log_b);
    const bool policy_equal =
        io::read_text(run_a / "policy.json") == io::read_text(run_b / "policy.json");
    all_ok = all_ok && logs_equal && policy_equal;
    detail += std::string(configs[c].mode) + ": logs " + (logs_equal ? "ok" : "DIFFER") +
              ", policy " + (policy_equal ? "ok" : "DIFFER") + "; ";
  }
  Outcome out;
  out.pass = all_ok;
  out.detail = detail + "(elapsed_ms column excluded: wall-clock timing)";
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  Options opts;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--bin-dir" && i + 1 < argc) {
      opts.bin_dir = argv[++i];
    } else if (arg == "--quick") {
      opts.quick = true;
    } else if (arg == "--jobs" && i + 1 < argc) {
      opts.jobs = std::atoi(argv[++i]);
    } else if (arg == "--only" && i + 1 < argc) {
      std::istringstream list(argv[++i]);
      std::string tok;
      while (std::getline(list, tok, ',')) opts.only.push_back(std::stoi(tok));
    } else {
      std::cerr << "unknown argument: " << arg << "\n";
      return 2;
    }
  }
  if (const char* jobs_env = std::getenv("QTRL_ACCEPT_JOBS"); jobs_env && *jobs_env)
    opts.jobs = std::atoi(jobs_env);
  if (opts.jobs < 1) opts.jobs = 1;

  struct Entry {
    int id;
    const char* name;
    Outcome (*fn)(const Options&);
  };
  const std::vector<Entry> entries = {
      {1, "end-to-end gradient exactness vs finite differences", criterion1_gradients},
      {2, "statevector vs dense matrix oracle", criterion2_statevector_oracle},
      {3, "probability normalization", criterion3_normalization},
      {4, "parameter bookkeeping and compression", criterion4_bookkeeping},
      {5, "classical cartpole learning (5 seeds)", criterion5_classical_cartpole},
      {6, "qtrl cartpole depth 5 learning (5 seeds)", criterion6_qtrl_cartpole},
      {7, "qtrl cartpole depth ordering", criterion7_depth_ordering},
      {8, "qtrl minigrid depth 13 learning (5 seeds)", criterion8_minigrid},
      {9, "export and inference decoupling", criterion9_export_decoupling},
      {10, "seeded run determinism", criterion10_determinism},
  };

  int failures = 0;
  for (const Entry& entry : entries) {
    if (!opts.only.empty() &&
        std::find(opts.only.begin(), opts.only.end(), entry.id) == opts.only.end())
      continue;
    const double t0 = now_seconds();
    Outcome outcome;
    try {
      outcome = entry.fn(opts);
    } catch (const std::exception& e) {
      outcome.pass = false;
      outcome.detail = std::string("exception: ") + e.what();
    }
    const double t1 = now_seconds();
    std::cout << (outcome.pass ? "[PASS]" : "[FAIL]") << " criterion " << entry.id
              << ": " << entry.name << " | " << outcome.detail << " | "
              << fmt(t1 - t0, 1) << "s" << std::endl;
    failures += outcome.pass ? 0 : 1;
  }
  std::cout << (failures == 0 ? "ACCEPTANCE: all criteria passed"
                              : "ACCEPTANCE: " + std::to_string(failures) + " criteria FAILED")
            << std::endl;
  return failures;
}
