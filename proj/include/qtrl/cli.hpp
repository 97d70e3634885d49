#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace qtrl::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitIo = 4;

inline constexpr const char* kArtifactVersion = "0.1.0";

struct TrainOpts {
  std::string env;
  std::string mode;
  int depth = 0;  // 0 = flag absent
  long episodes = 0;
  std::uint64_t seed = 0;
  double gamma = 0.99;
  double lr = 0.0;  // 0 = per-mode default
  std::string out;  // empty = QTRL_OUT_DIR or ./runs
};

struct EvalOpts {
  std::string model;
  std::string env;  // empty = take from the model's provenance
  int eval_episodes = 100;
  std::uint64_t seed = 0;
};

struct SweepOpts {
  std::string env;
  std::string mode;
  std::vector<int> depths;  // empty allowed for classical mode
  long episodes = 0;
  std::vector<std::uint64_t> seeds;
  double gamma = 0.99;
  double lr = 0.0;
  std::string out;
  int jobs = 1;
};

// Each command returns a process exit code and reports problems on stderr.
int cmd_train(const TrainOpts& opts);
int cmd_eval(const EvalOpts& opts);
int cmd_sweep(const SweepOpts& opts);

// --out flag if set, else QTRL_OUT_DIR, else ./runs.
std::filesystem::path resolve_out_dir(const std::string& flag_value);

std::string iso8601_utc_now();

// Maps the error taxonomy onto exit codes; unknown exceptions map to 1.
int exit_code_for_current_exception();

}  // namespace qtrl::cli
