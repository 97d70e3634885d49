#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "qtrl/dense_net.hpp"

namespace qtrl::io {

// Where an exported policy came from. Enough to reproduce the run and to
// evaluate without any quantum machinery.
struct Provenance {
  std::string env;
  std::string mode;
  int depth = 0;        // qtrl mode only, 0 otherwise
  int qubits = 0;       // qtrl mode only, 0 otherwise
  std::uint64_t seed = 0;
  int episodes = 0;
  double final_last10 = 0.0;
  std::string run_id;
};

struct ExportedPolicy {
  nn::DenseNetSpec policy_spec;
  std::vector<double> theta;
  Provenance provenance;
};

// Deterministic serialization: fixed key order, 17-significant-digit
// numbers. save(load(save(x))) is byte-identical to save(x).
std::string to_json(const ExportedPolicy& policy);
ExportedPolicy policy_from_json(const std::string& text);

void save_policy(const std::filesystem::path& path, const ExportedPolicy& policy);
ExportedPolicy load_policy(const std::filesystem::path& path);

}  // namespace qtrl::io
