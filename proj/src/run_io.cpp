#include "qtrl/run_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "qtrl/errors.hpp"

namespace qtrl::io {

namespace fs = std::filesystem;

std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

void write_text_atomic(const fs::path& path, std::string_view content) {
  std::error_code ec;
  const fs::path dir = path.parent_path();
  if (!dir.empty() && !fs::exists(dir, ec))
    throw IoError("output directory does not exist: " + dir.string());

  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("write failed: " + tmp.string());
  }
  fs::rename(tmp, path, ec);
  if (ec) throw IoError("rename failed: " + path.string() + " (" + ec.message() + ")");
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string log_to_csv(const rl::TrainLog& log) {
  std::string out{kLogHeader};
  out += '\n';
  for (const rl::EpisodeRecord& r : log.episodes) {
    out += std::to_string(r.episode);
    out += ',';
    out += format_double(r.total_reward);
    out += ',';
    out += format_double(r.loss);
    out += ',';
    out += format_double(r.delta_theta_sq_cum);
    out += ',';
    out += std::to_string(r.elapsed_ms);
    out += '\n';
  }
  return out;
}

}  // namespace qtrl::io
