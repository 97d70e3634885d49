#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "qtrl/trainer.hpp"

namespace qtrl::io {

// Fixed episode-log schema. Downstream plotting relies on these names.
inline constexpr std::string_view kLogHeader =
    "episode,total_reward,loss,delta_theta_sq_cum,elapsed_ms";

// Shortest-lossless is not used; 17 significant digits guarantee an exact
// 64-bit round trip and a byte-stable re-serialization.
std::string format_double(double value);

// Writes via a temp file in the same directory plus rename, so readers
// never observe partial content.
void write_text_atomic(const std::filesystem::path& path, std::string_view content);

std::string read_text(const std::filesystem::path& path);

std::string log_to_csv(const rl::TrainLog& log);

}  // namespace qtrl::io
