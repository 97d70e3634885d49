#include "qtrl/cli.hpp"

#include <cstdlib>
#include <ctime>

#include "qtrl/errors.hpp"

namespace qtrl::cli {

std::filesystem::path resolve_out_dir(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("QTRL_OUT_DIR"); env && *env) return env;
  return "runs";
}

std::string iso8601_utc_now() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

int exit_code_for_current_exception() {
  try {
    throw;
  } catch (const UsageError&) {
    return kExitUsage;
  } catch (const ConfigError&) {
    return kExitUsage;
  } catch (const NumericalError&) {
    return kExitNumerical;
  } catch (const IoError&) {
    return kExitIo;
  } catch (...) {
    return 1;
  }
}

}  // namespace qtrl::cli
