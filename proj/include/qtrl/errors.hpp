#pragma once

#include <stdexcept>
#include <string>

namespace qtrl {

// Error taxonomy maps onto process exit codes: usage/config -> 2,
// numerical -> 3, I/O -> 4.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what, long episode = -1)
      : Error(what), episode_(episode) {}
  // Episode index the abort happened in, or -1 outside a training loop.
  long episode() const { return episode_; }

 private:
  long episode_ = -1;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace qtrl
