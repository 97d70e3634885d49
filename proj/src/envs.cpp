#include "qtrl/envs.hpp"

#include <cmath>
#include <numbers>

#include "qtrl/errors.hpp"

namespace qtrl::envs {

double CartPoleEnv::theta_limit() {
  return 12.0 * std::numbers::pi / 180.0;
}

std::vector<double> CartPoleEnv::observation() const {
  return {x_, x_dot_, theta_, theta_dot_};
}

void CartPoleEnv::set_state(double x, double x_dot, double theta, double theta_dot) {
  x_ = x;
  x_dot_ = x_dot;
  theta_ = theta;
  theta_dot_ = theta_dot;
  steps_ = 0;
  done_ = false;
}

std::vector<double> CartPoleEnv::reset(Rng& rng) {
  x_ = rng.uniform(-0.05, 0.05);
  x_dot_ = rng.uniform(-0.05, 0.05);
  theta_ = rng.uniform(-0.05, 0.05);
  theta_dot_ = rng.uniform(-0.05, 0.05);
  steps_ = 0;
  done_ = false;
  return observation();
}

StepResult CartPoleEnv::step(int action) {
  if (done_) throw UsageError("cartpole step on a finished episode");
  if (action != 0 && action != 1) throw UsageError("cartpole action must be 0 or 1");

  const double force = action == 1 ? kForceMag : -kForceMag;
  const double cos_theta = std::cos(theta_);
  const double sin_theta = std::sin(theta_);
  const double temp =
      (force + kPoleMassLength * theta_dot_ * theta_dot_ * sin_theta) / kTotalMass;
  const double theta_acc =
      (kGravity * sin_theta - cos_theta * temp) /
      (kHalfLength * (4.0 / 3.0 - kMassPole * cos_theta * cos_theta / kTotalMass));
  const double x_acc = temp - kPoleMassLength * theta_acc * cos_theta / kTotalMass;

  x_ += kTau * x_dot_;
  x_dot_ += kTau * x_acc;
  theta_ += kTau * theta_dot_;
  theta_dot_ += kTau * theta_acc;
  steps_ += 1;

  done_ = std::abs(x_) > kXLimit || std::abs(theta_) > theta_limit() ||
          steps_ >= kMaxSteps;
  return StepResult{observation(), 1.0, done_};
}

namespace {

// Direction deltas indexed right, down, left, up.
constexpr int kDirCol[4] = {1, 0, -1, 0};
constexpr int kDirRow[4] = {0, 1, 0, -1};

constexpr double kIdUnseen = 0.0;
constexpr double kIdEmpty = 1.0;
constexpr double kIdWall = 2.0;
constexpr double kIdGoal = 8.0;
constexpr double kColorGoal = 5.0;

}  // namespace

std::vector<double> MiniGridEmptyEnv::observation() const {
  std::vector<double> obs(static_cast<std::size_t>(observation_size()), 0.0);
  // right-hand vector relative to the current facing
  const int rdir = (dir_ + 1) % 4;
  for (int vy = 0; vy < kViewSize; ++vy) {
    for (int vx = 0; vx < kViewSize; ++vx) {
      const int ahead = (kViewSize - 1) - vy;
      const int side = vx - kViewSize / 2;
      const int col = col_ + kDirCol[dir_] * ahead + kDirCol[rdir] * side;
      const int row = row_ + kDirRow[dir_] * ahead + kDirRow[rdir] * side;

      double object = kIdUnseen;
      double color = 0.0;
      if (col >= 0 && col < kGridSize && row >= 0 && row < kGridSize) {
        const bool border = col == 0 || col == kGridSize - 1 || row == 0 ||
                            row == kGridSize - 1;
        if (border) {
          object = kIdWall;
        } else if (col == kGoalCol && row == kGoalRow) {
          object = kIdGoal;
          color = kColorGoal;
        } else {
          object = kIdEmpty;
        }
      }
      const std::size_t base = (static_cast<std::size_t>(vy) * kViewSize + vx) * 3;
      obs[base] = object;
      obs[base + 1] = color;
      obs[base + 2] = 0.0;  // state channel, unused in an empty room
    }
  }
  return obs;
}

std::vector<double> MiniGridEmptyEnv::reset(Rng& rng) {
  (void)rng;  // fixed start pose; the stream argument keeps the env contract uniform
  col_ = 1;
  row_ = 1;
  dir_ = 0;
  steps_ = 0;
  done_ = false;
  return observation();
}

StepResult MiniGridEmptyEnv::step(int action) {
  if (done_) throw UsageError("minigrid step on a finished episode");
  if (action < 0 || action > 2) throw UsageError("minigrid action must be 0, 1 or 2");

  steps_ += 1;
  if (action == 0) {
    dir_ = (dir_ + 3) % 4;
  } else if (action == 1) {
    dir_ = (dir_ + 1) % 4;
  } else {
    const int ncol = col_ + kDirCol[dir_];
    const int nrow = row_ + kDirRow[dir_];
    const bool walkable = ncol >= 1 && ncol <= kGridSize - 2 && nrow >= 1 &&
                          nrow <= kGridSize - 2;
    if (walkable) {
      col_ = ncol;
      row_ = nrow;
    }
  }

  double reward = 0.0;
  if (col_ == kGoalCol && row_ == kGoalRow) {
    done_ = true;
    reward = 1.0 - 0.9 * static_cast<double>(steps_) / kMaxSteps;
  } else if (steps_ >= kMaxSteps) {
    done_ = true;
  }
  return StepResult{observation(), reward, done_};
}

std::unique_ptr<Environment> make_env(EnvId id) {
  switch (id) {
    case EnvId::kCartPole:
      return std::make_unique<CartPoleEnv>();
    case EnvId::kMiniGrid:
      return std::make_unique<MiniGridEmptyEnv>();
  }
  throw ConfigError("unknown environment id");
}

EnvId env_from_name(const std::string& name) {
  if (name == "cartpole") return EnvId::kCartPole;
  if (name == "minigrid") return EnvId::kMiniGrid;
  throw UsageError("unknown environment '" + name + "' (expected cartpole or minigrid)");
}

const char* env_name(EnvId id) {
  return id == EnvId::kCartPole ? "cartpole" : "minigrid";
}

}  // namespace qtrl::envs
