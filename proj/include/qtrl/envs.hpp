#pragma once

#include <memory>
#include <string>
#include <vector>

#include "qtrl/rng.hpp"

namespace qtrl::envs {

struct StepResult {
  std::vector<double> observation;
  double reward = 0.0;
  bool done = false;
};

class Environment {
 public:
  virtual ~Environment() = default;
  virtual std::vector<double> reset(Rng& rng) = 0;
  virtual StepResult step(int action) = 0;
  virtual int observation_size() const = 0;
  virtual int action_count() const = 0;
  virtual const char* name() const = 0;
};

// Pole balancing on a cart. Observation (x, x_dot, theta, theta_dot),
// actions 0 = push left, 1 = push right, reward 1.0 per step including the
// terminal one. Plain Euler integration; accelerations are computed from
// the pre-update state and positions are advanced before velocities.
class CartPoleEnv final : public Environment {
 public:
  static constexpr double kGravity = 9.8;
  static constexpr double kMassCart = 1.0;
  static constexpr double kMassPole = 0.1;
  static constexpr double kTotalMass = kMassCart + kMassPole;
  static constexpr double kHalfLength = 0.5;
  static constexpr double kPoleMassLength = kMassPole * kHalfLength;
  static constexpr double kForceMag = 10.0;
  static constexpr double kTau = 0.02;
  static constexpr double kXLimit = 2.4;
  static constexpr int kMaxSteps = 500;

  static double theta_limit();  // 12 degrees in radians

  std::vector<double> reset(Rng& rng) override;
  StepResult step(int action) override;
  int observation_size() const override { return 4; }
  int action_count() const override { return 2; }
  const char* name() const override { return "cartpole"; }

  // Pins an exact state; mainly for tests that need known dynamics.
  void set_state(double x, double x_dot, double theta, double theta_dot);

 private:
  std::vector<double> observation() const;

  double x_ = 0.0, x_dot_ = 0.0, theta_ = 0.0, theta_dot_ = 0.0;
  int steps_ = 0;
  bool done_ = true;
};

// Empty 5x5 room with a walled border (3x3 walkable interior). The agent
// starts at (1,1) facing right, the goal sits at (3,3). Actions
// 0 = rotate left, 1 = rotate right, 2 = move forward (no-op into walls).
// Reaching the goal ends the episode with reward 1 - 0.9 * steps/max_steps;
// running out of steps ends it with reward 0.
//
// Observation: a 7x7 egocentric window, 6 cells ahead and 3 to each side,
// rotated so the agent faces up and sits at view cell (col 3, row 6). Each
// cell emits (object_id, color_id, state_id) with object ids 0 unseen,
// 1 empty, 2 wall, 8 goal; color id 5 for the goal and 0 elsewhere;
// state id always 0. Cells outside the grid are unseen. Flattened in
// (row, col, channel) order to 147 raw values.
class MiniGridEmptyEnv final : public Environment {
 public:
  static constexpr int kGridSize = 5;
  static constexpr int kMaxSteps = 100;
  static constexpr int kViewSize = 7;
  static constexpr int kGoalCol = 3;
  static constexpr int kGoalRow = 3;

  std::vector<double> reset(Rng& rng) override;
  StepResult step(int action) override;
  int observation_size() const override { return kViewSize * kViewSize * 3; }
  int action_count() const override { return 3; }
  const char* name() const override { return "minigrid"; }

 private:
  std::vector<double> observation() const;

  int col_ = 1, row_ = 1;
  int dir_ = 0;  // 0 right, 1 down, 2 left, 3 up
  int steps_ = 0;
  bool done_ = true;
};

enum class EnvId { kCartPole, kMiniGrid };

std::unique_ptr<Environment> make_env(EnvId id);
EnvId env_from_name(const std::string& name);
const char* env_name(EnvId id);

}  // namespace qtrl::envs
