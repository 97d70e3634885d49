#include "qtrl/state_vector.hpp"

#include <atomic>
#include <cmath>

#include "qtrl/errors.hpp"
#include "qtrl/gate_kernels.hpp"

namespace qtrl::qsim {

namespace {

std::atomic<std::uint64_t> g_op_count{0};

void bump() { g_op_count.fetch_add(1, std::memory_order_relaxed); }

void check_qubit(const StateVector& state, int qubit, const char* what) {
  if (qubit < 0 || qubit >= state.n)
    throw ConfigError(std::string(what) + " index out of range");
}

}  // namespace

std::uint64_t op_count() { return g_op_count.load(std::memory_order_relaxed); }

StateVector init_state(int n) {
  bump();
  if (n < 1 || n > 24)
    throw ConfigError("qubit count must be in [1, 24]");
  StateVector state;
  state.n = n;
  state.amplitudes.assign(std::size_t{1} << n, c64{0.0, 0.0});
  state.amplitudes[0] = c64{1.0, 0.0};
  return state;
}

Mat2 u3_matrix(double mu, double phi, double lam) {
  const double c = std::cos(0.5 * mu);
  const double s = std::sin(0.5 * mu);
  return Mat2{
      c64{c, 0.0},
      c64{-std::cos(lam) * s, -std::sin(lam) * s},
      c64{std::cos(phi) * s, std::sin(phi) * s},
      c64{std::cos(phi + lam) * c, std::sin(phi + lam) * c},
  };
}

void apply_u3(StateVector& state, int qubit, double mu, double phi, double lam) {
  bump();
  check_qubit(state, qubit, "qubit");
  apply_single_qubit(state, qubit, u3_matrix(mu, phi, lam));
}

void apply_cu3(StateVector& state, int control, int target, double mu,
               double phi, double lam) {
  bump();
  check_qubit(state, control, "control");
  check_qubit(state, target, "target");
  if (control == target)
    throw ConfigError("control and target must differ");
  apply_controlled_single_qubit(state, control, target, u3_matrix(mu, phi, lam));
}

std::vector<double> probabilities(const StateVector& state) {
  bump();
  std::vector<double> p(state.dim());
  for (std::size_t i = 0; i < state.dim(); ++i) p[i] = std::norm(state.amplitudes[i]);
  return p;
}

double norm_sq(const StateVector& state) {
  double total = 0.0;
  for (const c64& a : state.amplitudes) total += std::norm(a);
  return total;
}

}  // namespace qtrl::qsim
