#pragma once

#include <span>
#include <vector>

#include "qtrl/rng.hpp"
#include "qtrl/state_vector.hpp"

namespace qtrl::qsim {

// Angle slots per qubit per block: 0..2 are the rotation-layer u3 angles
// (mu, phi, lam), 3..5 the angles of that qubit's controlled entangler.
inline constexpr int kAnglesPerQubit = 6;

// Ansatz parameters: `depth` blocks, each a full u3 layer followed by a
// ring of cu3 gates with control q and target (q+1) mod n, both applied in
// ascending qubit order. For n == 1 the ring layer is skipped and the three
// entangler slots are inert.
struct CircuitParams {
  int n = 0;
  int depth = 0;
  std::vector<double> angles;  // [depth][n][6] flattened

  std::size_t angle_index(int block, int qubit, int slot) const {
    return (static_cast<std::size_t>(block) * n + qubit) * kAnglesPerQubit + slot;
  }
  double angle(int block, int qubit, int slot) const {
    return angles[angle_index(block, qubit, slot)];
  }
  std::size_t angle_count() const { return angles.size(); }
};

CircuitParams make_circuit(int n, int depth);

// All angles drawn uniformly from [0, 2*pi).
CircuitParams random_circuit(int n, int depth, Rng& rng);

void validate(const CircuitParams& params);

// Runs the ansatz from |0...0> and returns the final state.
StateVector run_circuit(const CircuitParams& params);

// Exact reverse-mode gradient of sum_i upstream[i] * p_i(angles) with
// respect to every angle, where p_i are the basis probabilities of
// run_circuit. upstream must have 2^n finite entries. Uses an adjoint
// sweep (gates unapplied in reverse), so memory stays at three states.
std::vector<double> backprop_probabilities(const CircuitParams& params,
                                           std::span<const double> upstream);

}  // namespace qtrl::qsim
