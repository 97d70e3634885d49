#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace qtrl::qsim {

using c64 = std::complex<double>;

// Full statevector of an n-qubit register. Basis index i encodes |i> with
// qubit 0 as the most significant bit, so qubit q has bit weight
// 2^(n-1-q). The squared amplitudes sum to 1 up to float drift.
struct StateVector {
  int n = 0;
  std::vector<c64> amplitudes;

  std::size_t dim() const { return amplitudes.size(); }
};

// |0...0> on n qubits, 1 <= n <= 24.
StateVector init_state(int n);

// General single-qubit rotation. Matrix rows/cols ordered |0>, |1>:
//   [ cos(mu/2)              -e^{i lam} sin(mu/2)      ]
//   [ e^{i phi} sin(mu/2)     e^{i(phi+lam)} cos(mu/2) ]
void apply_u3(StateVector& state, int qubit, double mu, double phi, double lam);

// Applies u3(mu, phi, lam) to `target` on the control=1 subspace and the
// identity on the control=0 subspace.
void apply_cu3(StateVector& state, int control, int target, double mu,
               double phi, double lam);

// |amplitude_i|^2 for every basis index.
std::vector<double> probabilities(const StateVector& state);

double norm_sq(const StateVector& state);

// Monotone counter bumped by every simulator entry point. Lets callers
// prove a code path never touched the quantum stack.
std::uint64_t op_count();

}  // namespace qtrl::qsim
