#include "qtrl/circuit.hpp"

#include <cmath>
#include <numbers>

#include "qtrl/errors.hpp"
#include "qtrl/gate_kernels.hpp"

namespace qtrl::qsim {

namespace {

struct Gate {
  int block;
  int qubit;        // rotation qubit, or ring control
  bool entangler;   // false: u3 on `qubit`; true: cu3 control `qubit`
  int target;       // entangler target, (qubit+1) mod n
  int slot0;        // first of the three angle slots
};

std::vector<Gate> gate_sequence(const CircuitParams& params) {
  std::vector<Gate> gates;
  gates.reserve(static_cast<std::size_t>(params.depth) * params.n * 2);
  for (int b = 0; b < params.depth; ++b) {
    for (int q = 0; q < params.n; ++q)
      gates.push_back(Gate{b, q, false, -1, 0});
    if (params.n > 1) {
      for (int q = 0; q < params.n; ++q)
        gates.push_back(Gate{b, q, true, (q + 1) % params.n, 3});
    }
  }
  return gates;
}

// dU3/dmu, dU3/dphi, dU3/dlam at the given angles.
std::array<Mat2, 3> u3_derivatives(double mu, double phi, double lam) {
  const double c = std::cos(0.5 * mu);
  const double s = std::sin(0.5 * mu);
  const c64 eip{std::cos(phi), std::sin(phi)};
  const c64 eil{std::cos(lam), std::sin(lam)};
  const c64 eipl{std::cos(phi + lam), std::sin(phi + lam)};
  const c64 i_eip{-std::sin(phi), std::cos(phi)};
  const c64 i_eil{-std::sin(lam), std::cos(lam)};
  const c64 i_eipl{-std::sin(phi + lam), std::cos(phi + lam)};

  const Mat2 dmu{c64{-0.5 * s, 0.0}, c64{-0.5 * c * eil.real(), -0.5 * c * eil.imag()},
                 c64{0.5 * c * eip.real(), 0.5 * c * eip.imag()},
                 c64{-0.5 * s * eipl.real(), -0.5 * s * eipl.imag()}};
  const Mat2 dphi{c64{0.0, 0.0}, c64{0.0, 0.0},
                  c64{s * i_eip.real(), s * i_eip.imag()},
                  c64{c * i_eipl.real(), c * i_eipl.imag()}};
  const Mat2 dlam{c64{0.0, 0.0}, c64{-s * i_eil.real(), -s * i_eil.imag()},
                  c64{0.0, 0.0}, c64{c * i_eipl.real(), c * i_eipl.imag()}};
  return {dmu, dphi, dlam};
}

void apply_gate(StateVector& state, const Gate& g, const Mat2& m) {
  if (g.entangler)
    apply_controlled_single_qubit(state, g.qubit, g.target, m);
  else
    apply_single_qubit(state, g.qubit, m);
}

}  // namespace

CircuitParams make_circuit(int n, int depth) {
  CircuitParams params;
  params.n = n;
  params.depth = depth;
  params.angles.assign(static_cast<std::size_t>(depth) * n * kAnglesPerQubit, 0.0);
  validate(params);
  return params;
}

CircuitParams random_circuit(int n, int depth, Rng& rng) {
  CircuitParams params = make_circuit(n, depth);
  for (double& a : params.angles) a = rng.uniform(0.0, 2.0 * std::numbers::pi);
  return params;
}

void validate(const CircuitParams& params) {
  if (params.n < 1 || params.n > 24)
    throw ConfigError("circuit qubit count must be in [1, 24]");
  if (params.depth < 1)
    throw ConfigError("circuit depth must be >= 1");
  const std::size_t expected =
      static_cast<std::size_t>(params.depth) * params.n * kAnglesPerQubit;
  if (params.angles.size() != expected)
    throw ConfigError("circuit angle tensor has wrong size");
  for (double a : params.angles)
    if (!std::isfinite(a)) throw ConfigError("circuit angles must be finite");
}

StateVector run_circuit(const CircuitParams& params) {
  validate(params);
  StateVector state = init_state(params.n);
  for (const Gate& g : gate_sequence(params)) {
    const Mat2 m = u3_matrix(params.angle(g.block, g.qubit, g.slot0),
                             params.angle(g.block, g.qubit, g.slot0 + 1),
                             params.angle(g.block, g.qubit, g.slot0 + 2));
    apply_gate(state, g, m);
  }
  return state;
}

std::vector<double> backprop_probabilities(const CircuitParams& params,
                                           std::span<const double> upstream) {
  validate(params);
  if (upstream.size() != (std::size_t{1} << params.n))
    throw ConfigError("upstream gradient must have 2^n entries");
  for (double g : upstream)
    if (!std::isfinite(g))
      throw NumericalError("non-finite upstream gradient in backprop_probabilities");

  std::vector<double> grads(params.angle_count(), 0.0);

  // Loss = sum_i upstream_i * |psi_i|^2, so dLoss/d(conj psi_i) = u_i psi_i.
  StateVector psi = run_circuit(params);
  StateVector lambda = psi;
  for (std::size_t i = 0; i < psi.dim(); ++i)
    lambda.amplitudes[i] = c64{upstream[i] * psi.amplitudes[i].real(),
                               upstream[i] * psi.amplitudes[i].imag()};

  std::vector<Gate> gates = gate_sequence(params);
  for (std::size_t gi = gates.size(); gi-- > 0;) {
    const Gate& g = gates[gi];
    const double mu = params.angle(g.block, g.qubit, g.slot0);
    const double phi = params.angle(g.block, g.qubit, g.slot0 + 1);
    const double lam = params.angle(g.block, g.qubit, g.slot0 + 2);
    const Mat2 udag = dagger(u3_matrix(mu, phi, lam));

    // chi = U^dagger psi is the state this gate saw on the way forward.
    apply_gate(psi, g, udag);

    const std::array<Mat2, 3> du = u3_derivatives(mu, phi, lam);
    const int control = g.entangler ? g.qubit : -1;
    const int target = g.entangler ? g.target : g.qubit;
    for (int j = 0; j < 3; ++j) {
      const c64 ip = pair_inner_product(lambda, psi, target, control, du[j]);
      grads[params.angle_index(g.block, g.qubit, g.slot0 + j)] = 2.0 * ip.real();
    }

    apply_gate(lambda, g, udag);
  }
  return grads;
}

}  // namespace qtrl::qsim
