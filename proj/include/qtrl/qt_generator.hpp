#pragma once

#include <span>
#include <vector>

#include "qtrl/circuit.hpp"
#include "qtrl/dense_net.hpp"

namespace qtrl::qt {

// Smallest n with 2^n >= k. Requires k >= 2 so that at least one qubit is
// needed.
int qubits_for(int k);

// Configuration of the weight generator: a k-target parameter budget, the
// circuit size it implies, and the mapping network that turns
// (bit-string, probability) pairs into weight values.
struct QTConfig {
  int k = 0;
  int n = 0;
  int depth = 0;
  nn::DenseNetSpec mapping_spec;  // [n+1, 10, 10, 1], relu hidden, linear out
};

QTConfig make_config(int k, int depth);

// Trainable parameter count: circuit angles plus mapping network weights.
int qt_param_count(const QTConfig& cfg);

// Mapping-weight init tuned for weight generation. Three changes over the
// plain dense-net scheme, each needed for reliable training:
//  - the first-layer column reading the probability feature is scaled by
//    2^n, since probabilities are O(2^-n) while bit features are O(1);
//  - the output layer is scaled by 0.1 so generated weights start small;
//  - output weights come in antithetic +/- pairs with a zero bias, which
//    cancels the common component of the (non-negative) relu activations.
// Without the pairing, consecutive basis indices share high bits and the
// whole generated weight vector lands on one side of zero for about half
// of all seeds; entire relu layers of the generated policy then start
// shut and never receive gradient.
nn::FlatWeights init_mapping_weights(const QTConfig& cfg, Rng& rng);

// Binary expansion of a basis index, most significant bit first, as
// 0.0/1.0 features.
std::vector<double> bitstring_features(std::size_t index, int n);

// Runs the circuit and maps the first k basis probabilities through the
// mapping network: theta_i = M(bits(i), p_i). Probabilities with index
// >= k are discarded. Output is unbounded (linear head).
std::vector<double> generate_theta(const qsim::CircuitParams& circuit,
                                   std::span<const double> mapping_weights,
                                   const QTConfig& cfg);

struct QtBackwardResult {
  std::vector<double> grad_circuit;    // same shape as circuit.angles
  nn::FlatWeights grad_mapping;
};

// Chain rule of dLoss/dtheta back to the circuit angles and mapping
// weights. Per basis i < k the mapping backward pass yields the mapping
// gradient and dtheta_i/dp_i; the probability gradients then flow through
// the circuit's adjoint pass.
QtBackwardResult qt_backward(const qsim::CircuitParams& circuit,
                             std::span<const double> mapping_weights,
                             const QTConfig& cfg,
                             std::span<const double> grad_theta);

}  // namespace qtrl::qt
