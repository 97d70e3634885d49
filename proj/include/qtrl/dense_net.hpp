#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qtrl/rng.hpp"

namespace qtrl::nn {

enum class Activation { kRelu };
enum class Head { kLinear, kSoftmax };

// Fully-connected net description. layer_sizes includes input and output
// widths, e.g. {4, 128, 2}.
struct DenseNetSpec {
  std::vector<int> layer_sizes;
  Activation hidden_activation = Activation::kRelu;
  Head output_head = Head::kLinear;
};

// Flat parameter layout: per layer, the (out x in) weight matrix in
// row-major order, then the bias vector. Layers in network order.
// This layout is load-bearing for exported models; do not reorder.
using FlatWeights = std::vector<double>;

void validate(const DenseNetSpec& spec);
int param_count(const DenseNetSpec& spec);

// Uniform init in [-1/sqrt(fan_in), +1/sqrt(fan_in)] per layer, applied to
// both weights and biases.
FlatWeights init_weights(const DenseNetSpec& spec, Rng& rng);

// Numerically stable softmax (max subtracted before exponentiation).
std::vector<double> softmax(std::span<const double> logits);

// Pre-head output of the final layer.
std::vector<double> forward_logits(const DenseNetSpec& spec,
                                   std::span<const double> weights,
                                   std::span<const double> input);

// Full forward pass with the output head applied.
std::vector<double> forward(const DenseNetSpec& spec,
                            std::span<const double> weights,
                            std::span<const double> input);

struct BackwardResult {
  FlatWeights grad_weights;
  std::vector<double> grad_input;
};

// Reverse-mode gradients. `upstream` is dLoss/d(head output); for a softmax
// head the softmax Jacobian is applied before the affine chain.
BackwardResult backward(const DenseNetSpec& spec,
                        std::span<const double> weights,
                        std::span<const double> input,
                        std::span<const double> upstream);

// Same, but `upstream_logits` is dLoss/d(logits). Lets callers fuse
// softmax with a log-likelihood loss; must agree with the unfused chain.
BackwardResult backward_from_logits(const DenseNetSpec& spec,
                                    std::span<const double> weights,
                                    std::span<const double> input,
                                    std::span<const double> upstream_logits);

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  AdamConfig cfg;
  std::vector<double> m;
  std::vector<double> v;
  std::int64_t step = 0;

  explicit AdamState(std::size_t size, AdamConfig cfg = {})
      : cfg(cfg), m(size, 0.0), v(size, 0.0) {}
};

// In-place Adam update with bias correction. Throws NumericalError if any
// gradient entry is non-finite.
void adam_step(AdamState& state, std::span<double> params,
               std::span<const double> grads);

}  // namespace qtrl::nn
