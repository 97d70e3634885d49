#include "qtrl/qt_generator.hpp"

#include <bit>
#include <cmath>

#include "qtrl/errors.hpp"

namespace qtrl::qt {

constexpr double kMappingOutputScale = 0.1;

int qubits_for(int k) {
  if (k < 2) throw ConfigError("generated parameter count must be >= 2");
  return std::bit_width(static_cast<unsigned>(k - 1));
}

QTConfig make_config(int k, int depth) {
  QTConfig cfg;
  cfg.k = k;
  cfg.n = qubits_for(k);
  cfg.depth = depth;
  if (depth < 1) throw ConfigError("circuit depth must be >= 1");
  if (cfg.n > 24) throw ConfigError("generated parameter count too large to simulate");
  cfg.mapping_spec.layer_sizes = {cfg.n + 1, 10, 10, 1};
  cfg.mapping_spec.hidden_activation = nn::Activation::kRelu;
  cfg.mapping_spec.output_head = nn::Head::kLinear;
  return cfg;
}

int qt_param_count(const QTConfig& cfg) {
  return qsim::kAnglesPerQubit * cfg.n * cfg.depth + nn::param_count(cfg.mapping_spec);
}

nn::FlatWeights init_mapping_weights(const QTConfig& cfg, Rng& rng) {
  nn::FlatWeights beta = nn::init_weights(cfg.mapping_spec, rng);
  const auto& sizes = cfg.mapping_spec.layer_sizes;
  const std::size_t in = static_cast<std::size_t>(sizes[0]);

  // The probability feature is O(2^-n) while the bit features are O(1);
  // scale its first-layer column so both carry comparable signal at init.
  const double pcol_scale = static_cast<double>(std::size_t{1} << cfg.n);
  for (int u = 0; u < sizes[1]; ++u)
    beta[static_cast<std::size_t>(u) * in + (in - 1)] *= pcol_scale;

  // Output layer: one-tenth scale, weights in antithetic pairs, zero bias.
  // The pairing cancels the common (always-positive) component of the relu
  // activations, so the generated weights straddle zero instead of being
  // offset to one sign for the whole run.
  const std::size_t last =
      static_cast<std::size_t>(sizes[sizes.size() - 2]) * sizes.back() + sizes.back();
  const std::size_t off = beta.size() - last;
  const int width = sizes[sizes.size() - 2];
  const double bound = kMappingOutputScale / std::sqrt(static_cast<double>(width));
  for (int j = 0; j + 1 < width; j += 2) {
    const double a = rng.uniform(-bound, bound);
    beta[off + static_cast<std::size_t>(j)] = a;
    beta[off + static_cast<std::size_t>(j) + 1] = -a;
  }
  if (width % 2 == 1)
    beta[off + static_cast<std::size_t>(width) - 1] *= kMappingOutputScale;
  beta[beta.size() - 1] = 0.0;
  return beta;
}

std::vector<double> bitstring_features(std::size_t index, int n) {
  if (n < 1 || index >= (std::size_t{1} << n))
    throw ConfigError("basis index out of range");
  std::vector<double> bits(static_cast<std::size_t>(n));
  for (int b = 0; b < n; ++b)
    bits[static_cast<std::size_t>(b)] =
        (index >> (n - 1 - b)) & 1 ? 1.0 : 0.0;
  return bits;
}

namespace {

void check_config(const qsim::CircuitParams& circuit,
                  std::span<const double> mapping_weights, const QTConfig& cfg) {
  if (circuit.n != cfg.n)
    throw ConfigError("circuit qubit count does not match generator config");
  if (circuit.depth != cfg.depth)
    throw ConfigError("circuit depth does not match generator config");
  if (static_cast<int>(mapping_weights.size()) != nn::param_count(cfg.mapping_spec))
    throw ConfigError("mapping weight length does not match generator config");
  if (cfg.k < 2 || cfg.k > (1 << cfg.n) || cfg.k <= (1 << (cfg.n - 1)))
    throw ConfigError("generator config violates 2^n >= k > 2^(n-1)");
}

}  // namespace

std::vector<double> generate_theta(const qsim::CircuitParams& circuit,
                                   std::span<const double> mapping_weights,
                                   const QTConfig& cfg) {
  check_config(circuit, mapping_weights, cfg);
  const qsim::StateVector state = run_circuit(circuit);
  const std::vector<double> probs = probabilities(state);

  std::vector<double> theta(static_cast<std::size_t>(cfg.k));
  std::vector<double> feature(static_cast<std::size_t>(cfg.n) + 1);
  for (int i = 0; i < cfg.k; ++i) {
    const std::vector<double> bits = bitstring_features(static_cast<std::size_t>(i), cfg.n);
    std::copy(bits.begin(), bits.end(), feature.begin());
    feature.back() = probs[static_cast<std::size_t>(i)];
    theta[static_cast<std::size_t>(i)] =
        nn::forward(cfg.mapping_spec, mapping_weights, feature)[0];
  }
  return theta;
}

QtBackwardResult qt_backward(const qsim::CircuitParams& circuit,
                             std::span<const double> mapping_weights,
                             const QTConfig& cfg,
                             std::span<const double> grad_theta) {
  check_config(circuit, mapping_weights, cfg);
  if (static_cast<int>(grad_theta.size()) != cfg.k)
    throw ConfigError("grad_theta length does not match k");
  for (double g : grad_theta)
    if (!std::isfinite(g)) throw NumericalError("non-finite grad_theta entry");

  const qsim::StateVector state = run_circuit(circuit);
  const std::vector<double> probs = probabilities(state);

  QtBackwardResult res;
  res.grad_mapping.assign(mapping_weights.size(), 0.0);
  std::vector<double> grad_probs(probs.size(), 0.0);

  std::vector<double> feature(static_cast<std::size_t>(cfg.n) + 1);
  const double upstream[1] = {1.0};
  for (int i = 0; i < cfg.k; ++i) {
    const double g = grad_theta[static_cast<std::size_t>(i)];
    if (g == 0.0) continue;
    const std::vector<double> bits = bitstring_features(static_cast<std::size_t>(i), cfg.n);
    std::copy(bits.begin(), bits.end(), feature.begin());
    feature.back() = probs[static_cast<std::size_t>(i)];
    nn::BackwardResult bw =
        nn::backward(cfg.mapping_spec, mapping_weights, feature, upstream);
    for (std::size_t w = 0; w < res.grad_mapping.size(); ++w)
      res.grad_mapping[w] += g * bw.grad_weights[w];
    grad_probs[static_cast<std::size_t>(i)] = g * bw.grad_input.back();
  }

  res.grad_circuit = qsim::backprop_probabilities(circuit, grad_probs);
  return res;
}

}  // namespace qtrl::qt
