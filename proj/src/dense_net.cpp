#include "qtrl/dense_net.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "qtrl/errors.hpp"

namespace qtrl::nn {

namespace {

std::size_t layer_count(const DenseNetSpec& spec) {
  return spec.layer_sizes.size() - 1;
}

void check_input(const DenseNetSpec& spec, std::span<const double> weights,
                 std::span<const double> input) {
  validate(spec);
  if (static_cast<int>(weights.size()) != param_count(spec))
    throw ConfigError("weight vector length does not match spec");
  if (static_cast<int>(input.size()) != spec.layer_sizes.front())
    throw ConfigError("input length does not match first layer size");
}

// Post-activation inputs of every layer plus the final logits.
struct ForwardTrace {
  std::vector<std::vector<double>> inputs;
  std::vector<double> logits;
};

ForwardTrace run_forward(const DenseNetSpec& spec,
                         std::span<const double> weights,
                         std::span<const double> input) {
  ForwardTrace trace;
  std::vector<double> cur(input.begin(), input.end());
  std::size_t off = 0;
  const std::size_t layers = layer_count(spec);
  for (std::size_t l = 0; l < layers; ++l) {
    const int in = spec.layer_sizes[l];
    const int out = spec.layer_sizes[l + 1];
    trace.inputs.push_back(cur);
    std::vector<double> next(static_cast<std::size_t>(out));
    const double* w = weights.data() + off;
    const double* b = w + static_cast<std::size_t>(in) * out;
    for (int o = 0; o < out; ++o) {
      double acc = b[o];
      const double* row = w + static_cast<std::size_t>(o) * in;
      for (int i = 0; i < in; ++i) acc += row[i] * cur[static_cast<std::size_t>(i)];
      next[static_cast<std::size_t>(o)] = acc;
    }
    if (l + 1 < layers) {
      for (double& x : next) x = x > 0.0 ? x : 0.0;  // relu
    }
    cur = std::move(next);
    off += static_cast<std::size_t>(in) * out + out;
  }
  trace.logits = std::move(cur);
  return trace;
}

}  // namespace

void validate(const DenseNetSpec& spec) {
  if (spec.layer_sizes.size() < 2)
    throw ConfigError("dense net spec needs at least an input and output layer");
  for (int s : spec.layer_sizes)
    if (s < 1) throw ConfigError("dense net layer sizes must be >= 1");
}

int param_count(const DenseNetSpec& spec) {
  validate(spec);
  int total = 0;
  for (std::size_t l = 0; l + 1 < spec.layer_sizes.size(); ++l)
    total += spec.layer_sizes[l] * spec.layer_sizes[l + 1] + spec.layer_sizes[l + 1];
  return total;
}

FlatWeights init_weights(const DenseNetSpec& spec, Rng& rng) {
  FlatWeights w(static_cast<std::size_t>(param_count(spec)));
  std::size_t off = 0;
  for (std::size_t l = 0; l + 1 < spec.layer_sizes.size(); ++l) {
    const int in = spec.layer_sizes[l];
    const int out = spec.layer_sizes[l + 1];
    const double bound = 1.0 / std::sqrt(static_cast<double>(in));
    const std::size_t n = static_cast<std::size_t>(in) * out + out;
    for (std::size_t i = 0; i < n; ++i) w[off + i] = rng.uniform(-bound, bound);
    off += n;
  }
  return w;
}

std::vector<double> softmax(std::span<const double> logits) {
  std::vector<double> out(logits.size());
  double max = logits[0];
  for (double z : logits) max = std::max(max, z);
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - max);
    sum += out[i];
  }
  for (double& p : out) p /= sum;
  return out;
}

std::vector<double> forward_logits(const DenseNetSpec& spec,
                                   std::span<const double> weights,
                                   std::span<const double> input) {
  check_input(spec, weights, input);
  return run_forward(spec, weights, input).logits;
}

std::vector<double> forward(const DenseNetSpec& spec,
                            std::span<const double> weights,
                            std::span<const double> input) {
  std::vector<double> logits = forward_logits(spec, weights, input);
  if (spec.output_head == Head::kSoftmax) return softmax(logits);
  return logits;
}

BackwardResult backward_from_logits(const DenseNetSpec& spec,
                                    std::span<const double> weights,
                                    std::span<const double> input,
                                    std::span<const double> upstream_logits) {
  check_input(spec, weights, input);
  if (static_cast<int>(upstream_logits.size()) != spec.layer_sizes.back())
    throw ConfigError("upstream gradient length does not match output size");

  const ForwardTrace trace = run_forward(spec, weights, input);
  BackwardResult res;
  res.grad_weights.assign(weights.size(), 0.0);

  std::vector<double> delta(upstream_logits.begin(), upstream_logits.end());
  const std::size_t layers = layer_count(spec);

  // Offsets of each layer's parameter block.
  std::vector<std::size_t> offsets(layers);
  std::size_t off = 0;
  for (std::size_t l = 0; l < layers; ++l) {
    offsets[l] = off;
    off += static_cast<std::size_t>(spec.layer_sizes[l]) * spec.layer_sizes[l + 1] +
           spec.layer_sizes[l + 1];
  }

  for (std::size_t l = layers; l-- > 0;) {
    const int in = spec.layer_sizes[l];
    const int out = spec.layer_sizes[l + 1];
    const std::vector<double>& a = trace.inputs[l];
    const double* w = weights.data() + offsets[l];
    double* gw = res.grad_weights.data() + offsets[l];
    double* gb = gw + static_cast<std::size_t>(in) * out;

    std::vector<double> grad_in(static_cast<std::size_t>(in), 0.0);
    for (int o = 0; o < out; ++o) {
      const double d = delta[static_cast<std::size_t>(o)];
      gb[o] += d;
      double* grow = gw + static_cast<std::size_t>(o) * in;
      const double* wrow = w + static_cast<std::size_t>(o) * in;
      for (int i = 0; i < in; ++i) {
        grow[i] += d * a[static_cast<std::size_t>(i)];
        grad_in[static_cast<std::size_t>(i)] += d * wrow[i];
      }
    }
    if (l > 0) {
      // a is the relu output of the previous layer; mask where it was clamped.
      for (int i = 0; i < in; ++i)
        if (a[static_cast<std::size_t>(i)] <= 0.0) grad_in[static_cast<std::size_t>(i)] = 0.0;
    }
    delta = std::move(grad_in);
  }
  res.grad_input = std::move(delta);
  return res;
}

BackwardResult backward(const DenseNetSpec& spec,
                        std::span<const double> weights,
                        std::span<const double> input,
                        std::span<const double> upstream) {
  if (spec.output_head == Head::kLinear)
    return backward_from_logits(spec, weights, input, upstream);

  // Softmax Jacobian: dz_j = y_j * (u_j - sum_k u_k y_k).
  std::vector<double> y = forward(spec, weights, input);
  if (upstream.size() != y.size())
    throw ConfigError("upstream gradient length does not match output size");
  double dot = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) dot += upstream[i] * y[i];
  std::vector<double> dz(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) dz[i] = y[i] * (upstream[i] - dot);
  return backward_from_logits(spec, weights, input, dz);
}

void adam_step(AdamState& state, std::span<double> params,
               std::span<const double> grads) {
  if (params.size() != grads.size() || params.size() != state.m.size())
    throw ConfigError("adam_step size mismatch");
  for (double g : grads)
    if (!std::isfinite(g))
      throw NumericalError("non-finite gradient in adam_step");

  state.step += 1;
  const double bc1 = 1.0 - std::pow(state.cfg.beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(state.cfg.beta2, static_cast<double>(state.step));
  for (std::size_t i = 0; i < params.size(); ++i) {
    state.m[i] = state.cfg.beta1 * state.m[i] + (1.0 - state.cfg.beta1) * grads[i];
    state.v[i] = state.cfg.beta2 * state.v[i] + (1.0 - state.cfg.beta2) * grads[i] * grads[i];
    const double mhat = state.m[i] / bc1;
    const double vhat = state.v[i] / bc2;
    params[i] -= state.cfg.lr * mhat / (std::sqrt(vhat) + state.cfg.eps);
  }
}

}  // namespace qtrl::nn
