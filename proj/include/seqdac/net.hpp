#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "seqdac/rng.hpp"

namespace seqdac {

// Fixed two-layer dense network: output = W2 * relu(W1 * input + b1) + b2.
// Double precision throughout so gradient checks can be tight.
struct Mlp {
    int input_dim = 0;
    int hidden_dim = 0;
    int output_dim = 0;
    std::vector<double> w1; // hidden_dim x input_dim, row-major
    std::vector<double> b1; // hidden_dim
    std::vector<double> w2; // output_dim x hidden_dim, row-major
    std::vector<double> b2; // output_dim

    // weights uniform in +-1/sqrt(fan_in), biases zero
    static Mlp make(int input_dim, int hidden_dim, int output_dim, Rng& rng);

    size_t param_count() const;
    bool all_finite() const;
    bool same_shape(const Mlp& other) const;
};

// Scratch buffers for one forward pass; reusable across calls to avoid
// per-sample allocation in the training loop.
struct MlpCache {
    std::vector<double> input;
    std::vector<double> pre;    // W1*x + b1
    std::vector<double> hidden; // relu(pre)
};

// Writes output_dim values into `output`. Throws on dimension mismatch.
void forward(const Mlp& net, std::span<const double> input, MlpCache& cache,
             double* output);
std::vector<double> forward(const Mlp& net, std::span<const double> input);

struct MlpGrads {
    std::vector<double> w1, b1, w2, b2;

    void resize_like(const Mlp& net);
    void clear();
    double squared_norm() const;
    void scale(double factor);
    bool all_finite() const;
};

// Accumulates (+=) parameter gradients for the forward pass recorded in
// `cache`, given dL/d(output). `grads` must already match the net's shapes.
void backward(const Mlp& net, const MlpCache& cache,
              std::span<const double> output_grad, MlpGrads& grads);

// Same, for an output gradient with only a few nonzero entries. This is the
// common case here (TD losses touch one or two action entries), and skips
// the dense output loop.
void backward_sparse(const Mlp& net, const MlpCache& cache,
                     std::span<const std::pair<int, double>> output_grad,
                     MlpGrads& grads);

// Rescales so the global L2 norm is at most max_norm. No-op when
// max_norm <= 0 or the norm is already within bounds.
void clip_grad_norm(MlpGrads& grads, double max_norm);

struct AdamState {
    double lr = 1e-4;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    double clip_norm = 10.0; // 0 disables clipping
    long step_count = 0;
    MlpGrads m, v; // first/second moments, zero-initialized

    void init(const Mlp& net, double learning_rate, double clip);
};

// Clips `grads` (in place), then applies one bias-corrected Adam update.
// Throws std::runtime_error if any gradient is non-finite; parameters are
// left untouched in that case.
void adam_step(Mlp& params, MlpGrads& grads, AdamState& state);

struct DecodeError : std::runtime_error {
    explicit DecodeError(const std::string& what) : std::runtime_error(what) {}
};

// Checkpoint blob: magic/version/dims header, length-prefixed little-endian
// double arrays, FNV-1a checksum trailer. Round-trip is bit-exact.
std::vector<uint8_t> serialize(const Mlp& net);
Mlp deserialize(std::span<const uint8_t> bytes);

} // namespace seqdac
