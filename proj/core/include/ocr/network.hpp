#pragma once

#include "ocr/dataset.hpp"
#include "ocr/glyph.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace ocr {

struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), data(std::size_t(r) * c, 0.0) {}

    double& at(int r, int c) { return data[std::size_t(r) * cols + c]; }
    double at(int r, int c) const { return data[std::size_t(r) * cols + c]; }

    friend bool operator==(const Matrix&, const Matrix&) = default;
};

enum class Activation : std::uint8_t { relu = 0, sigmoid = 1, tanh = 2 };

// Feed-forward net ending in softmax.  Weight matrix l maps layer l to
// layer l+1 and is stored fan_in x fan_out; biases are empty when disabled.
struct Model {
    std::vector<int> layer_dims;
    std::vector<Matrix> weights;
    std::vector<std::vector<double>> biases;
    Activation hidden_activation = Activation::relu;

    bool has_biases() const { return !biases.empty(); }
};

// Glorot-uniform initialization, seeded: each weight drawn from
// +-sqrt(6/(fan_in+fan_out)), biases (when enabled) start at zero.
Model make_model(std::vector<int> layer_dims, bool with_biases = false,
                 Activation hidden = Activation::relu, std::uint64_t seed = 42);

std::vector<double> relu(std::vector<double> x);
std::vector<double> sigmoid(std::vector<double> x);
std::vector<double> tanh_act(std::vector<double> x);
// Max-shifted: outputs strictly positive, summing to 1.
std::vector<double> softmax(std::vector<double> x);

struct ForwardCache {
    std::vector<std::vector<double>> inputs; // inputs[l] feeds transition l
    std::vector<std::vector<double>> pre;    // pre[l] = W_l^T inputs[l] (+ b_l)
    std::vector<double> probs;
};

std::vector<double> forward(const Model& model, std::span<const double> input,
                            ForwardCache* cache = nullptr);

// -ln(probs[label]) with probs floored at 1e-15.
double loss_cross_entropy(std::span<const double> probs, int label);

struct Gradients {
    std::vector<Matrix> weights;
    std::vector<std::vector<double>> biases;
};

// Exact gradients of loss_cross_entropy(forward(...), label).
Gradients backward(const Model& model, const ForwardCache& cache, int label);

struct AdamState {
    std::vector<Matrix> m_w, v_w;
    std::vector<std::vector<double>> m_b, v_b;
    std::int64_t t = 0;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    // Running beta^t, advanced each step; keeps the bias correction at t=1
    // bit-identical to the (1-beta) factor used in the moment update.
    double beta1_pow = 1.0;
    double beta2_pow = 1.0;
};

AdamState make_adam_state(const Model& model);
void adam_step(Model& model, const Gradients& grads, AdamState& state, double lr);

struct TrainConfig {
    double learning_rate = 0.002;
    int epochs = 10;
    int batch_size = 32;
    std::uint64_t seed = 42;
};

struct EpochMetrics {
    int epoch = 0;    // 1-based
    double loss = 0.0; // mean over the epoch's forward passes
    double accuracy = 0.0;
};

using EpochCallback = std::function<void(const EpochMetrics&)>;

// Seeded-shuffle minibatch training with one adam_step per batch (mean
// gradient over the batch).  Deterministic given model, data, and config.
std::vector<EpochMetrics> train(Model& model, const Dataset& data, const TrainConfig& cfg,
                                const EpochCallback& on_epoch = {});

struct EvalResult {
    double accuracy = 0.0;
    std::uint64_t confusion[10][10] = {}; // [true][predicted]
};

EvalResult evaluate(const Model& model, const Dataset& data);

struct Prediction {
    int digit = 0;
    std::vector<double> probs;
};

// Argmax prediction; ties break to the lowest digit.
Prediction predict(const Model& model, const Glyph28& glyph);

// Binary model format, little-endian: magic "HDRNN001", u32 layer count,
// the dims, a bias flag byte, an activation byte, then the weight matrices
// row-major as f64 (biases after, when flagged).
std::vector<std::uint8_t> save_model(const Model& model);
Model load_model(std::span<const std::uint8_t> bytes);

} // namespace ocr
