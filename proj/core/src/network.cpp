#include "ocr/network.hpp"

#include "ocr/errors.hpp"
#include "ocr/rng.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ocr {
namespace {

void check_model(const Model& m) {
    if (m.layer_dims.size() < 2)
        throw std::invalid_argument("model needs at least input and output layers");
    if (m.weights.size() != m.layer_dims.size() - 1)
        throw std::invalid_argument("weight matrix count does not chain the layers");
    for (std::size_t l = 0; l < m.weights.size(); ++l)
        if (m.weights[l].rows != m.layer_dims[l] || m.weights[l].cols != m.layer_dims[l + 1])
            throw std::invalid_argument("weight matrix shape mismatch");
    if (m.has_biases() && m.biases.size() != m.weights.size())
        throw std::invalid_argument("bias vector count does not chain the layers");
}

int argmax(std::span<const double> v) {
    return static_cast<int>(std::max_element(v.begin(), v.end()) - v.begin());
}

// Adds this example's gradient contribution into acc (shapes must match).
void accumulate_backward(const Model& model, const ForwardCache& cache, int label,
                         Gradients& acc) {
    const std::size_t L = model.weights.size();
    std::vector<double> delta = cache.probs;
    delta[std::size_t(label)] -= 1.0;

    for (std::size_t l = L; l-- > 0;) {
        const Matrix& w = model.weights[l];
        const std::vector<double>& a_in = cache.inputs[l];
        Matrix& gw = acc.weights[l];
        for (int i = 0; i < w.rows; ++i) {
            const double ai = a_in[std::size_t(i)];
            if (ai == 0.0)
                continue; // zero input contributes a zero row
            double* grow = &gw.data[std::size_t(i) * w.cols];
            for (int j = 0; j < w.cols; ++j)
                grow[j] += ai * delta[std::size_t(j)];
        }
        if (model.has_biases()) {
            std::vector<double>& gb = acc.biases[l];
            for (int j = 0; j < w.cols; ++j)
                gb[std::size_t(j)] += delta[std::size_t(j)];
        }
        if (l == 0)
            break;

        std::vector<double> prev(std::size_t(w.rows));
        for (int i = 0; i < w.rows; ++i) {
            const double* wrow = &w.data[std::size_t(i) * w.cols];
            double s = 0.0;
            for (int j = 0; j < w.cols; ++j)
                s += wrow[j] * delta[std::size_t(j)];
            prev[std::size_t(i)] = s;
        }
        const std::vector<double>& z = cache.pre[l - 1];
        const std::vector<double>& post = cache.inputs[l];
        switch (model.hidden_activation) {
        case Activation::relu:
            for (std::size_t i = 0; i < prev.size(); ++i)
                if (z[i] <= 0.0)
                    prev[i] = 0.0;
            break;
        case Activation::sigmoid:
            for (std::size_t i = 0; i < prev.size(); ++i)
                prev[i] *= post[i] * (1.0 - post[i]);
            break;
        case Activation::tanh:
            for (std::size_t i = 0; i < prev.size(); ++i)
                prev[i] *= 1.0 - post[i] * post[i];
            break;
        }
        delta = std::move(prev);
    }
}

Gradients make_zero_gradients(const Model& m) {
    Gradients g;
    g.weights.reserve(m.weights.size());
    for (const Matrix& w : m.weights)
        g.weights.emplace_back(w.rows, w.cols);
    if (m.has_biases()) {
        g.biases.reserve(m.biases.size());
        for (const std::vector<double>& b : m.biases)
            g.biases.emplace_back(b.size(), 0.0);
    }
    return g;
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 24));
}

void put_f64(std::vector<std::uint8_t>& out, double d) {
    const std::uint64_t v = std::bit_cast<std::uint64_t>(d);
    for (int i = 0; i < 8; ++i)
        out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

constexpr char model_magic[8] = {'H', 'D', 'R', 'N', 'N', '0', '0', '1'};

} // namespace

Model make_model(std::vector<int> layer_dims, bool with_biases, Activation hidden,
                 std::uint64_t seed) {
    if (layer_dims.size() < 2)
        throw std::invalid_argument("model needs at least input and output layers");
    for (int d : layer_dims)
        if (d < 1)
            throw std::invalid_argument("layer dimensions must be positive");
    Model m;
    m.layer_dims = std::move(layer_dims);
    m.hidden_activation = hidden;
    Rng rng(seed);
    for (std::size_t l = 0; l + 1 < m.layer_dims.size(); ++l) {
        const int fan_in = m.layer_dims[l];
        const int fan_out = m.layer_dims[l + 1];
        Matrix w(fan_in, fan_out);
        const double limit = std::sqrt(6.0 / (fan_in + fan_out));
        for (double& v : w.data)
            v = rng.real(-limit, limit);
        m.weights.push_back(std::move(w));
        if (with_biases)
            m.biases.emplace_back(std::size_t(fan_out), 0.0);
    }
    return m;
}

std::vector<double> relu(std::vector<double> x) {
    for (double& v : x)
        v = v > 0.0 ? v : 0.0;
    return x;
}

std::vector<double> sigmoid(std::vector<double> x) {
    for (double& v : x)
        v = 1.0 / (1.0 + std::exp(-v));
    return x;
}

std::vector<double> tanh_act(std::vector<double> x) {
    for (double& v : x)
        v = std::tanh(v);
    return x;
}

std::vector<double> softmax(std::vector<double> x) {
    const double shift = *std::max_element(x.begin(), x.end());
    double sum = 0.0;
    for (double& v : x) {
        v = std::exp(v - shift);
        sum += v;
    }
    for (double& v : x)
        v /= sum;
    return x;
}

std::vector<double> forward(const Model& model, std::span<const double> input,
                            ForwardCache* cache) {
    check_model(model);
    if (static_cast<int>(input.size()) != model.layer_dims.front())
        throw std::invalid_argument("input length " + std::to_string(input.size()) +
                                    " does not match input layer " +
                                    std::to_string(model.layer_dims.front()));
    if (cache) {
        cache->inputs.clear();
        cache->pre.clear();
    }
    std::vector<double> a(input.begin(), input.end());
    const std::size_t L = model.weights.size();
    for (std::size_t l = 0; l < L; ++l) {
        const Matrix& w = model.weights[l];
        std::vector<double> z =
            model.has_biases() ? model.biases[l] : std::vector<double>(std::size_t(w.cols), 0.0);
        for (int i = 0; i < w.rows; ++i) {
            const double ai = a[std::size_t(i)];
            if (ai == 0.0)
                continue; // zero input adds nothing to any unit
            const double* wrow = &w.data[std::size_t(i) * w.cols];
            for (int j = 0; j < w.cols; ++j)
                z[std::size_t(j)] += ai * wrow[j];
        }
        if (cache) {
            cache->inputs.push_back(std::move(a));
            cache->pre.push_back(z);
        }
        if (l + 1 < L) {
            switch (model.hidden_activation) {
            case Activation::relu: a = relu(std::move(z)); break;
            case Activation::sigmoid: a = sigmoid(std::move(z)); break;
            case Activation::tanh: a = tanh_act(std::move(z)); break;
            }
        } else {
            a = softmax(std::move(z));
        }
    }
    if (cache)
        cache->probs = a;
    return a;
}

double loss_cross_entropy(std::span<const double> probs, int label) {
    if (label < 0 || static_cast<std::size_t>(label) >= probs.size())
        throw std::invalid_argument("label out of range");
    return -std::log(std::max(probs[std::size_t(label)], 1e-15));
}

Gradients backward(const Model& model, const ForwardCache& cache, int label) {
    check_model(model);
    if (cache.inputs.size() != model.weights.size() || cache.pre.size() != model.weights.size())
        throw std::invalid_argument("cache does not match the model");
    if (label < 0 || label >= model.layer_dims.back())
        throw std::invalid_argument("label out of range");
    Gradients g = make_zero_gradients(model);
    accumulate_backward(model, cache, label, g);
    return g;
}

AdamState make_adam_state(const Model& model) {
    AdamState s;
    for (const Matrix& w : model.weights) {
        s.m_w.emplace_back(w.rows, w.cols);
        s.v_w.emplace_back(w.rows, w.cols);
    }
    for (const std::vector<double>& b : model.biases) {
        s.m_b.emplace_back(b.size(), 0.0);
        s.v_b.emplace_back(b.size(), 0.0);
    }
    return s;
}

namespace {

void adam_update(std::span<double> theta, std::span<const double> grad, std::span<double> m,
                 std::span<double> v, const AdamState& s, double lr) {
    const double c1 = 1.0 - s.beta1_pow;
    const double c2 = 1.0 - s.beta2_pow;
    const double one_minus_b1 = 1.0 - s.beta1;
    const double one_minus_b2 = 1.0 - s.beta2;
    for (std::size_t i = 0; i < theta.size(); ++i) {
        const double gi = grad[i];
        m[i] = s.beta1 * m[i] + one_minus_b1 * gi;
        v[i] = s.beta2 * v[i] + one_minus_b2 * gi * gi;
        const double mhat = m[i] / c1;
        const double vhat = v[i] / c2;
        theta[i] -= lr * mhat / (std::sqrt(vhat) + s.epsilon);
    }
}

} // namespace

void adam_step(Model& model, const Gradients& grads, AdamState& state, double lr) {
    if (grads.weights.size() != model.weights.size() ||
        state.m_w.size() != model.weights.size() ||
        (model.has_biases() && grads.biases.size() != model.biases.size()))
        throw std::invalid_argument("gradient or state shape does not match the model");
    state.t += 1;
    state.beta1_pow *= state.beta1;
    state.beta2_pow *= state.beta2;
    for (std::size_t l = 0; l < model.weights.size(); ++l)
        adam_update(model.weights[l].data, grads.weights[l].data, state.m_w[l].data,
                    state.v_w[l].data, state, lr);
    for (std::size_t l = 0; l < model.biases.size(); ++l)
        adam_update(model.biases[l], grads.biases[l], state.m_b[l], state.v_b[l], state, lr);
}

std::vector<EpochMetrics> train(Model& model, const Dataset& data, const TrainConfig& cfg,
                                const EpochCallback& on_epoch) {
    check_model(model);
    if (data.empty())
        throw std::invalid_argument("training dataset is empty");
    // learning_rate == 0 is allowed: a zero step leaves the model unchanged.
    if (cfg.learning_rate < 0.0 || cfg.epochs < 1 || cfg.batch_size < 1)
        throw std::invalid_argument("invalid training configuration");
    if (model.layer_dims.front() != Glyph28::side * Glyph28::side)
        throw std::invalid_argument("training expects a 784-input model");

    const std::size_t n = data.size();
    AdamState state = make_adam_state(model);
    Rng rng(cfg.seed);
    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    Gradients batch_g = make_zero_gradients(model);
    ForwardCache cache;
    std::vector<EpochMetrics> history;
    history.reserve(std::size_t(cfg.epochs));

    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        rng.shuffle(std::span<std::uint32_t>(order));
        double loss_sum = 0.0;
        std::size_t correct = 0;
        for (std::size_t start = 0; start < n; start += std::size_t(cfg.batch_size)) {
            const std::size_t end = std::min(n, start + std::size_t(cfg.batch_size));
            for (Matrix& gw : batch_g.weights)
                std::fill(gw.data.begin(), gw.data.end(), 0.0);
            for (std::vector<double>& gb : batch_g.biases)
                std::fill(gb.begin(), gb.end(), 0.0);
            for (std::size_t k = start; k < end; ++k) {
                const Example& ex = data.examples[order[k]];
                forward(model, ex.glyph.pixels, &cache);
                loss_sum += loss_cross_entropy(cache.probs, ex.label);
                if (argmax(cache.probs) == ex.label)
                    ++correct;
                accumulate_backward(model, cache, ex.label, batch_g);
            }
            const double inv = 1.0 / static_cast<double>(end - start);
            for (Matrix& gw : batch_g.weights)
                for (double& v : gw.data)
                    v *= inv;
            for (std::vector<double>& gb : batch_g.biases)
                for (double& v : gb)
                    v *= inv;
            adam_step(model, batch_g, state, cfg.learning_rate);
        }
        EpochMetrics em{epoch, loss_sum / static_cast<double>(n),
                        static_cast<double>(correct) / static_cast<double>(n)};
        history.push_back(em);
        if (on_epoch)
            on_epoch(em);
    }
    return history;
}

EvalResult evaluate(const Model& model, const Dataset& data) {
    check_model(model);
    if (data.empty())
        throw std::invalid_argument("evaluation dataset is empty");
    EvalResult r;
    std::size_t correct = 0;
    for (const Example& ex : data.examples) {
        const std::vector<double> probs = forward(model, ex.glyph.pixels);
        const int pred = argmax(probs);
        ++r.confusion[ex.label][pred];
        if (pred == ex.label)
            ++correct;
    }
    r.accuracy = static_cast<double>(correct) / static_cast<double>(data.size());
    return r;
}

Prediction predict(const Model& model, const Glyph28& glyph) {
    Prediction p;
    p.probs = forward(model, glyph.pixels);
    p.digit = argmax(p.probs);
    return p;
}

std::vector<std::uint8_t> save_model(const Model& model) {
    check_model(model);
    std::vector<std::uint8_t> out;
    out.insert(out.end(), model_magic, model_magic + 8);
    put_u32(out, static_cast<std::uint32_t>(model.layer_dims.size()));
    for (int d : model.layer_dims)
        put_u32(out, static_cast<std::uint32_t>(d));
    out.push_back(model.has_biases() ? 1 : 0);
    out.push_back(static_cast<std::uint8_t>(model.hidden_activation));
    for (const Matrix& w : model.weights)
        for (double v : w.data)
            put_f64(out, v);
    for (const std::vector<double>& b : model.biases)
        for (double v : b)
            put_f64(out, v);
    return out;
}

Model load_model(std::span<const std::uint8_t> bytes) {
    std::size_t pos = 0;
    const auto need = [&](std::size_t count, const char* what) {
        if (bytes.size() - pos < count)
            throw format_error(std::string("model file truncated in ") + what);
    };
    const auto get_u32 = [&] {
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i)
            v |= std::uint32_t(bytes[pos++]) << (8 * i);
        return v;
    };

    need(8, "magic");
    if (std::memcmp(bytes.data(), model_magic, 8) != 0)
        throw format_error("bad model magic (want HDRNN001)");
    pos = 8;

    need(4, "layer count");
    const std::uint32_t layers = get_u32();
    if (layers < 2 || layers > 1024)
        throw format_error("implausible layer count " + std::to_string(layers));
    need(std::size_t(layers) * 4, "layer dims");
    Model m;
    for (std::uint32_t i = 0; i < layers; ++i) {
        const std::uint32_t d = get_u32();
        if (d < 1 || d > (1u << 24))
            throw format_error("implausible layer dimension " + std::to_string(d));
        m.layer_dims.push_back(static_cast<int>(d));
    }
    need(2, "flags");
    const std::uint8_t bias_flag = bytes[pos++];
    if (bias_flag > 1)
        throw format_error("bad bias flag");
    const std::uint8_t act = bytes[pos++];
    if (act > 2)
        throw format_error("bad activation code " + std::to_string(act));
    m.hidden_activation = static_cast<Activation>(act);

    std::size_t doubles = 0;
    for (std::size_t l = 0; l + 1 < m.layer_dims.size(); ++l) {
        doubles += std::size_t(m.layer_dims[l]) * std::size_t(m.layer_dims[l + 1]);
        if (bias_flag)
            doubles += std::size_t(m.layer_dims[l + 1]);
    }
    if (bytes.size() - pos != doubles * 8)
        throw format_error("model payload size mismatch: expected " + std::to_string(doubles * 8) +
                           " bytes, found " + std::to_string(bytes.size() - pos));

    const auto get_f64 = [&] {
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i)
            v |= std::uint64_t(bytes[pos++]) << (8 * i);
        return std::bit_cast<double>(v);
    };
    for (std::size_t l = 0; l + 1 < m.layer_dims.size(); ++l) {
        Matrix w(m.layer_dims[l], m.layer_dims[l + 1]);
        for (double& v : w.data) {
            v = get_f64();
            if (!std::isfinite(v))
                throw format_error("non-finite weight in model file");
        }
        m.weights.push_back(std::move(w));
    }
    if (bias_flag)
        for (std::size_t l = 0; l + 1 < m.layer_dims.size(); ++l) {
            std::vector<double> b(std::size_t(m.layer_dims[l + 1]));
            for (double& v : b) {
                v = get_f64();
                if (!std::isfinite(v))
                    throw format_error("non-finite bias in model file");
            }
            m.biases.push_back(std::move(b));
        }
    return m;
}

} // namespace ocr
