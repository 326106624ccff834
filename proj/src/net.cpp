#include "seqdac/net.hpp"

#include <cmath>
#include <cstring>

namespace seqdac {

Mlp Mlp::make(int input_dim, int hidden_dim, int output_dim, Rng& rng) {
    if (input_dim <= 0 || hidden_dim <= 0 || output_dim <= 0)
        throw std::invalid_argument("Mlp::make: dims must be positive");
    Mlp net;
    net.input_dim = input_dim;
    net.hidden_dim = hidden_dim;
    net.output_dim = output_dim;
    net.w1.resize(static_cast<size_t>(hidden_dim) * input_dim);
    net.b1.assign(hidden_dim, 0.0);
    net.w2.resize(static_cast<size_t>(output_dim) * hidden_dim);
    net.b2.assign(output_dim, 0.0);
    double s1 = 1.0 / std::sqrt(static_cast<double>(input_dim));
    for (double& w : net.w1) w = rng.uniform(-s1, s1);
    double s2 = 1.0 / std::sqrt(static_cast<double>(hidden_dim));
    for (double& w : net.w2) w = rng.uniform(-s2, s2);
    return net;
}

size_t Mlp::param_count() const {
    return w1.size() + b1.size() + w2.size() + b2.size();
}

static bool finite_all(const std::vector<double>& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

bool Mlp::all_finite() const {
    return finite_all(w1) && finite_all(b1) && finite_all(w2) && finite_all(b2);
}

bool Mlp::same_shape(const Mlp& other) const {
    return input_dim == other.input_dim && hidden_dim == other.hidden_dim &&
           output_dim == other.output_dim;
}

void forward(const Mlp& net, std::span<const double> input, MlpCache& cache,
             double* output) {
    if (static_cast<int>(input.size()) != net.input_dim)
        throw std::invalid_argument("forward: input length != input_dim");
    cache.input.assign(input.begin(), input.end());
    cache.pre.resize(net.hidden_dim);
    cache.hidden.resize(net.hidden_dim);
    const double* x = cache.input.data();
    for (int j = 0; j < net.hidden_dim; ++j) {
        const double* row = net.w1.data() + static_cast<size_t>(j) * net.input_dim;
        double acc = net.b1[j];
        for (int i = 0; i < net.input_dim; ++i) acc += row[i] * x[i];
        cache.pre[j] = acc;
        cache.hidden[j] = acc > 0.0 ? acc : 0.0;
    }
    const double* h = cache.hidden.data();
    for (int k = 0; k < net.output_dim; ++k) {
        const double* row = net.w2.data() + static_cast<size_t>(k) * net.hidden_dim;
        double acc = net.b2[k];
        for (int j = 0; j < net.hidden_dim; ++j) acc += row[j] * h[j];
        output[k] = acc;
    }
}

std::vector<double> forward(const Mlp& net, std::span<const double> input) {
    MlpCache cache;
    std::vector<double> out(net.output_dim);
    forward(net, input, cache, out.data());
    return out;
}

void MlpGrads::resize_like(const Mlp& net) {
    w1.assign(net.w1.size(), 0.0);
    b1.assign(net.b1.size(), 0.0);
    w2.assign(net.w2.size(), 0.0);
    b2.assign(net.b2.size(), 0.0);
}

void MlpGrads::clear() {
    std::fill(w1.begin(), w1.end(), 0.0);
    std::fill(b1.begin(), b1.end(), 0.0);
    std::fill(w2.begin(), w2.end(), 0.0);
    std::fill(b2.begin(), b2.end(), 0.0);
}

double MlpGrads::squared_norm() const {
    double acc = 0.0;
    for (double g : w1) acc += g * g;
    for (double g : b1) acc += g * g;
    for (double g : w2) acc += g * g;
    for (double g : b2) acc += g * g;
    return acc;
}

void MlpGrads::scale(double factor) {
    for (double& g : w1) g *= factor;
    for (double& g : b1) g *= factor;
    for (double& g : w2) g *= factor;
    for (double& g : b2) g *= factor;
}

bool MlpGrads::all_finite() const {
    return finite_all(w1) && finite_all(b1) && finite_all(w2) && finite_all(b2);
}

// Backprop through the hidden layer for a given dL/dhidden already folded
// into `dh`; shared by the dense and sparse entry points.
static void backprop_hidden(const Mlp& net, const MlpCache& cache,
                            const double* dh, MlpGrads& grads) {
    const double* x = cache.input.data();
    for (int j = 0; j < net.hidden_dim; ++j) {
        if (cache.pre[j] <= 0.0 || dh[j] == 0.0) continue;
        double g = dh[j];
        grads.b1[j] += g;
        double* row = grads.w1.data() + static_cast<size_t>(j) * net.input_dim;
        for (int i = 0; i < net.input_dim; ++i) row[i] += g * x[i];
    }
}

void backward(const Mlp& net, const MlpCache& cache,
              std::span<const double> output_grad, MlpGrads& grads) {
    if (static_cast<int>(output_grad.size()) != net.output_dim)
        throw std::invalid_argument("backward: output_grad length != output_dim");
    const double* h = cache.hidden.data();
    std::vector<double> dh(net.hidden_dim, 0.0);
    for (int k = 0; k < net.output_dim; ++k) {
        double g = output_grad[k];
        if (g == 0.0) continue;
        grads.b2[k] += g;
        double* wrow = grads.w2.data() + static_cast<size_t>(k) * net.hidden_dim;
        const double* w2row = net.w2.data() + static_cast<size_t>(k) * net.hidden_dim;
        for (int j = 0; j < net.hidden_dim; ++j) {
            wrow[j] += g * h[j];
            dh[j] += g * w2row[j];
        }
    }
    backprop_hidden(net, cache, dh.data(), grads);
}

void backward_sparse(const Mlp& net, const MlpCache& cache,
                     std::span<const std::pair<int, double>> output_grad,
                     MlpGrads& grads) {
    const double* h = cache.hidden.data();
    thread_local std::vector<double> dh;
    dh.assign(net.hidden_dim, 0.0);
    for (const auto& [k, g] : output_grad) {
        if (k < 0 || k >= net.output_dim)
            throw std::invalid_argument("backward_sparse: output index out of range");
        if (g == 0.0) continue;
        grads.b2[k] += g;
        double* wrow = grads.w2.data() + static_cast<size_t>(k) * net.hidden_dim;
        const double* w2row = net.w2.data() + static_cast<size_t>(k) * net.hidden_dim;
        for (int j = 0; j < net.hidden_dim; ++j) {
            wrow[j] += g * h[j];
            dh[j] += g * w2row[j];
        }
    }
    backprop_hidden(net, cache, dh.data(), grads);
}

void clip_grad_norm(MlpGrads& grads, double max_norm) {
    if (max_norm <= 0.0) return;
    double norm = std::sqrt(grads.squared_norm());
    if (norm > max_norm) grads.scale(max_norm / norm);
}

void AdamState::init(const Mlp& net, double learning_rate, double clip) {
    lr = learning_rate;
    clip_norm = clip;
    step_count = 0;
    m.resize_like(net);
    v.resize_like(net);
}

static void adam_update_array(std::vector<double>& p, const std::vector<double>& g,
                              std::vector<double>& m, std::vector<double>& v,
                              const AdamState& s, double bc1, double bc2) {
    for (size_t i = 0; i < p.size(); ++i) {
        m[i] = s.beta1 * m[i] + (1.0 - s.beta1) * g[i];
        v[i] = s.beta2 * v[i] + (1.0 - s.beta2) * g[i] * g[i];
        double mhat = m[i] / bc1;
        double vhat = v[i] / bc2;
        p[i] -= s.lr * mhat / (std::sqrt(vhat) + s.epsilon);
    }
}

void adam_step(Mlp& params, MlpGrads& grads, AdamState& state) {
    if (!grads.all_finite())
        throw std::runtime_error("adam_step: non-finite gradient");
    clip_grad_norm(grads, state.clip_norm);
    state.step_count += 1;
    double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step_count));
    double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step_count));
    adam_update_array(params.w1, grads.w1, state.m.w1, state.v.w1, state, bc1, bc2);
    adam_update_array(params.b1, grads.b1, state.m.b1, state.v.b1, state, bc1, bc2);
    adam_update_array(params.w2, grads.w2, state.m.w2, state.v.w2, state, bc1, bc2);
    adam_update_array(params.b2, grads.b2, state.m.b2, state.v.b2, state, bc1, bc2);
}

// -- checkpoint encoding ----------------------------------------------------

namespace {

constexpr uint8_t kMagic[4] = {'M', 'L', 'P', '1'};
constexpr uint32_t kVersion = 1;

void put_u32(std::vector<uint8_t>& out, uint32_t v) {
    out.push_back(static_cast<uint8_t>(v));
    out.push_back(static_cast<uint8_t>(v >> 8));
    out.push_back(static_cast<uint8_t>(v >> 16));
    out.push_back(static_cast<uint8_t>(v >> 24));
}

void put_u64(std::vector<uint8_t>& out, uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

void put_doubles(std::vector<uint8_t>& out, const std::vector<double>& arr) {
    put_u64(out, arr.size());
    for (double d : arr) {
        uint64_t bits;
        std::memcpy(&bits, &d, 8);
        put_u64(out, bits);
    }
}

struct Reader {
    std::span<const uint8_t> bytes;
    size_t pos = 0;

    void need(size_t n) const {
        if (pos + n > bytes.size()) throw DecodeError("truncated checkpoint");
    }
    uint32_t u32() {
        need(4);
        uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(bytes[pos + i]) << (8 * i);
        pos += 4;
        return v;
    }
    uint64_t u64() {
        need(8);
        uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(bytes[pos + i]) << (8 * i);
        pos += 8;
        return v;
    }
    std::vector<double> doubles(size_t expected) {
        uint64_t n = u64();
        if (n != expected) throw DecodeError("array length does not match dims");
        std::vector<double> arr(n);
        for (uint64_t i = 0; i < n; ++i) {
            uint64_t bits = u64();
            double d;
            std::memcpy(&d, &bits, 8);
            arr[i] = d;
        }
        return arr;
    }
};

uint64_t fnv1a(std::span<const uint8_t> bytes) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (uint8_t b : bytes) {
        h ^= b;
        h *= 0x100000001b3ULL;
    }
    return h;
}

} // namespace

std::vector<uint8_t> serialize(const Mlp& net) {
    std::vector<uint8_t> out;
    out.insert(out.end(), kMagic, kMagic + 4);
    put_u32(out, kVersion);
    put_u32(out, static_cast<uint32_t>(net.input_dim));
    put_u32(out, static_cast<uint32_t>(net.hidden_dim));
    put_u32(out, static_cast<uint32_t>(net.output_dim));
    put_u32(out, 0); // activation: relu
    put_doubles(out, net.w1);
    put_doubles(out, net.b1);
    put_doubles(out, net.w2);
    put_doubles(out, net.b2);
    put_u64(out, fnv1a(out));
    return out;
}

Mlp deserialize(std::span<const uint8_t> bytes) {
    if (bytes.size() < 4 + 8 || std::memcmp(bytes.data(), kMagic, 4) != 0)
        throw DecodeError("bad magic bytes");
    uint64_t stored = 0;
    for (int i = 0; i < 8; ++i)
        stored |= static_cast<uint64_t>(bytes[bytes.size() - 8 + i]) << (8 * i);
    if (fnv1a(bytes.subspan(0, bytes.size() - 8)) != stored)
        throw DecodeError("checksum mismatch");

    Reader r{bytes.subspan(4, bytes.size() - 12)};
    if (r.u32() != kVersion) throw DecodeError("unsupported version");
    Mlp net;
    net.input_dim = static_cast<int>(r.u32());
    net.hidden_dim = static_cast<int>(r.u32());
    net.output_dim = static_cast<int>(r.u32());
    if (r.u32() != 0) throw DecodeError("unsupported activation");
    if (net.input_dim <= 0 || net.hidden_dim <= 0 || net.output_dim <= 0)
        throw DecodeError("invalid dims");
    net.w1 = r.doubles(static_cast<size_t>(net.hidden_dim) * net.input_dim);
    net.b1 = r.doubles(static_cast<size_t>(net.hidden_dim));
    net.w2 = r.doubles(static_cast<size_t>(net.output_dim) * net.hidden_dim);
    net.b2 = r.doubles(static_cast<size_t>(net.output_dim));
    if (r.pos != r.bytes.size()) throw DecodeError("trailing bytes");
    if (!net.all_finite()) throw DecodeError("non-finite parameters");
    return net;
}

} // namespace seqdac
