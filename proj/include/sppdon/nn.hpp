#pragma once

// Dense feed-forward network engine: affine layers with relu/tanh hidden
// activations and an identity output layer, exact backpropagation, Adam, and
// a finite-difference gradient checker. All arithmetic is double precision
// and every random draw is counter-based, so runs are bit-reproducible.

#include <bit>
#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "sppdon/errors.hpp"
#include "sppdon/matrix.hpp"
#include "sppdon/rng.hpp"

namespace sppdon {

static_assert(std::endian::native == std::endian::little,
              "serialized formats assume a little-endian host");

enum class Activation : std::uint32_t { relu = 0, tanh = 1 };

inline const char* to_string(Activation a) { return a == Activation::relu ? "relu" : "tanh"; }

inline Activation activation_from_string(const std::string& s) {
    if (s == "relu") return Activation::relu;
    if (s == "tanh") return Activation::tanh;
    throw std::invalid_argument("unknown activation: " + s);
}

struct Mlp {
    std::vector<int> dims;  // [d_0, ..., d_L]
    std::vector<Matrix> weights;             // W_l is d_l x d_{l-1}
    std::vector<std::vector<double>> biases;
    Activation activation = Activation::relu;
    std::uint64_t version = 0;  // bumped on every parameter mutation

    int layer_count() const { return static_cast<int>(weights.size()); }
    int in_dim() const { return dims.front(); }
    int out_dim() const { return dims.back(); }
};

inline long long param_count(const std::vector<int>& dims) {
    long long n = 0;
    for (std::size_t l = 1; l < dims.size(); ++l)
        n += static_cast<long long>(dims[l]) * (dims[l - 1] + 1);
    return n;
}

inline long long param_count(const Mlp& mlp) { return param_count(mlp.dims); }

/// Glorot-uniform weights, zero biases, deterministic per seed.
inline Mlp init_mlp(const std::vector<int>& dims, Activation activation, std::uint64_t seed) {
    if (dims.size() < 2) throw std::invalid_argument("init_mlp: need at least input and output dims");
    for (int d : dims)
        if (d <= 0) throw std::invalid_argument("init_mlp: dims must be positive");
    Mlp mlp;
    mlp.dims = dims;
    mlp.activation = activation;
    std::uint64_t counter = 0;
    for (std::size_t l = 1; l < dims.size(); ++l) {
        Matrix w(dims[l], dims[l - 1]);
        const double s = std::sqrt(6.0 / (dims[l - 1] + dims[l]));
        for (double& v : w.data) v = s * (2.0 * uniform_pair(seed, counter++)[0] - 1.0);
        mlp.weights.push_back(std::move(w));
        mlp.biases.emplace_back(dims[l], 0.0);
    }
    return mlp;
}

struct ForwardCache {
    std::uint64_t mlp_version = 0;
    std::vector<Matrix> acts;  // A_0 = input, ..., A_{L-1}; enough for backward
};

namespace detail {

inline void apply_activation(Matrix& z, Activation a) {
    if (a == Activation::relu) {
        for (double& v : z.data) v = v > 0.0 ? v : 0.0;
    } else {
        for (double& v : z.data) v = std::tanh(v);
    }
}

// sigma'(z) expressed through the activation value itself (relu': a > 0,
// tanh': 1 - a^2); relu'(0) = 0 by convention.
inline double activation_grad(double a, Activation act) {
    return act == Activation::relu ? (a > 0.0 ? 1.0 : 0.0) : 1.0 - a * a;
}

inline void add_bias_rows(Matrix& z, const std::vector<double>& b) {
    for (std::size_t i = 0; i < z.rows; ++i) {
        double* zi = z.row(i);
        for (std::size_t j = 0; j < z.cols; ++j) zi[j] += b[j];
    }
}

}  // namespace detail

inline Matrix forward(const Mlp& mlp, const Matrix& x, ForwardCache* cache = nullptr) {
    if (static_cast<int>(x.cols) != mlp.in_dim())
        throw std::invalid_argument("forward: input width must equal d_0");
    if (cache) {
        cache->mlp_version = mlp.version;
        cache->acts.clear();
        cache->acts.push_back(x);
    }
    const int L = mlp.layer_count();
    Matrix a = x, z;
    for (int l = 0; l < L; ++l) {
        matmul_nt(a, mlp.weights[l], z);
        detail::add_bias_rows(z, mlp.biases[l]);
        if (l < L - 1) {
            detail::apply_activation(z, mlp.activation);
            if (cache) cache->acts.push_back(z);
        }
        a = std::move(z);
    }
    return a;
}

struct Gradients {
    std::vector<Matrix> d_weights;
    std::vector<std::vector<double>> d_biases;
};

/// Backpropagate dLoss/dY through the cached forward pass.
inline Gradients backward(const Mlp& mlp, const ForwardCache& cache, const Matrix& d_out) {
    const int L = mlp.layer_count();
    if (cache.mlp_version != mlp.version)
        throw std::logic_error("backward: cache is stale (parameters changed since forward)");
    if (static_cast<int>(cache.acts.size()) != L)
        throw std::logic_error("backward: cache does not match network depth");
    if (static_cast<int>(d_out.cols) != mlp.out_dim() || d_out.rows != cache.acts[0].rows)
        throw std::invalid_argument("backward: d_out shape mismatch");

    Gradients g;
    g.d_weights.resize(L);
    g.d_biases.resize(L);
    Matrix delta = d_out, tmp;
    for (int l = L - 1; l >= 0; --l) {
        matmul_tn(delta, cache.acts[l], g.d_weights[l]);
        auto& db = g.d_biases[l];
        db.assign(mlp.dims[l + 1], 0.0);
        for (std::size_t i = 0; i < delta.rows; ++i) {
            const double* di = delta.row(i);
            for (std::size_t j = 0; j < delta.cols; ++j) db[j] += di[j];
        }
        if (l > 0) {
            matmul(delta, mlp.weights[l], tmp);
            const Matrix& a = cache.acts[l];
            for (std::size_t i = 0; i < tmp.data.size(); ++i)
                tmp.data[i] *= detail::activation_grad(a.data[i], mlp.activation);
            delta = std::move(tmp);
        }
    }
    return g;
}

struct AdamState {
    std::vector<Matrix> m_weights, v_weights;
    std::vector<std::vector<double>> m_biases, v_biases;
    long long step = 0;
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

inline AdamState make_adam(const Mlp& mlp, double lr = 1e-3, double beta1 = 0.9,
                           double beta2 = 0.999, double eps = 1e-8) {
    AdamState s;
    s.lr = lr;
    s.beta1 = beta1;
    s.beta2 = beta2;
    s.eps = eps;
    for (int l = 0; l < mlp.layer_count(); ++l) {
        s.m_weights.emplace_back(mlp.weights[l].rows, mlp.weights[l].cols);
        s.v_weights.emplace_back(mlp.weights[l].rows, mlp.weights[l].cols);
        s.m_biases.emplace_back(mlp.biases[l].size(), 0.0);
        s.v_biases.emplace_back(mlp.biases[l].size(), 0.0);
    }
    return s;
}

namespace detail {

inline void adam_update(double* theta, double* m, double* v, const double* g, std::size_t n,
                        const AdamState& s, double bc1, double bc2) {
    for (std::size_t i = 0; i < n; ++i) {
        m[i] = s.beta1 * m[i] + (1.0 - s.beta1) * g[i];
        v[i] = s.beta2 * v[i] + (1.0 - s.beta2) * g[i] * g[i];
        theta[i] -= s.lr * (m[i] / bc1) / (std::sqrt(v[i] / bc2) + s.eps);
    }
}

}  // namespace detail

inline void adam_step(Mlp& mlp, const Gradients& g, AdamState& state) {
    if (static_cast<int>(g.d_weights.size()) != mlp.layer_count())
        throw std::invalid_argument("adam_step: gradient layer count mismatch");
    state.step += 1;
    const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
    for (int l = 0; l < mlp.layer_count(); ++l) {
        if (g.d_weights[l].rows != mlp.weights[l].rows ||
            g.d_weights[l].cols != mlp.weights[l].cols ||
            g.d_biases[l].size() != mlp.biases[l].size())
            throw std::invalid_argument("adam_step: gradient shape mismatch");
        detail::adam_update(mlp.weights[l].data.data(), state.m_weights[l].data.data(),
                            state.v_weights[l].data.data(), g.d_weights[l].data.data(),
                            mlp.weights[l].data.size(), state, bc1, bc2);
        detail::adam_update(mlp.biases[l].data(), state.m_biases[l].data(),
                            state.v_biases[l].data(), g.d_biases[l].data(),
                            mlp.biases[l].size(), state, bc1, bc2);
    }
    mlp.version += 1;
}

namespace detail {

inline double* param_at(Mlp& mlp, long long flat) {
    for (int l = 0; l < mlp.layer_count(); ++l) {
        const long long nw = static_cast<long long>(mlp.weights[l].data.size());
        if (flat < nw) return &mlp.weights[l].data[flat];
        flat -= nw;
        const long long nb = static_cast<long long>(mlp.biases[l].size());
        if (flat < nb) return &mlp.biases[l][flat];
        flat -= nb;
    }
    throw std::logic_error("param_at: flat index out of range");
}

inline double grad_at(const Gradients& g, long long flat) {
    for (std::size_t l = 0; l < g.d_weights.size(); ++l) {
        const long long nw = static_cast<long long>(g.d_weights[l].data.size());
        if (flat < nw) return g.d_weights[l].data[flat];
        flat -= nw;
        const long long nb = static_cast<long long>(g.d_biases[l].size());
        if (flat < nb) return g.d_biases[l][flat];
        flat -= nb;
    }
    throw std::logic_error("grad_at: flat index out of range");
}

}  // namespace detail

/// Max relative error between backprop and central finite differences of the
/// quadratic loss 0.5*||forward(x) - t||^2 over a random subset of at least
/// 50 parameters (all of them for small nets).
inline double grad_check(Mlp mlp, const Matrix& x, double fd_step = 1e-6) {
    Matrix target(x.rows, mlp.out_dim());
    for (std::size_t i = 0; i < target.data.size(); ++i)
        target.data[i] = standard_normal(0x6f7261636c65ULL, i);

    const auto loss = [&](const Mlp& net) {
        const Matrix y = forward(net, x);
        double acc = 0.0;
        for (std::size_t i = 0; i < y.data.size(); ++i) {
            const double d = y.data[i] - target.data[i];
            acc += 0.5 * d * d;
        }
        return acc;
    };

    ForwardCache cache;
    const Matrix y = forward(mlp, x, &cache);
    Matrix d_out(y.rows, y.cols);
    for (std::size_t i = 0; i < y.data.size(); ++i) d_out.data[i] = y.data[i] - target.data[i];
    const Gradients g = backward(mlp, cache, d_out);

    const long long total = param_count(mlp);
    const long long subset = total <= 50 ? total : 50;
    std::uint64_t ctr = 0;
    double max_rel = 0.0;
    for (long long s = 0; s < subset; ++s) {
        const long long flat =
            subset == total
                ? s
                : static_cast<long long>(uniform_below(0x70696b21ULL, ctr,
                                                       static_cast<std::uint64_t>(total)));
        double* theta = detail::param_at(mlp, flat);
        const double saved = *theta;
        *theta = saved + fd_step;
        const double lp = loss(mlp);
        *theta = saved - fd_step;
        const double lm = loss(mlp);
        *theta = saved;
        const double fd = (lp - lm) / (2.0 * fd_step);
        const double bp = detail::grad_at(g, flat);
        const double rel = std::abs(fd - bp) / std::max(std::abs(fd) + std::abs(bp), 1e-8);
        max_rel = std::max(max_rel, rel);
    }
    return max_rel;
}

/// Width-3 depth-1 ReLU net realizing the piecewise-linear hat function with
/// peak 1 at x_n and support [x_prev, x_next]:
///   L(x) = c1 ReLU(x - x_prev) - (c1 + c2) ReLU(x - x_n) + c2 ReLU(x - x_next),
/// c1 = 1/(x_n - x_prev), c2 = 1/(x_next - x_n).
inline Mlp hat_relu_net(double x_prev, double x_n, double x_next) {
    if (!(x_prev < x_n && x_n < x_next))
        throw std::invalid_argument("hat_relu_net: knots must be strictly increasing");
    Mlp mlp;
    mlp.dims = {1, 3, 1};
    mlp.activation = Activation::relu;
    Matrix w1(3, 1);
    w1.data = {1.0, 1.0, 1.0};
    Matrix w2(1, 3);
    const double c1 = 1.0 / (x_n - x_prev);
    const double c2 = 1.0 / (x_next - x_n);
    w2.data = {c1, -(c1 + c2), c2};
    mlp.weights = {std::move(w1), std::move(w2)};
    mlp.biases = {{-x_prev, -x_n, -x_next}, {0.0}};
    return mlp;
}

// --- serialization: magic "SPPNN1", activation tag, dims, then per layer
// --- W_l row-major and b_l as little-endian doubles.

namespace detail {

template <typename T>
void write_pod(std::ostream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
T read_pod(std::istream& in, const char* what) {
    T v;
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!in) throw format_error(std::string("unexpected end of stream reading ") + what,
                                static_cast<long long>(in.gcount()));
    return v;
}

}  // namespace detail

inline void save_mlp(const Mlp& mlp, std::ostream& out) {
    out.write("SPPNN1", 6);
    detail::write_pod(out, static_cast<std::uint32_t>(mlp.activation));
    detail::write_pod(out, static_cast<std::uint32_t>(mlp.dims.size()));
    for (int d : mlp.dims) detail::write_pod(out, static_cast<std::uint32_t>(d));
    for (int l = 0; l < mlp.layer_count(); ++l) {
        const auto& w = mlp.weights[l].data;
        out.write(reinterpret_cast<const char*>(w.data()),
                  static_cast<std::streamsize>(w.size() * sizeof(double)));
        const auto& b = mlp.biases[l];
        out.write(reinterpret_cast<const char*>(b.data()),
                  static_cast<std::streamsize>(b.size() * sizeof(double)));
    }
}

inline Mlp load_mlp(std::istream& in) {
    char magic[6];
    in.read(magic, 6);
    if (!in || std::string(magic, 6) != "SPPNN1")
        throw format_error("bad network magic (expected SPPNN1)", 0);
    Mlp mlp;
    const auto act = detail::read_pod<std::uint32_t>(in, "activation tag");
    if (act > 1) throw format_error("unknown activation tag " + std::to_string(act));
    mlp.activation = static_cast<Activation>(act);
    const auto ndims = detail::read_pod<std::uint32_t>(in, "dims count");
    if (ndims < 2 || ndims > 64) throw format_error("implausible dims count");
    mlp.dims.resize(ndims);
    for (auto& d : mlp.dims) {
        d = static_cast<int>(detail::read_pod<std::uint32_t>(in, "dimension"));
        if (d <= 0) throw format_error("nonpositive dimension in header");
    }
    for (std::size_t l = 1; l < mlp.dims.size(); ++l) {
        Matrix w(mlp.dims[l], mlp.dims[l - 1]);
        in.read(reinterpret_cast<char*>(w.data.data()),
                static_cast<std::streamsize>(w.data.size() * sizeof(double)));
        std::vector<double> b(mlp.dims[l]);
        in.read(reinterpret_cast<char*>(b.data()),
                static_cast<std::streamsize>(b.size() * sizeof(double)));
        if (!in) throw format_error("truncated parameter payload");
        mlp.weights.push_back(std::move(w));
        mlp.biases.push_back(std::move(b));
    }
    return mlp;
}

}  // namespace sppdon
