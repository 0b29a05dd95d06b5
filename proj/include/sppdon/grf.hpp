#pragma once

// Gaussian random fields on [0,1] with the periodized-RBF covariance,
// sampled through the truncated Karhunen-Loeve expansion. The complex
// eigenbasis e^{i2pi kx} with eigenvalues lambda_k = sqrt(2pi) l e^{-2pi^2
// k^2 l^2} is reparameterized into the real form
//
//   f(x) = sqrt(lambda_0) a_0
//        + sum_{k=1}^{K} sqrt(2 lambda_k) (a_k cos(2pi kx) + b_k sin(2pi kx)),
//
// with a_k, b_k i.i.d. standard normal. A dense Cholesky sampler over the
// same kernel is provided as an independent covariance oracle.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "sppdon/errors.hpp"
#include "sppdon/rng.hpp"

namespace sppdon {

inline double kl_eigenvalue(int k, double length_scale) {
    if (!(length_scale > 0.0)) throw std::invalid_argument("kl_eigenvalue: l must be > 0");
    const double pi2 = std::numbers::pi * std::numbers::pi;
    const double kl = static_cast<double>(k) * length_scale;
    return std::sqrt(2.0 * std::numbers::pi) * length_scale * std::exp(-2.0 * pi2 * kl * kl);
}

/// Smallest K with lambda_K / lambda_0 < 1e-16, i.e. truncation below
/// double precision.
inline int default_k_trunc(double length_scale) {
    if (!(length_scale > 0.0)) throw std::invalid_argument("default_k_trunc: l must be > 0");
    const double lambda0 = kl_eigenvalue(0, length_scale);
    int k = 1;
    while (kl_eigenvalue(k, length_scale) / lambda0 >= 1e-16) ++k;
    return k;
}

inline int default_rbf_terms(double length_scale) {
    const int n = static_cast<int>(std::ceil(1.0 + 6.0 * length_scale));
    return n < 3 ? 3 : n;
}

/// k_p(x1,x2) = sum_{|n| <= n_terms} exp(-|x1-x2-n|^2 / (2 l^2)).
inline double periodized_rbf(double x1, double x2, double length_scale, int n_terms) {
    if (!(length_scale > 0.0)) throw std::invalid_argument("periodized_rbf: l must be > 0");
    if (n_terms < 1) throw std::invalid_argument("periodized_rbf: n_terms must be >= 1");
    const double d = x1 - x2;
    const double inv2l2 = 1.0 / (2.0 * length_scale * length_scale);
    double acc = 0.0;
    for (int n = -n_terms; n <= n_terms; ++n) {
        const double r = d - n;
        acc += std::exp(-r * r * inv2l2);
    }
    return acc;
}

struct GrfSpec {
    double length_scale = 1.0;
    int k_trunc = 0;  // modes |k| <= k_trunc; 0 means "use default_k_trunc"
    int dim = 1;

    int modes() const { return k_trunc > 0 ? k_trunc : default_k_trunc(length_scale); }
};

struct FieldSample {
    GrfSpec spec;
    std::vector<double> a;  // cosine coefficients, indices 0..K
    std::vector<double> b;  // sine coefficients, indices 1..K (b[0] unused, 0)
    std::uint64_t seed = 0;
};

inline FieldSample sample_field(const GrfSpec& spec, std::uint64_t seed) {
    const int K = spec.modes();
    FieldSample s;
    s.spec = spec;
    s.spec.k_trunc = K;
    s.seed = seed;
    s.a.resize(K + 1);
    s.b.assign(K + 1, 0.0);
    for (int k = 0; k <= K; ++k) s.a[k] = standard_normal(seed, 2 * static_cast<std::uint64_t>(k));
    for (int k = 1; k <= K; ++k) s.b[k] = standard_normal(seed, 2 * static_cast<std::uint64_t>(k) + 1);
    return s;
}

inline double eval_field_at(const FieldSample& s, double x) {
    const int K = s.spec.k_trunc;
    const double l = s.spec.length_scale;
    double acc = std::sqrt(kl_eigenvalue(0, l)) * s.a[0];
    for (int k = 1; k <= K; ++k) {
        const double amp = std::sqrt(2.0 * kl_eigenvalue(k, l));
        const double phase = 2.0 * std::numbers::pi * k * x;
        acc += amp * (s.a[k] * std::cos(phase) + s.b[k] * std::sin(phase));
    }
    return acc;
}

inline std::vector<double> eval_field(const FieldSample& s, const std::vector<double>& xs) {
    std::vector<double> out(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) out[i] = eval_field_at(s, xs[i]);
    return out;
}

/// Dense-covariance sampler: one draw of N(0, K) with K_ij = k_p(x_i, x_j)
/// + jitter on the diagonal. Covariance oracle for the KL path, not the
/// production sampler.
inline std::vector<double> cholesky_sample(const std::vector<double>& xs, double length_scale,
                                           std::uint64_t seed, double jitter = 0.0) {
    if (!(length_scale > 0.0)) throw std::invalid_argument("cholesky_sample: l must be > 0");
    if (jitter < 0.0) throw std::invalid_argument("cholesky_sample: jitter must be >= 0");
    const std::size_t n = xs.size();
    const int terms = default_rbf_terms(length_scale);
    std::vector<double> chol(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j <= i; ++j)
            chol[i * n + j] = periodized_rbf(xs[i], xs[j], length_scale, terms) +
                              (i == j ? jitter : 0.0);
    // In-place lower Cholesky.
    for (std::size_t j = 0; j < n; ++j) {
        double d = chol[j * n + j];
        for (std::size_t k = 0; k < j; ++k) d -= chol[j * n + k] * chol[j * n + k];
        if (!(d > 0.0))
            throw numerical_error(
                "cholesky_sample: factorization failed; retry with jitter=1e-10");
        const double dj = std::sqrt(d);
        chol[j * n + j] = dj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double v = chol[i * n + j];
            for (std::size_t k = 0; k < j; ++k) v -= chol[i * n + k] * chol[j * n + k];
            chol[i * n + j] = v / dj;
        }
    }
    std::vector<double> z(n), out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) z[i] = standard_normal(seed, i);
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j <= i; ++j) acc += chol[i * n + j] * z[j];
        out[i] = acc;
    }
    return out;
}

// ---------------------------------------------------------------------------
// 2D fields with tensor-product covariance k((x,y),(x',y')) = k_p(x,x') k_p(y,y').
// Real 1D KL basis per direction: u_0 = sqrt(lambda_0), u_{2k-1} =
// sqrt(2 lambda_k) cos(2pi kx), u_{2k} = sqrt(2 lambda_k) sin(2pi kx);
// f(x,y) = sum_{ij} xi_ij u_i(x) u_j(y) with xi_ij i.i.d. standard normal.

struct FieldSample2d {
    GrfSpec spec;                // dim = 2
    std::vector<double> coeffs;  // (2K+1) x (2K+1), row-major
    std::uint64_t seed = 0;

    int basis_size() const { return 2 * spec.k_trunc + 1; }
};

inline FieldSample2d sample_field_2d(const GrfSpec& spec, std::uint64_t seed) {
    const int K = spec.modes();
    FieldSample2d s;
    s.spec = spec;
    s.spec.k_trunc = K;
    s.spec.dim = 2;
    s.seed = seed;
    const int nb = 2 * K + 1;
    s.coeffs.resize(static_cast<std::size_t>(nb) * nb);
    for (std::size_t i = 0; i < s.coeffs.size(); ++i)
        s.coeffs[i] = standard_normal(seed, i);
    return s;
}

namespace detail {

inline void real_kl_basis(double x, double length_scale, int k_trunc, std::vector<double>& out) {
    out.resize(2 * k_trunc + 1);
    out[0] = std::sqrt(kl_eigenvalue(0, length_scale));
    for (int k = 1; k <= k_trunc; ++k) {
        const double amp = std::sqrt(2.0 * kl_eigenvalue(k, length_scale));
        const double phase = 2.0 * std::numbers::pi * k * x;
        out[2 * k - 1] = amp * std::cos(phase);
        out[2 * k] = amp * std::sin(phase);
    }
}

}  // namespace detail

inline double eval_field_2d_at(const FieldSample2d& s, double x, double y) {
    std::vector<double> ux, uy;
    detail::real_kl_basis(x, s.spec.length_scale, s.spec.k_trunc, ux);
    detail::real_kl_basis(y, s.spec.length_scale, s.spec.k_trunc, uy);
    const int nb = s.basis_size();
    double acc = 0.0;
    for (int i = 0; i < nb; ++i) {
        double row = 0.0;
        for (int j = 0; j < nb; ++j) row += s.coeffs[static_cast<std::size_t>(i) * nb + j] * uy[j];
        acc += ux[i] * row;
    }
    return acc;
}

}  // namespace sppdon
