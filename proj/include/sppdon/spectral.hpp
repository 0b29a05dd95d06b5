#pragma once

// Encoder (point evaluation at m = 2M+1 equidistant sensors x_j = j/m) and
// its approximate inverse, the band-limited trigonometric decoder
//
//   f_hat_k = (1/m) sum_{j=1}^m f_j e^{-i 2pi jk/m},   |k| <= M,
//   D(f)(x) = sum_{|k| <= M} f_hat_k e^{i 2pi kx}.
//
// The DFT is the direct O(m^2) sum; m stays small in every experiment.

#include <complex>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "sppdon/grf.hpp"
#include "sppdon/mesh.hpp"
#include "sppdon/rng.hpp"

namespace sppdon {

struct SensorGrid {
    int m = 0;                   // odd, = 2M+1
    std::vector<double> points;  // x_j = j/m, j = 1..m
};

inline SensorGrid make_sensor_grid(int m) {
    if (m < 1 || m % 2 == 0) throw std::invalid_argument("make_sensor_grid: m must be odd and >= 1");
    SensorGrid g;
    g.m = m;
    g.points.resize(m);
    for (int j = 1; j <= m; ++j) g.points[j - 1] = static_cast<double>(j) / m;
    return g;
}

inline std::vector<double> encode(const std::function<double(double)>& f, const SensorGrid& grid) {
    std::vector<double> out(grid.points.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = f(grid.points[i]);
    return out;
}

struct TrigFunction {
    int bandwidth = 0;                          // M
    std::vector<std::complex<double>> coeffs;   // c_k at index k+M, |k| <= M

    std::complex<double> eval(double x) const {
        std::complex<double> acc{0.0, 0.0};
        for (int k = -bandwidth; k <= bandwidth; ++k) {
            const double phase = 2.0 * std::numbers::pi * k * x;
            acc += coeffs[k + bandwidth] * std::complex<double>{std::cos(phase), std::sin(phase)};
        }
        return acc;
    }

    double eval_real(double x) const { return eval(x).real(); }
};

inline TrigFunction decode_trig(const std::vector<double>& samples) {
    const int m = static_cast<int>(samples.size());
    if (m < 1 || m % 2 == 0) throw std::invalid_argument("decode_trig: m must be odd");
    const int M = (m - 1) / 2;
    TrigFunction t;
    t.bandwidth = M;
    t.coeffs.resize(2 * M + 1);
    for (int k = 0; k <= M; ++k) {
        std::complex<double> acc{0.0, 0.0};
        for (int j = 1; j <= m; ++j) {
            const double phase = -2.0 * std::numbers::pi * j * k / m;
            acc += samples[j - 1] * std::complex<double>{std::cos(phase), std::sin(phase)};
        }
        acc /= static_cast<double>(m);
        t.coeffs[M + k] = acc;
        t.coeffs[M - k] = std::conj(acc);  // real samples: conjugate symmetry
    }
    return t;
}

/// Monte Carlo estimate of (E ||D(E(f)) - f||_{L2}^2)^{1/2} for f ~ GRF(l),
/// one value per sensor count in m_list. Samples are paired across m (same
/// fields), and the L2 norm uses a 1024-interval uniform quadrature.
inline std::vector<double> encode_decode_error(double length_scale,
                                               const std::vector<int>& m_list, int n_mc,
                                               std::uint64_t seed) {
    if (n_mc < 1) throw std::invalid_argument("encode_decode_error: n_mc must be >= 1");
    const Mesh1d quad = build_uniform(1024);
    GrfSpec spec{length_scale, 0, 1};
    std::vector<double> acc(m_list.size(), 0.0);
    std::vector<SensorGrid> grids;
    grids.reserve(m_list.size());
    for (int m : m_list) grids.push_back(make_sensor_grid(m));

    std::vector<double> f_quad(quad.num_points()), diff2(quad.num_points());
    for (int i = 0; i < n_mc; ++i) {
        const FieldSample f = sample_field(spec, seed ^ splitmix64(static_cast<std::uint64_t>(i)));
        f_quad = eval_field(f, quad.points);
        for (std::size_t mi = 0; mi < grids.size(); ++mi) {
            const auto samples = eval_field(f, grids[mi].points);
            const TrigFunction recon = decode_trig(samples);
            for (int q = 0; q <= quad.intervals; ++q) {
                const double d = recon.eval_real(quad.points[q]) - f_quad[q];
                diff2[q] = d * d;
            }
            acc[mi] += riemann_sum(quad, diff2);
        }
    }
    for (double& v : acc) v = std::sqrt(v / n_mc);
    return acc;
}

}  // namespace sppdon
