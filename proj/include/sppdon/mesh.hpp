#pragma once

// Piecewise-uniform Shishkin meshes and their right-Riemann quadrature
// weights. The transition point sigma = min{1/2, 2*eps*ln(J)/alpha} splits
// [0,1] into a coarse half [0, 1-sigma] and a fine half [1-sigma, 1] with
// J/2 subintervals each, concentrating nodes in the boundary layer at x=1.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace sppdon {

enum class MeshKind { shishkin, uniform };

inline const char* to_string(MeshKind k) {
    return k == MeshKind::shishkin ? "shishkin" : "uniform";
}

inline MeshKind mesh_kind_from_string(const std::string& s) {
    if (s == "shishkin") return MeshKind::shishkin;
    if (s == "uniform") return MeshKind::uniform;
    throw std::invalid_argument("unknown mesh kind: " + s);
}

struct Mesh1d {
    MeshKind kind = MeshKind::uniform;
    int intervals = 0;        // J
    double epsilon = 0.0;     // shishkin only
    double alpha = 0.0;       // shishkin only
    double sigma = 0.0;       // transition point (shishkin only)
    double coarse_step = 0.0; // h, left region
    double fine_step = 0.0;   // H, right region
    std::vector<double> points;  // J+1 nodes, points[0]=0, points[J]=1
    std::vector<double> weights; // right-Riemann: weights[0]=0, sum = 1

    int num_points() const { return intervals + 1; }
};

inline Mesh1d build_uniform(int intervals) {
    if (intervals <= 0) throw std::invalid_argument("build_uniform: J must be positive");
    Mesh1d m;
    m.kind = MeshKind::uniform;
    m.intervals = intervals;
    m.coarse_step = 1.0 / intervals;
    m.fine_step = m.coarse_step;
    m.points.resize(intervals + 1);
    m.weights.resize(intervals + 1);
    for (int j = 0; j <= intervals; ++j) {
        m.points[j] = static_cast<double>(j) / intervals;
        m.weights[j] = j == 0 ? 0.0 : 1.0 / intervals;
    }
    m.points[intervals] = 1.0;
    return m;
}

inline Mesh1d build_shishkin(int intervals, double epsilon, double alpha) {
    if (intervals < 4 || intervals % 2 != 0)
        throw std::invalid_argument("build_shishkin: J must be even and >= 4");
    if (!(epsilon > 0.0)) throw std::invalid_argument("build_shishkin: epsilon must be > 0");
    if (!(alpha > 0.0)) throw std::invalid_argument("build_shishkin: alpha must be > 0");

    const double sigma =
        std::min(0.5, 2.0 * epsilon * std::log(static_cast<double>(intervals)) / alpha);

    Mesh1d m;
    if (sigma == 0.5) {
        // Degenerate case: bit-identical to the uniform mesh of the same J.
        m = build_uniform(intervals);
        m.kind = MeshKind::shishkin;
    } else {
        m.kind = MeshKind::shishkin;
        m.intervals = intervals;
        m.coarse_step = 2.0 * (1.0 - sigma) / intervals;
        m.fine_step = 2.0 * sigma / intervals;
        m.points.resize(intervals + 1);
        m.weights.resize(intervals + 1);
        const int half = intervals / 2;
        for (int j = 0; j < half; ++j) m.points[j] = j * m.coarse_step;
        for (int j = half; j <= intervals; ++j)
            m.points[j] = (1.0 - sigma) + (j - half) * m.fine_step;
        m.points[intervals] = 1.0;
        m.weights[0] = 0.0;
        for (int j = 1; j <= half; ++j) m.weights[j] = m.coarse_step;
        for (int j = half + 1; j <= intervals; ++j) m.weights[j] = m.fine_step;
    }
    m.epsilon = epsilon;
    m.alpha = alpha;
    m.sigma = sigma;
    return m;
}

/// Right-Riemann quadrature: sum_j weights[j] * values[j].
inline double riemann_sum(const Mesh1d& mesh, const std::vector<double>& values) {
    if (values.size() != mesh.points.size())
        throw std::invalid_argument("riemann_sum: values length must be J+1");
    double acc = 0.0;
    for (std::size_t j = 0; j < values.size(); ++j) acc += mesh.weights[j] * values[j];
    return acc;
}

/// Tensor-product mesh on [0,1]^2; nodes flattened row-major with x fastest:
/// node(ix, iy) lives at index iy*(Jx+1) + ix.
struct TensorMesh2d {
    Mesh1d mx;
    Mesh1d my;
    std::vector<double> weights;        // outer product wx[ix]*wy[iy], flattened
    std::vector<int> boundary_indices;  // flattened indices on the boundary of (0,1)^2
    std::vector<int> interior_indices;

    int nx() const { return mx.intervals + 1; }
    int ny() const { return my.intervals + 1; }
    int num_points() const { return nx() * ny(); }
    int index(int ix, int iy) const { return iy * nx() + ix; }
    double x(int flat) const { return mx.points[flat % nx()]; }
    double y(int flat) const { return my.points[flat / nx()]; }
};

inline TensorMesh2d build_tensor_2d(Mesh1d mx, Mesh1d my) {
    TensorMesh2d t;
    t.mx = std::move(mx);
    t.my = std::move(my);
    const int nx = t.nx(), ny = t.ny();
    t.weights.resize(static_cast<std::size_t>(nx) * ny);
    for (int iy = 0; iy < ny; ++iy)
        for (int ix = 0; ix < nx; ++ix)
            t.weights[t.index(ix, iy)] = t.mx.weights[ix] * t.my.weights[iy];
    for (int iy = 0; iy < ny; ++iy)
        for (int ix = 0; ix < nx; ++ix) {
            const bool on_boundary = ix == 0 || ix == nx - 1 || iy == 0 || iy == ny - 1;
            (on_boundary ? t.boundary_indices : t.interior_indices).push_back(t.index(ix, iy));
        }
    return t;
}

inline void mesh_to_csv(const Mesh1d& mesh, std::ostream& out) {
    out << "index,point,weight\n";
    char buf[96];
    for (int j = 0; j <= mesh.intervals; ++j) {
        std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g\n", j, mesh.points[j], mesh.weights[j]);
        out << buf;
    }
}

}  // namespace sppdon
