#pragma once

// Ground-truth solvers for the singularly perturbed convection-diffusion
// problem
//
//   -eps u'' + p(x) u' + q(x) u = f,   u(0) = u(1) = 0,   p(x) >= alpha > 0,
//
// discretized with first-order up-winding on (possibly nonuniform) meshes:
// the second difference uses the standard consistent nonuniform stencil and
// the convection term a backward difference, so the system matrix is an
// M-matrix for any mesh. The 2D analogue -eps Lap(u) + u_x + u_y + u = f is
// handled by the same stencil per direction and a banded direct solve.

#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "sppdon/errors.hpp"
#include "sppdon/mesh.hpp"

namespace sppdon {

struct SppProblem1d {
    double epsilon = 1.0;
    double alpha = 1.0;  // declared lower bound of p(x)
    std::function<double(double)> p;
    std::function<double(double)> q;
    std::function<double(double)> f;
};

/// -eps u'' + u' = f  (layer of width O(eps) at x=1).
inline SppProblem1d make_example1(double epsilon, std::function<double(double)> f) {
    return {epsilon, 1.0, [](double) { return 1.0; }, [](double) { return 0.0; }, std::move(f)};
}

/// -eps u'' + (x+1) u' + u = f.
inline SppProblem1d make_example2(double epsilon, std::function<double(double)> f) {
    return {epsilon, 1.0, [](double x) { return x + 1.0; }, [](double) { return 1.0; },
            std::move(f)};
}

struct GridSolution {
    Mesh1d mesh;
    std::vector<double> values;  // J+1, zero at both ends
    double residual_max = 0.0;   // max-norm residual of the solved system
};

/// Tridiagonal factorization of the upwind operator on a fixed mesh;
/// reusable across right-hand sides (the dataset generator solves the same
/// operator for hundreds of forcings).
class UpwindSolver1d {
public:
    UpwindSolver1d(const SppProblem1d& problem, const Mesh1d& mesh)
        : mesh_(mesh), epsilon_(problem.epsilon) {
        const int J = mesh.intervals;
        if (J < 4) throw std::invalid_argument("UpwindSolver1d: mesh must have J >= 4");
        const int n = J - 1;
        sub_.resize(n);
        diag_.resize(n);
        sup_.resize(n);
        for (int j = 1; j < J; ++j) {
            const double hl = mesh.points[j] - mesh.points[j - 1];
            const double hr = mesh.points[j + 1] - mesh.points[j];
            if (!(hl > 0.0) || !(hr > 0.0))
                throw std::invalid_argument("UpwindSolver1d: mesh steps must be positive");
            const double pj = problem.p(mesh.points[j]);
            const double qj = problem.q(mesh.points[j]);
            const double two_over_sum = 2.0 / (hl + hr);
            sub_[j - 1] = -epsilon_ * two_over_sum / hl - pj / hl;
            sup_[j - 1] = -epsilon_ * two_over_sum / hr;
            diag_[j - 1] = epsilon_ * two_over_sum * (1.0 / hl + 1.0 / hr) + pj / hl + qj;
        }
        // Thomas forward elimination, kept for reuse: pivots and scaled
        // super-diagonal.
        pivot_.resize(n);
        cstar_.resize(n);
        pivot_[0] = diag_[0];
        if (pivot_[0] == 0.0) throw numerical_error("UpwindSolver1d: Thomas breakdown");
        cstar_[0] = sup_[0] / pivot_[0];
        for (int i = 1; i < n; ++i) {
            pivot_[i] = diag_[i] - sub_[i] * cstar_[i - 1];
            if (pivot_[i] == 0.0) throw numerical_error("UpwindSolver1d: Thomas breakdown");
            cstar_[i] = sup_[i] / pivot_[i];
        }
    }

    const Mesh1d& mesh() const { return mesh_; }

    /// Solve with f given at all J+1 nodes (boundary entries ignored).
    GridSolution solve(const std::vector<double>& f_nodes) const {
        const int J = mesh_.intervals;
        if (static_cast<int>(f_nodes.size()) != J + 1)
            throw std::invalid_argument("UpwindSolver1d::solve: f values length must be J+1");
        const int n = J - 1;
        std::vector<double> d(n);
        d[0] = f_nodes[1] / pivot_[0];
        for (int i = 1; i < n; ++i)
            d[i] = (f_nodes[i + 1] - sub_[i] * d[i - 1]) / pivot_[i];
        GridSolution sol;
        sol.mesh = mesh_;
        sol.values.assign(J + 1, 0.0);
        sol.values[J - 1] = d[n - 1];
        for (int i = n - 2; i >= 0; --i) sol.values[i + 1] = d[i] - cstar_[i] * sol.values[i + 2];
        sol.residual_max = residual_max(sol.values, f_nodes);
        return sol;
    }

    double residual_max(const std::vector<double>& u, const std::vector<double>& f_nodes) const {
        const int J = mesh_.intervals;
        double r = 0.0;
        for (int j = 1; j < J; ++j) {
            const double lhs = sub_[j - 1] * u[j - 1] + diag_[j - 1] * u[j] + sup_[j - 1] * u[j + 1];
            r = std::max(r, std::abs(lhs - f_nodes[j]));
        }
        return r;
    }

private:
    Mesh1d mesh_;
    double epsilon_;
    std::vector<double> sub_, diag_, sup_;
    std::vector<double> pivot_, cstar_;
};

inline GridSolution solve_upwind_1d(const SppProblem1d& problem, const Mesh1d& mesh) {
    UpwindSolver1d solver(problem, mesh);
    std::vector<double> f_nodes(mesh.num_points());
    for (int j = 0; j <= mesh.intervals; ++j) f_nodes[j] = problem.f(mesh.points[j]);
    return solver.solve(f_nodes);
}

/// Closed-form solution of -eps u'' + u' = 1, u(0)=u(1)=0:
///   u(x) = x - (e^{-(1-x)/eps} - e^{-1/eps}) / (1 - e^{-1/eps}).
/// Only decaying exponentials are evaluated, so no overflow for any eps.
inline std::vector<double> exact_example1(double epsilon, const std::vector<double>& xs) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("exact_example1: epsilon must be > 0");
    const double e_full = std::exp(-1.0 / epsilon);
    std::vector<double> out(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double x = xs[i];
        out[i] = x - (std::exp(-(1.0 - x) / epsilon) - e_full) / (1.0 - e_full);
    }
    return out;
}

/// Piecewise-linear interpolation of nodal values; exact at nodes.
inline std::vector<double> interp_linear(const Mesh1d& mesh, const std::vector<double>& values,
                                         const std::vector<double>& xs) {
    if (values.size() != mesh.points.size())
        throw std::invalid_argument("interp_linear: values length must be J+1");
    std::vector<double> out(xs.size());
    const auto& pts = mesh.points;
    const int J = mesh.intervals;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double x = xs[i];
        if (x < 0.0 || x > 1.0)
            throw std::invalid_argument("interp_linear: query point outside [0,1]");
        int lo = static_cast<int>(std::upper_bound(pts.begin(), pts.end(), x) - pts.begin()) - 1;
        if (lo >= J) lo = J - 1;  // x == 1 falls into the last interval
        const double t = (x - pts[lo]) / (pts[lo + 1] - pts[lo]);
        out[i] = (1.0 - t) * values[lo] + t * values[lo + 1];
    }
    return out;
}

// ---------------------------------------------------------------------------
// 2D: -eps Lap(u) + u_x + u_y + u = f on (0,1)^2, homogeneous Dirichlet.

struct SppProblem2d {
    double epsilon = 1.0;
    std::function<double(double, double)> f;
};

struct GridSolution2d {
    TensorMesh2d mesh;
    std::vector<double> values;  // nx*ny, flattened x fastest, zero boundary
    double residual_max = 0.0;
};

/// Banded LU (no pivoting) of the lexicographically ordered interior system.
/// The upwind matrix is strictly diagonally dominant (q = 1), so pivoting is
/// unnecessary. The factorization depends only on (eps, mesh) and is reused
/// across forcings.
class UpwindSolver2d {
public:
    UpwindSolver2d(double epsilon, const TensorMesh2d& mesh)
        : mesh_(mesh), epsilon_(epsilon) {
        nxi_ = mesh.mx.intervals - 1;
        nyi_ = mesh.my.intervals - 1;
        if (nxi_ < 1 || nyi_ < 1)
            throw std::invalid_argument("UpwindSolver2d: both directions need J >= 2");
        const long long unknowns = static_cast<long long>(nxi_) * nyi_;
        if (unknowns > 1000000)
            throw too_large_error("UpwindSolver2d: more than 1e6 interior unknowns");
        n_ = static_cast<int>(unknowns);
        bw_ = nxi_;
        width_ = 2 * bw_ + 1;
        band_.assign(static_cast<std::size_t>(n_) * width_, 0.0);
        stencil_.assign(static_cast<std::size_t>(n_) * 5, 0.0);  // C W E S N

        const auto& px = mesh.mx.points;
        const auto& py = mesh.my.points;
        for (int iy = 1; iy <= nyi_; ++iy) {
            const double hyl = py[iy] - py[iy - 1];
            const double hyr = py[iy + 1] - py[iy];
            for (int ix = 1; ix <= nxi_; ++ix) {
                const double hxl = px[ix] - px[ix - 1];
                const double hxr = px[ix + 1] - px[ix];
                const int row = (iy - 1) * nxi_ + (ix - 1);
                const double cw = -2.0 * epsilon_ / ((hxl + hxr) * hxl) - 1.0 / hxl;
                const double ce = -2.0 * epsilon_ / ((hxl + hxr) * hxr);
                const double cs = -2.0 * epsilon_ / ((hyl + hyr) * hyl) - 1.0 / hyl;
                const double cn = -2.0 * epsilon_ / ((hyl + hyr) * hyr);
                const double cc = 2.0 * epsilon_ / (hxl * hxr) + 2.0 * epsilon_ / (hyl * hyr) +
                                  1.0 / hxl + 1.0 / hyl + 1.0;
                double* st = &stencil_[static_cast<std::size_t>(row) * 5];
                st[0] = cc;
                st[1] = cw;
                st[2] = ce;
                st[3] = cs;
                st[4] = cn;
                at(row, row) = cc;
                if (ix > 1) at(row, row - 1) = cw;
                if (ix < nxi_) at(row, row + 1) = ce;
                if (iy > 1) at(row, row - nxi_) = cs;
                if (iy < nyi_) at(row, row + nxi_) = cn;
            }
        }
        factorize();
    }

    const TensorMesh2d& mesh() const { return mesh_; }

    /// Solve with f given at all mesh nodes (boundary entries ignored).
    GridSolution2d solve(const std::vector<double>& f_nodes) const {
        if (f_nodes.size() != mesh_.weights.size())
            throw std::invalid_argument("UpwindSolver2d::solve: f values length mismatch");
        std::vector<double> rhs(n_);
        const int nx = mesh_.nx();
        for (int iy = 1; iy <= nyi_; ++iy)
            for (int ix = 1; ix <= nxi_; ++ix)
                rhs[(iy - 1) * nxi_ + (ix - 1)] = f_nodes[iy * nx + ix];
        const std::vector<double> rhs0 = rhs;

        // Forward substitution with stored multipliers, then back substitution.
        for (int k = 0; k < n_; ++k) {
            const int iend = std::min(n_ - 1, k + bw_);
            const double dk = rhs[k];
            for (int i = k + 1; i <= iend; ++i) rhs[i] -= at(i, k) * dk;
        }
        for (int i = n_ - 1; i >= 0; --i) {
            const int jend = std::min(n_ - 1, i + bw_);
            double acc = rhs[i];
            for (int j = i + 1; j <= jend; ++j) acc -= at(i, j) * rhs[j];
            rhs[i] = acc / at(i, i);
        }

        GridSolution2d sol;
        sol.mesh = mesh_;
        sol.values.assign(mesh_.weights.size(), 0.0);
        for (int iy = 1; iy <= nyi_; ++iy)
            for (int ix = 1; ix <= nxi_; ++ix)
                sol.values[iy * nx + ix] = rhs[(iy - 1) * nxi_ + (ix - 1)];

        double r = 0.0;
        for (int iy = 1; iy <= nyi_; ++iy)
            for (int ix = 1; ix <= nxi_; ++ix) {
                const int row = (iy - 1) * nxi_ + (ix - 1);
                const double* st = &stencil_[static_cast<std::size_t>(row) * 5];
                const double lhs = st[0] * sol.values[iy * nx + ix] +
                                   st[1] * sol.values[iy * nx + ix - 1] +
                                   st[2] * sol.values[iy * nx + ix + 1] +
                                   st[3] * sol.values[(iy - 1) * nx + ix] +
                                   st[4] * sol.values[(iy + 1) * nx + ix];
                r = std::max(r, std::abs(lhs - rhs0[row]));
            }
        sol.residual_max = r;
        return sol;
    }

private:
    double& at(int i, int j) { return band_[static_cast<std::size_t>(i) * width_ + (j - i + bw_)]; }
    double at(int i, int j) const {
        return band_[static_cast<std::size_t>(i) * width_ + (j - i + bw_)];
    }

    void factorize() {
        for (int k = 0; k < n_; ++k) {
            const double piv = at(k, k);
            if (piv == 0.0) throw numerical_error("UpwindSolver2d: zero pivot in banded LU");
            const int iend = std::min(n_ - 1, k + bw_);
            const int jend = std::min(n_ - 1, k + bw_);
            for (int i = k + 1; i <= iend; ++i) {
                const double m = at(i, k) / piv;
                at(i, k) = m;
                if (m == 0.0) continue;
                const double* rowk = &band_[static_cast<std::size_t>(k) * width_ + bw_ - k];
                double* rowi = &band_[static_cast<std::size_t>(i) * width_ + bw_ - i];
                for (int j = k + 1; j <= jend; ++j) rowi[j] -= m * rowk[j];
            }
        }
    }

    TensorMesh2d mesh_;
    double epsilon_;
    int nxi_ = 0, nyi_ = 0, n_ = 0, bw_ = 0, width_ = 0;
    std::vector<double> band_;
    std::vector<double> stencil_;
};

inline GridSolution2d solve_upwind_2d(const SppProblem2d& problem, const TensorMesh2d& mesh) {
    UpwindSolver2d solver(problem.epsilon, mesh);
    std::vector<double> f_nodes(mesh.weights.size());
    for (int iy = 0; iy < mesh.ny(); ++iy)
        for (int ix = 0; ix < mesh.nx(); ++ix)
            f_nodes[mesh.index(ix, iy)] = problem.f(mesh.mx.points[ix], mesh.my.points[iy]);
    return solver.solve(f_nodes);
}

/// Bilinear interpolation of 2D nodal values at query points in [0,1]^2.
inline std::vector<double> interp_bilinear(const TensorMesh2d& mesh,
                                           const std::vector<double>& values,
                                           const std::vector<double>& xq,
                                           const std::vector<double>& yq) {
    if (values.size() != mesh.weights.size())
        throw std::invalid_argument("interp_bilinear: values length mismatch");
    if (xq.size() != yq.size())
        throw std::invalid_argument("interp_bilinear: query arrays differ in length");
    const auto locate = [](const std::vector<double>& pts, double v, int J) {
        if (v < 0.0 || v > 1.0)
            throw std::invalid_argument("interp_bilinear: query point outside [0,1]^2");
        int lo = static_cast<int>(std::upper_bound(pts.begin(), pts.end(), v) - pts.begin()) - 1;
        return lo >= J ? J - 1 : lo;
    };
    std::vector<double> out(xq.size());
    const int nx = mesh.nx();
    for (std::size_t i = 0; i < xq.size(); ++i) {
        const int ix = locate(mesh.mx.points, xq[i], mesh.mx.intervals);
        const int iy = locate(mesh.my.points, yq[i], mesh.my.intervals);
        const double tx =
            (xq[i] - mesh.mx.points[ix]) / (mesh.mx.points[ix + 1] - mesh.mx.points[ix]);
        const double ty =
            (yq[i] - mesh.my.points[iy]) / (mesh.my.points[iy + 1] - mesh.my.points[iy]);
        const double v00 = values[iy * nx + ix];
        const double v10 = values[iy * nx + ix + 1];
        const double v01 = values[(iy + 1) * nx + ix];
        const double v11 = values[(iy + 1) * nx + ix + 1];
        out[i] = (1.0 - ty) * ((1.0 - tx) * v00 + tx * v10) + ty * ((1.0 - tx) * v01 + tx * v11);
    }
    return out;
}

inline void solution_to_csv(const GridSolution& sol, std::ostream& out) {
    out << "x,u\n";
    char buf[80];
    for (std::size_t j = 0; j < sol.values.size(); ++j) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", sol.mesh.points[j], sol.values[j]);
        out << buf;
    }
}

inline void solution_to_csv(const GridSolution2d& sol, std::ostream& out) {
    out << "x,y,u\n";
    char buf[120];
    for (std::size_t k = 0; k < sol.values.size(); ++k) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", sol.mesh.x(static_cast<int>(k)),
                      sol.mesh.y(static_cast<int>(k)), sol.values[k]);
        out << buf;
    }
}

}  // namespace sppdon
