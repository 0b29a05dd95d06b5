#pragma once

// Dataset generation, loss functions, and training.
//
// The central contract: training minimizes the uniform-weight loss
//   L = 1/(N(J+1)) sum_n sum_j |u_n(y_j) - N(F_n)(y_j)|^2
// while evaluation reports the quadrature-weighted empirical risk
//   E_{N,J} = (1/N sum_n sum_j w_j |...|^2)^{1/2},
// with w_j the right-Riemann Shishkin weights carried by the dataset.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "sppdon/dataset.hpp"
#include "sppdon/deeponet.hpp"
#include "sppdon/errors.hpp"
#include "sppdon/fdsolve.hpp"
#include "sppdon/grf.hpp"
#include "sppdon/mesh.hpp"
#include "sppdon/nn.hpp"
#include "sppdon/rng.hpp"
#include "sppdon/spectral.hpp"

namespace sppdon {

inline SppProblem1d make_preset_1d(const std::string& preset, double epsilon,
                                   std::function<double(double)> f) {
    if (preset == "example1") return make_example1(epsilon, std::move(f));
    if (preset == "example2") return make_example2(epsilon, std::move(f));
    throw std::invalid_argument("unknown 1D preset: " + preset);
}

inline std::uint64_t sample_seed(std::uint64_t base_seed, int sample_index) {
    return base_seed ^ splitmix64(static_cast<std::uint64_t>(sample_index));
}

namespace detail {

inline void parallel_for(int n, const std::function<void(int)>& body) {
    const unsigned hw = std::thread::hardware_concurrency();
    const int workers = static_cast<int>(std::min<unsigned>(hw == 0 ? 1 : hw, 8));
    if (workers <= 1 || n < 4) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
        });
    for (auto& t : pool) t.join();
}

}  // namespace detail

/// Sample N forcings, solve each on the fine Shishkin reference mesh, and
/// interpolate onto the location grid. Deterministic given the config; an
/// optional forcing override replaces the GRF for every sample (used for
/// closed-form checks).
inline OperatorDataset generate_dataset(
    const DatasetConfig& cfg,
    const std::function<double(double)>* forcing_override = nullptr) {
    if (cfg.dim != 1) throw std::invalid_argument("generate_dataset: config must be 1D");
    if (cfg.n_samples < 1) throw std::invalid_argument("generate_dataset: N must be >= 1");
    if (cfg.m_sensors < 1 || cfg.m_sensors % 2 == 0)
        throw std::invalid_argument("generate_dataset: m must be odd and >= 1");

    const Mesh1d locations = cfg.mesh_kind == MeshKind::shishkin
                                 ? build_shishkin(cfg.j_intervals, cfg.epsilon, cfg.alpha)
                                 : build_uniform(cfg.j_intervals);
    const Mesh1d fine = build_shishkin(cfg.j_fine, cfg.epsilon, cfg.alpha);
    const SensorGrid sensors = make_sensor_grid(cfg.m_sensors);

    const UpwindSolver1d solver(
        make_preset_1d(cfg.preset, cfg.epsilon, [](double) { return 0.0; }), fine);

    OperatorDataset ds;
    ds.config = cfg;
    ds.loc_x = locations.points;
    ds.loc_weights = locations.weights;
    ds.sensor_x = sensors.points;
    ds.sensor_values.resize(cfg.n_samples);
    ds.target_values.resize(cfg.n_samples);
    ds.sample_seeds.resize(cfg.n_samples);
    const GrfSpec spec{cfg.length_scale, 0, 1};

    detail::parallel_for(cfg.n_samples, [&](int n) {
        const std::uint64_t seed = sample_seed(cfg.base_seed, n);
        std::vector<double> f_fine(fine.num_points());
        std::vector<double> f_sensors;
        if (forcing_override) {
            for (int j = 0; j < fine.num_points(); ++j)
                f_fine[j] = (*forcing_override)(fine.points[j]);
            f_sensors.resize(sensors.points.size());
            for (std::size_t i = 0; i < sensors.points.size(); ++i)
                f_sensors[i] = (*forcing_override)(sensors.points[i]);
        } else {
            const FieldSample field = sample_field(spec, seed);
            f_fine = eval_field(field, fine.points);
            f_sensors = eval_field(field, sensors.points);
        }
        GridSolution sol;
        try {
            sol = solver.solve(f_fine);
        } catch (const std::exception& e) {
            throw numerical_error("sample " + std::to_string(n) + ": " + e.what());
        }
        ds.sample_seeds[n] = seed;
        ds.sensor_values[n] = std::move(f_sensors);
        ds.target_values[n] = interp_linear(fine, sol.values, locations.points);
    });
    detail::derive_boundary_flags(ds);
    return ds;
}

/// 2D variant: tensor-product GRF forcing, upwind solve on a fine tensor
/// Shishkin mesh (factored once, reused across samples), bilinear
/// interpolation onto the location grid.
inline OperatorDataset generate_dataset_2d(
    const DatasetConfig& cfg,
    const std::function<double(double, double)>* forcing_override = nullptr) {
    if (cfg.dim != 2) throw std::invalid_argument("generate_dataset_2d: config must be 2D");
    if (cfg.n_samples < 1) throw std::invalid_argument("generate_dataset_2d: N must be >= 1");
    if (cfg.m_sensors < 1 || cfg.m_sensors % 2 == 0)
        throw std::invalid_argument("generate_dataset_2d: per-axis m must be odd and >= 1");

    const auto make_axis = [&](int j) {
        return cfg.mesh_kind == MeshKind::shishkin ? build_shishkin(j, cfg.epsilon, cfg.alpha)
                                                   : build_uniform(j);
    };
    const TensorMesh2d locations =
        build_tensor_2d(make_axis(cfg.j_intervals), make_axis(cfg.j_intervals));
    const TensorMesh2d fine = build_tensor_2d(build_shishkin(cfg.j_fine, cfg.epsilon, cfg.alpha),
                                              build_shishkin(cfg.j_fine, cfg.epsilon, cfg.alpha));
    const UpwindSolver2d solver(cfg.epsilon, fine);
    const SensorGrid axis_sensors = make_sensor_grid(cfg.m_sensors);

    OperatorDataset ds;
    ds.config = cfg;
    const int L = locations.num_points();
    ds.loc_x.resize(L);
    ds.loc_y.resize(L);
    for (int i = 0; i < L; ++i) {
        ds.loc_x[i] = locations.x(i);
        ds.loc_y[i] = locations.y(i);
    }
    ds.loc_weights = locations.weights;
    const int ms = cfg.m_sensors;
    ds.sensor_x.resize(static_cast<std::size_t>(ms) * ms);
    ds.sensor_y.resize(static_cast<std::size_t>(ms) * ms);
    for (int iy = 0; iy < ms; ++iy)
        for (int ix = 0; ix < ms; ++ix) {
            ds.sensor_x[static_cast<std::size_t>(iy) * ms + ix] = axis_sensors.points[ix];
            ds.sensor_y[static_cast<std::size_t>(iy) * ms + ix] = axis_sensors.points[iy];
        }
    ds.sensor_values.resize(cfg.n_samples);
    ds.target_values.resize(cfg.n_samples);
    ds.sample_seeds.resize(cfg.n_samples);
    const GrfSpec spec{cfg.length_scale, 0, 2};

    detail::parallel_for(cfg.n_samples, [&](int n) {
        const std::uint64_t seed = sample_seed(cfg.base_seed, n);
        std::vector<double> f_fine(fine.weights.size());
        std::vector<double> f_sensors(ds.sensor_x.size());
        if (forcing_override) {
            for (std::size_t i = 0; i < f_fine.size(); ++i)
                f_fine[i] =
                    (*forcing_override)(fine.x(static_cast<int>(i)), fine.y(static_cast<int>(i)));
            for (std::size_t i = 0; i < f_sensors.size(); ++i)
                f_sensors[i] = (*forcing_override)(ds.sensor_x[i], ds.sensor_y[i]);
        } else {
            const FieldSample2d field = sample_field_2d(spec, seed);
            for (std::size_t i = 0; i < f_fine.size(); ++i)
                f_fine[i] =
                    eval_field_2d_at(field, fine.x(static_cast<int>(i)), fine.y(static_cast<int>(i)));
            for (std::size_t i = 0; i < f_sensors.size(); ++i)
                f_sensors[i] = eval_field_2d_at(field, ds.sensor_x[i], ds.sensor_y[i]);
        }
        GridSolution2d sol;
        try {
            sol = solver.solve(f_fine);
        } catch (const std::exception& e) {
            throw numerical_error("sample " + std::to_string(n) + ": " + e.what());
        }
        ds.sample_seeds[n] = seed;
        ds.sensor_values[n] = std::move(f_sensors);
        ds.target_values[n] = interp_bilinear(fine, sol.values, ds.loc_x, ds.loc_y);
    });
    detail::derive_boundary_flags(ds);
    return ds;
}

/// Model predictions for every (sample, location) pair of the dataset; the
/// trunk runs once over the shared location grid.
inline Matrix predict_all(const DeepOnetModel& model, const OperatorDataset& ds) {
    const int N = ds.num_samples();
    const int L = ds.num_locations();
    const int m = ds.num_sensors_total();
    if (m != model.sensor_count)
        throw std::invalid_argument("predict_all: dataset sensor count != model m");
    if (ds.config.dim != model.location_dim)
        throw std::invalid_argument("predict_all: dataset dim != model d");

    Matrix locs(L, model.location_dim);
    for (int i = 0; i < L; ++i) {
        locs(i, 0) = ds.loc_x[i];
        if (model.location_dim == 2) locs(i, 1) = ds.loc_y[i];
    }
    const Matrix tau = forward(model.trunk, locs);  // L x (p+1)
    Matrix sensors(N, m);
    for (int n = 0; n < N; ++n)
        std::copy(ds.sensor_values[n].begin(), ds.sensor_values[n].end(), sensors.row(n));
    const Matrix beta = forward(model.branch, sensors);  // N x p

    Matrix preds(N, L);
    const int p = model.latent_dim;
    for (int n = 0; n < N; ++n) {
        const double* b = beta.row(n);
        double* out = preds.row(n);
        for (int i = 0; i < L; ++i) {
            const double* t = tau.row(i);
            double acc = t[0];
            for (int k = 0; k < p; ++k) acc += b[k] * t[k + 1];
            out[i] = acc;
        }
    }
    return preds;
}

/// Uniform-weight mean squared error over selected (sample, location) pairs
/// given as parallel index arrays.
inline double loss_mse(const DeepOnetModel& model, const OperatorDataset& ds,
                       const std::vector<int>& sample_indices,
                       const std::vector<int>& location_indices) {
    if (sample_indices.size() != location_indices.size())
        throw std::invalid_argument("loss_mse: index arrays must have equal length");
    if (sample_indices.empty()) throw std::invalid_argument("loss_mse: empty selection");
    const Matrix preds = predict_all(model, ds);
    double acc = 0.0;
    for (std::size_t i = 0; i < sample_indices.size(); ++i) {
        const int n = sample_indices[i];
        const int j = location_indices[i];
        if (n < 0 || n >= ds.num_samples() || j < 0 || j >= ds.num_locations())
            throw std::invalid_argument("loss_mse: pair index out of range");
        const double d = preds(n, j) - ds.target_values[n][j];
        acc += d * d;
    }
    return acc / static_cast<double>(sample_indices.size());
}

/// Eq.-loss over all pairs: 1/(N(J+1)) sum of squared errors.
inline double loss_mse(const DeepOnetModel& model, const OperatorDataset& ds) {
    const Matrix preds = predict_all(model, ds);
    double acc = 0.0;
    for (int n = 0; n < ds.num_samples(); ++n)
        for (int j = 0; j < ds.num_locations(); ++j) {
            const double d = preds(n, j) - ds.target_values[n][j];
            acc += d * d;
        }
    return acc / (static_cast<double>(ds.num_samples()) * ds.num_locations());
}

/// Quadrature-weighted empirical risk (square root of the weighted mean).
inline double empirical_risk(const DeepOnetModel& model, const OperatorDataset& ds) {
    if (ds.loc_weights.size() != ds.loc_x.size() || ds.loc_x.empty())
        throw std::invalid_argument("empirical_risk: dataset locations lack quadrature weights");
    const Matrix preds = predict_all(model, ds);
    double acc = 0.0;
    for (int n = 0; n < ds.num_samples(); ++n)
        for (int j = 0; j < ds.num_locations(); ++j) {
            const double d = preds(n, j) - ds.target_values[n][j];
            acc += ds.loc_weights[j] * d * d;
        }
    return std::sqrt(acc / ds.num_samples());
}

/// Risk of the zero predictor (RMS of the weighted targets); baseline for
/// sanity checks.
inline double zero_predictor_risk(const OperatorDataset& ds) {
    double acc = 0.0;
    for (int n = 0; n < ds.num_samples(); ++n)
        for (int j = 0; j < ds.num_locations(); ++j)
            acc += ds.loc_weights[j] * ds.target_values[n][j] * ds.target_values[n][j];
    return std::sqrt(acc / ds.num_samples());
}

/// Boundary-penalized 2D loss: interior mean + lambda * boundary mean.
inline double loss_penalized_2d(const DeepOnetModel& model, const OperatorDataset& ds,
                                double lambda) {
    long long jr = 0, jb = 0;
    for (auto b : ds.loc_is_boundary) (b ? jb : jr) += 1;
    if (jb == 0) throw std::invalid_argument("loss_penalized_2d: no boundary locations");
    if (jr == 0) throw std::invalid_argument("loss_penalized_2d: no interior locations");
    const Matrix preds = predict_all(model, ds);
    double interior = 0.0, boundary = 0.0;
    for (int n = 0; n < ds.num_samples(); ++n)
        for (int j = 0; j < ds.num_locations(); ++j) {
            const double d = preds(n, j) - ds.target_values[n][j];
            (ds.loc_is_boundary[j] ? boundary : interior) += d * d;
        }
    const double N = ds.num_samples();
    return interior / (N * jr) + lambda * boundary / (N * jb);
}

struct TrainConfig {
    int epochs = 1000;
    double lr = 1e-3;
    int batch_size = 4096;  // in (sample, location) pairs
    std::uint64_t seed = 0;
    double penalty_lambda = 0.1;  // 2D only
    Activation activation = Activation::relu;
    std::vector<int> branch_hidden{128, 128};
    std::vector<int> trunk_hidden{128, 128};
    int latent_dim = 32;  // p
};

inline DeepOnetModel make_model_for(const OperatorDataset& ds, const TrainConfig& tcfg) {
    return make_deeponet(ds.num_sensors_total(), tcfg.latent_dim, ds.config.dim,
                         tcfg.branch_hidden, tcfg.trunk_hidden, tcfg.activation, tcfg.seed);
}

/// Minibatch Adam over all N*L pairs, reshuffled each epoch with an
/// epoch-seeded permutation. Returns the per-epoch training loss (the
/// uniform-weight loss in 1D, the penalized loss in 2D), as traversed.
/// Deterministic given (model, dataset, config).
inline std::vector<double> train(DeepOnetModel& model, const OperatorDataset& ds,
                                 const TrainConfig& tcfg) {
    const int N = ds.num_samples();
    const int L = ds.num_locations();
    const int m = ds.num_sensors_total();
    if (m != model.sensor_count || ds.config.dim != model.location_dim)
        throw std::invalid_argument("train: model dims do not match dataset");
    if (tcfg.epochs < 1) throw std::invalid_argument("train: epochs must be >= 1");
    if (tcfg.batch_size < 1) throw std::invalid_argument("train: batch_size must be >= 1");

    // Per-location loss weights.
    std::vector<double> loc_w(L);
    if (ds.config.dim == 1) {
        const double w = 1.0 / (static_cast<double>(N) * L);
        loc_w.assign(L, w);
    } else {
        long long jr = 0, jb = 0;
        for (auto b : ds.loc_is_boundary) (b ? jb : jr) += 1;
        if (jb == 0 || jr == 0)
            throw std::invalid_argument("train: 2D dataset needs interior and boundary points");
        for (int j = 0; j < L; ++j)
            loc_w[j] = ds.loc_is_boundary[j] ? tcfg.penalty_lambda / (static_cast<double>(N) * jb)
                                             : 1.0 / (static_cast<double>(N) * jr);
    }

    Matrix all_sensors(N, m);
    for (int n = 0; n < N; ++n)
        std::copy(ds.sensor_values[n].begin(), ds.sensor_values[n].end(), all_sensors.row(n));
    Matrix all_locs(L, model.location_dim);
    for (int i = 0; i < L; ++i) {
        all_locs(i, 0) = ds.loc_x[i];
        if (model.location_dim == 2) all_locs(i, 1) = ds.loc_y[i];
    }

    AdamState branch_opt = make_adam(model.branch, tcfg.lr);
    AdamState trunk_opt = make_adam(model.trunk, tcfg.lr);

    const std::size_t total_pairs = static_cast<std::size_t>(N) * L;
    const double total_d = static_cast<double>(total_pairs);
    std::vector<double> history;
    history.reserve(tcfg.epochs);

    std::vector<int> sample_slot(N), loc_slot(L);
    Matrix batch_sensors, batch_locs;
    ForwardCache branch_cache, trunk_cache;
    Matrix beta, tau, d_beta, d_tau;

    for (int epoch = 0; epoch < tcfg.epochs; ++epoch) {
        const auto perm = random_permutation(
            splitmix64(tcfg.seed ^ splitmix64(static_cast<std::uint64_t>(epoch))), total_pairs);
        double epoch_loss = 0.0;
        for (std::size_t start = 0; start < total_pairs; start += tcfg.batch_size) {
            const std::size_t bend = std::min(total_pairs, start + tcfg.batch_size);
            const int bsz = static_cast<int>(bend - start);

            // Distinct samples/locations of the batch, in first-seen order.
            std::fill(sample_slot.begin(), sample_slot.end(), -1);
            std::fill(loc_slot.begin(), loc_slot.end(), -1);
            std::vector<int> batch_samples, batch_locidx;
            std::vector<int> pair_srow(bsz), pair_lrow(bsz);
            for (int i = 0; i < bsz; ++i) {
                const auto pair = perm[start + i];
                const int n = static_cast<int>(pair / L);
                const int j = static_cast<int>(pair % L);
                if (sample_slot[n] < 0) {
                    sample_slot[n] = static_cast<int>(batch_samples.size());
                    batch_samples.push_back(n);
                }
                if (loc_slot[j] < 0) {
                    loc_slot[j] = static_cast<int>(batch_locidx.size());
                    batch_locidx.push_back(j);
                }
                pair_srow[i] = sample_slot[n];
                pair_lrow[i] = loc_slot[j];
            }
            batch_sensors = Matrix(batch_samples.size(), m);
            for (std::size_t r = 0; r < batch_samples.size(); ++r)
                std::copy(all_sensors.row(batch_samples[r]), all_sensors.row(batch_samples[r]) + m,
                          batch_sensors.row(r));
            batch_locs = Matrix(batch_locidx.size(), model.location_dim);
            for (std::size_t r = 0; r < batch_locidx.size(); ++r)
                std::copy(all_locs.row(batch_locidx[r]),
                          all_locs.row(batch_locidx[r]) + model.location_dim, batch_locs.row(r));

            beta = forward(model.branch, batch_sensors, &branch_cache);
            tau = forward(model.trunk, batch_locs, &trunk_cache);

            const int p = model.latent_dim;
            d_beta = Matrix(beta.rows, beta.cols);
            d_tau = Matrix(tau.rows, tau.cols);
            double batch_loss = 0.0;
            const double scale = total_d / bsz;  // unbiased estimate of the full loss
            for (int i = 0; i < bsz; ++i) {
                const auto pair = perm[start + i];
                const int n = static_cast<int>(pair / L);
                const int j = static_cast<int>(pair % L);
                const double* b = beta.row(pair_srow[i]);
                const double* t = tau.row(pair_lrow[i]);
                double pred = t[0];
                for (int k = 0; k < p; ++k) pred += b[k] * t[k + 1];
                const double err = pred - ds.target_values[n][j];
                const double w = loc_w[j];
                batch_loss += w * err * err;
                const double g = scale * 2.0 * w * err;
                double* db = d_beta.row(pair_srow[i]);
                double* dt = d_tau.row(pair_lrow[i]);
                dt[0] += g;
                for (int k = 0; k < p; ++k) {
                    dt[k + 1] += g * b[k];
                    db[k] += g * t[k + 1];
                }
            }
            epoch_loss += batch_loss;
            if (!std::isfinite(batch_loss) || batch_loss * scale > 1e6)
                throw numerical_error("train: diverged at epoch " + std::to_string(epoch));

            const Gradients branch_grads = backward(model.branch, branch_cache, d_beta);
            const Gradients trunk_grads = backward(model.trunk, trunk_cache, d_tau);
            adam_step(model.branch, branch_grads, branch_opt);
            adam_step(model.trunk, trunk_grads, trunk_opt);
        }
        history.push_back(epoch_loss);
    }
    return history;
}

}  // namespace sppdon
