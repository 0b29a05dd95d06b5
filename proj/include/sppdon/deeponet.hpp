#pragma once

// Branch/trunk operator network. The trunk maps a location y in R^d to p+1
// features (tau_0, ..., tau_p); the branch maps m sensor values to p
// coefficients; the prediction at y is
//
//   N(f)(y) = tau_0(y) + sum_{k=1}^p branch_k(f) tau_k(y).

#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "sppdon/errors.hpp"
#include "sppdon/matrix.hpp"
#include "sppdon/nn.hpp"

namespace sppdon {

struct DeepOnetModel {
    int sensor_count = 0;    // m, branch input width
    int latent_dim = 0;      // p
    int location_dim = 1;    // d
    Mlp branch;              // dims m -> ... -> p
    Mlp trunk;               // dims d -> ... -> p+1
};

inline DeepOnetModel make_deeponet(int sensor_count, int latent_dim, int location_dim,
                                   const std::vector<int>& branch_hidden,
                                   const std::vector<int>& trunk_hidden, Activation activation,
                                   std::uint64_t seed) {
    if (sensor_count < 1 || latent_dim < 1 || (location_dim != 1 && location_dim != 2))
        throw std::invalid_argument("make_deeponet: bad m/p/d");
    std::vector<int> bd{sensor_count};
    bd.insert(bd.end(), branch_hidden.begin(), branch_hidden.end());
    bd.push_back(latent_dim);
    std::vector<int> td{location_dim};
    td.insert(td.end(), trunk_hidden.begin(), trunk_hidden.end());
    td.push_back(latent_dim + 1);
    DeepOnetModel model;
    model.sensor_count = sensor_count;
    model.latent_dim = latent_dim;
    model.location_dim = location_dim;
    model.branch = init_mlp(bd, activation, splitmix64(seed));
    model.trunk = init_mlp(td, activation, splitmix64(seed ^ 0xb7e151628aed2a6bULL));
    return model;
}

inline long long count_params(const DeepOnetModel& model) {
    return param_count(model.branch) + param_count(model.trunk);
}

/// Evaluate the operator network for one input function at many locations;
/// the branch runs once.
inline std::vector<double> don_forward(const DeepOnetModel& model,
                                       const std::vector<double>& sensor_vals,
                                       const Matrix& locations) {
    if (static_cast<int>(sensor_vals.size()) != model.sensor_count)
        throw std::invalid_argument("don_forward: sensor value width mismatch");
    if (static_cast<int>(locations.cols) != model.location_dim)
        throw std::invalid_argument("don_forward: location width mismatch");
    Matrix s(1, model.sensor_count);
    s.data.assign(sensor_vals.begin(), sensor_vals.end());
    const Matrix beta = forward(model.branch, s);
    const Matrix tau = forward(model.trunk, locations);
    const int p = model.latent_dim;
    std::vector<double> out(locations.rows);
    for (std::size_t i = 0; i < locations.rows; ++i) {
        const double* ti = tau.row(i);
        double acc = ti[0];
        for (int k = 0; k < p; ++k) acc += beta.data[k] * ti[k + 1];
        out[i] = acc;
    }
    return out;
}

inline std::vector<double> don_forward(const DeepOnetModel& model,
                                       const std::vector<double>& sensor_vals,
                                       const std::vector<double>& ys_1d) {
    Matrix locs(ys_1d.size(), 1);
    locs.data = ys_1d;
    return don_forward(model, sensor_vals, locs);
}

/// Caches for a batch of (sample, location) pairs. Branch rows hold the
/// distinct input functions of the batch; pair i reads branch row
/// sample_of_pair[i] and trunk row i.
struct DonBatchCache {
    ForwardCache branch_cache, trunk_cache;
    Matrix branch_out;  // S x p
    Matrix trunk_out;   // n x (p+1)
    std::vector<int> sample_of_pair;
};

inline std::vector<double> don_forward_batch(const DeepOnetModel& model, const Matrix& sensors,
                                             const Matrix& locations,
                                             std::vector<int> sample_of_pair,
                                             DonBatchCache& cache) {
    if (sample_of_pair.size() != locations.rows)
        throw std::invalid_argument("don_forward_batch: one sample index per location row");
    cache.branch_out = forward(model.branch, sensors, &cache.branch_cache);
    cache.trunk_out = forward(model.trunk, locations, &cache.trunk_cache);
    cache.sample_of_pair = std::move(sample_of_pair);
    const int p = model.latent_dim;
    std::vector<double> preds(locations.rows);
    for (std::size_t i = 0; i < locations.rows; ++i) {
        const int s = cache.sample_of_pair[i];
        if (s < 0 || static_cast<std::size_t>(s) >= cache.branch_out.rows)
            throw std::invalid_argument("don_forward_batch: sample index out of range");
        const double* beta = cache.branch_out.row(s);
        const double* tau = cache.trunk_out.row(i);
        double acc = tau[0];
        for (int k = 0; k < p; ++k) acc += beta[k] * tau[k + 1];
        preds[i] = acc;
    }
    return preds;
}

struct DonGradients {
    Gradients branch;
    Gradients trunk;
};

/// Chain rule through the bilinear pairing, then through both nets.
inline DonGradients don_backward_batch(const DeepOnetModel& model, const DonBatchCache& cache,
                                       const std::vector<double>& d_preds) {
    if (d_preds.size() != cache.trunk_out.rows)
        throw std::invalid_argument("don_backward_batch: d_preds length mismatch");
    const int p = model.latent_dim;
    Matrix d_branch_out(cache.branch_out.rows, cache.branch_out.cols);
    Matrix d_trunk_out(cache.trunk_out.rows, cache.trunk_out.cols);
    for (std::size_t i = 0; i < d_preds.size(); ++i) {
        const int s = cache.sample_of_pair[i];
        const double g = d_preds[i];
        const double* beta = cache.branch_out.row(s);
        const double* tau = cache.trunk_out.row(i);
        double* db = d_branch_out.row(s);
        double* dt = d_trunk_out.row(i);
        dt[0] += g;
        for (int k = 0; k < p; ++k) {
            dt[k + 1] += g * beta[k];
            db[k] += g * tau[k + 1];
        }
    }
    DonGradients g;
    g.branch = backward(model.branch, cache.branch_cache, d_branch_out);
    g.trunk = backward(model.trunk, cache.trunk_cache, d_trunk_out);
    return g;
}

inline void save_deeponet(const DeepOnetModel& model, std::ostream& out) {
    out.write("SPPDON1", 7);
    detail::write_pod(out, static_cast<std::uint32_t>(model.sensor_count));
    detail::write_pod(out, static_cast<std::uint32_t>(model.latent_dim));
    detail::write_pod(out, static_cast<std::uint32_t>(model.location_dim));
    detail::write_pod(out, static_cast<std::uint32_t>(model.branch.activation));
    save_mlp(model.branch, out);
    save_mlp(model.trunk, out);
}

inline DeepOnetModel load_deeponet(std::istream& in) {
    char magic[7];
    in.read(magic, 7);
    if (!in || std::string(magic, 7) != "SPPDON1")
        throw format_error("bad model magic (expected SPPDON1)", 0);
    DeepOnetModel model;
    model.sensor_count = static_cast<int>(detail::read_pod<std::uint32_t>(in, "sensor count"));
    model.latent_dim = static_cast<int>(detail::read_pod<std::uint32_t>(in, "latent dim"));
    model.location_dim = static_cast<int>(detail::read_pod<std::uint32_t>(in, "location dim"));
    detail::read_pod<std::uint32_t>(in, "activation tag");
    model.branch = load_mlp(in);
    model.trunk = load_mlp(in);
    if (model.branch.in_dim() != model.sensor_count ||
        model.branch.out_dim() != model.latent_dim ||
        model.trunk.in_dim() != model.location_dim ||
        model.trunk.out_dim() != model.latent_dim + 1)
        throw format_error("model header inconsistent with network dims");
    return model;
}

inline void save_deeponet_file(const DeepOnetModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    save_deeponet(model, out);
}

inline DeepOnetModel load_deeponet_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    return load_deeponet(in);
}

}  // namespace sppdon
