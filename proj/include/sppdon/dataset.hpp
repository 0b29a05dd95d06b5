#pragma once

// Operator-learning dataset: N input functions sampled at m sensors paired
// with reference solution values at J+1 quadrature locations. Persisted as
// meta.json (config + format version) plus data.bin, a raw little-endian
// float64 payload laid out as
//
//   1D: [locations | weights | sensors | sample_0 sensors | sample_0 targets | ...]
//   2D: [loc_x | loc_y | weights | sensor_x | sensor_y | per-sample ...]

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sppdon/errors.hpp"
#include "sppdon/mesh.hpp"
#include "sppdon/rng.hpp"

namespace sppdon {

constexpr int kDatasetFormatVersion = 1;

struct DatasetConfig {
    int dim = 1;
    double epsilon = 1e-3;
    double alpha = 1.0;
    double length_scale = 1.0;   // GRF length scale l
    int n_samples = 0;           // N
    int j_intervals = 0;         // J (per axis in 2D)
    int m_sensors = 0;           // sensors (per axis in 2D; odd)
    MeshKind mesh_kind = MeshKind::shishkin;
    std::string preset = "example1";  // example1 | example2 | example3 (2D)
    int j_fine = 4096;           // reference-solver intervals (per axis in 2D)
    std::uint64_t base_seed = 0;
};

inline void to_json(nlohmann::json& j, const DatasetConfig& c) {
    j = nlohmann::json{{"format_version", kDatasetFormatVersion},
                       {"dim", c.dim},
                       {"epsilon", c.epsilon},
                       {"alpha", c.alpha},
                       {"length_scale", c.length_scale},
                       {"n_samples", c.n_samples},
                       {"j_intervals", c.j_intervals},
                       {"m_sensors", c.m_sensors},
                       {"mesh_kind", to_string(c.mesh_kind)},
                       {"preset", c.preset},
                       {"j_fine", c.j_fine},
                       {"base_seed", c.base_seed}};
}

inline void from_json(const nlohmann::json& j, DatasetConfig& c) {
    if (j.at("format_version").get<int>() != kDatasetFormatVersion)
        throw format_error("unsupported dataset format version");
    j.at("dim").get_to(c.dim);
    j.at("epsilon").get_to(c.epsilon);
    j.at("alpha").get_to(c.alpha);
    j.at("length_scale").get_to(c.length_scale);
    j.at("n_samples").get_to(c.n_samples);
    j.at("j_intervals").get_to(c.j_intervals);
    j.at("m_sensors").get_to(c.m_sensors);
    c.mesh_kind = mesh_kind_from_string(j.at("mesh_kind").get<std::string>());
    j.at("preset").get_to(c.preset);
    j.at("j_fine").get_to(c.j_fine);
    j.at("base_seed").get_to(c.base_seed);
}

struct OperatorDataset {
    DatasetConfig config;
    std::vector<double> loc_x;                 // L locations (x coordinate)
    std::vector<double> loc_y;                 // empty in 1D
    std::vector<double> loc_weights;           // quadrature weights, length L
    std::vector<std::uint8_t> loc_is_boundary; // length L
    std::vector<double> sensor_x;              // sensor coordinates
    std::vector<double> sensor_y;              // empty in 1D
    std::vector<std::vector<double>> sensor_values;  // N x (total sensors)
    std::vector<std::vector<double>> target_values;  // N x L
    std::vector<std::uint64_t> sample_seeds;         // N

    int num_locations() const { return static_cast<int>(loc_x.size()); }
    int num_sensors_total() const { return static_cast<int>(sensor_x.size()); }
    int num_samples() const { return static_cast<int>(sensor_values.size()); }
};

inline std::size_t dataset_payload_doubles(const OperatorDataset& ds) {
    const std::size_t L = ds.loc_x.size();
    const std::size_t m = ds.sensor_x.size();
    const std::size_t N = ds.sensor_values.size();
    const std::size_t coord = ds.config.dim == 1 ? 1 : 2;
    return L * coord + L + m * coord + N * (m + L);
}

inline void save_dataset(const OperatorDataset& ds, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    {
        nlohmann::json meta = ds.config;
        meta["num_locations"] = ds.num_locations();
        meta["num_sensors_total"] = static_cast<int>(ds.sensor_x.size());
        std::ofstream out(dir / "meta.json");
        if (!out) throw std::runtime_error("cannot write " + (dir / "meta.json").string());
        out << meta.dump(2) << "\n";
    }
    std::ofstream bin(dir / "data.bin", std::ios::binary);
    if (!bin) throw std::runtime_error("cannot write " + (dir / "data.bin").string());
    const auto put = [&bin](const std::vector<double>& v) {
        bin.write(reinterpret_cast<const char*>(v.data()),
                  static_cast<std::streamsize>(v.size() * sizeof(double)));
    };
    put(ds.loc_x);
    if (ds.config.dim == 2) put(ds.loc_y);
    put(ds.loc_weights);
    put(ds.sensor_x);
    if (ds.config.dim == 2) put(ds.sensor_y);
    for (int n = 0; n < ds.num_samples(); ++n) {
        put(ds.sensor_values[n]);
        put(ds.target_values[n]);
    }
}

namespace detail {

inline void derive_boundary_flags(OperatorDataset& ds) {
    const std::size_t L = ds.loc_x.size();
    ds.loc_is_boundary.resize(L);
    for (std::size_t i = 0; i < L; ++i) {
        bool b = ds.loc_x[i] == 0.0 || ds.loc_x[i] == 1.0;
        if (ds.config.dim == 2) b = b || ds.loc_y[i] == 0.0 || ds.loc_y[i] == 1.0;
        ds.loc_is_boundary[i] = b ? 1 : 0;
    }
}

}  // namespace detail

inline OperatorDataset load_dataset(const std::filesystem::path& dir) {
    OperatorDataset ds;
    {
        std::ifstream in(dir / "meta.json");
        if (!in) throw std::runtime_error("cannot read " + (dir / "meta.json").string());
        nlohmann::json meta;
        try {
            in >> meta;
            ds.config = meta.get<DatasetConfig>();
        } catch (const nlohmann::json::exception& e) {
            throw format_error(std::string("bad dataset metadata: ") + e.what());
        }
    }
    std::ifstream bin(dir / "data.bin", std::ios::binary);
    if (!bin) throw std::runtime_error("cannot read " + (dir / "data.bin").string());
    bin.seekg(0, std::ios::end);
    const std::size_t bytes = static_cast<std::size_t>(bin.tellg());
    bin.seekg(0);

    const auto& c = ds.config;
    const std::size_t L = c.dim == 1
                              ? static_cast<std::size_t>(c.j_intervals) + 1
                              : (static_cast<std::size_t>(c.j_intervals) + 1) *
                                    (static_cast<std::size_t>(c.j_intervals) + 1);
    const std::size_t m = c.dim == 1 ? static_cast<std::size_t>(c.m_sensors)
                                     : static_cast<std::size_t>(c.m_sensors) * c.m_sensors;
    const std::size_t coord = c.dim == 1 ? 1 : 2;
    const std::size_t expect =
        (L * coord + L + m * coord + static_cast<std::size_t>(c.n_samples) * (m + L)) *
        sizeof(double);
    if (bytes != expect)
        throw format_error("payload length " + std::to_string(bytes) + " != expected " +
                               std::to_string(expect),
                           static_cast<long long>(std::min(bytes, expect)));

    std::size_t offset = 0;
    const auto take = [&bin, &offset](std::vector<double>& v, std::size_t n) {
        v.resize(n);
        bin.read(reinterpret_cast<char*>(v.data()),
                 static_cast<std::streamsize>(n * sizeof(double)));
        if (!bin) throw format_error("truncated payload", static_cast<long long>(offset));
        offset += n * sizeof(double);
    };
    take(ds.loc_x, L);
    if (c.dim == 2) take(ds.loc_y, L);
    take(ds.loc_weights, L);
    take(ds.sensor_x, m);
    if (c.dim == 2) take(ds.sensor_y, m);
    ds.sensor_values.resize(c.n_samples);
    ds.target_values.resize(c.n_samples);
    ds.sample_seeds.resize(c.n_samples);
    for (int n = 0; n < c.n_samples; ++n) {
        take(ds.sensor_values[n], m);
        take(ds.target_values[n], L);
        ds.sample_seeds[n] = c.base_seed ^ splitmix64(static_cast<std::uint64_t>(n));
    }
    detail::derive_boundary_flags(ds);
    return ds;
}

}  // namespace sppdon
