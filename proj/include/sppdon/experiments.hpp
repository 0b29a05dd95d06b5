#pragma once

// Sweep experiments: train one model per (epsilon, mesh, J) cell or per
// dataset-size cell, evaluate each on a held-out dataset over a fine
// Shishkin location mesh, and return tidy rows. Shared by the CLI and the
// acceptance suite. Cells are independent and may run in parallel; rows
// come back in cell order regardless of completion order.

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "sppdon/dataset.hpp"
#include "sppdon/deeponet.hpp"
#include "sppdon/manifest.hpp"
#include "sppdon/pipeline.hpp"

namespace sppdon {

struct SweepParams {
    int n_train = 200;
    int m_sensors = 33;
    int j_fine = 4096;
    double length_scale = 1.0;
    double alpha = 1.0;
    std::string preset = "example1";
    TrainConfig tcfg;                  // epochs/lr/batch/p/dims/activation/seed
    std::uint64_t data_seed = 7;
    int n_eval = 64;
    int eval_j = 4096;                 // held-out locations: Shishkin mesh of eval_j intervals
    int jobs = 1;
    std::filesystem::path cache_dir;   // empty disables the per-cell model cache
};

struct SweepCell {
    double epsilon = 1e-3;
    MeshKind mesh_kind = MeshKind::shishkin;
    int j_intervals = 64;
    int n_train = 200;
};

struct SweepRow {
    double epsilon;
    std::string mesh;
    int j_intervals;
    int n_train;
    double risk;
    std::uint64_t seed;
};

inline nlohmann::json cell_config_json(const SweepCell& cell, const SweepParams& params) {
    return nlohmann::json{{"epsilon", cell.epsilon},
                          {"mesh", to_string(cell.mesh_kind)},
                          {"j", cell.j_intervals},
                          {"n", cell.n_train},
                          {"m", params.m_sensors},
                          {"j_fine", params.j_fine},
                          {"l", params.length_scale},
                          {"alpha", params.alpha},
                          {"preset", params.preset},
                          {"epochs", params.tcfg.epochs},
                          {"lr", params.tcfg.lr},
                          {"batch", params.tcfg.batch_size},
                          {"p", params.tcfg.latent_dim},
                          {"branch_hidden", params.tcfg.branch_hidden},
                          {"trunk_hidden", params.tcfg.trunk_hidden},
                          {"activation", to_string(params.tcfg.activation)},
                          {"model_seed", params.tcfg.seed},
                          {"data_seed", params.data_seed}};
}

/// Train (or load from cache) the cell's model and return its held-out risk.
inline SweepRow run_sweep_cell(const SweepCell& cell, const SweepParams& params) {
    DatasetConfig cfg;
    cfg.dim = 1;
    cfg.epsilon = cell.epsilon;
    cfg.alpha = params.alpha;
    cfg.length_scale = params.length_scale;
    cfg.n_samples = cell.n_train;
    cfg.j_intervals = cell.j_intervals;
    cfg.m_sensors = params.m_sensors;
    cfg.mesh_kind = cell.mesh_kind;
    cfg.preset = params.preset;
    cfg.j_fine = params.j_fine;
    cfg.base_seed = params.data_seed;

    const std::string key = config_hash(cell_config_json(cell, params));
    const std::filesystem::path cell_model =
        params.cache_dir.empty() ? std::filesystem::path{}
                                 : params.cache_dir / ("cell-" + key) / "model.bin";

    DeepOnetModel model;
    bool cached = false;
    if (!cell_model.empty() && std::filesystem::exists(cell_model)) {
        try {
            model = load_deeponet_file(cell_model.string());
            cached = model.sensor_count == params.m_sensors;
        } catch (const format_error&) {
            cached = false;  // stale or corrupt cache entry: retrain
        }
    }
    if (!cached) {
        const OperatorDataset train_ds = generate_dataset(cfg);
        model = make_model_for(train_ds, params.tcfg);
        train(model, train_ds, params.tcfg);
        if (!cell_model.empty()) {
            std::filesystem::create_directories(cell_model.parent_path());
            save_deeponet_file(model, cell_model.string());
        }
    }

    DatasetConfig eval_cfg = cfg;
    eval_cfg.n_samples = params.n_eval;
    eval_cfg.j_intervals = params.eval_j;
    eval_cfg.mesh_kind = MeshKind::shishkin;  // evaluation quadrature mesh
    eval_cfg.base_seed = params.data_seed + 1000000;  // held-out samples
    const OperatorDataset eval_ds = generate_dataset(eval_cfg);

    return {cell.epsilon,  to_string(cell.mesh_kind), cell.j_intervals,
            cell.n_train,  empirical_risk(model, eval_ds), params.tcfg.seed};
}

inline std::vector<SweepRow> run_sweep(const std::vector<SweepCell>& cells,
                                       const SweepParams& params) {
    std::vector<SweepRow> rows(cells.size());
    const int jobs = std::max(1, params.jobs);
    if (jobs == 1) {
        for (std::size_t i = 0; i < cells.size(); ++i) rows[i] = run_sweep_cell(cells[i], params);
        return rows;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (int w = 0; w < jobs; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < cells.size(); i = next.fetch_add(1)) {
                try {
                    rows[i] = run_sweep_cell(cells[i], params);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
    return rows;
}

inline std::vector<SweepCell> make_eps_sweep_cells(const std::vector<double>& eps_list,
                                                   const std::vector<MeshKind>& mesh_list,
                                                   const std::vector<int>& j_list, int n_train) {
    std::vector<SweepCell> cells;
    for (double eps : eps_list)
        for (MeshKind mk : mesh_list)
            for (int j : j_list) cells.push_back({eps, mk, j, n_train});
    return cells;
}

}  // namespace sppdon
