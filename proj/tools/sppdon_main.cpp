// sppdon: learn the solution operator of singularly perturbed
// convection-diffusion problems with a branch/trunk operator network.
//
// Subcommands: gen-data, train, eval, sweep-eps, sweep-size, predict, plot,
// rerun. Every command writes a manifest next to its outputs; `rerun`
// replays a manifest and reproduces the artifacts byte-for-byte.
//
// Exit codes: 0 success, 1 numerical failure, 2 usage/config error.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sppdon/csv.hpp"
#include "sppdon/dataset.hpp"
#include "sppdon/deeponet.hpp"
#include "sppdon/errors.hpp"
#include "sppdon/experiments.hpp"
#include "sppdon/fdsolve.hpp"
#include "sppdon/grf.hpp"
#include "sppdon/manifest.hpp"
#include "sppdon/mesh.hpp"
#include "sppdon/pipeline.hpp"
#include "sppdon/spectral.hpp"
#include "sppdon/svg.hpp"

namespace fs = std::filesystem;
using namespace sppdon;

namespace {

int run_cli(const std::vector<std::string>& args);  // forward, used by rerun

std::vector<int> parse_int_list(const std::string& csv) {
    std::vector<int> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
    if (out.empty()) throw std::invalid_argument("empty list: " + csv);
    return out;
}

std::vector<double> parse_double_list(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    if (out.empty()) throw std::invalid_argument("empty list: " + csv);
    return out;
}

fs::path ensure_parent_dir(const std::string& file_path) {
    const fs::path p(file_path);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    return p.has_parent_path() ? p.parent_path() : fs::path(".");
}

// --------------------------------------------------------------------------
// gen-data

struct GenDataArgs {
    double eps = 1e-3, alpha = 1.0, l = 1.0;
    int n = 0, j = 0, m = 33, jfine = 0;
    std::string mesh = "shishkin", preset = "example1", out;
    std::uint64_t seed = 0;
};

int cmd_gen_data(const GenDataArgs& a, const std::vector<std::string>& argv) {
    WallClock clock;
    const int dim = a.preset == "example3" ? 2 : 1;
    const int jfine = a.jfine > 0 ? a.jfine : (dim == 1 ? 4096 : 256);

    DatasetConfig cfg;
    cfg.dim = dim;
    cfg.epsilon = a.eps;
    cfg.alpha = a.alpha;
    cfg.length_scale = a.l;
    cfg.n_samples = a.n;
    cfg.j_intervals = a.j;
    cfg.m_sensors = a.m;
    cfg.mesh_kind = mesh_kind_from_string(a.mesh);
    cfg.preset = a.preset;
    cfg.j_fine = jfine;
    cfg.base_seed = a.seed;

    const OperatorDataset ds = dim == 1 ? generate_dataset(cfg) : generate_dataset_2d(cfg);
    const fs::path out(a.out);
    save_dataset(ds, out);

    RunManifest manifest;
    manifest.command = "gen-data";
    manifest.argv = argv;
    manifest.config = nlohmann::json{{"eps", a.eps},   {"alpha", a.alpha}, {"l", a.l},
                                     {"n", a.n},       {"j", a.j},         {"m", a.m},
                                     {"mesh", a.mesh}, {"preset", a.preset},
                                     {"jfine", jfine}, {"dim", dim},       {"out", a.out}};
    manifest.seeds = {{"base_seed", a.seed}};
    manifest.artifact_paths = {(out / "meta.json").string(), (out / "data.bin").string()};
    manifest.wall_clock_seconds = clock.seconds();
    write_manifest(manifest, out / "gen-data.manifest.json");

    std::cout << "gen-data: N=" << a.n << " J=" << a.j << " m=" << a.m << " eps=" << a.eps
              << " mesh=" << a.mesh << " bytes=" << fs::file_size(out / "data.bin") << "\n";
    return 0;
}

// --------------------------------------------------------------------------
// train

struct TrainArgs {
    std::string data, out;
    int p = 32, epochs = 300, batch = 4096;
    std::string branch_dims = "128,128", trunk_dims = "128,128", activation = "relu";
    double lr = 1e-3, lambda = 0.1;
    std::uint64_t seed = 0;
};

TrainConfig make_tcfg(const TrainArgs& a) {
    TrainConfig tcfg;
    tcfg.epochs = a.epochs;
    tcfg.lr = a.lr;
    tcfg.batch_size = a.batch;
    tcfg.seed = a.seed;
    tcfg.penalty_lambda = a.lambda;
    tcfg.activation = activation_from_string(a.activation);
    tcfg.branch_hidden = parse_int_list(a.branch_dims);
    tcfg.trunk_hidden = parse_int_list(a.trunk_dims);
    tcfg.latent_dim = a.p;
    return tcfg;
}

int cmd_train(const TrainArgs& a, const std::vector<std::string>& argv) {
    WallClock clock;
    const OperatorDataset ds = load_dataset(a.data);
    const TrainConfig tcfg = make_tcfg(a);
    DeepOnetModel model = make_model_for(ds, tcfg);
    const auto history = train(model, ds, tcfg);

    const fs::path out(a.out);
    if (out.has_parent_path()) fs::create_directories(out.parent_path());
    save_deeponet_file(model, out.string());
    const fs::path dir = out.has_parent_path() ? out.parent_path() : fs::path(".");
    std::vector<std::vector<CsvCell>> rows;
    for (std::size_t e = 0; e < history.size(); ++e)
        rows.push_back({static_cast<long long>(e), history[e]});
    write_csv_file((dir / "history.csv").string(), {"epoch", "loss"}, rows);

    RunManifest manifest;
    manifest.command = "train";
    manifest.argv = argv;
    manifest.config = nlohmann::json{{"data", a.data},
                                     {"p", a.p},
                                     {"branch_dims", a.branch_dims},
                                     {"trunk_dims", a.trunk_dims},
                                     {"activation", a.activation},
                                     {"epochs", a.epochs},
                                     {"lr", a.lr},
                                     {"batch", a.batch},
                                     {"lambda", a.lambda},
                                     {"out", a.out}};
    manifest.seeds = {{"model_seed", a.seed}, {"data_base_seed", ds.config.base_seed}};
    manifest.artifact_paths = {out.string(), (dir / "history.csv").string()};
    manifest.wall_clock_seconds = clock.seconds();
    write_manifest(manifest, dir / "train.manifest.json");

    std::cout << "train: epochs=" << a.epochs << " first_loss=" << csv_format(history.front())
              << " final_loss=" << csv_format(history.back())
              << " params=" << count_params(model) << "\n";
    return 0;
}

// --------------------------------------------------------------------------
// eval

struct EvalArgs {
    std::string model, data, out = "eval_errors.csv";
    int eval_j = 4096;
};

int cmd_eval(const EvalArgs& a, const std::vector<std::string>& argv) {
    WallClock clock;
    const DeepOnetModel model = load_deeponet_file(a.model);
    OperatorDataset ds = load_dataset(a.data);
    if (ds.num_sensors_total() != model.sensor_count)
        throw std::invalid_argument("eval: dataset sensor count " +
                                    std::to_string(ds.num_sensors_total()) +
                                    " does not match model m " +
                                    std::to_string(model.sensor_count));
    bool regenerated = false;
    if (ds.config.dim == 1 && a.eval_j > 0 && a.eval_j != ds.config.j_intervals) {
        // Re-evaluate on a held-out Shishkin location mesh of eval_j intervals.
        DatasetConfig cfg = ds.config;
        cfg.j_intervals = a.eval_j;
        cfg.mesh_kind = MeshKind::shishkin;
        cfg.base_seed = ds.config.base_seed + 1000000;
        ds = generate_dataset(cfg);
        regenerated = true;
    }

    const double risk = empirical_risk(model, ds);
    const double mse = loss_mse(model, ds);

    const Matrix preds = predict_all(model, ds);
    std::vector<std::vector<CsvCell>> rows;
    for (int n = 0; n < ds.num_samples(); ++n) {
        double w2 = 0.0, u2 = 0.0;
        for (int j = 0; j < ds.num_locations(); ++j) {
            const double d = preds(n, j) - ds.target_values[n][j];
            w2 += ds.loc_weights[j] * d * d;
            u2 += d * d;
        }
        rows.push_back({static_cast<long long>(n), std::sqrt(w2), u2 / ds.num_locations()});
    }
    const fs::path eval_dir = ensure_parent_dir(a.out);
    write_csv_file(a.out, {"sample", "weighted_rms_error", "mse"}, rows);

    RunManifest manifest;
    manifest.command = "eval";
    manifest.argv = argv;
    manifest.config = nlohmann::json{{"model", a.model},
                                     {"data", a.data},
                                     {"eval_j", a.eval_j},
                                     {"regenerated_heldout", regenerated},
                                     {"out", a.out}};
    manifest.seeds = {{"data_base_seed", ds.config.base_seed}};
    manifest.artifact_paths = {a.out};
    manifest.wall_clock_seconds = clock.seconds();
    write_manifest(manifest, eval_dir / "eval.manifest.json");

    std::cout << "eval: weighted_risk=" << csv_format(risk) << " uniform_mse=" << csv_format(mse)
              << " samples=" << ds.num_samples() << (regenerated ? " (held-out eval-j mesh)" : "")
              << "\n";
    return 0;
}

// --------------------------------------------------------------------------
// sweeps

struct SweepCommonArgs {
    int n = 200, m = 33, jfine = 4096, n_eval = 64, eval_j = 4096;
    int epochs = 300, batch = 4096, p = 32, jobs = 1;
    double lr = 1e-3, l = 1.0, alpha = 1.0;
    std::string branch_dims = "128,128", trunk_dims = "128,128", activation = "relu";
    std::string preset = "example1", out;
    std::uint64_t seed = 1;       // model seed, paired across cells
    std::uint64_t data_seed = 7;
};

SweepParams make_sweep_params(const SweepCommonArgs& a) {
    SweepParams p;
    p.n_train = a.n;
    p.m_sensors = a.m;
    p.j_fine = a.jfine;
    p.length_scale = a.l;
    p.alpha = a.alpha;
    p.preset = a.preset;
    p.tcfg.epochs = a.epochs;
    p.tcfg.lr = a.lr;
    p.tcfg.batch_size = a.batch;
    p.tcfg.seed = a.seed;
    p.tcfg.activation = activation_from_string(a.activation);
    p.tcfg.branch_hidden = parse_int_list(a.branch_dims);
    p.tcfg.trunk_hidden = parse_int_list(a.trunk_dims);
    p.tcfg.latent_dim = a.p;
    p.data_seed = a.data_seed;
    p.n_eval = a.n_eval;
    p.eval_j = a.eval_j;
    p.jobs = a.jobs;
    p.cache_dir = fs::path(a.out) / "cells";
    return p;
}

int cmd_sweep_eps(const SweepCommonArgs& a, const std::string& eps_list,
                  const std::string& mesh_list, const std::string& j_list,
                  const std::vector<std::string>& argv) {
    WallClock clock;
    std::vector<MeshKind> meshes;
    {
        std::stringstream ss(mesh_list);
        std::string item;
        while (std::getline(ss, item, ',')) meshes.push_back(mesh_kind_from_string(item));
    }
    const auto cells =
        make_eps_sweep_cells(parse_double_list(eps_list), meshes, parse_int_list(j_list), a.n);
    const SweepParams params = make_sweep_params(a);
    fs::create_directories(a.out);
    const auto rows = run_sweep(cells, params);

    std::vector<std::vector<CsvCell>> csv_rows;
    for (const auto& r : rows)
        csv_rows.push_back({r.epsilon, r.mesh, static_cast<long long>(r.j_intervals),
                            static_cast<long long>(r.n_train), r.risk,
                            static_cast<long long>(r.seed)});
    const fs::path csv_path = fs::path(a.out) / "sweep_eps.csv";
    write_csv_file(csv_path.string(), {"epsilon", "mesh", "j", "n", "risk", "seed"}, csv_rows);

    RunManifest manifest;
    manifest.command = "sweep-eps";
    manifest.argv = argv;
    manifest.config = nlohmann::json{{"eps_list", eps_list}, {"mesh_list", mesh_list},
                                     {"j_list", j_list},     {"n", a.n},
                                     {"epochs", a.epochs},   {"out", a.out}};
    manifest.seeds = {{"model_seed", a.seed}, {"data_seed", a.data_seed}};
    manifest.artifact_paths = {csv_path.string()};
    manifest.wall_clock_seconds = clock.seconds();
    write_manifest(manifest, fs::path(a.out) / "sweep-eps.manifest.json");

    std::cout << "sweep-eps: " << rows.size() << " cells -> " << csv_path.string() << "\n";
    return 0;
}

int cmd_sweep_size(const SweepCommonArgs& a, const std::string& vary, const std::string& values,
                   int fixed_j, double eps, const std::vector<std::string>& argv) {
    WallClock clock;
    if (vary != "n" && vary != "j")
        throw std::invalid_argument("sweep-size: --vary must be 'n' or 'j'");
    const auto vals = parse_int_list(values);
    std::vector<SweepCell> cells;
    for (int v : vals) {
        SweepCell cell;
        cell.epsilon = eps;
        cell.mesh_kind = MeshKind::shishkin;
        cell.j_intervals = vary == "j" ? v : fixed_j;
        cell.n_train = vary == "n" ? v : a.n;
        cells.push_back(cell);
    }
    const SweepParams params = make_sweep_params(a);
    fs::create_directories(a.out);
    const auto rows = run_sweep(cells, params);

    std::vector<std::vector<CsvCell>> csv_rows;
    for (std::size_t i = 0; i < rows.size(); ++i)
        csv_rows.push_back({static_cast<long long>(vals[i]), rows[i].risk,
                            static_cast<long long>(rows[i].seed)});
    const fs::path csv_path = fs::path(a.out) / "sweep_size.csv";
    write_csv_file(csv_path.string(), {"varied_value", "risk", "seed"}, csv_rows);

    RunManifest manifest;
    manifest.command = "sweep-size";
    manifest.argv = argv;
    manifest.config = nlohmann::json{{"vary", vary}, {"values", values}, {"n", a.n},
                                     {"j", fixed_j}, {"eps", eps},
                                     {"epochs", a.epochs}, {"out", a.out}};
    manifest.seeds = {{"model_seed", a.seed}, {"data_seed", a.data_seed}};
    manifest.artifact_paths = {csv_path.string()};
    manifest.wall_clock_seconds = clock.seconds();
    write_manifest(manifest, fs::path(a.out) / "sweep-size.manifest.json");

    std::cout << "sweep-size: vary=" << vary << " " << rows.size() << " cells -> "
              << csv_path.string() << "\n";
    return 0;
}

// --------------------------------------------------------------------------
// predict

struct PredictArgs {
    std::string model, f = "seed:0", grid = "shishkin:256", reference, out = "prediction.csv";
    std::string preset = "example1";
    double eps = 1e-3, l = 1.0, alpha = 1.0;
    int jfine = 4096;
};

int cmd_predict(const PredictArgs& a, const std::vector<std::string>& argv) {
    WallClock clock;
    const DeepOnetModel model = load_deeponet_file(a.model);
    if (model.location_dim != 1)
        throw std::invalid_argument("predict: only 1D models are supported");

    std::function<double(double)> f;
    FieldSample field;
    bool f_is_const_one = false;
    if (a.f.rfind("seed:", 0) == 0) {
        field = sample_field({a.l, 0, 1}, std::stoull(a.f.substr(5)));
        f = [&field](double x) { return eval_field_at(field, x); };
    } else if (a.f.rfind("const:", 0) == 0) {
        const double c = std::stod(a.f.substr(6));
        f_is_const_one = c == 1.0;
        f = [c](double) { return c; };
    } else if (a.f == "expr-preset:exp") {
        f = [](double x) { return std::exp(x); };
    } else {
        throw std::invalid_argument(
            "predict: --f must be seed:<int>, const:<c>, or expr-preset:exp");
    }

    const auto colon = a.grid.find(':');
    if (colon == std::string::npos)
        throw std::invalid_argument("predict: --grid must be {shishkin|uniform}:<J>");
    const MeshKind grid_kind = mesh_kind_from_string(a.grid.substr(0, colon));
    const int grid_j = std::stoi(a.grid.substr(colon + 1));
    const Mesh1d grid = grid_kind == MeshKind::shishkin ? build_shishkin(grid_j, a.eps, a.alpha)
                                                        : build_uniform(grid_j);

    const SensorGrid sensors = make_sensor_grid(model.sensor_count);
    const auto sensor_vals = encode(f, sensors);
    const auto preds = don_forward(model, sensor_vals, grid.points);

    std::vector<double> reference;
    if (a.reference == "exact") {
        if (a.preset != "example1" || !f_is_const_one)
            throw std::invalid_argument(
                "predict: --reference exact requires --preset example1 and --f const:1");
        reference = exact_example1(a.eps, grid.points);
    } else if (a.reference == "fd") {
        const Mesh1d fine = build_shishkin(a.jfine, a.eps, a.alpha);
        const GridSolution sol = solve_upwind_1d(make_preset_1d(a.preset, a.eps, f), fine);
        reference = interp_linear(fine, sol.values, grid.points);
    } else if (!a.reference.empty()) {
        throw std::invalid_argument("predict: --reference must be fd or exact");
    }

    const double sigma =
        std::min(0.5, 2.0 * a.eps * std::log(static_cast<double>(grid_j)) / a.alpha);
    std::vector<std::string> header{"x", "prediction"};
    if (!reference.empty()) header.push_back("reference");
    header.push_back("in_layer");
    std::vector<std::vector<CsvCell>> rows;
    double max_err = 0.0;
    for (int j = 0; j <= grid.intervals; ++j) {
        std::vector<CsvCell> row{grid.points[j], preds[j]};
        if (!reference.empty()) {
            row.push_back(reference[j]);
            max_err = std::max(max_err, std::abs(preds[j] - reference[j]));
        }
        row.push_back(static_cast<long long>(grid.points[j] >= 1.0 - sigma ? 1 : 0));
        rows.push_back(std::move(row));
    }
    const fs::path predict_dir = ensure_parent_dir(a.out);
    write_csv_file(a.out, header, rows);

    RunManifest manifest;
    manifest.command = "predict";
    manifest.argv = argv;
    manifest.config = nlohmann::json{{"model", a.model}, {"f", a.f},   {"grid", a.grid},
                                     {"eps", a.eps},     {"l", a.l},   {"preset", a.preset},
                                     {"reference", a.reference},       {"out", a.out}};
    manifest.seeds = nlohmann::json::object();
    manifest.artifact_paths = {a.out};
    manifest.wall_clock_seconds = clock.seconds();
    write_manifest(manifest, predict_dir / "predict.manifest.json");

    std::cout << "predict: rows=" << rows.size();
    if (!reference.empty()) std::cout << " max_abs_error=" << csv_format(max_err);
    std::cout << " -> " << a.out << "\n";
    return 0;
}

// --------------------------------------------------------------------------
// plot

struct PlotArgs {
    std::string csv, x, y, series, out, title, xlabel, ylabel;
    bool logx = false, logy = false;
};

int cmd_plot(const PlotArgs& a, const std::vector<std::string>& argv) {
    WallClock clock;
    const CsvTable table = read_csv_file(a.csv);
    if (table.rows.empty()) throw std::invalid_argument("plot: CSV has no data rows");
    const int xc = table.column(a.x);
    const int yc = table.column(a.y);
    const int sc = a.series.empty() ? -1 : table.column(a.series);

    std::vector<SvgSeries> series;
    const auto find_series = [&series](const std::string& name) -> SvgSeries& {
        for (auto& s : series)
            if (s.name == name) return s;
        series.push_back({name, {}});
        return series.back();
    };
    for (const auto& row : table.rows) {
        const std::string name = sc < 0 ? a.y : row[sc];
        find_series(name).points.emplace_back(csv_to_double(row[xc]), csv_to_double(row[yc]));
    }
    SvgOptions opt;
    opt.log_x = a.logx;
    opt.log_y = a.logy;
    opt.title = a.title;
    opt.x_label = a.xlabel.empty() ? a.x : a.xlabel;
    opt.y_label = a.ylabel.empty() ? a.y : a.ylabel;
    const std::string svg = svg_line_chart(std::move(series), opt);
    const fs::path plot_dir = ensure_parent_dir(a.out);
    {
        std::ofstream out(a.out, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + a.out);
        out << svg;
    }

    RunManifest manifest;
    manifest.command = "plot";
    manifest.argv = argv;
    manifest.config = nlohmann::json{{"csv", a.csv},     {"x", a.x},       {"y", a.y},
                                     {"series", a.series}, {"logx", a.logx}, {"logy", a.logy},
                                     {"out", a.out}};
    manifest.seeds = nlohmann::json::object();
    manifest.artifact_paths = {a.out};
    manifest.wall_clock_seconds = clock.seconds();
    write_manifest(manifest, plot_dir / "plot.manifest.json");

    std::cout << "plot: " << table.rows.size() << " rows -> " << a.out << "\n";
    return 0;
}

// --------------------------------------------------------------------------
// rerun

int cmd_rerun(const std::string& manifest_path, const std::string& out_override) {
    const RunManifest m = load_manifest(manifest_path);
    std::vector<std::string> argv = m.argv;
    if (!out_override.empty()) {
        bool replaced = false;
        for (std::size_t i = 0; i + 1 < argv.size(); ++i)
            if (argv[i] == "--out") {
                argv[i + 1] = out_override;
                replaced = true;
            }
        if (!replaced)
            throw std::invalid_argument("rerun: recorded argv has no --out to override");
    }
    std::cout << "rerun: " << m.command << "\n";
    return run_cli(argv);
}

// --------------------------------------------------------------------------

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"operator learning for singularly perturbed convection-diffusion problems"};
    app.require_subcommand(1);

    GenDataArgs gd;
    auto* gen = app.add_subcommand("gen-data", "generate an operator-learning dataset");
    gen->add_option("--eps", gd.eps, "perturbation parameter");
    gen->add_option("--alpha", gd.alpha, "lower bound of p(x)");
    gen->add_option("--l", gd.l, "GRF length scale");
    gen->add_option("--n", gd.n, "number of samples")->required();
    gen->add_option("--j", gd.j, "location intervals (per axis in 2D)")->required();
    gen->add_option("--m", gd.m, "sensors (odd; per axis in 2D)");
    gen->add_option("--mesh", gd.mesh, "location mesh kind")
        ->check(CLI::IsMember({"shishkin", "uniform"}));
    gen->add_option("--preset", gd.preset, "problem preset")
        ->check(CLI::IsMember({"example1", "example2", "example3"}));
    gen->add_option("--jfine", gd.jfine, "reference solver intervals (0 = default)");
    gen->add_option("--seed", gd.seed, "base seed")->envname("SPP_SEED");
    gen->add_option("--out", gd.out, "output directory")->required();

    TrainArgs tr;
    auto* trn = app.add_subcommand("train", "train a model on a dataset");
    trn->add_option("--data", tr.data, "dataset directory")->required();
    trn->add_option("--p", tr.p, "latent dimension");
    trn->add_option("--branch-dims", tr.branch_dims, "branch hidden widths, comma-separated");
    trn->add_option("--trunk-dims", tr.trunk_dims, "trunk hidden widths, comma-separated");
    trn->add_option("--activation", tr.activation, "relu|tanh")
        ->check(CLI::IsMember({"relu", "tanh"}));
    trn->add_option("--epochs", tr.epochs, "training epochs");
    trn->add_option("--lr", tr.lr, "Adam learning rate");
    trn->add_option("--batch", tr.batch, "minibatch size in (sample,location) pairs");
    trn->add_option("--seed", tr.seed, "model/shuffle seed")->envname("SPP_SEED");
    trn->add_option("--lambda", tr.lambda, "2D boundary penalty");
    trn->add_option("--out", tr.out, "output model file")->required();

    EvalArgs ev;
    auto* evl = app.add_subcommand("eval", "evaluate a model: weighted risk and uniform MSE");
    evl->add_option("--model", ev.model, "model file")->required();
    evl->add_option("--data", ev.data, "evaluation dataset directory")->required();
    evl->add_option("--eval-j", ev.eval_j,
                    "held-out Shishkin location intervals (matching J: use dataset as-is)");
    evl->add_option("--out", ev.out, "per-sample errors CSV");

    SweepCommonArgs se;
    std::string eps_list = "1e-2,1e-3,1e-4", mesh_list = "shishkin,uniform", j_list = "64";
    auto* sweep_eps = app.add_subcommand("sweep-eps", "risk vs epsilon per mesh kind");
    sweep_eps->add_option("--eps-list", eps_list, "comma-separated epsilons");
    sweep_eps->add_option("--mesh-list", mesh_list, "comma-separated mesh kinds");
    sweep_eps->add_option("--j-list", j_list, "comma-separated location intervals");
    sweep_eps->add_option("--n", se.n, "training samples per cell");
    sweep_eps->add_option("--m", se.m, "sensors");
    sweep_eps->add_option("--jfine", se.jfine, "reference solver intervals");
    sweep_eps->add_option("--n-eval", se.n_eval, "held-out samples");
    sweep_eps->add_option("--eval-j", se.eval_j, "held-out location intervals");
    sweep_eps->add_option("--epochs", se.epochs, "epochs per cell");
    sweep_eps->add_option("--lr", se.lr, "learning rate");
    sweep_eps->add_option("--batch", se.batch, "batch size");
    sweep_eps->add_option("--p", se.p, "latent dimension");
    sweep_eps->add_option("--preset", se.preset, "problem preset");
    sweep_eps->add_option("--l", se.l, "GRF length scale");
    sweep_eps->add_option("--seed", se.seed, "model seed")->envname("SPP_SEED");
    sweep_eps->add_option("--data-seed", se.data_seed, "dataset base seed");
    sweep_eps->add_option("--jobs", se.jobs, "parallel cells");
    sweep_eps->add_option("--out", se.out, "output directory")->required();

    SweepCommonArgs sz;
    std::string vary = "n", values = "100,200,400";
    int fixed_j = 64;
    double sz_eps = 1e-3;
    auto* sweep_size = app.add_subcommand("sweep-size", "risk vs N or J");
    sweep_size->add_option("--vary", vary, "n|j")->check(CLI::IsMember({"n", "j"}));
    sweep_size->add_option("--values", values, "comma-separated values of the varied quantity");
    sweep_size->add_option("--n", sz.n, "fixed N (when varying j)");
    sweep_size->add_option("--j", fixed_j, "fixed J (when varying n)");
    sweep_size->add_option("--eps", sz_eps, "perturbation parameter");
    sweep_size->add_option("--m", sz.m, "sensors");
    sweep_size->add_option("--jfine", sz.jfine, "reference solver intervals");
    sweep_size->add_option("--n-eval", sz.n_eval, "held-out samples");
    sweep_size->add_option("--eval-j", sz.eval_j, "held-out location intervals");
    sweep_size->add_option("--epochs", sz.epochs, "epochs per cell");
    sweep_size->add_option("--lr", sz.lr, "learning rate");
    sweep_size->add_option("--batch", sz.batch, "batch size");
    sweep_size->add_option("--p", sz.p, "latent dimension");
    sweep_size->add_option("--preset", sz.preset, "problem preset");
    sweep_size->add_option("--l", sz.l, "GRF length scale");
    sweep_size->add_option("--seed", sz.seed, "model seed")->envname("SPP_SEED");
    sweep_size->add_option("--data-seed", sz.data_seed, "dataset base seed");
    sweep_size->add_option("--jobs", sz.jobs, "parallel cells");
    sweep_size->add_option("--out", sz.out, "output directory")->required();

    PredictArgs pr;
    auto* predict = app.add_subcommand("predict", "predict u for a chosen forcing");
    predict->add_option("--model", pr.model, "model file")->required();
    predict->add_option("--f", pr.f, "forcing: seed:<int> | const:<c> | expr-preset:exp");
    predict->add_option("--grid", pr.grid, "{shishkin|uniform}:<J>");
    predict->add_option("--eps", pr.eps, "perturbation parameter");
    predict->add_option("--l", pr.l, "GRF length scale for seed forcings");
    predict->add_option("--preset", pr.preset, "problem preset for the fd reference");
    predict->add_option("--reference", pr.reference, "fd|exact reference column");
    predict->add_option("--jfine", pr.jfine, "fd reference intervals");
    predict->add_option("--out", pr.out, "output CSV");

    PlotArgs pl;
    auto* plot = app.add_subcommand("plot", "render a tidy CSV as an SVG line chart");
    plot->add_option("--csv", pl.csv, "input CSV")->required();
    plot->add_option("--x", pl.x, "x column")->required();
    plot->add_option("--y", pl.y, "y column")->required();
    plot->add_option("--series", pl.series, "series column (one polyline per value)");
    plot->add_flag("--logx", pl.logx, "log10 x axis");
    plot->add_flag("--logy", pl.logy, "log10 y axis");
    plot->add_option("--title", pl.title, "chart title");
    plot->add_option("--xlabel", pl.xlabel, "x axis label");
    plot->add_option("--ylabel", pl.ylabel, "y axis label");
    plot->add_option("--out", pl.out, "output SVG")->required();

    std::string manifest_path, out_override;
    auto* rerun = app.add_subcommand("rerun", "replay a recorded command from its manifest");
    rerun->add_option("manifest", manifest_path, "manifest.json path")->required();
    rerun->add_option("--out-override", out_override, "redirect the recorded --out");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(std::move(reversed));
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (gen->parsed()) return cmd_gen_data(gd, args);
    if (trn->parsed()) return cmd_train(tr, args);
    if (evl->parsed()) return cmd_eval(ev, args);
    if (sweep_eps->parsed()) return cmd_sweep_eps(se, eps_list, mesh_list, j_list, args);
    if (sweep_size->parsed()) return cmd_sweep_size(sz, vary, values, fixed_j, sz_eps, args);
    if (predict->parsed()) return cmd_predict(pr, args);
    if (plot->parsed()) return cmd_plot(pl, args);
    if (rerun->parsed()) return cmd_rerun(manifest_path, out_override);
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::string> args(argv + 1, argv + argc);
    try {
        return run_cli(args);
    } catch (const numerical_error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const format_error& e) {
        std::cerr << "format error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
