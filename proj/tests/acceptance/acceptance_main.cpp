// Acceptance suite: one pass/fail line per criterion, pinned tolerances.
//
//   acceptance --suite fast          criteria 1-6, the fast half of 10, 11
//   acceptance --suite slow          criteria 7-9 and the 2D training of 10
//   acceptance --suite all
//
// Criterion 11 shells out to the CLI binary (--cli PATH) and byte-compares
// rerun artifacts.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <string>
#include <vector>

#include "sppdon/deeponet.hpp"
#include "sppdon/experiments.hpp"
#include "sppdon/fdsolve.hpp"
#include "sppdon/grf.hpp"
#include "sppdon/mesh.hpp"
#include "sppdon/nn.hpp"
#include "sppdon/pipeline.hpp"
#include "sppdon/spectral.hpp"

namespace fs = std::filesystem;
using namespace sppdon;

namespace {

int g_failures = 0;

void report(const std::string& name, bool pass, const std::string& detail) {
    std::printf("[%s] %s: %s\n", pass ? "PASS" : "FAIL", name.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

// ---------------------------------------------------------------- criterion 1

void criterion1_mesh_quadrature() {
    bool pass = true;
    std::string detail;
    for (int J : {4, 64, 256, 4096})
        for (double eps : {1.0, 1e-3}) {
            const Mesh1d m = build_shishkin(J, eps, 1.0);
            double sum = 0.0;
            for (double w : m.weights) sum += w;
            if (std::abs(sum - 1.0) > 1e-12) {
                pass = false;
                detail = "weight sum off at J=" + std::to_string(J);
            }
        }
    const Mesh1d m = build_shishkin(256, 1e-3, 1.0);
    const double sigma_hand = 2.0 * 1e-3 * std::log(256.0);
    if (std::abs(m.sigma - sigma_hand) > 1e-14 || std::abs(m.sigma - 0.0110904) > 1e-6) {
        pass = false;
        detail = "sigma " + fmt(m.sigma) + " != " + fmt(sigma_hand);
    }
    if (pass) detail = "weight sums within 1e-12; sigma(256,1e-3,1) = " + fmt(m.sigma);
    report("C1 mesh/quadrature exactness", pass, detail);
}

// ---------------------------------------------------------------- criterion 2

double upwind_error_example1(double eps, int J) {
    const Mesh1d mesh = build_shishkin(J, eps, 1.0);
    const GridSolution sol = solve_upwind_1d(make_example1(eps, [](double) { return 1.0; }), mesh);
    const auto exact = exact_example1(eps, mesh.points);
    double err = 0.0;
    for (int j = 0; j <= J; ++j) err = std::max(err, std::abs(sol.values[j] - exact[j]));
    return err;
}

void criterion2_fd_solver() {
    const double e64 = upwind_error_example1(0.1, 64);
    bool pass = e64 <= 0.06;
    double prev = e64;
    for (int J : {128, 256, 512}) {
        const double e = upwind_error_example1(0.1, J);
        if (e >= prev) pass = false;
        prev = e;
    }
    std::vector<double> eps_errs;
    for (double eps : {1e-2, 1e-3, 1e-4}) eps_errs.push_back(upwind_error_example1(eps, 256));
    const double ratio = *std::max_element(eps_errs.begin(), eps_errs.end()) /
                         *std::min_element(eps_errs.begin(), eps_errs.end());
    if (ratio >= 3.0) pass = false;
    report("C2 upwind solver vs closed form", pass,
           "err(J=64,eps=0.1)=" + fmt(e64) + " monotone in J; eps-spread x" + fmt(ratio));
}

// ---------------------------------------------------------------- criterion 3

void criterion3_interpolation_rate() {
    const double eps = 1e-3;
    std::vector<double> probes(10000);
    for (std::size_t i = 0; i < probes.size(); ++i)
        probes[i] = static_cast<double>(i) / (probes.size() - 1);
    const auto exact = exact_example1(eps, probes);
    std::vector<double> errs;
    for (int J : {64, 128, 256}) {
        const Mesh1d mesh = build_shishkin(J, eps, 1.0);
        const auto approx = interp_linear(mesh, exact_example1(eps, mesh.points), probes);
        double err = 0.0;
        for (std::size_t i = 0; i < probes.size(); ++i)
            err = std::max(err, std::abs(approx[i] - exact[i]));
        errs.push_back(err);
    }
    const double r1 = errs[1] / errs[0], r2 = errs[2] / errs[1];
    const bool pass = r1 <= 0.35 && r2 <= 0.35;
    report("C3 interpolation decays at the Shishkin rate", pass,
           "per-doubling ratios " + fmt(r1) + ", " + fmt(r2) + " (<= 0.35)");
}

// ---------------------------------------------------------------- criterion 4

void criterion4_grf_covariance() {
    std::vector<double> grid(8);
    for (int i = 0; i < 8; ++i) grid[i] = i / 8.0;
    const int n = 20000;
    const GrfSpec spec{1.0, 0, 1};
    std::vector<double> cov_kl(64, 0.0), cov_ch(64, 0.0);
    for (int s = 0; s < n; ++s) {
        const auto f = eval_field(sample_field(spec, 1000 + s), grid);
        const auto g = cholesky_sample(grid, 1.0, 500000 + s, 1e-10);
        for (int i = 0; i < 8; ++i)
            for (int j = 0; j < 8; ++j) {
                cov_kl[i * 8 + j] += f[i] * f[j];
                cov_ch[i * 8 + j] += g[i] * g[j];
            }
    }
    double kl_err = 0.0, cross_err = 0.0;
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) {
            const double kp = periodized_rbf(grid[i], grid[j], 1.0, 50);
            kl_err = std::max(kl_err, std::abs(cov_kl[i * 8 + j] / n - kp));
            cross_err = std::max(cross_err,
                                 std::abs(cov_kl[i * 8 + j] / n - cov_ch[i * 8 + j] / n));
        }
    const bool pass = kl_err < 0.05 && cross_err < 0.07;
    report("C4 GRF covariance (KL vs kernel vs Cholesky)", pass,
           "max|KL-k_p|=" + fmt(kl_err) + " (<0.05), max|KL-chol|=" + fmt(cross_err) + " (<0.07)");
}

// ---------------------------------------------------------------- criterion 5

void criterion5_encoder_decoder() {
    const auto errs = encode_decode_error(0.1, {3, 7, 15, 31}, 500, 2024);
    bool pass = true;
    for (std::size_t i = 1; i < errs.size(); ++i)
        if (errs[i] >= errs[i - 1]) pass = false;
    const auto smooth = encode_decode_error(1.0, {7}, 500, 2024);
    if (smooth[0] >= 1e-6) pass = false;
    report("C5 encoder/decoder reconstruction decay", pass,
           "RMS(l=0.1) = {" + fmt(errs[0]) + ", " + fmt(errs[1]) + ", " + fmt(errs[2]) + ", " +
               fmt(errs[3]) + "}; RMS(l=1,m=7) = " + fmt(smooth[0]));
}

// ---------------------------------------------------------------- criterion 6

void criterion6_gradients() {
    const Mlp tanh_net = init_mlp({4, 8, 8, 1}, Activation::tanh, 17);
    Matrix x(3, 4);
    for (std::size_t i = 0; i < x.data.size(); ++i) x.data[i] = 0.5 * standard_normal(55, i);
    const double mlp_err = grad_check(tanh_net, x);

    // FD check of the full DeepONet backward pass (m=5, p=4).
    DeepOnetModel model = make_deeponet(5, 4, 1, {8}, {8}, Activation::tanh, 13);
    Matrix sensors(3, 5);
    for (std::size_t i = 0; i < sensors.data.size(); ++i)
        sensors.data[i] = 0.7 * standard_normal(31, i);
    Matrix locs(6, 1);
    locs.data = {0.05, 0.2, 0.4, 0.55, 0.7, 0.9};
    const std::vector<int> pair_sample{0, 1, 2, 0, 1, 2};
    std::vector<double> targets(6);
    for (int i = 0; i < 6; ++i) targets[i] = standard_normal(32, i);
    const auto loss_of = [&]() {
        DonBatchCache c;
        const auto preds = don_forward_batch(model, sensors, locs, pair_sample, c);
        double acc = 0.0;
        for (int i = 0; i < 6; ++i) acc += 0.5 * (preds[i] - targets[i]) * (preds[i] - targets[i]);
        return acc;
    };
    DonBatchCache cache;
    const auto preds = don_forward_batch(model, sensors, locs, pair_sample, cache);
    std::vector<double> dpred(6);
    for (int i = 0; i < 6; ++i) dpred[i] = preds[i] - targets[i];
    const DonGradients grads = don_backward_batch(model, cache, dpred);
    double don_err = 0.0;
    std::uint64_t ctr = 0;
    for (int net_id = 0; net_id < 2; ++net_id) {
        Mlp& net = net_id == 0 ? model.branch : model.trunk;
        const Gradients& g = net_id == 0 ? grads.branch : grads.trunk;
        const long long total = param_count(net);
        for (int t = 0; t < 25; ++t) {
            long long rem = static_cast<long long>(
                uniform_below(0xacceefULL, ctr, static_cast<std::uint64_t>(total)));
            double* theta = nullptr;
            double bp = 0.0;
            for (int l = 0; l < net.layer_count() && !theta; ++l) {
                const long long nw = static_cast<long long>(net.weights[l].data.size());
                if (rem < nw) {
                    theta = &net.weights[l].data[rem];
                    bp = g.d_weights[l].data[rem];
                    break;
                }
                rem -= nw;
                const long long nb = static_cast<long long>(net.biases[l].size());
                if (rem < nb) {
                    theta = &net.biases[l][rem];
                    bp = g.d_biases[l][rem];
                    break;
                }
                rem -= nb;
            }
            const double saved = *theta;
            const double h = 1e-6;
            *theta = saved + h;
            const double lp = loss_of();
            *theta = saved - h;
            const double lm = loss_of();
            *theta = saved;
            const double fd = (lp - lm) / (2.0 * h);
            don_err = std::max(don_err,
                               std::abs(fd - bp) / std::max(std::abs(fd) + std::abs(bp), 1e-8));
        }
    }

    // Hat net vs the piecewise-linear oracle at 100 points.
    const double xp = 0.15, xn = 0.4, xx = 0.75;
    const Mlp hat = hat_relu_net(xp, xn, xx);
    double hat_err = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double xv = uniform_pair(314, i)[0];
        Matrix in(1, 1);
        in.data = {xv};
        const double got = forward(hat, in).data[0];
        double want = 0.0;
        if (xv > xp && xv < xx) want = xv <= xn ? (xv - xp) / (xn - xp) : (xx - xv) / (xx - xn);
        hat_err = std::max(hat_err, std::abs(got - want));
    }

    const bool pass = mlp_err < 1e-5 && don_err < 1e-5 && hat_err <= 1e-12;
    report("C6 gradient correctness", pass,
           "mlp rel err " + fmt(mlp_err) + ", deeponet rel err " + fmt(don_err) +
               ", hat max |diff| " + fmt(hat_err));
}

// ---------------------------------------------------------------- criterion 7

DatasetConfig desk_train_cfg(double eps, MeshKind mesh, int n, int j) {
    DatasetConfig cfg;
    cfg.dim = 1;
    cfg.epsilon = eps;
    cfg.alpha = 1.0;
    cfg.length_scale = 1.0;
    cfg.n_samples = n;
    cfg.j_intervals = j;
    cfg.m_sensors = 33;
    cfg.mesh_kind = mesh;
    cfg.preset = "example1";
    cfg.j_fine = 4096;
    cfg.base_seed = 7;
    return cfg;
}

TrainConfig desk_tcfg() {
    TrainConfig tcfg;
    tcfg.epochs = 300;
    tcfg.lr = 1e-3;
    tcfg.batch_size = 4096;
    tcfg.seed = 1;
    tcfg.latent_dim = 32;
    return tcfg;
}

void criterion7_desk_training() {
    const OperatorDataset train_ds =
        generate_dataset(desk_train_cfg(1e-3, MeshKind::shishkin, 200, 64));
    const TrainConfig tcfg = desk_tcfg();
    DeepOnetModel model = make_model_for(train_ds, tcfg);
    const auto history = train(model, train_ds, tcfg);

    DatasetConfig eval_cfg = desk_train_cfg(1e-3, MeshKind::shishkin, 64, 4096);
    eval_cfg.base_seed = 7 + 1000000;
    const OperatorDataset eval_ds = generate_dataset(eval_cfg);
    const double risk = empirical_risk(model, eval_ds);
    const double zero_risk = zero_predictor_risk(eval_ds);

    const bool pass = history.back() < 0.1 * history.front() && std::isfinite(risk) &&
                      risk * 5.0 <= zero_risk;
    report("C7 desk-scale training (example1)", pass,
           "loss " + fmt(history.front()) + " -> " + fmt(history.back()) + "; held-out risk " +
               fmt(risk) + " vs zero-predictor " + fmt(zero_risk));
}

// ---------------------------------------------------------------- criterion 8

void criterion8_eps_uniformity(int jobs) {
    SweepParams params;
    params.n_train = 200;
    params.m_sensors = 33;
    params.j_fine = 4096;
    params.tcfg = desk_tcfg();
    params.data_seed = 7;
    params.n_eval = 64;
    params.eval_j = 4096;
    params.jobs = jobs;
    const auto cells = make_eps_sweep_cells({1e-2, 1e-3, 1e-4},
                                            {MeshKind::shishkin, MeshKind::uniform}, {64}, 200);
    const auto rows = run_sweep(cells, params);
    std::vector<double> shishkin_risks, uniform_risks;  // eps order as listed
    for (const auto& r : rows)
        (r.mesh == "shishkin" ? shishkin_risks : uniform_risks).push_back(r.risk);

    const double sh_ratio =
        *std::max_element(shishkin_risks.begin(), shishkin_risks.end()) /
        *std::min_element(shishkin_risks.begin(), shishkin_risks.end());
    const double un_degradation = uniform_risks[2] / uniform_risks[0];  // 1e-4 vs 1e-2
    const bool pass = sh_ratio <= 3.0 && un_degradation >= 5.0;
    report("C8 eps-uniformity of the trained risk", pass,
           "shishkin max/min " + fmt(sh_ratio) + " (<=3); uniform risk(1e-4)/risk(1e-2) " +
               fmt(un_degradation) + " (>=5)");
}

// ---------------------------------------------------------------- criterion 9

void criterion9_size_trends(int jobs) {
    SweepParams params;
    params.m_sensors = 33;
    params.j_fine = 4096;
    params.tcfg = desk_tcfg();
    params.data_seed = 7;
    params.n_eval = 64;
    params.eval_j = 4096;
    params.jobs = jobs;

    std::vector<SweepCell> n_cells, j_cells;
    for (int n : {100, 200, 400}) n_cells.push_back({1e-3, MeshKind::shishkin, 64, n});
    for (int j : {32, 64, 128}) j_cells.push_back({1e-3, MeshKind::shishkin, j, 200});
    const auto n_rows = run_sweep(n_cells, params);
    const auto j_rows = run_sweep(j_cells, params);

    bool pass = true;
    for (std::size_t i = 1; i < n_rows.size(); ++i)
        if (n_rows[i].risk > 1.2 * n_rows[i - 1].risk) pass = false;
    for (std::size_t i = 1; i < j_rows.size(); ++i)
        if (j_rows[i].risk > 1.2 * j_rows[i - 1].risk) pass = false;
    report("C9 sample-size trends", pass,
           "risk vs N {" + fmt(n_rows[0].risk) + ", " + fmt(n_rows[1].risk) + ", " +
               fmt(n_rows[2].risk) + "}; vs J {" + fmt(j_rows[0].risk) + ", " +
               fmt(j_rows[1].risk) + ", " + fmt(j_rows[2].risk) + "} (20% band)");
}

// --------------------------------------------------------------- criterion 10

void criterion10_fast_2d() {
    // Manufactured solution on uniform meshes.
    const double pi = std::numbers::pi;
    const auto u_star = [pi](double x, double y) { return std::sin(pi * x) * std::sin(pi * y); };
    const auto f_mms = [pi, u_star](double x, double y) {
        return (2.0 * pi * pi + 1.0) * u_star(x, y) + pi * std::cos(pi * x) * std::sin(pi * y) +
               pi * std::sin(pi * x) * std::cos(pi * y);
    };
    std::vector<double> errs;
    for (int J : {32, 64}) {
        const TensorMesh2d mesh = build_tensor_2d(build_uniform(J), build_uniform(J));
        const auto sol = solve_upwind_2d({1.0, f_mms}, mesh);
        double err = 0.0;
        for (int i = 0; i < mesh.num_points(); ++i)
            err = std::max(err, std::abs(sol.values[i] - u_star(mesh.x(i), mesh.y(i))));
        errs.push_back(err);
    }
    bool pass = errs[0] < 0.02 && errs[1] < errs[0];

    // Penalized-loss identity at lambda = 0.
    DatasetConfig cfg;
    cfg.dim = 2;
    cfg.epsilon = 0.05;
    cfg.n_samples = 3;
    cfg.j_intervals = 6;
    cfg.m_sensors = 5;
    cfg.preset = "example3";
    cfg.j_fine = 32;
    cfg.base_seed = 9;
    const OperatorDataset ds = generate_dataset_2d(cfg);
    const DeepOnetModel model =
        make_deeponet(ds.num_sensors_total(), 6, 2, {16}, {16}, Activation::tanh, 3);
    std::vector<int> ns, js;
    for (int n = 0; n < ds.num_samples(); ++n)
        for (int j = 0; j < ds.num_locations(); ++j)
            if (!ds.loc_is_boundary[j]) {
                ns.push_back(n);
                js.push_back(j);
            }
    const double identity_gap =
        std::abs(loss_penalized_2d(model, ds, 0.0) - loss_mse(model, ds, ns, js));
    if (identity_gap > 1e-12) pass = false;

    report("C10a 2D solver MMS + penalized-loss identity", pass,
           "MMS err " + fmt(errs[0]) + " -> " + fmt(errs[1]) + " (<0.02, decreasing); " +
               "lambda=0 identity gap " + fmt(identity_gap));
}

void criterion10_slow_2d_training() {
    DatasetConfig cfg;
    cfg.dim = 2;
    cfg.epsilon = 1e-3;
    cfg.length_scale = 1.0;
    cfg.n_samples = 100;
    cfg.j_intervals = 32;  // 33x33 locations
    cfg.m_sensors = 17;    // 17x17 sensors
    cfg.mesh_kind = MeshKind::shishkin;
    cfg.preset = "example3";
    cfg.j_fine = 256;
    cfg.base_seed = 7;
    const OperatorDataset ds = generate_dataset_2d(cfg);

    TrainConfig tcfg;
    tcfg.epochs = 300;
    tcfg.lr = 1e-3;
    tcfg.batch_size = 4096;
    tcfg.seed = 1;
    tcfg.penalty_lambda = 0.1;
    tcfg.latent_dim = 32;
    DeepOnetModel model = make_model_for(ds, tcfg);
    const auto history = train(model, ds, tcfg);
    const bool pass = history.back() * 5.0 <= history.front();
    report("C10b 2D desk training", pass,
           "penalized loss " + fmt(history.front()) + " -> " + fmt(history.back()) +
               " (>=5x reduction)");
}

// --------------------------------------------------------------- criterion 11

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

int run_cmd(const std::string& cmd) { return std::system(cmd.c_str()); }

void criterion11_reproducibility(const std::string& cli) {
    const fs::path root = fs::temp_directory_path() / "sppdon_acceptance_c11";
    fs::remove_all(root);
    fs::create_directories(root);
    const std::string q = "\"" + cli + "\"";
    const std::string r = root.string();
    bool pass = true;
    std::string detail = "all artifacts byte-identical on rerun";

    struct Step {
        std::string cmd;
        std::string manifest;
        std::string rerun_out;
        std::vector<std::string> artifacts;  // paths relative to out dirs, same names
    };
    const std::vector<Step> steps = {
        {q + " gen-data --eps 1e-3 --n 6 --j 16 --m 9 --jfine 256 --seed 3 --out " + r + "/d1",
         r + "/d1/gen-data.manifest.json", r + "/rr1", {"data.bin", "meta.json"}},
        {q + " gen-data --preset example3 --eps 1e-2 --n 2 --j 6 --m 3 --jfine 16 --seed 3 "
             "--out " + r + "/d2",
         r + "/d2/gen-data.manifest.json", r + "/rr2", {"data.bin"}},
        {q + " sweep-eps --eps-list 1e-2,1e-3 --mesh-list shishkin --j-list 8 --n 4 --m 9 "
             "--jfine 128 --n-eval 4 --eval-j 64 --epochs 2 --batch 64 --p 4 --seed 2 --out " +
             r + "/s1",
         r + "/s1/sweep-eps.manifest.json", r + "/rrs", {"sweep_eps.csv"}},
        {q + " sweep-size --vary n --values 3,5 --j 8 --m 9 --jfine 128 --n-eval 4 --eval-j 64 "
             "--epochs 2 --batch 64 --p 4 --seed 2 --out " + r + "/z1",
         r + "/z1/sweep-size.manifest.json", r + "/rrz", {"sweep_size.csv"}},
    };

    for (const auto& step : steps) {
        if (run_cmd(step.cmd + " > /dev/null") != 0) {
            pass = false;
            detail = "command failed: " + step.cmd;
            break;
        }
        if (run_cmd(q + " rerun " + step.manifest + " --out-override " + step.rerun_out +
                    " > /dev/null") != 0) {
            pass = false;
            detail = "rerun failed for " + step.manifest;
            break;
        }
        const fs::path orig_dir = fs::path(step.manifest).parent_path();
        for (const auto& name : step.artifacts) {
            const std::string a = slurp(orig_dir / name);
            const std::string b = slurp(fs::path(step.rerun_out) / name);
            if (a.empty() || a != b) {
                pass = false;
                detail = "byte mismatch: " + (orig_dir / name).string();
            }
        }
        if (!pass) break;
    }

    // train / eval / predict write file outputs; rerun into sibling paths.
    if (pass) {
        const std::string train1 = q + " train --data " + r + "/d1 --p 4 --branch-dims 16 "
                                   "--trunk-dims 16 --epochs 5 --batch 64 --seed 2 --out " + r +
                                   "/m1/model.bin > /dev/null";
        if (run_cmd(train1) != 0 ||
            run_cmd(q + " rerun " + r + "/m1/train.manifest.json --out-override " + r +
                    "/m2/model.bin > /dev/null") != 0 ||
            slurp(r + "/m1/model.bin") != slurp(r + "/m2/model.bin") ||
            slurp(r + "/m1/history.csv") != slurp(r + "/m2/history.csv") ||
            slurp(r + "/m1/model.bin").empty()) {
            pass = false;
            detail = "train rerun mismatch";
        }
    }
    if (pass) {
        const std::string eval1 = q + " eval --model " + r + "/m1/model.bin --data " + r +
                                  "/d1 --eval-j 16 --out " + r + "/e1/errors.csv > /dev/null";
        if (run_cmd(eval1) != 0 ||
            run_cmd(q + " rerun " + r + "/e1/eval.manifest.json --out-override " + r +
                    "/e2/errors.csv > /dev/null") != 0 ||
            slurp(r + "/e1/errors.csv") != slurp(r + "/e2/errors.csv") ||
            slurp(r + "/e1/errors.csv").empty()) {
            pass = false;
            detail = "eval rerun mismatch";
        }
    }
    if (pass) {
        const std::string pred1 = q + " predict --model " + r + "/m1/model.bin --f const:1 "
                                  "--grid shishkin:16 --eps 1e-3 --reference exact --out " + r +
                                  "/p1/pred.csv > /dev/null";
        if (run_cmd(pred1) != 0 ||
            run_cmd(q + " rerun " + r + "/p1/predict.manifest.json --out-override " + r +
                    "/p2/pred.csv > /dev/null") != 0 ||
            slurp(r + "/p1/pred.csv") != slurp(r + "/p2/pred.csv") ||
            slurp(r + "/p1/pred.csv").empty()) {
            pass = false;
            detail = "predict rerun mismatch";
        }
    }
    if (pass) {
        // The plot manifest lands next to the SVG, here <r>/plot.manifest.json.
        const std::string plot1 = q + " plot --csv " + r + "/s1/sweep_eps.csv --x epsilon "
                                  "--y risk --logx --out " + r + "/plot1.svg > /dev/null";
        if (run_cmd(plot1) != 0 ||
            run_cmd(q + " rerun " + r + "/plot.manifest.json --out-override " + r +
                    "/plot2.svg > /dev/null") != 0 ||
            slurp(r + "/plot1.svg").empty() ||
            slurp(r + "/plot1.svg") != slurp(r + "/plot2.svg")) {
            pass = false;
            detail = "plot rerun mismatch";
        }
    }
    fs::remove_all(root);
    report("C11 reproducibility from manifests", pass, detail);
}

}  // namespace

int main(int argc, char** argv) {
    std::string suite = "all";
    std::string cli;
    int jobs = 2;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--suite" && i + 1 < argc) suite = argv[++i];
        else if (arg == "--cli" && i + 1 < argc) cli = argv[++i];
        else if (arg == "--jobs" && i + 1 < argc) jobs = std::atoi(argv[++i]);
        else {
            std::fprintf(stderr,
                         "usage: acceptance [--suite fast|slow|all] [--cli PATH] [--jobs N]\n");
            return 2;
        }
    }
    const bool fast = suite == "fast" || suite == "all";
    const bool slow = suite == "slow" || suite == "all";

    if (fast) {
        criterion1_mesh_quadrature();
        criterion2_fd_solver();
        criterion3_interpolation_rate();
        criterion4_grf_covariance();
        criterion5_encoder_decoder();
        criterion6_gradients();
        criterion10_fast_2d();
        if (!cli.empty()) criterion11_reproducibility(cli);
        else report("C11 reproducibility from manifests", false, "no --cli path given");
    }
    if (slow) {
        criterion7_desk_training();
        criterion8_eps_uniformity(jobs);
        criterion9_size_trends(jobs);
        criterion10_slow_2d_training();
    }

    if (g_failures == 0) {
        std::printf("acceptance: all criteria passed\n");
        return 0;
    }
    std::printf("acceptance: %d criteria FAILED\n", g_failures);
    return 1;
}
