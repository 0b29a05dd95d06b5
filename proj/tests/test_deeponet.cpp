#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "sppdon/deeponet.hpp"

using namespace sppdon;

namespace {

// Affine net y = Wx + b as a single-layer Mlp.
Mlp affine(int in, int out, const std::vector<double>& w, const std::vector<double>& b) {
    Mlp mlp = init_mlp({in, out}, Activation::tanh, 0);
    mlp.weights[0].data = w;
    mlp.biases[0] = b;
    return mlp;
}

}  // namespace

TEST_CASE("don_forward composes branch and trunk through the pairing") {
    // p=1, d=1: branch(s) = 2 (constant), trunk(y) = (0.5, y); output 0.5 + 2y.
    DeepOnetModel model;
    model.sensor_count = 3;
    model.latent_dim = 1;
    model.location_dim = 1;
    model.branch = affine(3, 1, {0.0, 0.0, 0.0}, {2.0});
    model.trunk = affine(1, 2, {0.0, 1.0}, {0.5, 0.0});
    const auto out = don_forward(model, std::vector<double>{9.0, 9.0, 9.0},
                                 std::vector<double>{0.0, 0.25, 1.0});
    CHECK(out[0] == Catch::Approx(0.5).margin(1e-14));
    CHECK(out[1] == Catch::Approx(1.0).margin(1e-14));
    CHECK(out[2] == Catch::Approx(2.5).margin(1e-14));
}

TEST_CASE("zero branch output reduces don_forward to tau_0") {
    DeepOnetModel model = make_deeponet(5, 4, 1, {8}, {8}, Activation::tanh, 3);
    // Zero the branch's last layer so all latent coefficients vanish.
    model.branch.weights.back().fill(0.0);
    model.branch.biases.back().assign(model.branch.biases.back().size(), 0.0);
    const std::vector<double> sensors{0.1, -0.2, 0.3, 0.4, -0.5};
    const std::vector<double> ys{0.1, 0.5, 0.9};
    const auto out = don_forward(model, sensors, ys);
    Matrix locs(3, 1);
    locs.data = ys;
    const Matrix tau = forward(model.trunk, locs);
    for (int i = 0; i < 3; ++i) CHECK(out[i] == Catch::Approx(tau(i, 0)).margin(1e-14));
}

TEST_CASE("permuting locations permutes outputs") {
    const DeepOnetModel model = make_deeponet(4, 3, 1, {6}, {6}, Activation::relu, 11);
    const std::vector<double> sensors{0.4, 0.1, -0.7, 0.2};
    const auto a = don_forward(model, sensors, std::vector<double>{0.2, 0.5, 0.8});
    const auto b = don_forward(model, sensors, std::vector<double>{0.8, 0.2, 0.5});
    CHECK(a[0] == b[1]);
    CHECK(a[1] == b[2]);
    CHECK(a[2] == b[0]);
}

TEST_CASE("output is bilinear in branch and trunk features") {
    // Linear nets make the pairing exactly bilinear; superpose branch inputs.
    DeepOnetModel model;
    model.sensor_count = 2;
    model.latent_dim = 2;
    model.location_dim = 1;
    model.branch = affine(2, 2, {1.0, 0.0, 0.0, 1.0}, {0.0, 0.0});  // identity
    model.trunk = affine(1, 3, {0.0, 1.0, -2.0}, {0.0, 0.0, 1.0});
    const std::vector<double> ys{0.3, 0.7};
    const auto f1 = don_forward(model, std::vector<double>{1.0, 0.0}, ys);
    const auto f2 = don_forward(model, std::vector<double>{0.0, 1.0}, ys);
    const auto f12 = don_forward(model, std::vector<double>{1.0, 1.0}, ys);
    const auto f0 = don_forward(model, std::vector<double>{0.0, 0.0}, ys);
    for (std::size_t i = 0; i < ys.size(); ++i)
        CHECK(f12[i] - f0[i] == Catch::Approx((f1[i] - f0[i]) + (f2[i] - f0[i])).margin(1e-12));
}

TEST_CASE("batched forward equals the loop of single evaluations") {
    const DeepOnetModel model = make_deeponet(6, 5, 1, {16}, {16}, Activation::tanh, 21);
    Matrix sensors(2, 6);
    for (std::size_t i = 0; i < sensors.data.size(); ++i)
        sensors.data[i] = standard_normal(77, i);
    Matrix locs(4, 1);
    locs.data = {0.1, 0.4, 0.6, 0.95};
    const std::vector<int> pair_sample{0, 1, 0, 1};
    DonBatchCache cache;
    const auto preds = don_forward_batch(model, sensors, locs, pair_sample, cache);
    for (int i = 0; i < 4; ++i) {
        const int s = pair_sample[i];
        std::vector<double> svals(sensors.row(s), sensors.row(s) + 6);
        const auto single = don_forward(model, svals, std::vector<double>{locs(i, 0)});
        CHECK(preds[i] == Catch::Approx(single[0]).margin(1e-13));
    }
}

TEST_CASE("don_backward: zero upstream gradient gives zero parameter gradients") {
    const DeepOnetModel model = make_deeponet(3, 2, 1, {4}, {4}, Activation::tanh, 5);
    Matrix sensors(1, 3);
    sensors.data = {0.2, -0.1, 0.5};
    Matrix locs(2, 1);
    locs.data = {0.25, 0.75};
    DonBatchCache cache;
    don_forward_batch(model, sensors, locs, {0, 0}, cache);
    const DonGradients g = don_backward_batch(model, cache, {0.0, 0.0});
    for (const auto& dw : g.branch.d_weights)
        for (double v : dw.data) CHECK(v == 0.0);
    for (const auto& dw : g.trunk.d_weights)
        for (double v : dw.data) CHECK(v == 0.0);
}

TEST_CASE("don_backward matches central finite differences") {
    DeepOnetModel model = make_deeponet(5, 4, 1, {8}, {8}, Activation::tanh, 13);
    Matrix sensors(3, 5);
    for (std::size_t i = 0; i < sensors.data.size(); ++i)
        sensors.data[i] = 0.7 * standard_normal(31, i);
    Matrix locs(6, 1);
    locs.data = {0.05, 0.2, 0.4, 0.55, 0.7, 0.9};
    const std::vector<int> pair_sample{0, 1, 2, 0, 1, 2};
    std::vector<double> targets(6);
    for (int i = 0; i < 6; ++i) targets[i] = standard_normal(32, i);

    const auto loss_of = [&](const DeepOnetModel& mdl) {
        DonBatchCache c;
        const auto preds = don_forward_batch(mdl, sensors, locs, pair_sample, c);
        double acc = 0.0;
        for (int i = 0; i < 6; ++i) {
            const double d = preds[i] - targets[i];
            acc += 0.5 * d * d;
        }
        return acc;
    };

    DonBatchCache cache;
    const auto preds = don_forward_batch(model, sensors, locs, pair_sample, cache);
    std::vector<double> dpred(6);
    for (int i = 0; i < 6; ++i) dpred[i] = preds[i] - targets[i];
    const DonGradients g = don_backward_batch(model, cache, dpred);

    const double fd_step = 1e-6;
    double max_rel = 0.0;
    std::uint64_t ctr = 0;
    const auto check_net = [&](Mlp& net, const Gradients& grads) {
        const long long total = param_count(net);
        for (int trial = 0; trial < 25; ++trial) {
            const long long flat = static_cast<long long>(
                uniform_below(0xfeedULL, ctr, static_cast<std::uint64_t>(total)));
            // Locate the parameter, walking layers.
            long long rem = flat;
            double* theta = nullptr;
            const double* grad = nullptr;
            for (int l = 0; l < net.layer_count(); ++l) {
                const long long nw = static_cast<long long>(net.weights[l].data.size());
                if (rem < nw) {
                    theta = &net.weights[l].data[rem];
                    grad = &grads.d_weights[l].data[rem];
                    break;
                }
                rem -= nw;
                const long long nb = static_cast<long long>(net.biases[l].size());
                if (rem < nb) {
                    theta = &net.biases[l][rem];
                    grad = &grads.d_biases[l][rem];
                    break;
                }
                rem -= nb;
            }
            REQUIRE(theta != nullptr);
            const double saved = *theta;
            *theta = saved + fd_step;
            const double lp = loss_of(model);
            *theta = saved - fd_step;
            const double lm = loss_of(model);
            *theta = saved;
            const double fd = (lp - lm) / (2.0 * fd_step);
            const double rel = std::abs(fd - *grad) / std::max(std::abs(fd) + std::abs(*grad), 1e-8);
            max_rel = std::max(max_rel, rel);
        }
    };
    check_net(model.branch, g.branch);
    check_net(model.trunk, g.trunk);
    CHECK(max_rel < 1e-5);
}

TEST_CASE("branch gradient vanishes when trunk latent components are zero") {
    DeepOnetModel model = make_deeponet(4, 3, 1, {6}, {6}, Activation::tanh, 7);
    // Zero all trunk outputs except tau_0: rows 1..p of the last layer.
    auto& w = model.trunk.weights.back();
    auto& b = model.trunk.biases.back();
    for (std::size_t r = 1; r < w.rows; ++r) {
        for (std::size_t c = 0; c < w.cols; ++c) w(r, c) = 0.0;
        b[r] = 0.0;
    }
    Matrix sensors(1, 4);
    sensors.data = {0.3, 0.1, -0.2, 0.6};
    Matrix locs(3, 1);
    locs.data = {0.2, 0.5, 0.8};
    DonBatchCache cache;
    don_forward_batch(model, sensors, locs, {0, 0, 0}, cache);
    const DonGradients g = don_backward_batch(model, cache, {1.0, -2.0, 0.5});
    for (const auto& dw : g.branch.d_weights)
        for (double v : dw.data) CHECK(v == 0.0);
}

TEST_CASE("count_params sums both nets and matches the serialized payload") {
    DeepOnetModel model;
    model.sensor_count = 2;
    model.latent_dim = 3;
    model.location_dim = 1;
    model.branch = init_mlp({2, 3}, Activation::relu, 1);
    model.trunk = init_mlp({1, 4}, Activation::relu, 2);
    CHECK(count_params(model) == 17);

    std::stringstream buf;
    save_deeponet(model, buf);
    const std::string bytes = buf.str();
    // header: magic(7) + 4 u32; per net: magic(6) + act(4) + ndims u32 each.
    const std::size_t header = 7 + 16;
    const std::size_t net_hdr = 6 + 4 + 4;
    const std::size_t meta = header + 2 * net_hdr + 2 * 4 + 2 * 4;  // two dims each
    CHECK(bytes.size() == meta + 17 * sizeof(double));
}

TEST_CASE("deeponet save/load round-trip preserves predictions bit-exactly") {
    const DeepOnetModel model = make_deeponet(7, 6, 2, {12, 12}, {12}, Activation::relu, 42);
    std::stringstream buf;
    save_deeponet(model, buf);
    const DeepOnetModel back = load_deeponet(buf);
    Matrix locs(3, 2);
    locs.data = {0.1, 0.2, 0.5, 0.5, 0.9, 0.3};
    const std::vector<double> sensors{1.0, 0.5, -0.5, 0.25, 0.0, -1.0, 2.0};
    const auto a = don_forward(model, sensors, locs);
    const auto b = don_forward(back, sensors, locs);
    CHECK(a == b);

    std::stringstream bad;
    bad << "NOPE!!!";
    CHECK_THROWS_AS(load_deeponet(bad), format_error);
}
