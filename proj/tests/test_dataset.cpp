#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <string>

#include "sppdon/dataset.hpp"
#include "sppdon/pipeline.hpp"

using namespace sppdon;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("sppdon_test_" + tag + "_" +
                                            std::to_string(::getpid()));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

DatasetConfig small_cfg() {
    DatasetConfig cfg;
    cfg.dim = 1;
    cfg.epsilon = 1e-2;
    cfg.alpha = 1.0;
    cfg.length_scale = 1.0;
    cfg.n_samples = 3;
    cfg.j_intervals = 8;
    cfg.m_sensors = 5;
    cfg.mesh_kind = MeshKind::shishkin;
    cfg.preset = "example1";
    cfg.j_fine = 128;
    cfg.base_seed = 11;
    return cfg;
}

}  // namespace

TEST_CASE("save -> load -> save produces identical bytes") {
    const OperatorDataset ds = generate_dataset(small_cfg());
    TempDir d1("roundtrip1"), d2("roundtrip2");
    save_dataset(ds, d1.path);
    const OperatorDataset back = load_dataset(d1.path);
    save_dataset(back, d2.path);
    CHECK(slurp(d1.path / "data.bin") == slurp(d2.path / "data.bin"));
    CHECK(slurp(d1.path / "meta.json") == slurp(d2.path / "meta.json"));
    CHECK(back.loc_x == ds.loc_x);
    CHECK(back.loc_weights == ds.loc_weights);
    CHECK(back.sensor_values == ds.sensor_values);
    CHECK(back.target_values == ds.target_values);
}

TEST_CASE("payload length follows the format arithmetic") {
    const OperatorDataset ds = generate_dataset(small_cfg());
    TempDir dir("payload");
    save_dataset(ds, dir.path);
    const auto cfg = small_cfg();
    const std::size_t expect =
        8u * ((cfg.j_intervals + 1) * 2 + cfg.m_sensors +
              cfg.n_samples * (cfg.m_sensors + cfg.j_intervals + 1));
    CHECK(fs::file_size(dir.path / "data.bin") == expect);
}

TEST_CASE("corrupted metadata or payload is rejected with a format error") {
    const OperatorDataset ds = generate_dataset(small_cfg());
    TempDir dir("corrupt");
    save_dataset(ds, dir.path);

    SECTION("flip one byte of meta.json") {
        auto bytes = slurp(dir.path / "meta.json");
        bytes[0] = '!';
        std::ofstream(dir.path / "meta.json", std::ios::binary) << bytes;
        CHECK_THROWS_AS(load_dataset(dir.path), format_error);
    }
    SECTION("truncate data.bin") {
        auto bytes = slurp(dir.path / "data.bin");
        bytes.resize(bytes.size() - 8);
        std::ofstream(dir.path / "data.bin", std::ios::binary) << bytes;
        CHECK_THROWS_AS(load_dataset(dir.path), format_error);
    }
    SECTION("format version mismatch") {
        auto text = slurp(dir.path / "meta.json");
        const auto pos = text.find("\"format_version\": 1");
        REQUIRE(pos != std::string::npos);
        text.replace(pos, 19, "\"format_version\": 9");
        std::ofstream(dir.path / "meta.json") << text;
        CHECK_THROWS_AS(load_dataset(dir.path), format_error);
    }
}

TEST_CASE("2D dataset round-trips through disk") {
    DatasetConfig cfg;
    cfg.dim = 2;
    cfg.epsilon = 0.05;
    cfg.n_samples = 2;
    cfg.j_intervals = 6;
    cfg.m_sensors = 3;
    cfg.mesh_kind = MeshKind::shishkin;
    cfg.preset = "example3";
    cfg.j_fine = 16;
    cfg.base_seed = 4;
    const OperatorDataset ds = generate_dataset_2d(cfg);
    TempDir dir("twod");
    save_dataset(ds, dir.path);
    const OperatorDataset back = load_dataset(dir.path);
    CHECK(back.loc_x == ds.loc_x);
    CHECK(back.loc_y == ds.loc_y);
    CHECK(back.sensor_y == ds.sensor_y);
    CHECK(back.target_values == ds.target_values);
    CHECK(back.loc_is_boundary == ds.loc_is_boundary);
}
