#pragma once

// Run manifests: every CLI command records its resolved arguments, seeds,
// and artifact paths next to its outputs, and `sppdon rerun <manifest>`
// replays the command. Reruns yield byte-identical artifacts because every
// code path is deterministic given the recorded flags.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sppdon/errors.hpp"

namespace sppdon {

constexpr const char* kCodeVersion = "sppdon 0.1.0";

/// FNV-1a over the canonical JSON dump; cache key for sweep cells.
inline std::string config_hash(const nlohmann::json& j) {
    const std::string s = j.dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

struct RunManifest {
    std::string command;
    std::vector<std::string> argv;  // subcommand + flags, replayable
    nlohmann::json config;          // resolved flag values
    nlohmann::json seeds;
    std::vector<std::string> artifact_paths;
    double wall_clock_seconds = 0.0;
};

inline void write_manifest(const RunManifest& m, const std::filesystem::path& path) {
    nlohmann::json j{{"command", m.command},
                     {"argv", m.argv},
                     {"config", m.config},
                     {"seeds", m.seeds},
                     {"artifact_paths", m.artifact_paths},
                     {"wall_clock_seconds", m.wall_clock_seconds},
                     {"code_version", kCodeVersion}};
    // Atomic: write to a temp file in the same directory, then rename.
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << j.dump(2) << "\n";
    }
    std::filesystem::rename(tmp, path);
}

inline RunManifest load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw format_error(std::string("bad manifest: ") + e.what());
    }
    RunManifest m;
    try {
        j.at("command").get_to(m.command);
        j.at("argv").get_to(m.argv);
        m.config = j.value("config", nlohmann::json::object());
        m.seeds = j.value("seeds", nlohmann::json::object());
        if (j.contains("artifact_paths")) j.at("artifact_paths").get_to(m.artifact_paths);
        m.wall_clock_seconds = j.value("wall_clock_seconds", 0.0);
    } catch (const nlohmann::json::exception& e) {
        throw format_error(std::string("bad manifest: ") + e.what());
    }
    return m;
}

class WallClock {
public:
    WallClock() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

}  // namespace sppdon
