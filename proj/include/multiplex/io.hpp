#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "multiplex/analytics.hpp"
#include "multiplex/errors.hpp"
#include "multiplex/graph.hpp"
#include "multiplex/params.hpp"
#include "multiplex/version.hpp"

namespace multiplex {

/// Shortest round-trip decimal rendering (std::to_chars); value-determined,
/// locale-free, identical on every platform.
inline std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

/// FNV-1a 64-bit content hash (manifest fingerprints, not cryptographic).
inline std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string to_hex(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[i] = digits[v & 0xF];
        v >>= 4;
    }
    return s;
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open for writing: " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw ConfigError("write failed: " + path.string());
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open: " + path.string());
    std::string content((std::istreambuf_iterator<char>(in)),
                        std::istreambuf_iterator<char>());
    return content;
}

// ---------------------------------------------------------------------------
// Graph exports
// ---------------------------------------------------------------------------

/// Edge list, one line per edge: layer<TAB>source<TAB>target.
inline std::string edges_tsv(const MultiplexGraph& graph) {
    std::string out;
    out.reserve(16 * (graph.layer1_edges().size() + graph.layer2_edges().size()));
    for (const auto& [s, t] : graph.layer1_edges()) {
        out += "1\t" + std::to_string(s) + "\t" + std::to_string(t) + "\n";
    }
    for (const auto& [s, t] : graph.layer2_edges()) {
        out += "2\t" + std::to_string(s) + "\t" + std::to_string(t) + "\n";
    }
    return out;
}

/// Node table CSV: id,theta,k,ell,birth_time (header included).
inline std::string nodes_csv(const MultiplexGraph& graph) {
    std::string out = "id,theta,k,ell,birth_time\n";
    out.reserve(out.size() + 24 * graph.nodes().size());
    for (const NodeRecord& n : graph.nodes()) {
        out += std::to_string(n.id) + "," + format_double(n.theta) + "," +
               std::to_string(n.k) + "," + std::to_string(n.ell) + "," +
               std::to_string(n.birth_time) + "\n";
    }
    return out;
}

// ---------------------------------------------------------------------------
// Analytic table exports
// ---------------------------------------------------------------------------

/// Joint table CSV: theta,k,ell,p,log_p.
inline std::string joint_table_csv(const std::vector<JointDistributionTable>& tables) {
    std::string out = "theta,k,ell,p,log_p\n";
    for (const auto& table : tables) {
        for (int k = 0; k <= table.max_k; ++k) {
            for (int ell = 0; ell <= table.max_ell; ++ell) {
                const double lp = table.log_at(k, ell);
                out += format_double(table.theta) + "," + std::to_string(k) + "," +
                       std::to_string(ell) + "," + format_double(std::exp(lp)) + "," +
                       format_double(lp) + "\n";
            }
        }
    }
    return out;
}

/// Marginal table CSV: theta,q,p,log_p,log_inv_p. The last column is the
/// plotting-friendly log(1/P(q,theta)) surface.
inline std::string marginal_table_csv(const std::vector<JointDistributionTable>& tables) {
    std::string out = "theta,q,p,log_p,log_inv_p\n";
    for (const auto& table : tables) {
        for (int q = 0; q <= table.max_k; ++q) {
            const double lp = table.log_at_q(q);
            out += format_double(table.theta) + "," + std::to_string(q) + "," +
                   format_double(std::exp(lp)) + "," + format_double(lp) + "," +
                   format_double(-lp) + "\n";
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Run manifest
// ---------------------------------------------------------------------------

/// Records what a run produced; re-running the same config must reproduce
/// the same content hashes.
struct RunManifest {
    json config;
    std::string version = kVersion;
    std::uint64_t rng_seed = 0;
    std::string created_utc;
    struct Output {
        std::string path;  // relative to the manifest directory
        std::uint64_t bytes = 0;
        std::string fnv1a64_hex;
    };
    std::vector<Output> outputs;
};

inline std::string utc_timestamp() {
    std::time_t now = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    return buf;
}

inline json manifest_to_json(const RunManifest& m) {
    json outputs = json::array();
    for (const auto& o : m.outputs) {
        outputs.push_back({{"path", o.path}, {"bytes", o.bytes}, {"fnv1a64", o.fnv1a64_hex}});
    }
    return json{{"config", m.config},
                {"version", m.version},
                {"rng_seed", m.rng_seed},
                {"created_utc", m.created_utc},
                {"outputs", outputs}};
}

/// Writes `content` under `dir/name` and records it in the manifest.
inline void emit_output(RunManifest& manifest, const std::filesystem::path& dir,
                        const std::string& name, const std::string& content) {
    write_file(dir / name, content);
    manifest.outputs.push_back({name, content.size(), to_hex(fnv1a64(content))});
}

}  // namespace multiplex
