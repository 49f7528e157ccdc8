#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "multiplex/errors.hpp"
#include "multiplex/fitness.hpp"

namespace multiplex {

using json = nlohmann::json;

/// Directed ring in both layers: node i -> (i+1) mod n0, once per layer.
struct DirectedRingBothLayers {};

/// User-provided edge lists (source, target) per layer over nodes 0..n0-1.
struct ExplicitEdgeLists {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> layer1;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> layer2;
};

/// Seed fitness is drawn from the model's fitness distribution.
struct SampleFromDist {};

/// Seed fitness given explicitly, one value per seed node.
struct ExplicitValues {
    std::vector<double> values;
};

struct SeedGraphSpec {
    std::uint32_t n0 = 10;
    std::variant<DirectedRingBothLayers, ExplicitEdgeLists> pattern =
        DirectedRingBothLayers{};
    std::variant<SampleFromDist, ExplicitValues> fitness_assignment = SampleFromDist{};
};

/// Everything defining one experiment.
struct ModelParams {
    std::uint32_t beta1 = 1;  // layer-1 links per newcomer
    std::uint32_t beta2 = 1;  // layer-2 links per newcomer
    FitnessDistribution fitness{PointMass{1.0}};  // rho(theta)
    std::uint64_t t_max = 1;       // node arrivals
    std::uint64_t rng_seed = 1;
    SeedGraphSpec seed_graph;

    double mu() const { return fitness.mean(); }

    /// Config-level invariants (the canonical JSON schema enforces these).
    void validate() const {
        if (beta1 < 1) throw ConfigError("beta1 must be >= 1");
        if (beta2 < 1) throw ConfigError("beta2 must be >= 1");
        if (t_max < 1) throw ConfigError("t_max must be >= 1");
        if (seed_graph.n0 < 2) throw ConfigError("seed_graph.n0 must be >= 2");
        if (auto* ev = std::get_if<ExplicitValues>(&seed_graph.fitness_assignment)) {
            if (ev->values.size() != seed_graph.n0) {
                throw ConfigError("seed_graph.explicit_values must list exactly n0 fitness values");
            }
        }
        if (auto* el = std::get_if<ExplicitEdgeLists>(&seed_graph.pattern)) {
            for (const auto& edges : {el->layer1, el->layer2}) {
                for (const auto& [s, t] : edges) {
                    if (s >= seed_graph.n0 || t >= seed_graph.n0) {
                        throw ConfigError("seed edge endpoint outside 0..n0-1");
                    }
                }
            }
        }
    }
};

// ---------------------------------------------------------------------------
// JSON codec for the canonical experiment config:
// {beta1, beta2, fitness:{kind,...}, t_max, rng_seed,
//  seed_graph:{n0, pattern, fitness_assignment}}
// ---------------------------------------------------------------------------

inline json fitness_to_json(const FitnessDistribution& dist) {
    json j;
    j["kind"] = dist.kind();
    if (auto* pm = std::get_if<PointMass>(&dist.variant())) {
        j["theta0"] = pm->theta0;
    } else if (auto* gd = std::get_if<GeometricDecay>(&dist.variant())) {
        j["a"] = gd->a;
    } else {
        json support = json::array();
        for (const auto& [theta, p] : std::get<FiniteTable>(dist.variant()).entries) {
            support.push_back({theta, p});
        }
        j["support"] = support;
    }
    return j;
}

inline FitnessDistribution fitness_from_json(const json& j) {
    if (!j.is_object() || !j.contains("kind")) {
        throw ConfigError("fitness: expected object with a \"kind\" field");
    }
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "point_mass") {
        return FitnessDistribution(PointMass{j.at("theta0").get<double>()});
    }
    if (kind == "geometric_decay") {
        return FitnessDistribution(GeometricDecay{j.at("a").get<double>()});
    }
    if (kind == "finite_table") {
        FiniteTable ft;
        for (const auto& row : j.at("support")) {
            if (!row.is_array() || row.size() != 2) {
                throw ConfigError("finite_table.support: expected [theta, p] pairs");
            }
            ft.entries.emplace_back(row[0].get<double>(), row[1].get<double>());
        }
        return FitnessDistribution(std::move(ft));
    }
    throw ConfigError("fitness.kind: unknown kind \"" + kind + "\"");
}

inline json params_to_json(const ModelParams& p) {
    json sg;
    sg["n0"] = p.seed_graph.n0;
    if (std::holds_alternative<DirectedRingBothLayers>(p.seed_graph.pattern)) {
        sg["pattern"] = "directed_ring_both_layers";
    } else {
        const auto& el = std::get<ExplicitEdgeLists>(p.seed_graph.pattern);
        json l1 = json::array(), l2 = json::array();
        for (const auto& [s, t] : el.layer1) l1.push_back({s, t});
        for (const auto& [s, t] : el.layer2) l2.push_back({s, t});
        sg["pattern"] = {{"explicit_edge_lists", {{"layer1", l1}, {"layer2", l2}}}};
    }
    if (std::holds_alternative<SampleFromDist>(p.seed_graph.fitness_assignment)) {
        sg["fitness_assignment"] = "sample_from_dist";
    } else {
        sg["fitness_assignment"] = {
            {"explicit_values", std::get<ExplicitValues>(p.seed_graph.fitness_assignment).values}};
    }
    return json{{"beta1", p.beta1},
                {"beta2", p.beta2},
                {"fitness", fitness_to_json(p.fitness)},
                {"t_max", p.t_max},
                {"rng_seed", p.rng_seed},
                {"seed_graph", sg}};
}

inline ModelParams params_from_json(const json& j) {
    for (const char* field : {"beta1", "beta2", "fitness", "t_max", "rng_seed"}) {
        if (!j.contains(field)) {
            throw ConfigError(std::string("config: missing required field \"") + field + "\"");
        }
    }
    ModelParams p{.beta1 = j.at("beta1").get<std::uint32_t>(),
                  .beta2 = j.at("beta2").get<std::uint32_t>(),
                  .fitness = fitness_from_json(j.at("fitness")),
                  .t_max = j.at("t_max").get<std::uint64_t>(),
                  .rng_seed = j.at("rng_seed").get<std::uint64_t>()};
    if (j.contains("seed_graph")) {
        const json& sg = j.at("seed_graph");
        p.seed_graph.n0 = sg.value("n0", 10u);
        if (sg.contains("pattern")) {
            const json& pat = sg.at("pattern");
            if (pat.is_string() && pat.get<std::string>() == "directed_ring_both_layers") {
                p.seed_graph.pattern = DirectedRingBothLayers{};
            } else if (pat.is_object() && pat.contains("explicit_edge_lists")) {
                ExplicitEdgeLists el;
                const json& e = pat.at("explicit_edge_lists");
                for (const auto& row : e.value("layer1", json::array())) {
                    el.layer1.emplace_back(row[0].get<std::uint32_t>(),
                                           row[1].get<std::uint32_t>());
                }
                for (const auto& row : e.value("layer2", json::array())) {
                    el.layer2.emplace_back(row[0].get<std::uint32_t>(),
                                           row[1].get<std::uint32_t>());
                }
                p.seed_graph.pattern = std::move(el);
            } else {
                throw ConfigError("seed_graph.pattern: expected "
                                  "\"directed_ring_both_layers\" or {explicit_edge_lists:...}");
            }
        }
        if (sg.contains("fitness_assignment")) {
            const json& fa = sg.at("fitness_assignment");
            if (fa.is_string() && fa.get<std::string>() == "sample_from_dist") {
                p.seed_graph.fitness_assignment = SampleFromDist{};
            } else if (fa.is_object() && fa.contains("explicit_values")) {
                p.seed_graph.fitness_assignment =
                    ExplicitValues{fa.at("explicit_values").get<std::vector<double>>()};
            } else {
                throw ConfigError("seed_graph.fitness_assignment: expected "
                                  "\"sample_from_dist\" or {explicit_values:[...]}");
            }
        }
    }
    p.validate();
    return p;
}

/// Parses a config document, mapping JSON syntax errors to line:column.
inline ModelParams params_from_config_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ConfigError("config parse error at line " + std::to_string(line) +
                          ", column " + std::to_string(col) + ": " + e.what());
    }
    return params_from_json(j);
}

}  // namespace multiplex
