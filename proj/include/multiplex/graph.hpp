#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "multiplex/errors.hpp"
#include "multiplex/fenwick.hpp"
#include "multiplex/fitness.hpp"
#include "multiplex/params.hpp"
#include "multiplex/rng.hpp"

namespace multiplex {

struct NodeRecord {
    std::uint32_t id = 0;
    double theta = 0.0;        // fixed at birth
    std::uint32_t k = 0;       // layer-1 in-degree
    std::uint32_t ell = 0;     // layer-2 in-degree
    std::uint64_t birth_time = 0;

    std::uint64_t total_degree() const {
        return static_cast<std::uint64_t>(k) + ell;
    }
};

using Edge = std::pair<std::uint32_t, std::uint32_t>;  // (source, target)

/// Two-layer growing multiplex graph.
///
/// Layer-1 targets are drawn with probability proportional to fitness
/// (Fenwick prefix sums, O(log N) per draw); layer-2 targets with
/// probability proportional to total degree (uniform pick from the
/// receipt list, O(1) per draw). Single writer; see grow() for replicas.
class MultiplexGraph {
public:
    const std::vector<NodeRecord>& nodes() const { return nodes_; }
    const std::vector<Edge>& layer1_edges() const { return layer1_; }
    const std::vector<Edge>& layer2_edges() const { return layer2_; }

    /// Sum of all fitness values (the layer-1 sampling denominator).
    double theta_sum() const { return fitness_index_.total(); }

    /// One entry per received link in either layer; its length is L1 + L2.
    const std::vector<std::uint32_t>& receipt_list() const { return receipts_; }

    std::uint64_t step_count() const { return steps_; }

    void reserve(std::uint64_t total_nodes, std::uint64_t total_links) {
        nodes_.reserve(total_nodes);
        fitness_index_.reserve(total_nodes);
        receipts_.reserve(total_links);
    }

    /// Node id drawn with probability theta_x / theta_sum. Requires
    /// theta_sum > 0.
    std::uint32_t sample_target_by_fitness(Rng& rng) const {
        return static_cast<std::uint32_t>(
            fitness_index_.find(rng.uniform01() * fitness_index_.total()));
    }

    /// Node id drawn with probability (k_x + ell_x) / sum(k + ell).
    /// Requires at least one receipt.
    std::uint32_t sample_target_by_total_degree(Rng& rng) const {
        return receipts_[rng.uniform_below(receipts_.size())];
    }

    /// Appends one node with theta ~ rho and wires beta1 + beta2 links.
    /// All draws are evaluated against the pre-arrival state, independently
    /// and with replacement; the newcomer is never a target.
    void step(const ModelParams& params, Rng& rng) {
        const double theta = sample_fitness(params.fitness, rng);
        scratch_.clear();
        for (std::uint32_t i = 0; i < params.beta1; ++i) {
            scratch_.push_back(sample_target_by_fitness(rng));
        }
        for (std::uint32_t i = 0; i < params.beta2; ++i) {
            scratch_.push_back(sample_target_by_total_degree(rng));
        }

        ++steps_;
        const auto newcomer = static_cast<std::uint32_t>(nodes_.size());
        nodes_.push_back({newcomer, theta, 0, 0, steps_});
        for (std::uint32_t i = 0; i < params.beta1; ++i) {
            add_edge_layer1(newcomer, scratch_[i]);
        }
        for (std::uint32_t i = params.beta1; i < scratch_.size(); ++i) {
            add_edge_layer2(newcomer, scratch_[i]);
        }
        fitness_index_.append(theta);
    }

    /// Seed-construction primitives (used by build_seed_graph).
    void add_seed_node(double theta) {
        const auto id = static_cast<std::uint32_t>(nodes_.size());
        nodes_.push_back({id, theta, 0, 0, 0});
        fitness_index_.append(theta);
    }
    void add_edge_layer1(std::uint32_t source, std::uint32_t target) {
        layer1_.emplace_back(source, target);
        ++nodes_[target].k;
        receipts_.push_back(target);
    }
    void add_edge_layer2(std::uint32_t source, std::uint32_t target) {
        layer2_.emplace_back(source, target);
        ++nodes_[target].ell;
        receipts_.push_back(target);
    }

private:
    std::vector<NodeRecord> nodes_;
    std::vector<Edge> layer1_;
    std::vector<Edge> layer2_;
    std::vector<std::uint32_t> receipts_;
    FenwickTree fitness_index_;
    std::vector<std::uint32_t> scratch_;
    std::uint64_t steps_ = 0;
};

/// Builds the initial graph. Rejects seeds with no links or zero total
/// fitness (the attachment rules would be undefined).
inline MultiplexGraph build_seed_graph(const SeedGraphSpec& spec,
                                       const FitnessDistribution& dist, Rng& rng) {
    MultiplexGraph g;
    for (std::uint32_t i = 0; i < spec.n0; ++i) {
        double theta;
        if (auto* ev = std::get_if<ExplicitValues>(&spec.fitness_assignment)) {
            if (ev->values.size() != spec.n0) {
                throw ConfigError("explicit seed fitness values must match n0");
            }
            theta = ev->values[i];
            if (!(theta >= 0.0)) throw ConfigError("seed fitness must be >= 0");
        } else {
            theta = sample_fitness(dist, rng);
        }
        g.add_seed_node(theta);
    }
    if (std::holds_alternative<DirectedRingBothLayers>(spec.pattern)) {
        for (std::uint32_t i = 0; i < spec.n0; ++i) {
            g.add_edge_layer1(i, (i + 1) % spec.n0);
        }
        for (std::uint32_t i = 0; i < spec.n0; ++i) {
            g.add_edge_layer2(i, (i + 1) % spec.n0);
        }
    } else {
        const auto& el = std::get<ExplicitEdgeLists>(spec.pattern);
        for (const auto& [s, t] : el.layer1) {
            if (s >= spec.n0 || t >= spec.n0) throw ConfigError("seed edge outside 0..n0-1");
            g.add_edge_layer1(s, t);
        }
        for (const auto& [s, t] : el.layer2) {
            if (s >= spec.n0 || t >= spec.n0) throw ConfigError("seed edge outside 0..n0-1");
            g.add_edge_layer2(s, t);
        }
    }
    if (g.receipt_list().empty()) throw ZeroLinkSeed();
    if (!(g.theta_sum() > 0.0)) throw ZeroFitnessSeed();
    return g;
}

/// Seed graph advanced by t_max growth steps.
inline MultiplexGraph grow(const ModelParams& params, Rng& rng) {
    MultiplexGraph g = build_seed_graph(params.seed_graph, params.fitness, rng);
    const std::uint64_t links0 = g.receipt_list().size();
    g.reserve(params.seed_graph.n0 + params.t_max,
              links0 + (params.beta1 + params.beta2) * params.t_max);
    for (std::uint64_t t = 0; t < params.t_max; ++t) {
        g.step(params, rng);
    }
    return g;
}

/// Convenience overload seeding the stream from params.rng_seed.
inline MultiplexGraph grow(const ModelParams& params) {
    Rng rng(params.rng_seed);
    return grow(params, rng);
}

}  // namespace multiplex
