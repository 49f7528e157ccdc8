#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "multiplex/errors.hpp"
#include "multiplex/rng.hpp"

namespace multiplex {

/// All fitness mass on a single value theta0 > 0.
struct PointMass {
    double theta0 = 1.0;
};

/// rho(theta) = (1-a) a^theta on theta in {0, 1, 2, ...}, 0 < a < 1.
struct GeometricDecay {
    double a = 0.9;
};

/// Explicit discrete distribution over nonnegative support points.
struct FiniteTable {
    std::vector<std::pair<double, double>> entries;  // (theta, probability)
};

/// Discrete fitness distribution rho(theta) with exact mean mu > 0.
///
/// Immutable after construction; construction validates the invariants
/// (nonnegative support, probabilities summing to 1 within 1e-12, mu > 0).
class FitnessDistribution {
public:
    using Variant = std::variant<PointMass, GeometricDecay, FiniteTable>;

    explicit FitnessDistribution(PointMass pm) : dist_(pm) { validate(); }
    explicit FitnessDistribution(GeometricDecay gd) : dist_(gd) { validate(); }
    explicit FitnessDistribution(FiniteTable ft) : dist_(canonical(std::move(ft))) {
        validate();
    }

    const Variant& variant() const { return dist_; }

    /// Exact mean: theta0 | a/(1-a) | sum theta_i p_i.
    double mean() const {
        if (auto* pm = std::get_if<PointMass>(&dist_)) return pm->theta0;
        if (auto* gd = std::get_if<GeometricDecay>(&dist_)) return gd->a / (1.0 - gd->a);
        const auto& ft = std::get<FiniteTable>(dist_);
        double m = 0.0;
        for (const auto& [theta, p] : ft.entries) m += theta * p;
        return m;
    }

    /// rho(theta); zero outside the support.
    double pmf(double theta) const {
        if (auto* pm = std::get_if<PointMass>(&dist_)) {
            return theta == pm->theta0 ? 1.0 : 0.0;
        }
        if (auto* gd = std::get_if<GeometricDecay>(&dist_)) {
            if (theta < 0.0 || theta != std::floor(theta)) return 0.0;
            return (1.0 - gd->a) * std::pow(gd->a, theta);
        }
        const auto& ft = std::get<FiniteTable>(dist_);
        double p = 0.0;
        for (const auto& [t, pi] : ft.entries) {
            if (t == theta) p += pi;
        }
        return p;
    }

    /// One draw with law rho; deterministic given the rng state.
    double sample(Rng& rng) const {
        if (auto* pm = std::get_if<PointMass>(&dist_)) return pm->theta0;
        if (auto* gd = std::get_if<GeometricDecay>(&dist_)) {
            // inverse CDF of the geometric law on {0,1,2,...}
            double u = rng.uniform01();
            double theta = std::floor(std::log1p(-u) / std::log(gd->a));
            return theta == 0.0 ? 0.0 : theta;  // normalize -0.0
        }
        const auto& ft = std::get<FiniteTable>(dist_);
        double u = rng.uniform01();
        double cum = 0.0;
        for (const auto& [theta, p] : ft.entries) {
            cum += p;
            if (u < cum) return theta;
        }
        return ft.entries.back().first;  // guards cumulative rounding at u ~ 1
    }

    /// Support points covering all mass except at most `tail_mass`
    /// (GeometricDecay is truncated; the others are exact).
    std::vector<double> support(double tail_mass = 1e-12) const {
        if (auto* pm = std::get_if<PointMass>(&dist_)) return {pm->theta0};
        if (auto* gd = std::get_if<GeometricDecay>(&dist_)) {
            // residual mass beyond theta is a^(theta+1)
            std::vector<double> pts;
            double residual = 1.0;
            for (int t = 0; residual > tail_mass; ++t) {
                pts.push_back(static_cast<double>(t));
                residual *= gd->a;
            }
            return pts;
        }
        std::vector<double> pts;
        for (const auto& [theta, p] : std::get<FiniteTable>(dist_).entries) {
            pts.push_back(theta);
        }
        return pts;
    }

    std::string kind() const {
        if (std::holds_alternative<PointMass>(dist_)) return "point_mass";
        if (std::holds_alternative<GeometricDecay>(dist_)) return "geometric_decay";
        return "finite_table";
    }

private:
    // canonical form: entries sorted by theta, exact duplicates merged
    static FiniteTable canonical(FiniteTable ft) {
        std::sort(ft.entries.begin(), ft.entries.end());
        std::vector<std::pair<double, double>> merged;
        for (const auto& [theta, p] : ft.entries) {
            if (!merged.empty() && merged.back().first == theta) {
                merged.back().second += p;
            } else {
                merged.emplace_back(theta, p);
            }
        }
        ft.entries = std::move(merged);
        return ft;
    }

    void validate() const {
        if (auto* pm = std::get_if<PointMass>(&dist_)) {
            if (!(pm->theta0 >= 0.0)) throw ConfigError("point_mass: theta0 must be >= 0");
        } else if (auto* gd = std::get_if<GeometricDecay>(&dist_)) {
            if (!(gd->a > 0.0 && gd->a < 1.0)) {
                throw ConfigError("geometric_decay: a must lie in (0,1)");
            }
        } else {
            const auto& ft = std::get<FiniteTable>(dist_);
            if (ft.entries.empty()) throw ConfigError("finite_table: empty support");
            double total = 0.0;
            for (const auto& [theta, p] : ft.entries) {
                if (!(theta >= 0.0)) throw ConfigError("finite_table: theta must be >= 0");
                if (!(p >= 0.0)) throw ConfigError("finite_table: probabilities must be >= 0");
                total += p;
            }
            if (std::abs(total - 1.0) > 1e-12) {
                throw ConfigError("finite_table: probabilities must sum to 1 within 1e-12");
            }
        }
        if (!(mean() > 0.0)) {
            throw ConfigError("fitness distribution must have mean > 0 "
                              "(layer-1 attachment is undefined otherwise)");
        }
    }

    Variant dist_;
};

/// Exact mean of the distribution (closed form per variant).
inline double mean_fitness(const FitnessDistribution& dist) { return dist.mean(); }

/// rho(theta); zero outside the support.
inline double fitness_pmf(const FitnessDistribution& dist, double theta) {
    return dist.pmf(theta);
}

/// Draws theta with law rho.
inline double sample_fitness(const FitnessDistribution& dist, Rng& rng) {
    return dist.sample(rng);
}

}  // namespace multiplex
