#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "multiplex/analytics.hpp"
#include "multiplex/errors.hpp"
#include "multiplex/graph.hpp"
#include "multiplex/params.hpp"

namespace multiplex {

/// Whether to exclude nodes born in the final fraction of steps from
/// conditional-distribution comparisons.
struct CensorPolicy {
    bool enabled = true;
    double young_fraction = 0.1;

    std::uint64_t birth_cutoff(std::uint64_t t_max) const {
        if (!enabled) return t_max;
        return t_max - static_cast<std::uint64_t>(young_fraction * t_max);
    }
};

/// Exact per-fitness histograms of a simulated graph (discrete theta,
/// so no binning).
class EmpiricalJoint {
public:
    struct ThetaCounts {
        std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint64_t> kl;
        std::map<std::uint32_t, std::uint64_t> q;
        std::uint64_t nodes = 0;

        double mean_q() const {
            double s = 0.0;
            for (const auto& [qv, c] : q) s += static_cast<double>(qv) * c;
            return s / nodes;
        }
    };

    EmpiricalJoint(const MultiplexGraph& graph, const ModelParams& params,
                   CensorPolicy censor = {})
        : t_max_(graph.step_count()), params_(params), censor_(censor) {
        const std::uint64_t cutoff = censor.birth_cutoff(t_max_);
        for (const NodeRecord& node : graph.nodes()) {
            if (node.birth_time > cutoff) continue;
            ThetaCounts& tc = per_theta_[node.theta];
            ++tc.kl[{node.k, node.ell}];
            ++tc.q[node.k + node.ell];
            ++tc.nodes;
            ++total_nodes_;
        }
    }

    const std::map<double, ThetaCounts>& per_theta() const { return per_theta_; }
    std::uint64_t total_nodes() const { return total_nodes_; }
    std::uint64_t t_max() const { return t_max_; }
    const ModelParams& params() const { return params_; }
    const CensorPolicy& censor() const { return censor_; }

    const ThetaCounts* find(double theta) const {
        auto it = per_theta_.find(theta);
        return it == per_theta_.end() ? nullptr : &it->second;
    }

private:
    std::map<double, ThetaCounts> per_theta_;
    std::uint64_t total_nodes_ = 0;
    std::uint64_t t_max_ = 0;
    ModelParams params_;
    CensorPolicy censor_;
};

inline EmpiricalJoint empirical_from_graph(const MultiplexGraph& graph,
                                           const ModelParams& params,
                                           CensorPolicy censor = {}) {
    return EmpiricalJoint(graph, params, censor);
}

/// Half L1 distance between two capped distributions whose tails are
/// compared as lumped residual masses.
inline double tv_between(const std::vector<double>& p, const std::vector<double>& q,
                         double residual_p, double residual_q) {
    double d = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) d += std::abs(p[i] - q[i]);
    return 0.5 * d + 0.5 * std::abs(residual_p - residual_q);
}

/// TV distance between the empirical conditional P(q|theta) and the
/// analytic conditional, over q <= q_cap plus lumped residuals.
/// Requires at least 200 nodes with this fitness.
inline double tv_distance(const EmpiricalJoint& emp, double theta,
                          const ModelParams& params, int q_cap) {
    const auto* tc = emp.find(theta);
    const std::uint64_t n = tc ? tc->nodes : 0;
    if (n < 200) {
        throw InsufficientSample("tv_distance: " + std::to_string(n) +
                                 " nodes with theta=" + std::to_string(theta) +
                                 ", need >= 200");
    }
    std::vector<double> empirical(q_cap + 1, 0.0);
    double emp_residual = 0.0;
    for (const auto& [qv, c] : tc->q) {
        const double w = static_cast<double>(c) / n;
        if (qv <= static_cast<std::uint32_t>(q_cap)) {
            empirical[qv] = w;
        } else {
            emp_residual += w;
        }
    }
    std::vector<double> analytic(q_cap + 1, 0.0);
    ConditionalMarginalStream stream(theta, params);
    double mass = 0.0;
    for (int q = 0; q <= q_cap; ++q, stream.advance()) {
        analytic[q] = stream.p();
        mass += stream.p();
    }
    return tv_between(empirical, analytic, emp_residual, 1.0 - mass);
}

/// Hill-type ML fit of the pooled total-degree tail exponent.
struct TailFit {
    double alpha = 0.0;
    double stderr_ = 0.0;
    std::uint64_t n_tail = 0;
};

/// alpha_hat = 1 + n / sum ln(q_i / (q_min - 1/2)) over pooled q_i >= q_min;
/// stderr = (alpha_hat - 1) / sqrt(n). Depends only on the tail sample
/// values, so it is invariant under count rescaling.
inline TailFit fit_tail_exponent(const EmpiricalJoint& emp, std::uint32_t q_min) {
    if (q_min < 1) throw DomainError("fit_tail_exponent: q_min must be >= 1");
    double log_sum = 0.0;
    std::uint64_t n = 0;
    for (const auto& [theta, tc] : emp.per_theta()) {
        for (const auto& [qv, c] : tc.q) {
            if (qv >= q_min) {
                log_sum += c * std::log(qv / (q_min - 0.5));
                n += c;
            }
        }
    }
    if (n < 100) {
        throw InsufficientSample("fit_tail_exponent: " + std::to_string(n) +
                                 " tail nodes with q >= " + std::to_string(q_min) +
                                 ", need >= 100");
    }
    TailFit fit;
    fit.alpha = 1.0 + static_cast<double>(n) / log_sum;
    fit.stderr_ = (fit.alpha - 1.0) / std::sqrt(static_cast<double>(n));
    fit.n_tail = n;
    return fit;
}

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
};

/// Weighted least squares of the per-theta empirical mean of q on theta,
/// weights = node counts, over theta values holding >= 500 nodes.
inline LineFit fit_mean_vs_fitness(const EmpiricalJoint& emp,
                                   std::uint64_t min_nodes = 500) {
    std::vector<double> xs, ys, ws;
    for (const auto& [theta, tc] : emp.per_theta()) {
        if (tc.nodes >= min_nodes) {
            xs.push_back(theta);
            ys.push_back(tc.mean_q());
            ws.push_back(static_cast<double>(tc.nodes));
        }
    }
    if (xs.size() < 3) throw InsufficientThetaDiversity();
    double W = 0.0, xbar = 0.0, ybar = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        W += ws[i];
        xbar += ws[i] * xs[i];
        ybar += ws[i] * ys[i];
    }
    xbar /= W;
    ybar /= W;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += ws[i] * (xs[i] - xbar) * (xs[i] - xbar);
        sxy += ws[i] * (xs[i] - xbar) * (ys[i] - ybar);
    }
    if (sxx == 0.0) throw InsufficientThetaDiversity();
    LineFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = ybar - fit.slope * xbar;
    return fit;
}

// ---------------------------------------------------------------------------
// Theory-vs-simulation comparison report
// ---------------------------------------------------------------------------

struct CompareOptions {
    CensorPolicy censor;                 // applies to conditional-distribution checks
    int q_cap = 200;                     // TV truncation (residuals lumped)
    std::uint64_t tv_min_nodes = 1000;   // bins below this are not evaluated
    double tv_tol = 0.05;
    std::uint32_t tail_q_min = 50;
    double tail_tol = 0.3;
    double slope_rel_tol = 0.05;
    double intercept_tol = 0.2;
    double mean_rel_tol = 0.005;
};

struct ComparisonReport {
    struct TvRow {
        double theta = 0.0;
        std::uint64_t nodes = 0;
        double tv = 0.0;
        bool pass = false;
    };
    struct TailCheck {
        bool evaluated = false;
        double alpha = 0.0, stderr_ = 0.0, expected = 0.0;
        std::uint64_t n_tail = 0;
        bool pass = false;
        std::string note;
    };
    struct SlopeCheck {
        bool evaluated = false;
        double slope = 0.0, intercept = 0.0, expected_slope = 0.0;
        bool pass = false;
        std::string note;
    };
    struct MeanCheck {
        double mean = 0.0, expected = 0.0;
        bool pass = false;
    };

    std::vector<TvRow> tv_rows;   // evaluated bins only
    bool tv_evaluated = false;
    TailCheck tail;
    SlopeCheck slope;
    MeanCheck overall_mean;
    CompareOptions options;
    std::uint64_t nodes_total = 0;
    std::uint64_t nodes_compared = 0;  // after censoring

    bool all_evaluated_pass() const {
        for (const auto& row : tv_rows) {
            if (!row.pass) return false;
        }
        if (tail.evaluated && !tail.pass) return false;
        if (slope.evaluated && !slope.pass) return false;
        return overall_mean.pass;
    }

    bool fully_evaluated() const {
        return tv_evaluated && tail.evaluated && slope.evaluated;
    }
};

/// Runs every check against a finished graph. Censoring (when enabled)
/// applies to the conditional-distribution comparisons (TV rows, tail fit);
/// the moment identities (mean-vs-fitness slope, overall mean) are counting
/// checks over the whole population and use the uncensored histograms.
inline ComparisonReport compare_against_theory(const MultiplexGraph& graph,
                                               const ModelParams& params,
                                               const CompareOptions& options = {}) {
    ComparisonReport report;
    report.options = options;

    EmpiricalJoint emp_cond(graph, params, options.censor);
    EmpiricalJoint emp_all(graph, params, CensorPolicy{.enabled = false});
    report.nodes_total = emp_all.total_nodes();
    report.nodes_compared = emp_cond.total_nodes();

    for (const auto& [theta, tc] : emp_cond.per_theta()) {
        if (tc.nodes < options.tv_min_nodes) continue;
        ComparisonReport::TvRow row;
        row.theta = theta;
        row.nodes = tc.nodes;
        row.tv = tv_distance(emp_cond, theta, params, options.q_cap);
        row.pass = row.tv <= options.tv_tol;
        report.tv_rows.push_back(row);
    }
    report.tv_evaluated = !report.tv_rows.empty();

    report.tail.expected = tail_exponent(params);
    try {
        TailFit fit = fit_tail_exponent(emp_cond, options.tail_q_min);
        report.tail.evaluated = true;
        report.tail.alpha = fit.alpha;
        report.tail.stderr_ = fit.stderr_;
        report.tail.n_tail = fit.n_tail;
        report.tail.pass = std::abs(fit.alpha - report.tail.expected) <= options.tail_tol;
    } catch (const InsufficientSample& e) {
        report.tail.note = e.what();
    }

    const double expected_slope =
        (static_cast<double>(params.beta1) + params.beta2) / params.mu();
    report.slope.expected_slope = expected_slope;
    try {
        LineFit fit = fit_mean_vs_fitness(emp_all);
        report.slope.evaluated = true;
        report.slope.slope = fit.slope;
        report.slope.intercept = fit.intercept;
        report.slope.pass =
            std::abs(fit.slope - expected_slope) <= options.slope_rel_tol * expected_slope &&
            std::abs(fit.intercept) <= options.intercept_tol;
    } catch (const InsufficientSample& e) {
        report.slope.note = e.what();
    }

    double q_sum = 0.0;
    for (const NodeRecord& node : graph.nodes()) {
        q_sum += static_cast<double>(node.total_degree());
    }
    report.overall_mean.mean = q_sum / graph.nodes().size();
    report.overall_mean.expected = expected_total_degree_overall(params);
    report.overall_mean.pass =
        std::abs(report.overall_mean.mean - report.overall_mean.expected) <=
        options.mean_rel_tol * report.overall_mean.expected;

    return report;
}

inline nlohmann::json report_to_json(const ComparisonReport& r) {
    nlohmann::json tv = nlohmann::json::array();
    for (const auto& row : r.tv_rows) {
        tv.push_back({{"theta", row.theta},
                      {"nodes", row.nodes},
                      {"tv", row.tv},
                      {"pass", row.pass}});
    }
    return nlohmann::json{
        {"nodes_total", r.nodes_total},
        {"nodes_compared", r.nodes_compared},
        {"censoring", {{"enabled", r.options.censor.enabled},
                       {"young_fraction", r.options.censor.young_fraction}}},
        {"tv", {{"evaluated", r.tv_evaluated},
                {"q_cap", r.options.q_cap},
                {"min_nodes", r.options.tv_min_nodes},
                {"tolerance", r.options.tv_tol},
                {"rows", tv}}},
        {"tail", {{"evaluated", r.tail.evaluated},
                  {"alpha", r.tail.alpha},
                  {"stderr", r.tail.stderr_},
                  {"expected", r.tail.expected},
                  {"n_tail", r.tail.n_tail},
                  {"q_min", r.options.tail_q_min},
                  {"tolerance", r.options.tail_tol},
                  {"pass", r.tail.pass},
                  {"note", r.tail.note}}},
        {"mean_vs_fitness", {{"evaluated", r.slope.evaluated},
                             {"slope", r.slope.slope},
                             {"intercept", r.slope.intercept},
                             {"expected_slope", r.slope.expected_slope},
                             {"pass", r.slope.pass},
                             {"note", r.slope.note}}},
        {"overall_mean", {{"mean", r.overall_mean.mean},
                          {"expected", r.overall_mean.expected},
                          {"pass", r.overall_mean.pass}}},
        {"all_evaluated_pass", r.all_evaluated_pass()},
        {"fully_evaluated", r.fully_evaluated()}};
}

}  // namespace multiplex
