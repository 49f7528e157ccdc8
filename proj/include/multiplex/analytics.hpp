#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "multiplex/errors.hpp"
#include "multiplex/params.hpp"
#include "multiplex/special.hpp"

namespace multiplex {

/// Per-theta constants of the steady-state solution.
///
/// A = (beta1+beta2)/beta2, G_theta = 1 + beta1 theta / mu, and the per-k
/// attachment weight w = A theta beta1 / mu (log_w = -inf at theta = 0).
/// Note A G_theta = A + w.
struct ClosedFormContext {
    double A = 0.0;
    double G_theta = 0.0;
    double log_w = kNegInf;
    double rho_theta = 0.0;

    double AG() const { return A * G_theta; }
    double w() const { return std::exp(log_w); }
};

inline ClosedFormContext make_context(double theta, const ModelParams& params) {
    if (!(theta >= 0.0)) throw DomainError("theta must be >= 0");
    const double mu = params.mu();
    ClosedFormContext ctx;
    ctx.A = (static_cast<double>(params.beta1) + params.beta2) / params.beta2;
    ctx.G_theta = 1.0 + params.beta1 * theta / mu;
    ctx.log_w = theta > 0.0
                    ? std::log(ctx.A * theta * params.beta1 / mu)
                    : kNegInf;
    ctx.rho_theta = fitness_pmf(params.fitness, theta);
    return ctx;
}

/// Power of the asymptotic tail: P(q, theta) ~ q^-(2 + beta1/beta2).
inline double tail_exponent(const ModelParams& params) {
    return 2.0 + static_cast<double>(params.beta1) / params.beta2;
}

/// Conditional expected total degree, (beta1+beta2) theta / mu.
inline double expected_total_degree(double theta, const ModelParams& params) {
    if (!(theta >= 0.0)) throw DomainError("theta must be >= 0");
    return (static_cast<double>(params.beta1) + params.beta2) * theta / params.mu();
}

/// Population expected total degree, beta1 + beta2 (mu cancels).
inline double expected_total_degree_overall(const ModelParams& params) {
    return static_cast<double>(params.beta1) + params.beta2;
}

// ---------------------------------------------------------------------------
// Joint distribution P(k, ell, theta)
// ---------------------------------------------------------------------------

namespace detail {

/// log P(k, ell, theta) given the Stirling value log [k+ell, k].
inline double log_joint_from_stirling(int k, int ell, double log_stirling,
                                      const ClosedFormContext& ctx) {
    if (ctx.rho_theta <= 0.0) return kNegInf;
    if (log_stirling == kNegInf) return kNegInf;
    // the k-weight power is 1 at k = 0 even when log_w = -inf (0^0 = 1)
    const double weight = k == 0 ? 0.0 : k * ctx.log_w;
    if (weight == kNegInf) return kNegInf;
    const double ag = ctx.AG();
    return log_stirling + std::log(ctx.A) + weight + log_gamma(ag) -
           log_gamma(ag + k + ell + 1.0) + std::log(ctx.rho_theta);
}

}  // namespace detail

/// log P(k, ell, theta): the closed-form steady-state joint density of
/// layer degrees and fitness. Costs one Stirling row sweep, O((k+ell)^2).
inline double log_joint_pdf(int k, int ell, double theta, const ModelParams& params) {
    if (k < 0 || ell < 0) throw DomainError("joint_pdf: k and ell must be >= 0");
    const ClosedFormContext ctx = make_context(theta, params);
    if (ctx.rho_theta <= 0.0) return kNegInf;
    StirlingRowStream rows;
    rows.seek(k + ell);
    return detail::log_joint_from_stirling(k, ell, rows.row().at(k), ctx);
}

inline double joint_pdf(int k, int ell, double theta, const ModelParams& params) {
    return std::exp(log_joint_pdf(k, ell, theta, params));
}

/// Dense evaluation of a joint or total-degree table for one theta.
struct JointDistributionTable {
    enum class Kind { JointKL, TotalQ };
    enum class Source { ClosedForm, RecurrenceOracle, Empirical };

    double theta = 0.0;
    Kind kind = Kind::JointKL;
    Source source = Source::ClosedForm;
    int max_k = 0;
    int max_ell = 0;  // unused for TotalQ
    std::vector<double> log_p;

    double log_at(int k, int ell) const { return log_p[idx(k, ell)]; }
    double at(int k, int ell) const { return std::exp(log_at(k, ell)); }
    double log_at_q(int q) const { return log_p[q]; }
    double at_q(int q) const { return std::exp(log_p[q]); }

    std::size_t idx(int k, int ell) const {
        return static_cast<std::size_t>(k) * (max_ell + 1) + ell;
    }

    /// Total exponentiated mass (log-sum-exp over all entries).
    double mass() const {
        double lse = kNegInf;
        for (double lp : log_p) lse = log_sum_exp(lse, lp);
        return std::exp(lse);
    }
};

inline constexpr int kJointGridCap = 500;

/// Closed-form joint table over k <= max_k, ell <= max_ell. Streams
/// Stirling rows along antidiagonals, so the whole grid costs
/// O((max_k + max_ell)^2).
inline JointDistributionTable closed_form_joint_table(int max_k, int max_ell,
                                                      double theta,
                                                      const ModelParams& params) {
    if (max_k < 0 || max_ell < 0 || max_k > kJointGridCap || max_ell > kJointGridCap) {
        throw ResourceError("joint grid bounds must lie in [0, 500]");
    }
    const ClosedFormContext ctx = make_context(theta, params);
    JointDistributionTable table{theta, JointDistributionTable::Kind::JointKL,
                                 JointDistributionTable::Source::ClosedForm,
                                 max_k, max_ell, {}};
    table.log_p.assign(static_cast<std::size_t>(max_k + 1) * (max_ell + 1), kNegInf);
    StirlingRowStream rows;
    for (int n = 0; n <= max_k + max_ell; ++n) {
        rows.seek(n);
        const LogStirlingRow& row = rows.row();
        for (int k = std::max(0, n - max_ell); k <= std::min(n, max_k); ++k) {
            const int ell = n - k;
            table.log_p[table.idx(k, ell)] =
                detail::log_joint_from_stirling(k, ell, row.at(k), ctx);
        }
    }
    return table;
}

/// Independent check of the closed form: fills the same grid by forward
/// iteration of the steady-state difference equation
///   P(k,l) = [w P(k-1,l) + (k+l-1) P(k,l-1)] / (A G + k + l),
/// boundary rho(theta)/G_theta at (0,0), in order of increasing k+l.
/// Runs in log space; out-of-range indices contribute nothing.
inline JointDistributionTable recurrence_oracle(int max_k, int max_ell, double theta,
                                                const ModelParams& params) {
    if (max_k < 0 || max_ell < 0 || max_k > kJointGridCap || max_ell > kJointGridCap) {
        throw ResourceError("joint grid bounds must lie in [0, 500]");
    }
    const ClosedFormContext ctx = make_context(theta, params);
    JointDistributionTable table{theta, JointDistributionTable::Kind::JointKL,
                                 JointDistributionTable::Source::RecurrenceOracle,
                                 max_k, max_ell, {}};
    table.log_p.assign(static_cast<std::size_t>(max_k + 1) * (max_ell + 1), kNegInf);
    const double ag = ctx.AG();
    if (ctx.rho_theta > 0.0) {
        table.log_p[table.idx(0, 0)] = std::log(ctx.rho_theta) - std::log(ctx.G_theta);
    }
    for (int n = 1; n <= max_k + max_ell; ++n) {
        for (int k = std::max(0, n - max_ell); k <= std::min(n, max_k); ++k) {
            const int ell = n - k;
            double from_k = kNegInf;  // (k-1, ell) gaining a layer-1 link
            if (k >= 1 && ctx.log_w != kNegInf) {
                from_k = ctx.log_w + table.log_at(k - 1, ell);
            }
            double from_ell = kNegInf;  // (k, ell-1) gaining a layer-2 link
            if (ell >= 1 && n - 1 > 0) {
                from_ell = std::log(static_cast<double>(n - 1)) + table.log_at(k, ell - 1);
            }
            table.log_p[table.idx(k, ell)] =
                log_sum_exp(from_k, from_ell) - std::log(ag + n);
        }
    }
    return table;
}

// ---------------------------------------------------------------------------
// Collapsed distribution P(q, theta)
// ---------------------------------------------------------------------------

/// log of the conditional P(q | theta). theta = 0 yields the point mass at
/// q = 0 (zero-fitness nodes never receive links in either layer).
inline double log_total_degree_conditional(int q, double theta,
                                           const ModelParams& params) {
    if (q < 0) throw DomainError("total_degree_pdf: q must be >= 0");
    const ClosedFormContext ctx = make_context(theta, params);
    if (theta == 0.0) return q == 0 ? 0.0 : kNegInf;
    const double ag = ctx.AG();
    const double y = ctx.w();  // = A beta1 theta / mu, the Gamma-ratio offset
    return std::log(ctx.A) + log_gamma(ag) - log_gamma(y) + log_gamma(q + y) -
           log_gamma(q + 1.0 + ag);
}

/// P(q, theta) = P(q | theta) rho(theta), via the Gamma-ratio closed form;
/// the theta = 0 column falls back to direct summation of the joint.
inline double total_degree_pdf(int q, double theta, const ModelParams& params) {
    const ClosedFormContext ctx = make_context(theta, params);
    if (ctx.rho_theta <= 0.0) return 0.0;
    if (theta == 0.0) {
        // Gamma(y) is singular at y = 0; sum the joint column instead.
        double lse = kNegInf;
        StirlingRowStream rows;
        rows.seek(q);
        for (int k = 0; k <= q; ++k) {
            lse = log_sum_exp(
                lse, detail::log_joint_from_stirling(k, q - k, rows.row().at(k), ctx));
        }
        return std::exp(lse);
    }
    return std::exp(log_total_degree_conditional(q, theta, params) +
                    std::log(ctx.rho_theta));
}

/// Streams the conditional P(q | theta) using the exact term ratio
///   P(q+1|theta) / P(q|theta) = (q + y) / (q + 1 + A G_theta),
/// starting from P(0|theta) = 1 / G_theta. Exact (up to rounding) and
/// independent of the log-Gamma evaluation path.
class ConditionalMarginalStream {
public:
    ConditionalMarginalStream(double theta, const ModelParams& params) {
        const ClosedFormContext ctx = make_context(theta, params);
        ag_ = ctx.AG();
        y_ = theta > 0.0 ? ctx.w() : 0.0;
        p_ = 1.0 / ctx.G_theta;  // theta = 0: G = 1, point mass at q = 0
    }

    int q() const { return q_; }
    double p() const { return p_; }

    void advance() {
        p_ *= (q_ + y_) / (q_ + 1.0 + ag_);
        ++q_;
    }

    /// Estimated conditional mass above the current q (midpoint power-law
    /// integral of the Gamma-ratio tail; relative error O(q^-2)).
    double tail_mass_estimate() const {
        const double x = ag_ - y_ + 1.0;  // = A + 1, the tail exponent
        if (p_ == 0.0) return 0.0;
        const double c = y_ + 0.5 * (x - 1.0);
        // p_q ~ K (q + c)^-x  =>  sum_{r>q} ~ K (q + 1/2 + c)^(1-x) / (x-1)
        const double scale = p_ * std::pow(q_ + c, x);
        return scale * std::pow(q_ + 0.5 + c, 1.0 - x) / (x - 1.0);
    }

private:
    double ag_ = 0.0;
    double y_ = 0.0;
    double p_ = 0.0;
    int q_ = 0;
};

/// Truncated conditional moments: sums q P(q|theta) until the cumulative
/// mass reaches 1 - mass_tol or max_terms is exhausted.
struct TruncatedMoment {
    double mean = 0.0;
    double mass = 0.0;
    long terms = 0;
};

inline TruncatedMoment truncated_conditional_mean(double theta, const ModelParams& params,
                                                  long max_terms = 2'000'000,
                                                  double mass_tol = 1e-7) {
    ConditionalMarginalStream stream(theta, params);
    TruncatedMoment m;
    double mean_comp = 0.0, mass_comp = 0.0;
    for (long i = 0; i < max_terms && m.mass < 1.0 - mass_tol; ++i) {
        double mass_item = stream.p() - mass_comp;
        double mass_next = m.mass + mass_item;
        mass_comp = (mass_next - m.mass) - mass_item;
        m.mass = mass_next;

        double mean_item = stream.q() * stream.p() - mean_comp;
        double mean_next = m.mean + mean_item;
        mean_comp = (mean_next - m.mean) - mean_item;
        m.mean = mean_next;

        ++m.terms;
        stream.advance();
    }
    return m;
}

/// Closed-form total-degree table (joint with rho) for one theta, q <= max_q.
inline constexpr int kMarginalCap = 100000;

inline JointDistributionTable closed_form_marginal_table(int max_q, double theta,
                                                         const ModelParams& params) {
    if (max_q < 0 || max_q > kMarginalCap) {
        throw ResourceError("marginal table bound must lie in [0, 100000]");
    }
    const ClosedFormContext ctx = make_context(theta, params);
    JointDistributionTable table{theta, JointDistributionTable::Kind::TotalQ,
                                 JointDistributionTable::Source::ClosedForm,
                                 max_q, 0, {}};
    table.log_p.assign(max_q + 1, kNegInf);
    if (ctx.rho_theta > 0.0) {
        const double log_rho = std::log(ctx.rho_theta);
        ConditionalMarginalStream stream(theta, params);
        for (int q = 0; q <= max_q; ++q, stream.advance()) {
            table.log_p[q] = stream.p() > 0.0 ? std::log(stream.p()) + log_rho : kNegInf;
        }
    }
    return table;
}

}  // namespace multiplex
