#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "multiplex/analytics.hpp"
#include "multiplex/params.hpp"
#include "multiplex/special.hpp"

namespace multiplex {

/// One numeric verification: a measured deviation against its tolerance.
struct CheckRow {
    std::string name;
    double deviation = 0.0;
    double tolerance = 0.0;

    bool pass() const { return deviation <= tolerance; }
};

/// Compact rendering of grid labels (1.5 -> "1.5", 2.0 -> "2").
inline std::string format_grid(double v) {
    if (v == std::floor(v)) return std::to_string(static_cast<long long>(v));
    std::string s = std::to_string(v);
    while (s.back() == '0') s.pop_back();
    return s;
}

/// Gamma-ratio summation identities verified by partial sums (1e6 terms
/// plus monotone tail estimate) against the closed forms, over the
/// x in {1.5, 2, 2.5, 3, 5} x y in {0.5, 1, 2, 9} grid.
inline std::vector<CheckRow> identity_grid_checks(long terms = 1'000'000,
                                                  double tol = 1e-5) {
    std::vector<CheckRow> rows;
    for (double x : {1.5, 2.0, 2.5, 3.0, 5.0}) {
        for (double y : {0.5, 1.0, 2.0, 9.0}) {
            {
                const double rhs = gamma_ratio_sum_rhs(x, y);
                const SeriesResult lhs = gamma_ratio_sum_series(x, y, terms);
                rows.push_back({"sum_identity(x=" + format_grid(x) + ",y=" + format_grid(y) + ")",
                                std::abs(lhs.total() - rhs) / rhs, tol});
            }
            {
                const double rhs = gamma_ratio_weighted_sum_rhs(x, y);
                const SeriesResult lhs = gamma_ratio_weighted_sum_series(x, y, terms);
                rows.push_back({"weighted_identity(x=" + format_grid(x) + ",y=" + format_grid(y) + ")",
                                std::abs(lhs.total() - rhs) / rhs, tol});
            }
        }
    }
    return rows;
}

/// Max relative deviation between the closed-form joint and the recurrence
/// oracle over k + ell <= diag_cap (log-space comparison; cells that are
/// exactly zero in both are in agreement).
inline double oracle_max_rel_deviation(const ModelParams& params, double theta,
                                       int diag_cap) {
    JointDistributionTable closed =
        closed_form_joint_table(diag_cap, diag_cap, theta, params);
    JointDistributionTable oracle = recurrence_oracle(diag_cap, diag_cap, theta, params);
    double worst = 0.0;
    for (int k = 0; k <= diag_cap; ++k) {
        for (int ell = 0; k + ell <= diag_cap; ++ell) {
            const double a = closed.log_at(k, ell);
            const double b = oracle.log_at(k, ell);
            if (a == kNegInf && b == kNegInf) continue;
            // |exp(a-b) - 1| ~ |a - b| at these magnitudes
            const double dev = std::abs(std::expm1(a - b));
            if (dev > worst) worst = dev;
        }
    }
    return worst;
}

/// Closed form vs recurrence across the standard parameter grid
/// (beta pairs (1,1), (2,4), (8,4); theta in {0,1,2,5}; geometric fitness).
inline std::vector<CheckRow> oracle_grid_checks(int diag_cap = 50, double tol = 1e-10) {
    std::vector<CheckRow> rows;
    for (auto [b1, b2] : {std::pair{1u, 1u}, {2u, 4u}, {8u, 4u}}) {
        ModelParams params{.beta1 = b1, .beta2 = b2,
                           .fitness = FitnessDistribution(GeometricDecay{0.9})};
        for (double theta : {0.0, 1.0, 2.0, 5.0}) {
            rows.push_back({"oracle(beta=" + std::to_string(b1) + "," + std::to_string(b2) +
                                ",theta=" + format_grid(theta) + ")",
                            oracle_max_rel_deviation(params, theta, diag_cap), tol});
        }
    }
    return rows;
}

/// Log-space Stirling row against the exact 128-bit values at n = 25.
inline CheckRow stirling_row_check() {
    const LogStirlingRow row = log_stirling_row(25);
    double worst = 0.0;
    for (int k = 1; k <= 25; ++k) {
        const double exact = std::log(static_cast<double>(stirling1u_exact(25, k)));
        const double dev = std::abs(row.values[k] - exact);
        if (dev > worst) worst = dev;
    }
    return {"stirling_row(n=25)", worst, 1e-10};
}

}  // namespace multiplex
