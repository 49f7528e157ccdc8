#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "multiplex/errors.hpp"

namespace multiplex {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// log(exp(a) + exp(b)), safe for -inf arguments.
inline double log_sum_exp(double a, double b) {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    double m = a > b ? a : b;
    return m + std::log1p(std::exp(-(a > b ? a - b : b - a)));
}

/// Natural log of Gamma(x), x > 0. Lanczos approximation (g=7, 9 terms),
/// reflection below 0.5; relative error of the implied Gamma ~1e-14.
inline double log_gamma(double x) {
    if (!(x > 0.0)) throw DomainError("log_gamma: requires x > 0");
    static constexpr double kCoeff[9] = {
        0.99999999999980993,
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    };
    if (x < 0.5) {
        // Gamma(x) Gamma(1-x) = pi / sin(pi x)
        return std::log(M_PI) - std::log(std::sin(M_PI * x)) - log_gamma(1.0 - x);
    }
    double z = x - 1.0;
    double a = kCoeff[0];
    for (int i = 1; i < 9; ++i) a += kCoeff[i] / (z + i);
    double t = z + 7.5;
    return 0.5 * std::log(2.0 * M_PI) + (z + 0.5) * std::log(t) - t + std::log(a);
}

// ---------------------------------------------------------------------------
// Unsigned Stirling numbers of the first kind, [n k]:
//   [n+1 k] = [n k-1] + n [n k],  [0 0] = 1.
// ---------------------------------------------------------------------------

inline constexpr int kStirlingExactCap = 25;  // row sums stay within 128 bits
inline constexpr int kLogStirlingRowCap = 5000;

/// Exact [n k] for 0 <= k <= n <= 25.
inline unsigned __int128 stirling1u_exact(int n, int k) {
    if (n < 0 || k < 0 || k > n || n > kStirlingExactCap) {
        throw DomainError("stirling1u_exact: need 0 <= k <= n <= 25");
    }
    std::vector<unsigned __int128> row{1};  // row 0
    for (int m = 0; m < n; ++m) {
        std::vector<unsigned __int128> next(m + 2, 0);
        for (int j = 0; j <= m; ++j) {
            next[j + 1] += row[j];
            next[j] += static_cast<unsigned __int128>(m) * row[j];
        }
        row = std::move(next);
    }
    return row[k];
}

/// Decimal rendering of a 128-bit value (test/report convenience).
inline std::string uint128_to_string(unsigned __int128 v) {
    if (v == 0) return "0";
    std::string s;
    while (v > 0) {
        s.insert(s.begin(), static_cast<char>('0' + static_cast<int>(v % 10)));
        v /= 10;
    }
    return s;
}

/// One row of log([n k]) for k = 0..n; log 0 stored as -inf.
struct LogStirlingRow {
    int n = 0;
    std::vector<double> values;  // size n+1

    double at(int k) const { return (k < 0 || k > n) ? kNegInf : values[k]; }
};

/// Iterates Stirling rows in log space, holding only the active row.
/// Row n costs O(n); a full sweep to row N costs O(N^2) time, O(N) space.
class StirlingRowStream {
public:
    StirlingRowStream() : row_{0, {0.0}} {}

    const LogStirlingRow& row() const { return row_; }

    const LogStirlingRow& advance() {
        int n = row_.n;
        if (n + 1 > kLogStirlingRowCap) {
            throw ResourceError("Stirling row cap exceeded (" +
                                std::to_string(kLogStirlingRowCap) + ")");
        }
        std::vector<double> next(n + 2);
        double log_n = n > 0 ? std::log(static_cast<double>(n)) : kNegInf;
        next[0] = kNegInf;  // [n+1 0] = 0 for n+1 >= 1
        for (int k = 1; k <= n; ++k) {
            next[k] = log_sum_exp(row_.values[k - 1], log_n + row_.values[k]);
        }
        next[n + 1] = 0.0;  // [n n] = 1
        row_.n = n + 1;
        row_.values = std::move(next);
        return row_;
    }

    /// Advances until row n is active.
    const LogStirlingRow& seek(int n) {
        if (n < row_.n) throw DomainError("StirlingRowStream: cannot seek backwards");
        while (row_.n < n) advance();
        return row_;
    }

private:
    LogStirlingRow row_;
};

/// Row n computed from scratch (O(n^2)).
inline LogStirlingRow log_stirling_row(int n) {
    if (n < 0) throw DomainError("log_stirling_row: n must be >= 0");
    if (n > kLogStirlingRowCap) {
        throw ResourceError("Stirling row cap exceeded (" +
                            std::to_string(kLogStirlingRowCap) + ")");
    }
    StirlingRowStream stream;
    return stream.seek(n);
}

// ---------------------------------------------------------------------------
// Gamma-ratio closed forms
// ---------------------------------------------------------------------------

/// log of the generalized binomial coefficient C(a, b) = G(a+1)/(G(b+1)G(a-b+1)),
/// a and b real, restricted to the all-positive-argument regime.
inline double log_binomial_general(double a, double b) {
    if (!(a + 1.0 > 0.0) || !(b + 1.0 > 0.0) || !(a - b + 1.0 > 0.0)) {
        throw DomainError("log_binomial_general: a+1, b+1, a-b+1 must all be positive");
    }
    return log_gamma(a + 1.0) - log_gamma(b + 1.0) - log_gamma(a - b + 1.0);
}

/// Closed form of sum_{q>=0} Gamma(q+y)/Gamma(q+x+y)  =  Gamma(y) / ((x-1) Gamma(y-1+x)).
inline double gamma_ratio_sum_rhs(double x, double y) {
    if (!(x > 1.0)) throw DomainError("gamma_ratio_sum_rhs: requires x > 1 (series diverges)");
    if (!(y > 0.0)) throw DomainError("gamma_ratio_sum_rhs: requires y > 0");
    return std::exp(log_gamma(y) - log_gamma(y - 1.0 + x) - std::log(x - 1.0));
}

/// Closed form of sum_{q>=0} q Gamma(q+y)/Gamma(q+x+y+1)
///   =  Gamma(y)/Gamma(x+y-1) * y / (x (x-1) (x+y-1)).
inline double gamma_ratio_weighted_sum_rhs(double x, double y) {
    if (!(x > 1.0)) throw DomainError("gamma_ratio_weighted_sum_rhs: requires x > 1");
    if (!(y > 0.0)) throw DomainError("gamma_ratio_weighted_sum_rhs: requires y > 0");
    return std::exp(log_gamma(y) - log_gamma(x + y - 1.0)) * y /
           (x * (x - 1.0) * (x + y - 1.0));
}

/// Partial sum of a Gamma-ratio series plus a monotone tail estimate.
struct SeriesResult {
    double partial = 0.0;   // sum of the first `terms` terms
    double tail = 0.0;      // estimate of the remainder (midpoint power-law integral)

    double total() const { return partial + tail; }
};

/// Direct evaluation of sum_{q>=0} Gamma(q+y)/Gamma(q+x+y) by streaming the
/// exact term ratio t_{q+1}/t_q = (q+y)/(q+x+y). Tail beyond `terms` uses
/// t_q ~ (q + y + (x-1)/2)^-x, integrated from terms - 1/2; the relative
/// error of that estimate is O(terms^-2) of the tail.
inline SeriesResult gamma_ratio_sum_series(double x, double y, long terms) {
    if (!(x > 1.0) || !(y > 0.0)) throw DomainError("gamma_ratio_sum_series: x > 1, y > 0");
    double t = std::exp(log_gamma(y) - log_gamma(x + y));
    double sum = 0.0, comp = 0.0;
    for (long q = 0; q < terms; ++q) {
        double item = t - comp;  // Kahan
        double next = sum + item;
        comp = (next - sum) - item;
        sum = next;
        t *= (q + y) / (q + x + y);
    }
    double base = static_cast<double>(terms) - 0.5 + y + 0.5 * (x - 1.0);
    SeriesResult r;
    r.partial = sum;
    r.tail = std::pow(base, 1.0 - x) / (x - 1.0);
    return r;
}

/// Same for sum_{q>=0} q Gamma(q+y)/Gamma(q+x+y+1); term ratio
/// s_{q+1}/s_q = (q+y)/(q+1+x+y) on s_q = Gamma(q+y)/Gamma(q+x+y+1).
inline SeriesResult gamma_ratio_weighted_sum_series(double x, double y, long terms) {
    if (!(x > 1.0) || !(y > 0.0)) {
        throw DomainError("gamma_ratio_weighted_sum_series: x > 1, y > 0");
    }
    double s = std::exp(log_gamma(y) - log_gamma(x + y + 1.0));
    double sum = 0.0, comp = 0.0;
    for (long q = 0; q < terms; ++q) {
        double item = static_cast<double>(q) * s - comp;
        double next = sum + item;
        comp = (next - sum) - item;
        sum = next;
        s *= (q + y) / (q + 1.0 + x + y);
    }
    // q s_q ~ (q+c)^-x - c (q+c)^-(x+1), c = y + x/2
    double c = y + 0.5 * x;
    double base = static_cast<double>(terms) - 0.5 + c;
    SeriesResult r;
    r.partial = sum;
    r.tail = std::pow(base, 1.0 - x) / (x - 1.0) - c * std::pow(base, -x) / x;
    return r;
}

}  // namespace multiplex
