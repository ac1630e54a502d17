#pragma once

#include <cmath>
#include <vector>

#include "fpsum/errors.hpp"

namespace fpsum {

inline constexpr double kSqrt2 = 1.4142135623730950488;
inline constexpr double kSqrt2Pi = 2.5066282746310005024;

/// Standard normal CDF.  Evaluated through erfc so that both tails keep full
/// relative accuracy (tail ratios are queried out to |u| ~ 6).
inline double std_normal_cdf(double u) { return 0.5 * std::erfc(-u / kSqrt2); }

/// Upper tail 1 - Phi(u), without cancellation for large u.
inline double std_normal_sf(double u) { return 0.5 * std::erfc(u / kSqrt2); }

inline double std_normal_pdf(double u) { return std::exp(-0.5 * u * u) / kSqrt2Pi; }

/// Hermite-Chebyshev (probabilists') polynomial H_v at u, via the recurrence
/// H_{v+1}(u) = u H_v(u) - v H_{v-1}(u), H_0 = 1, H_1 = u.
inline double hermite(int v, double u) {
    if (v < 0) throw UnsupportedOrder("hermite order must be >= 0");
    if (v == 0) return 1.0;
    double prev = 1.0, cur = u;
    for (int k = 1; k < v; ++k) {
        double next = u * cur - static_cast<double>(k) * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

/// Monomial coefficients of H_v, index = power of u.  Coefficients are exact
/// integers (stored as doubles) for the orders used here.
struct HermiteTable {
    int order = 0;
    std::vector<double> coeffs;  // coeffs[k] multiplies u^k

    static HermiteTable make(int v) {
        if (v < 0) throw UnsupportedOrder("hermite order must be >= 0");
        std::vector<double> prev{1.0};
        if (v == 0) return {0, prev};
        std::vector<double> cur{0.0, 1.0};
        for (int k = 1; k < v; ++k) {
            std::vector<double> next(cur.size() + 1, 0.0);
            for (std::size_t j = 0; j < cur.size(); ++j) next[j + 1] += cur[j];
            for (std::size_t j = 0; j < prev.size(); ++j) next[j] -= static_cast<double>(k) * prev[j];
            prev = std::move(cur);
            cur = std::move(next);
        }
        return {v, cur};
    }

    [[nodiscard]] double eval(double u) const {
        double acc = 0.0;
        for (std::size_t j = coeffs.size(); j-- > 0;) acc = acc * u + coeffs[j];
        return acc;
    }
};

/// k-th moment of the standard normal: 0 for odd k, (k-1)!! for even k.
inline double gaussian_moment(int k) {
    if (k < 0) throw UnsupportedOrder("gaussian moment order must be >= 0");
    if (k % 2 == 1) return 0.0;
    double acc = 1.0;
    for (int j = k - 1; j >= 2; j -= 2) acc *= static_cast<double>(j);
    return acc;
}

}  // namespace fpsum
