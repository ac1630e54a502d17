#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <functional>

#include "fpsum/errors.hpp"

namespace fpsum {

namespace detail {

// 16-point Gauss-Legendre nodes/weights on [-1, 1].
inline constexpr std::array<double, 8> kGl16Nodes = {
    0.0950125098376374401853, 0.2816035507792589132305, 0.4580167776572273863424,
    0.6178762444026437484467, 0.7554044083550030338951, 0.8656312023878317438805,
    0.9445750230732325760780, 0.9894009349916499325962};
inline constexpr std::array<double, 8> kGl16Weights = {
    0.1894506104550684962854, 0.1826034150449235888667, 0.1691565193950025381893,
    0.1495959888165767320815, 0.1246289712555338720525, 0.0951585116824927848099,
    0.0622535239386478928628, 0.0271524594117540948518};

template <typename F>
std::complex<double> gl16(const F& f, double a, double b) {
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    std::complex<double> acc = 0.0;
    for (std::size_t i = 0; i < 8; ++i) {
        double x = half * kGl16Nodes[i];
        acc += kGl16Weights[i] * (f(mid + x) + f(mid - x));
    }
    return half * acc;
}

template <typename F>
std::complex<double> panel_adaptive(const F& f, double a, double b, double tol, int depth,
                                    std::complex<double> whole) {
    double mid = 0.5 * (a + b);
    std::complex<double> left = gl16(f, a, mid);
    std::complex<double> right = gl16(f, mid, b);
    double err = std::abs(left + right - whole);
    if (err <= tol || depth <= 0) {
        if (err > tol)
            throw QuadratureFailure("adaptive quadrature stalled before reaching its target");
        return left + right;
    }
    return panel_adaptive(f, a, mid, 0.5 * tol, depth - 1, left) +
           panel_adaptive(f, mid, b, 0.5 * tol, depth - 1, right);
}

}  // namespace detail

/// Adaptive panel Gauss-Legendre over [a, b].  The interval is first cut into
/// `initial_panels` equal panels (callers size this to the integrand's
/// oscillation count), then each panel is bisected until the GL16 halves
/// agree with the whole to the per-panel share of `abs_tol`.
template <typename F>
std::complex<double> integrate_adaptive(const F& f, double a, double b, double abs_tol,
                                        int initial_panels = 8, int max_depth = 24) {
    if (!(b > a)) return 0.0;
    if (initial_panels < 1) initial_panels = 1;
    double width = (b - a) / initial_panels;
    double panel_tol = abs_tol / initial_panels;
    std::complex<double> total = 0.0;
    for (int k = 0; k < initial_panels; ++k) {
        double lo = a + k * width;
        double hi = (k + 1 == initial_panels) ? b : lo + width;
        std::complex<double> whole = detail::gl16(f, lo, hi);
        total += detail::panel_adaptive(f, lo, hi, panel_tol, max_depth, whole);
    }
    return total;
}

}  // namespace fpsum
