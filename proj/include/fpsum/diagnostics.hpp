#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "fpsum/charfn.hpp"
#include "fpsum/deviations.hpp"
#include "fpsum/expansion.hpp"
#include "fpsum/moments.hpp"
#include "fpsum/oracle.hpp"

namespace fpsum {

/// sup_u |P{S < u scale + center} - approx(u)| for a lattice law.  The sup is
/// attained at the standardized atoms; both one-sided limits of the step
/// function are compared against the approximant there.
inline double sup_distance(const ExactDistribution& exact, double center, double scale,
                           const std::function<double(double)>& approx) {
    double sup = 0.0, below = 0.0;
    for (std::size_t i = 0; i < exact.size(); ++i) {
        double mass = exact.probs()[i];
        if (mass == 0.0) continue;
        double u = (exact.value_d(i) - center) / scale;
        double at = approx(u);
        sup = std::max(sup, std::abs(below - at));
        below += mass;
        // Right shoulder: exact for a continuous approximant evaluated at u;
        // the nudged evaluation covers the law's own left-continuous CDF.
        double nudged = approx(u + 4e-9 * (1.0 + std::abs(u)));
        sup = std::max(sup, std::min(std::abs(below - at), std::abs(below - nudged)));
    }
    return sup;
}

/// Oscillation bounds chi_1N / chi_2N of (3.5)-type:
///   chi_1N = sqrt(nq) ln(d1) exp{ -n  (1 - sup_t N^-1 sum_m |E e^{itY_m}|) },
///   chi_2N = sqrt(nq) ln(d1) exp{ -2nq(1 - sup_t N^-1 |sum_m E e^{itY_m}|) },
/// with the sup over t in [d0, d1].  d0 >= d1 contributes zero.  Values are
/// clamped at zero (ln d1 < 0 makes the printed bound vacuous).
struct ChiBounds {
    double chi1 = 0.0;
    double chi2 = 0.0;
    double chi_min = 0.0;
    double sup_mean_abs = 0.0;  // sup of N^-1 sum |E e^{itY}|
    double sup_abs_mean = 0.0;  // sup of N^-1 |sum E e^{itY}|
};

inline ChiBounds chi_bounds(const Population& pop, const Design& design, double d0, double d1) {
    ChiBounds out;
    if (!(d0 < d1)) return out;  // indicator I{d0 < d1}

    auto mean_abs = [&](double t) {
        double acc = 0.0;
        for (const auto& e : pop.elements()) {
            std::complex<double> chf = 0.0;
            for (std::size_t i = 0; i < e.atom_values().size(); ++i)
                chf += e.atom_probs()[i] * std::polar(1.0, t * e.atom_values()[i]);
            acc += std::abs(chf);
        }
        return acc / pop.size();
    };
    auto abs_mean = [&](double t) {
        std::complex<double> acc = 0.0;
        for (const auto& e : pop.elements())
            for (std::size_t i = 0; i < e.atom_values().size(); ++i)
                acc += e.atom_probs()[i] * std::polar(1.0, t * e.atom_values()[i]);
        return std::abs(acc) / pop.size();
    };

    // Dense grid, step tied to the Lipschitz scale of the trigonometric sums,
    // then golden-section refinement around every grid-local maximum.
    auto sup_of = [&](const std::function<double(double)>& f) {
        double lip = std::max(pop.max_abs_support(), 1e-9);
        double step = 0.01 / lip;
        std::size_t points = static_cast<std::size_t>(std::ceil((d1 - d0) / step)) + 1;
        points = std::min<std::size_t>(std::max<std::size_t>(points, 8), 2'000'000);
        std::vector<double> vals(points);
        auto at = [&](std::size_t i) { return d0 + (d1 - d0) * static_cast<double>(i) / (points - 1); };
        for (std::size_t i = 0; i < points; ++i) vals[i] = f(at(i));
        double best = 0.0;
        const double inv_phi = 0.6180339887498949;
        for (std::size_t i = 0; i < points; ++i) {
            best = std::max(best, vals[i]);
            bool local_max = (i == 0 || vals[i] >= vals[i - 1]) &&
                             (i + 1 == points || vals[i] >= vals[i + 1]);
            if (!local_max) continue;
            double a = at(i == 0 ? 0 : i - 1);
            double b = at(i + 1 >= points ? points - 1 : i + 1);
            double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
            double f1 = f(x1), f2 = f(x2);
            for (int round = 0; round < 3; ++round) {
                if (f1 < f2) {
                    a = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = a + inv_phi * (b - a);
                    f2 = f(x2);
                } else {
                    b = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = b - inv_phi * (b - a);
                    f1 = f(x1);
                }
            }
            best = std::max({best, f1, f2});
        }
        return std::min(best, 1.0);
    };

    out.sup_mean_abs = sup_of(mean_abs);
    out.sup_abs_mean = sup_of(abs_mean);

    double nq = design.nq();
    double front = std::sqrt(nq) * std::log(d1);
    out.chi1 = std::max(0.0, front * std::exp(-design.n * (1.0 - out.sup_mean_abs)));
    out.chi2 = std::max(0.0, front * std::exp(-2.0 * nq * (1.0 - out.sup_abs_mean)));
    out.chi_min = std::min(out.chi1, out.chi2);
    return out;
}

/// One Berry-Esseen rate bundle: the bracketed expressions of the order-j
/// corollaries with the unknown universal constants stripped.  Callers fit
/// empirical constants against measured errors; nothing here claims a bound.
struct RateBundle {
    int j = 1;
    double delta = 1.0;
    double k = 0.0;             // moment order 1 + j + delta actually used
    double beta_rate = 0.0;     // beta_{k} + (nq)^{-(j-1+delta)/2} [+ chi]
    double beta_hat_rate = 0.0; // hat variant (j >= 2)
    double mu_rate = 0.0;       // mu_{k} [+ chi]
    double chi_d0 = 0.0;
    double chi_d1_beta = 0.0;
    double chi_d1_hat = 0.0;
    double chi_beta = 0.0;      // min(chi1, chi2) at the beta-variant range
    double chi_hat = 0.0;       // min(chi1, chi2) at the hat/mu-variant range
};

inline RateBundle rate_terms(const Population& pop, const Design& design, double delta, int j) {
    if (j < 1 || j > 3) throw UnsupportedOrder("rate_terms needs j in {1,2,3}");
    MomentSummary ms = moment_summary(pop, design);
    RatioSummary rs = ratio_summary(pop, design, delta);

    RateBundle out;
    out.j = j;
    out.delta = delta;
    out.k = 1.0 + j + delta;
    double nq = ms.nq();
    double tail = std::pow(nq, -(static_cast<double>(j) - 1.0 + delta) / 2.0);

    if (j == 1) {
        out.beta_rate = rs.beta(out.k) + tail;
        out.beta_hat_rate = rs.beta_hat(out.k) + tail;
        out.mu_rate = rs.mu(out.k);
        return out;
    }

    out.chi_d0 = 0.04 * ms.sigma2 / ms.V[3];
    out.chi_d1_beta = 1.0 / (rs.beta(out.k) * ms.sigma_sqrt_n());
    double s = ms.sigma();
    out.chi_d1_hat = (j == 2)
                         ? std::pow(2.0, -(1.0 + delta)) *
                               std::sqrt(std::pow(static_cast<double>(ms.n), delta) * std::pow(s, 1.0 + delta))
                         : std::pow(2.0, -(2.0 + delta)) *
                               std::sqrt(std::pow(static_cast<double>(ms.n), 1.0 + delta) * std::pow(s, 2.0 + delta));

    out.chi_beta = chi_bounds(pop, design, out.chi_d0, out.chi_d1_beta).chi_min;
    out.chi_hat = chi_bounds(pop, design, out.chi_d0, out.chi_d1_hat).chi_min;

    out.beta_rate = rs.beta(out.k) + tail + out.chi_beta;
    out.beta_hat_rate = rs.beta_hat(out.k) + tail + out.chi_hat;
    out.mu_rate = rs.mu(out.k) + out.chi_hat;
    return out;
}

/// Moment-expansion residuals: how far the exact third/fourth central moments
/// of S_nN sit from their leading expansion terms, normalized by the stated
/// remainder scale so a bounded constant is the expected behavior.
struct MomentResiduals {
    double m3_exact = 0.0;
    double m4_exact = 0.0;
    double r3 = 0.0;
    double r4 = 0.0;
};

inline MomentResiduals moment_expansion_check(const Population& pop, const Design& design, double delta,
                                              std::size_t budget = kDefaultDpBudget) {
    MomentSummary ms = moment_summary(pop, design);
    RatioSummary rs = ratio_summary(pop, design, delta);
    ExactDistribution dist = exact_distribution(pop, design, budget);

    MomentResiduals out;
    out.m3_exact = dist.central_moment(3);
    out.m4_exact = dist.central_moment(4);

    double n = ms.n;
    double nq = ms.nq();
    double s = ms.sigma();
    double tail = std::pow(nq, -(1.0 + delta / 2.0));
    out.r3 = std::abs(out.m3_exact - n * ms.lambda1) /
             (std::pow(n, 1.5) * s * s * s * (rs.beta(3.0 + delta) + tail));
    double n2s4 = n * n * ms.sigma2 * ms.sigma2;
    double lead4 = 3.0 + ms.lambda2 / (n * ms.sigma2 * ms.sigma2) +
                   4.0 * ms.p * ms.q * ms.a02 / (n * ms.sigma2);
    out.r4 = std::abs(out.m4_exact / n2s4 - lead4) / (rs.beta(4.0 + delta) + tail);
    return out;
}

/// Everything the compare front-end reports for one (population, design).
struct DiagnosticsReport {
    int N = 0, n = 0;
    double delta = 1.0;
    double gamma = 0.0, sigma2 = 0.0;

    std::array<double, 4> delta_j{};          // Delta_1..Delta_3 (index by j)
    std::vector<std::pair<double, double>> lindeberg_curve;  // (eps, L_2N(eps))
    std::array<double, 4> chf_error{};        // max_{|t|<=3} |phi_n - W_j|
    std::vector<RateBundle> rates;            // j = 1, 2, 3
    std::array<double, 4> T{};                // thresholds T_{j,N}
    std::array<double, 4> T_tilde{};
    MomentResiduals moments;
    ChiBounds chi;                            // at the Corollary 3.1(b) range
    std::vector<std::array<double, 4>> tail_table;  // x, exact ratio, approx, plain-normal error
};

struct DiagnosticsOptions {
    double delta = 1.0;
    std::vector<double> lindeberg_eps{0.1, 0.25, 0.5, 1.0};
    std::vector<double> tail_x{0.5, 1.0, 1.5, 2.0};
    double chf_t_max = 3.0;
    int chf_t_points = 61;
    std::size_t dp_budget = kDefaultDpBudget;
};

inline DiagnosticsReport build_diagnostics(const Population& pop, const Design& design,
                                           const DiagnosticsOptions& opt = {}) {
    MomentSummary ms = moment_summary(pop, design);
    RatioSummary rs = ratio_summary(pop, design, opt.delta);
    ExactDistribution dist = exact_distribution(pop, design, opt.dp_budget);
    ChfEvaluator chf(pop, design);

    DiagnosticsReport rep;
    rep.N = ms.N;
    rep.n = ms.n;
    rep.delta = opt.delta;
    rep.gamma = ms.gamma;
    rep.sigma2 = ms.sigma2;

    double center = ms.n * ms.gamma;
    double scale = ms.sigma_sqrt_n();
    for (int j = 1; j <= 3; ++j) {
        EdgeworthApproximant ea = cdf_approximant(ms, j);
        rep.delta_j[static_cast<std::size_t>(j)] =
            sup_distance(dist, center, scale, [&](double u) { return ea.cdf(u); });
        double worst = 0.0;
        for (int i = 0; i < opt.chf_t_points; ++i) {
            double t = opt.chf_t_max * static_cast<double>(i) / (opt.chf_t_points - 1);
            worst = std::max(worst, std::abs(chf.phi_n(t) - ea.chf(t)));
        }
        rep.chf_error[static_cast<std::size_t>(j)] = worst;
        rep.rates.push_back(rate_terms(pop, design, opt.delta, j));
    }
    for (double eps : opt.lindeberg_eps)
        rep.lindeberg_curve.emplace_back(eps, lindeberg(pop, design, eps).l2n);
    rep.T = rs.T;
    rep.T_tilde = rs.T_tilde;
    rep.moments = moment_expansion_check(pop, design, opt.delta, opt.dp_budget);
    rep.chi = chi_bounds(pop, design, 0.04 * ms.sigma2 / ms.V[3],
                         1.0 / (rs.beta(3.0 + opt.delta) * ms.sigma_sqrt_n()));

    TailRatioModel model(ld_coefficients_general(ms), ms.N);
    for (double x : opt.tail_x) {
        double exact_upper = (1.0 - dist.cdf_left(x * scale + center)) / std_normal_sf(x);
        double approx = model.ratio(x, TailSide::Upper).value;
        rep.tail_table.push_back({x, exact_upper, approx, std::abs(exact_upper - 1.0)});
    }
    return rep;
}

}  // namespace fpsum
