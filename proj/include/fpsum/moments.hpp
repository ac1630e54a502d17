#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "fpsum/errors.hpp"
#include "fpsum/population.hpp"

namespace fpsum {

inline constexpr double kZeroVarianceTol = 1e-14;

/// Centralized population moments.
///
/// gamma and sigma2 follow
///   gamma  = N^-1 sum E Y_m,
///   sigma2 = N^-1 sum [ E(Y_m - gamma)^2 - p (E(Y_m - gamma))^2 ],
/// and the standardized pair is Z~_m = Z_m/(sigma sqrt n),
/// xi~_m = (xi_m - p)/sqrt(nq) with Z_m = (Y_m - gamma) xi_m - p E(Y_m - gamma),
/// xi_m ~ Bi(p) independent of Y_m.  Every expectation below is an exact
/// finite sum over support(Y_m) x {0,1}.
struct MomentSummary {
    int N = 0;
    int n = 0;
    double p = 0.0, q = 0.0;

    double gamma = 0.0;
    double sigma2 = 0.0;

    // alpha_{kl} = N^-1 sum (E(Y-gamma)^k) (E(Y-gamma))^l ; a20_2 is the
    // squared-second-moment variant alpha_20^{(2)}.
    double a20 = 0.0, a02 = 0.0;
    double a30 = 0.0, a21 = 0.0, a03 = 0.0;
    double a40 = 0.0, a31 = 0.0, a22 = 0.0, a04 = 0.0;
    double a20_2 = 0.0;

    double lambda1 = 0.0;  // a30 - 3p a21 + 2p^2 a03
    double lambda2 = 0.0;  // a40 - 4p a31 + 12p^2 a22 - 6p^3 a04 - 3p a20_2 - 3q (a20 - 2p a02)^2

    // Sums over m of standardized moments.
    double sum_z2 = 0.0;      // sum E Z~^2   (= 1)
    double sum_z3 = 0.0;      // sum E Z~^3
    double sum_z4 = 0.0;      // sum E Z~^4
    double sum_z2_sq = 0.0;   // sum (E Z~^2)^2
    double sum_z2xi = 0.0;    // sum E Z~^2 xi~
    double sum_z3_sq = 0.0;   // sum (E Z~^3)^2
    double sum_cov_zxi = 0.0; // sum E Z~ xi~  (= 0)

    // Mixed-moment sums s[a][b] = sum_m E Z~^a xi~^b for a + b <= 4; these are
    // the cumulant inputs of the expansion polynomials.
    std::array<std::array<double, 5>, 5> s{};

    // Sums over m of products of per-element second moments
    // (v = E Z~^2, w = E Z~ xi~, u = E xi~^2).
    double pair_vv = 0.0, pair_vw = 0.0, pair_vu = 0.0;
    double pair_ww = 0.0, pair_wu = 0.0, pair_uu = 0.0;

    // V_k = N^-1 sum E|Y_m - gamma|^k, k = 1..5.
    std::array<double, 6> V{};

    [[nodiscard]] double sigma() const { return std::sqrt(sigma2); }
    [[nodiscard]] double sigma_sqrt_n() const { return std::sqrt(sigma2 * n); }
    [[nodiscard]] double nq() const { return static_cast<double>(n) * q; }
};

namespace detail {

/// Exact E Z^a (xi - p)^b about the two xi branches, unnormalized.
inline double mixed_raw(const PopulationElement& elem, double gamma, double p, int a, int b) {
    double q = 1.0 - p;
    double c = elem.mean() - gamma;
    double z0 = -p * c;  // xi = 0 branch value of Z
    double term0 = q * PopulationElement::int_pow(z0, a) * PopulationElement::int_pow(-p, b);
    // xi = 1: Z = (Y - gamma) - p c, averaged over the law of Y
    double ez1 = elem.power_moment(a, gamma + p * c);
    double term1 = p * ez1 * PopulationElement::int_pow(q, b);
    return term0 + term1;
}

/// Exact E |Z|^k, unnormalized, k possibly fractional.
inline double abs_z_raw(const PopulationElement& elem, double gamma, double p, double k) {
    double q = 1.0 - p;
    double c = elem.mean() - gamma;
    return q * std::pow(std::abs(p * c), k) + p * elem.abs_moment(k, gamma + p * c);
}

}  // namespace detail

/// Computes every centralized moment of the population/design pair.
/// Throws DegenerateDesign for n = N and ZeroVariance when sigma2 vanishes.
inline MomentSummary moment_summary(const Population& pop, const Design& design) {
    design.require_partial("moment_summary");
    const int N = pop.size();
    if (design.N != N) throw ParseError("design N does not match population size");

    MomentSummary ms;
    ms.N = N;
    ms.n = design.n;
    ms.p = design.p();
    ms.q = design.q();
    const double p = ms.p;

    double gamma = 0.0;
    for (const auto& e : pop.elements()) gamma += e.mean();
    gamma /= N;
    ms.gamma = gamma;

    for (const auto& e : pop.elements()) {
        double c = e.mean() - gamma;
        double e2 = e.power_moment(2, gamma);
        double e3 = e.power_moment(3, gamma);
        double e4 = e.power_moment(4, gamma);
        ms.a20 += e2;
        ms.a02 += c * c;
        ms.a30 += e3;
        ms.a21 += e2 * c;
        ms.a03 += c * c * c;
        ms.a40 += e4;
        ms.a31 += e3 * c;
        ms.a22 += e2 * c * c;
        ms.a04 += c * c * c * c;
        ms.a20_2 += e2 * e2;
        for (int k = 1; k <= 5; ++k) ms.V[static_cast<std::size_t>(k)] += e.abs_moment(k, gamma);
    }
    ms.a20 /= N;
    ms.a02 /= N;
    ms.a30 /= N;
    ms.a21 /= N;
    ms.a03 /= N;
    ms.a40 /= N;
    ms.a31 /= N;
    ms.a22 /= N;
    ms.a04 /= N;
    ms.a20_2 /= N;
    for (int k = 1; k <= 5; ++k) ms.V[static_cast<std::size_t>(k)] /= N;

    ms.sigma2 = ms.a20 - p * ms.a02;
    if (!(ms.sigma2 > kZeroVarianceTol * std::max(ms.a20, 1e-300)))
        throw ZeroVariance("population variance sigma2 is numerically zero");

    ms.lambda1 = ms.a30 - 3.0 * p * ms.a21 + 2.0 * p * p * ms.a03;
    double d = ms.a20 - 2.0 * p * ms.a02;
    ms.lambda2 = ms.a40 - 4.0 * p * ms.a31 + 12.0 * p * p * ms.a22 - 6.0 * p * p * p * ms.a04 -
                 3.0 * p * ms.a20_2 - 3.0 * ms.q * d * d;

    const double sz = ms.sigma_sqrt_n();           // sigma sqrt(n)
    const double sxi = std::sqrt(ms.nq());         // sqrt(nq)
    for (const auto& e : pop.elements()) {
        double zpow[5], xpow[5];
        zpow[0] = xpow[0] = 1.0;
        for (int k = 1; k <= 4; ++k) {
            zpow[k] = zpow[k - 1] * sz;
            xpow[k] = xpow[k - 1] * sxi;
        }
        double m_ab[5][5];
        for (int a = 0; a + 0 <= 4; ++a)
            for (int b = 0; a + b <= 4; ++b)
                m_ab[a][b] = detail::mixed_raw(e, gamma, p, a, b) / (zpow[a] * xpow[b]);

        for (int a = 0; a <= 4; ++a)
            for (int b = 0; a + b <= 4; ++b) ms.s[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] += m_ab[a][b];

        double v = m_ab[2][0], w = m_ab[1][1], u = m_ab[0][2];
        ms.pair_vv += v * v;
        ms.pair_vw += v * w;
        ms.pair_vu += v * u;
        ms.pair_ww += w * w;
        ms.pair_wu += w * u;
        ms.pair_uu += u * u;
        ms.sum_z2_sq += v * v;
        ms.sum_z3_sq += m_ab[3][0] * m_ab[3][0];
    }
    ms.sum_z2 = ms.s[2][0];
    ms.sum_z3 = ms.s[3][0];
    ms.sum_z4 = ms.s[4][0];
    ms.sum_z2xi = ms.s[2][1];
    ms.sum_cov_zxi = ms.s[1][1];
    return ms;
}

/// Score-population shape summary: abar, b^2, standardized scores and their
/// power means A_3, A_4 plus the absolute third moment B_3.
struct ScoreSummary {
    int N = 0;
    double abar = 0.0;
    double b2 = 0.0;
    std::vector<double> a_tilde;
    double A3 = 0.0;
    double A4 = 0.0;
    double B3 = 0.0;

    [[nodiscard]] double b() const { return std::sqrt(b2); }
};

inline ScoreSummary score_summary(const Population& pop) {
    for (const auto& e : pop.elements())
        if (!e.is_degenerate())
            throw NotScorePopulation("score_summary needs every element degenerate");
    ScoreSummary ss;
    ss.N = pop.size();
    double mean_sq = 0.0;
    for (const auto& e : pop.elements()) {
        double a = e.atom_values().front();
        ss.abar += a;
        mean_sq += a * a;
    }
    ss.abar /= ss.N;
    mean_sq /= ss.N;
    for (const auto& e : pop.elements()) {
        double d = e.atom_values().front() - ss.abar;
        ss.b2 += d * d;
    }
    ss.b2 /= ss.N;
    if (!(ss.b2 > kZeroVarianceTol * std::max(mean_sq, 1e-300)))
        throw ZeroSpread("all scores coincide (b^2 = 0)");
    double b = ss.b();
    for (const auto& e : pop.elements()) {
        double at = (e.atom_values().front() - ss.abar) / b;
        ss.a_tilde.push_back(at);
        ss.A3 += at * at * at;
        ss.A4 += at * at * at * at;
        ss.B3 += std::abs(at * at * at);
    }
    ss.A3 /= ss.N;
    ss.A4 /= ss.N;
    ss.B3 /= ss.N;
    return ss;
}

/// Lyapunov-type ratios beta_{k,N} = sum E|Z~_m|^k, their split into the
/// beta^(1)/beta^(2) parts, the hat variant, mu_{k,N}, kappa_{l,N} and the
/// smoothing thresholds T_{j,N} / T~_j.
struct RatioSummary {
    struct Entry {
        double k = 0.0;
        double beta = 0.0;      // sum E|Z~|^k
        double beta1 = 0.0;     // N^-1 sum E|Y - pEY - q gamma|^k / (n^{(k-2)/2} sigma^k)
        double beta2 = 0.0;     // N^-1 sum |E(Y-gamma)|^k / (n^{(k-2)/2} sigma^k)
        double beta_hat = 0.0;  // beta1 + (sigma2/alpha20) beta2
        double mu = 0.0;        // V_k / (sigma^k n^{(k-2)/2})
        double kappa = 0.0;     // (q^{k-1} + p^{k-1}) (nq)^{-(k-2)/2}
    };

    double delta = 1.0;
    std::vector<Entry> entries;        // k in {2, 2+delta, 3, 3+delta, 4, 4+delta}, deduplicated
    std::array<double, 4> T{};         // T[j], j = 1..3, constant 0.0126
    std::array<double, 4> T_alt{};     // same with the Sec-4 constant 0.01
    std::array<double, 4> T_tilde{};   // 0.115 / mu_{min(3,1+j+delta)}

    [[nodiscard]] const Entry& at(double k) const {
        for (const auto& e : entries)
            if (std::abs(e.k - k) < 1e-9) return e;
        throw Error("ratio_summary: order k not computed");
    }
    [[nodiscard]] double beta(double k) const { return at(k).beta; }
    [[nodiscard]] double beta_hat(double k) const { return at(k).beta_hat; }
    [[nodiscard]] double mu(double k) const { return at(k).mu; }
    [[nodiscard]] double kappa(double k) const { return at(k).kappa; }
};

/// Threshold constant of (3.2); the Sec-4 restatement uses 0.01 and is kept
/// available as kThresholdConstantAlt.
inline constexpr double kThresholdConstant = 0.0126;
inline constexpr double kThresholdConstantAlt = 0.01;

inline RatioSummary ratio_summary(const Population& pop, const Design& design, double delta = 1.0) {
    if (!(delta > 0.0 && delta <= 1.0)) throw ParseError("delta must lie in (0, 1]");
    MomentSummary ms = moment_summary(pop, design);
    const int N = ms.N;
    const double p = ms.p, q = ms.q;
    const double sz = ms.sigma_sqrt_n();
    const double nq = ms.nq();

    RatioSummary rs;
    rs.delta = delta;

    auto add_entry = [&](double k) {
        for (const auto& e : rs.entries)
            if (std::abs(e.k - k) < 1e-9) return;
        RatioSummary::Entry e;
        e.k = k;
        double raw1 = 0.0, raw2 = 0.0, beta = 0.0, vk = 0.0;
        for (const auto& elem : pop.elements()) {
            double c = elem.mean() - ms.gamma;
            beta += detail::abs_z_raw(elem, ms.gamma, p, k);
            raw1 += elem.abs_moment(k, ms.gamma + p * c);
            raw2 += std::pow(std::abs(c), k);
            vk += elem.abs_moment(k, ms.gamma);
        }
        double denom = std::pow(static_cast<double>(ms.n), (k - 2.0) / 2.0) * std::pow(ms.sigma(), k);
        e.beta = beta / std::pow(sz, k);
        e.beta1 = raw1 / N / denom;
        e.beta2 = raw2 / N / denom;
        e.beta_hat = e.beta1 + (ms.sigma2 / ms.a20) * e.beta2;
        e.mu = (vk / N) / denom;
        e.kappa = (std::pow(q, k - 1.0) + std::pow(p, k - 1.0)) * std::pow(nq, -(k - 2.0) / 2.0);
        rs.entries.push_back(e);
    };

    add_entry(2.0);
    add_entry(2.0 + delta);
    add_entry(3.0);
    add_entry(3.0 + delta);
    add_entry(4.0);
    add_entry(4.0 + delta);

    for (int j = 1; j <= 3; ++j) {
        double kj = std::min(3.0, 1.0 + j + delta);
        const auto& e = rs.at(kj);
        double inv_hat = 1.0 / e.beta_hat;
        double inv_sum = 1.0 / (e.beta + 1.0 / std::sqrt(nq));
        rs.T[static_cast<std::size_t>(j)] = kThresholdConstant * std::max(inv_hat, inv_sum);
        rs.T_alt[static_cast<std::size_t>(j)] = kThresholdConstantAlt * std::max(inv_hat, inv_sum);
        rs.T_tilde[static_cast<std::size_t>(j)] = 0.115 / e.mu;
    }
    return rs;
}

/// Lindeberg functional L_{2N}(eps) = sum E Z~_m^2 1{|Z~_m| >= eps} together
/// with the two sufficient-condition quantities (i), (ii) and the index set D
/// (D uses the strict inequality p|E Y_m| > eps sigma sqrt n).
struct LindebergResult {
    double l2n = 0.0;
    double condition_i = 0.0;
    double condition_ii = 0.0;
    std::vector<int> d_set;
};

inline LindebergResult lindeberg(const Population& pop, const Design& design, double eps) {
    if (!(eps > 0.0)) throw ParseError("lindeberg needs eps > 0");
    MomentSummary ms = moment_summary(pop, design);
    const double p = ms.p, q = ms.q;
    const double sz = ms.sigma_sqrt_n();

    LindebergResult out;
    double cond_i = 0.0, cond_ii = 0.0;
    for (int m = 0; m < ms.N; ++m) {
        const auto& e = pop.element(m);
        double c = e.mean() - ms.gamma;

        double z0 = -p * c / sz;
        if (std::abs(z0) >= eps) out.l2n += q * z0 * z0;
        for (std::size_t i = 0; i < e.atom_values().size(); ++i) {
            double z1 = (e.atom_values()[i] - ms.gamma - p * c) / sz;
            if (std::abs(z1) >= eps) out.l2n += p * e.atom_probs()[i] * z1 * z1;
        }

        double mu_m = e.mean();
        for (std::size_t i = 0; i < e.atom_values().size(); ++i) {
            double d = e.atom_values()[i] - p * mu_m;
            if (std::abs(d) > eps * sz) cond_i += e.atom_probs()[i] * d * d;
        }
        if (p * std::abs(mu_m) > eps * sz) {
            out.d_set.push_back(m);
            cond_ii += mu_m * mu_m;
        }
    }
    out.condition_i = cond_i / (ms.n * ms.sigma2);
    out.condition_ii = cond_ii * q * p / (ms.n * ms.sigma2);
    return out;
}

}  // namespace fpsum
