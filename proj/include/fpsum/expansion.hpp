#pragma once

#include <cmath>
#include <complex>
#include <functional>

#include "fpsum/errors.hpp"
#include "fpsum/moments.hpp"
#include "fpsum/poly.hpp"
#include "fpsum/special.hpp"

namespace fpsum {

namespace detail {
inline double binom_small(int n, int k) {
    double acc = 1.0;
    for (int j = 1; j <= k; ++j) acc = acc * (n - k + j) / j;
    return acc;
}
}  // namespace detail

/// N^{-m/2} P_{m,N}(t, tau): the cumulant polynomials of the bivariate sum
/// (Z, xi).  Order 1 is
///     (i^3/6) sum_m E(t Z~_m + tau xi~_m)^3
/// and order 2 adds the fourth-order block
///     (i^4/24) sum_m [E(.)^4 - 3 (E(.)^2)^2] + (1/2) (N^{-1/2} P_1)^2 .
/// Coefficients come straight from the mixed-moment sums of the summary.
inline BivariatePolynomial cumulant_poly(const MomentSummary& ms, int m) {
    if (m != 1 && m != 2) throw UnsupportedOrder("cumulant_poly implements m = 1, 2 only");

    auto homogeneous = [&](int total, Complex scale) {
        BivariatePolynomial poly;
        for (int a = 0; a <= total; ++a) {
            int b = total - a;
            double coeff = detail::binom_small(total, a) *
                           ms.s[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
            poly.add_term(a, b, scale * coeff);
        }
        return poly;
    };

    const Complex i3(0.0, -1.0);  // i^3
    BivariatePolynomial p1 = homogeneous(3, i3 / 6.0);
    if (m == 1) return p1;

    BivariatePolynomial p2 = homogeneous(4, Complex(1.0 / 24.0));  // i^4 = 1

    BivariatePolynomial pair;  // sum_m (E(t Z~ + tau xi~)^2)^2
    pair.add_term(4, 0, ms.pair_vv);
    pair.add_term(3, 1, 4.0 * ms.pair_vw);
    pair.add_term(2, 2, 2.0 * ms.pair_vu + 4.0 * ms.pair_ww);
    pair.add_term(1, 3, 4.0 * ms.pair_wu);
    pair.add_term(0, 4, ms.pair_uu);
    p2 = p2 + Complex(-1.0 / 8.0) * pair;

    p2 = p2 + Complex(0.5) * (p1 * p1);
    return p2;
}

/// Q_{k,N}(t) = e^{-t^2/2} sum_{m<=k} N^{-m/2} G_{m,N}(t), where G_m is the
/// cumulant polynomial with tau integrated out against the Gaussian weight.
struct QSeries {
    int order = 0;
    UnivariatePoly bracket;  // 1 + g_1(t) + ... + g_k(t)

    [[nodiscard]] Complex eval(double t) const { return std::exp(-0.5 * t * t) * bracket.eval(t); }

    /// phi_n approximation Q_k(t)/Q_k(0), exact ratio.
    [[nodiscard]] Complex normalized(double t) const { return eval(t) / eval(0.0); }

    /// First-order normalization: 1/Q_k(0) expanded to first order in 1/N,
    /// i.e. the bracket becomes 1 + g_1(t) + ... + g_k(t) - (Q_k(0) - 1).
    /// This is the form the order-3 expansion display uses.
    [[nodiscard]] Complex normalized_first_order(double t) const {
        Complex at0 = bracket.eval(0.0);
        return std::exp(-0.5 * t * t) * (bracket.eval(t) - (at0 - 1.0));
    }
};

inline QSeries q_series(const MomentSummary& ms, int k) {
    if (k < 0 || k > 2) throw UnsupportedOrder("q_series implements k = 0, 1, 2");
    QSeries qs;
    qs.order = k;
    qs.bracket.coeffs = {Complex(1.0)};
    for (int m = 1; m <= k; ++m) qs.bracket += integrate_out_tau(cumulant_poly(ms, m));
    return qs;
}

/// Order-j Edgeworth approximant (j = 1, 2, 3), holding the (it)^v bracket
/// coefficients of the ch.f. form; the CDF form substitutes
/// -e^{-u^2/2} H_{v-1}(u)/sqrt(2 pi) for each (it)^v e^{-t^2/2}.
class EdgeworthApproximant {
  public:
    int order = 1;
    double lambda1 = 0.0, lambda2 = 0.0, alpha02 = 0.0, sigma2 = 0.0;
    int n = 0;
    double p = 0.0, q = 0.0;
    std::array<double, 7> c{};  // c[v] multiplies (it)^v; c[0] = 1

    static EdgeworthApproximant make(const MomentSummary& ms, int j) {
        if (j < 1 || j > 3) throw UnsupportedOrder("expansion order must be 1, 2 or 3");
        EdgeworthApproximant ea;
        ea.order = j;
        ea.lambda1 = ms.lambda1;
        ea.lambda2 = ms.lambda2;
        ea.alpha02 = ms.a02;
        ea.sigma2 = ms.sigma2;
        ea.n = ms.n;
        ea.p = ms.p;
        ea.q = ms.q;
        double s = std::sqrt(ms.sigma2);
        double s3 = s * s * s;
        ea.c[0] = 1.0;
        if (j >= 2) ea.c[3] = ms.lambda1 / (6.0 * s3 * std::sqrt(static_cast<double>(ms.n)));
        if (j >= 3) {
            double ns4 = ms.n * ms.sigma2 * ms.sigma2;
            ea.c[2] = ms.p * ms.q * ms.a02 / (2.0 * ms.n * ms.sigma2);
            ea.c[4] = ms.lambda2 / (24.0 * ns4);
            ea.c[6] = ms.lambda1 * ms.lambda1 / (72.0 * ms.n * ms.sigma2 * ms.sigma2 * ms.sigma2);
        }
        return ea;
    }

    [[nodiscard]] Complex chf(double t) const {
        Complex it(0.0, t);
        Complex acc = 0.0, power = 1.0;
        for (int v = 0; v <= 6; ++v) {
            acc += c[static_cast<std::size_t>(v)] * power;
            power *= it;
        }
        return std::exp(-0.5 * t * t) * acc;
    }

    [[nodiscard]] double cdf(double u) const {
        double corr = 0.0;
        for (int v = 1; v <= 6; ++v)
            if (c[static_cast<std::size_t>(v)] != 0.0)
                corr += c[static_cast<std::size_t>(v)] * hermite(v - 1, u);
        return std_normal_cdf(u) - std_normal_pdf(u) * corr;
    }
};

inline EdgeworthApproximant chf_approximant(const MomentSummary& ms, int j) {
    return EdgeworthApproximant::make(ms, j);
}

inline EdgeworthApproximant cdf_approximant(const MomentSummary& ms, int j) {
    return EdgeworthApproximant::make(ms, j);
}

/// Closed-form three-term CDF expansion for score populations:
///   Phi(u) - phi(u) { H2(u)(1-2p)A3 / 6 sqrt(nq)
///                   + H5(u)(1-4pq)A3^2 / 72nq
///                   + H3(u)[(1-6pq)A4 - 3(1-4pq)] / 24nq
///                   + H1(u) p / 2n }.
class ScoreCdfApproximant {
  public:
    ScoreCdfApproximant(const ScoreSummary& ss, const Design& design) {
        design.require_partial("score_cdf_approximant");
        double p = design.p(), q = design.q();
        double nq = design.nq();
        c_h2_ = (1.0 - 2.0 * p) * ss.A3 / (6.0 * std::sqrt(nq));
        c_h5_ = (1.0 - 4.0 * p * q) * ss.A3 * ss.A3 / (72.0 * nq);
        c_h3_ = ((1.0 - 6.0 * p * q) * ss.A4 - 3.0 * (1.0 - 4.0 * p * q)) / (24.0 * nq);
        c_h1_ = p / (2.0 * design.n);
    }

    [[nodiscard]] double cdf(double u) const {
        double corr = c_h2_ * hermite(2, u) + c_h5_ * hermite(5, u) + c_h3_ * hermite(3, u) +
                      c_h1_ * hermite(1, u);
        return std_normal_cdf(u) - std_normal_pdf(u) * corr;
    }

  private:
    double c_h2_, c_h5_, c_h3_, c_h1_;
};

inline ScoreCdfApproximant score_cdf_approximant(const ScoreSummary& ss, const Design& design) {
    return ScoreCdfApproximant(ss, design);
}

}  // namespace fpsum
