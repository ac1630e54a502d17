// Builds a small skewed score population, compares the exact law of the
// sample sum against the normal and three-term approximations, and prints a
// tail-ratio table.  Run from anywhere; no inputs needed.

#include <cstdio>

#include "fpsum/fpsum.hpp"

int main() {
    using namespace fpsum;

    std::vector<PopulationElement> elements;
    for (int rep = 0; rep < 10; ++rep)
        for (int a : {1, 2, 3, 6}) elements.push_back(PopulationElement::score(Rational(a)));
    Population pop(std::move(elements));
    Design design(10, pop.size());

    MomentSummary ms = moment_summary(pop, design);
    std::printf("N = %d, n = %d, gamma = %.4f, sigma^2 = %.4f, Lambda1 = %.4f\n\n", ms.N, ms.n,
                ms.gamma, ms.sigma2, ms.lambda1);

    ExactDistribution dist = exact_distribution(pop, design);
    EdgeworthApproximant w1 = cdf_approximant(ms, 1);
    EdgeworthApproximant w3 = cdf_approximant(ms, 3);

    double center = design.n * ms.gamma, scale = ms.sigma_sqrt_n();
    std::printf("%8s %12s %12s %12s\n", "u", "exact", "normal", "order-3");
    for (double u = -2.0; u <= 2.01; u += 0.5) {
        double exact = dist.cdf_left(u * scale + center);
        std::printf("%8.2f %12.6f %12.6f %12.6f\n", u, exact, w1.cdf(u), w3.cdf(u));
    }

    TailRatioModel model(ld_coefficients_general(ms), ms.N);
    std::printf("\n%8s %14s %14s\n", "x", "exact ratio", "Cramer approx");
    for (double x = 0.5; x <= 2.01; x += 0.5) {
        double exact = (1.0 - dist.cdf_left(x * scale + center)) / std_normal_sf(x);
        std::printf("%8.2f %14.6f %14.6f\n", x, exact, model.ratio(x, TailSide::Upper).value);
    }
    return 0;
}
