#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "fpsum/rng.hpp"
#include "fpsum/special.hpp"

using namespace fpsum;

TEST_CASE("standard normal cdf") {
    CHECK(std_normal_cdf(0.0) == 0.5);
    CHECK(std_normal_cdf(40.0) == 1.0);
    CHECK(std_normal_cdf(-40.0) == 0.0);
    // High-precision reference value of the error-function integral at u = 1.
    CHECK(std::abs(std_normal_cdf(1.0) - 0.8413447460685429486) < 1e-15);
    CHECK(std::abs(std_normal_cdf(-1.0) - (1.0 - 0.8413447460685429486)) < 1e-15);
    // Tail evaluation keeps relative accuracy where the naive form loses it.
    CHECK(std_normal_sf(6.0) == Catch::Approx(9.865876450376946e-10).epsilon(1e-12));
    CHECK(std_normal_sf(2.0) + std_normal_cdf(2.0) == Catch::Approx(1.0).margin(1e-16));
}

TEST_CASE("hermite explicit forms up to order 5") {
    CHECK(hermite(2, 0.0) == -1.0);   // H2(u) = u^2 - 1
    CHECK(hermite(3, 2.0) == 2.0);    // H3(u) = u^3 - 3u
    CHECK(hermite(5, 2.0) == -18.0);  // H5(u) = u^5 - 10u^3 + 15u
    CHECK(hermite(0, 3.7) == 1.0);
    CHECK(hermite(1, 3.7) == 3.7);
    SplitRng rng(3, 0);
    for (int i = 0; i < 50; ++i) {
        double u = 8.0 * rng.next_double() - 4.0;
        CHECK(hermite(2, u) == Catch::Approx(u * u - 1.0).margin(1e-12));
        CHECK(hermite(3, u) == Catch::Approx(u * u * u - 3.0 * u).margin(1e-12));
        CHECK(hermite(4, u) == Catch::Approx(u * u * u * u - 6.0 * u * u + 3.0).margin(1e-11));
        CHECK(hermite(5, u) ==
              Catch::Approx(std::pow(u, 5) - 10.0 * u * u * u + 15.0 * u).margin(1e-10));
    }
}

TEST_CASE("hermite recurrence and coefficient table agree at random points") {
    SplitRng rng(5, 1);
    for (int v = 0; v <= 10; ++v) {
        HermiteTable table = HermiteTable::make(v);
        for (int i = 0; i < 100; ++i) {
            double u = 6.0 * rng.next_double() - 3.0;
            double by_rec = hermite(v, u);
            CHECK(table.eval(u) == Catch::Approx(by_rec).margin(1e-9 * (1.0 + std::abs(by_rec))));
        }
    }
}

TEST_CASE("derivative identity d/du [e^{-u^2/2} H_{v-1}(u)] = -e^{-u^2/2} H_v(u)") {
    const double h = 1e-6;
    auto f = [](int v, double u) { return std::exp(-0.5 * u * u) * hermite(v, u); };
    for (int v = 1; v <= 5; ++v) {
        for (double u : {-2.3, -1.0, -0.2, 0.0, 0.4, 1.1, 2.7}) {
            double fd = (f(v - 1, u + h) - f(v - 1, u - h)) / (2.0 * h);
            CHECK(fd == Catch::Approx(-std::exp(-0.5 * u * u) * hermite(v, u)).margin(1e-6));
        }
    }
}

TEST_CASE("gaussian moments") {
    CHECK(gaussian_moment(0) == 1.0);
    CHECK(gaussian_moment(1) == 0.0);
    CHECK(gaussian_moment(2) == 1.0);
    CHECK(gaussian_moment(3) == 0.0);
    CHECK(gaussian_moment(4) == 3.0);
    CHECK(gaussian_moment(6) == 15.0);
    CHECK(gaussian_moment(8) == 105.0);

    // Quadrature oracle: trapezoid over [-12, 12] nails the double-factorial
    // identity far beyond the tolerances used here.
    for (int k = 0; k <= 8; ++k) {
        double acc = 0.0;
        const int steps = 200000;
        for (int i = 0; i <= steps; ++i) {
            double tau = -12.0 + 24.0 * static_cast<double>(i) / steps;
            double w = (i == 0 || i == steps) ? 0.5 : 1.0;
            acc += w * std::pow(tau, k) * std::exp(-0.5 * tau * tau);
        }
        acc *= 24.0 / steps / kSqrt2Pi;
        CHECK(acc == Catch::Approx(gaussian_moment(k)).margin(1e-7));
    }
}
