#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "sphgram/common.hpp"
#include "sphgram/gegenbauer.hpp"

using namespace sphgram;

TEST_CASE("harmonic dimension closed form") {
    CHECK(harmonic_dimension(2, 0) == 1);
    CHECK(harmonic_dimension(2, 1) == 3);
    CHECK(harmonic_dimension(2, 2) == 5);
    CHECK(harmonic_dimension(3, 1) == 4);
    for (int d = 1; d <= 6; ++d) CHECK(harmonic_dimension(d, 1) == d + 1);
    // circle: two harmonics per degree
    for (int m = 1; m <= 10; ++m) CHECK(harmonic_dimension(1, m) == 2);
    CHECK_THROWS_AS(harmonic_dimension(0, 1), std::invalid_argument);
    CHECK_THROWS_AS(harmonic_dimension(2, -1), std::invalid_argument);
    CHECK_THROWS_AS(harmonic_dimension(40, 2000000), std::overflow_error);
}

TEST_CASE("recurrence coefficients") {
    for (int d = 1; d <= 5; ++d) {
        for (int t = 0; t <= 50; ++t) {
            double a = recurrence_a(d, t);
            CHECK(a > 0.0);
            CHECK(a <= 0.5);
        }
        for (int t = 1; t <= 50; ++t) CHECK(recurrence_b(d, t) > 0.0);
        CHECK(recurrence_b(d, 1) == 1.0);
    }
    CHECK(recurrence_a(3, -1) == 0.0);
    // consistency at t=1: N(m) = a_m N(m+1) + b_m N(m-1)
    for (int d = 1; d <= 5; ++d)
        for (int m = 1; m <= 40; ++m) {
            double lhs = double(harmonic_dimension(d, m));
            double rhs = recurrence_a(d, m) * harmonic_dimension(d, m + 1) +
                         recurrence_b(d, m) * harmonic_dimension(d, m - 1);
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
        }
}

TEST_CASE("ladder basics") {
    auto p = ladder_eval(2, 1, 1.0);
    CHECK(p[1] == doctest::Approx(3.0));  // p_1(1) = N(1)
    auto p0 = ladder_eval(5, 0, -0.3);
    CHECK(p0[0] == 1.0);
    auto pm = ladder_eval(2, 50, -1.0);
    for (int m = 0; m <= 50; ++m) {
        double expect = (m % 2 ? -1.0 : 1.0) * double(harmonic_dimension(2, m));
        CHECK(pm[m] == doctest::Approx(expect).epsilon(1e-9));
    }
    CHECK_THROWS_AS(ladder_eval(2, 3, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(ladder_eval(2, -1, 0.0), std::invalid_argument);
}

TEST_CASE("normalization at 1 is stable to m = 500") {
    for (int d = 1; d <= 5; ++d) {
        auto p = ladder_eval(d, 500, 1.0);
        double worst = 0;
        for (int m = 0; m <= 500; ++m) {
            double nm = double(harmonic_dimension(d, m));
            worst = std::max(worst, std::abs(p[m] - nm) / nm);
        }
        CHECK(worst <= 1e-9);
    }
}

TEST_CASE("parity and boundedness") {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (int d = 1; d <= 5; ++d) {
        for (int rep = 0; rep < 20; ++rep) {
            double t = unif(gen);
            auto a = ladder_eval(d, 100, t);
            auto b = ladder_eval(d, 100, -t);
            for (int m = 0; m <= 100; ++m) {
                double expect = (m % 2 ? -b[m] : b[m]);
                CHECK(a[m] == doctest::Approx(expect).epsilon(1e-9));
            }
        }
        auto at1 = ladder_eval(d, 60, 1.0);
        for (double t = -1.0; t <= 1.0; t += 1.0 / 64) {
            auto v = ladder_eval(d, 60, t);
            for (int m = 0; m <= 60; ++m)
                CHECK(std::abs(v[m]) <= at1[m] * (1 + 1e-9));
        }
    }
}

TEST_CASE("projected quadrature on the normalized measure") {
    for (int d = 1; d <= 5; ++d) {
        double one = projected_quadrature(d, [](double) { return 1.0; }, 256, 64);
        CHECK(one == doctest::Approx(1.0).epsilon(1e-10));
        double odd = projected_quadrature(d, [](double t) { return t; }, 256, 64);
        CHECK(std::abs(odd) < 1e-12);
    }
    double n2 = projected_quadrature(
        2, [](double t) { double p = ladder_eval(2, 2, t)[2]; return p * p; }, 256, 64);
    CHECK(n2 == doctest::Approx(5.0).epsilon(1e-8));
    CHECK_THROWS_AS(projected_quadrature(
                        2, [](double) { return std::nan(""); }, 16, 8),
                    numerical_error);
}

TEST_CASE("orthogonality of the ladder under the projected measure") {
    // spot degrees here; the acceptance suite runs the full m <= 30 sweep
    for (int d : {1, 2, 3, 5}) {
        for (int m = 0; m <= 12; ++m)
            for (int mp = m; mp <= 12; ++mp) {
                double v = projected_quadrature(
                    d,
                    [&](double t) {
                        auto p = ladder_eval(d, 12, t);
                        return p[m] * p[mp];
                    },
                    256, 64);
                if (m == mp)
                    CHECK(v == doctest::Approx(double(harmonic_dimension(d, m)))
                                   .epsilon(1e-8));
                else
                    CHECK(std::abs(v) < 1e-8);
            }
    }
}

TEST_CASE("gauss-legendre nodes integrate polynomials exactly") {
    const GaussLegendre& gl = gauss_legendre(8);
    // degree-15 monomial moments on [-1,1]
    for (int a = 0; a <= 15; ++a) {
        double s = 0;
        for (int i = 0; i < 8; ++i) s += gl.weights[i] * std::pow(gl.nodes[i], a);
        double expect = (a % 2 == 0) ? 2.0 / (a + 1) : 0.0;
        CHECK(s == doctest::Approx(expect).epsilon(1e-13));
    }
}
