#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sphgram/coefficients.hpp"
#include "sphgram/gegenbauer.hpp"
#include "sphgram/spectra.hpp"

using namespace sphgram;

TEST_CASE("sigma_hat closed values") {
    CHECK(sigma_hat(2, 1, 3) == 0.0);  // zero pattern: m >= k+1, m == k mod 2
    CHECK(sigma_hat(3, 0, 0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(sigma_hat(2, 0, 0) == doctest::Approx(0.5).epsilon(1e-14));
    // hand-evaluated low-degree quotients for d=2
    CHECK(sigma_hat(2, 0, 1) == doctest::Approx(0.25).epsilon(1e-13));
    CHECK(sigma_hat(2, 1, 1) == doctest::Approx(1.0 / 6).epsilon(1e-13));
    CHECK(sigma_hat(2, 1, 2) == doctest::Approx(1.0 / 16).epsilon(1e-13));
    CHECK(sigma_hat(2, 1, 4) == doctest::Approx(-1.0 / 96).epsilon(1e-13));
    CHECK_THROWS_AS(sigma_hat(0, 1, 1), std::invalid_argument);
}

TEST_CASE("oracle agrees with the closed form") {
    // (d=2,k=2,m=5) example plus spread cases; full sweep in acceptance
    for (auto [d, k, m] : {std::tuple{2, 2, 5}, {2, 1, 0}, {4, 3, 8}, {1, 1, 2},
                           {3, 2, 7}, {5, 0, 1}}) {
        OracleResult o = coefficient_oracle(d, k, m);
        double c = sigma_hat(d, k, m);
        CHECK(std::abs(o.value - c) <= 1e-10 * std::abs(c));
    }
    OracleResult z = coefficient_oracle(2, 1, 3);
    CHECK(std::abs(z.value) <= 1e-12);
    CHECK_THROWS_AS(coefficient_oracle(2, 1, 500), std::invalid_argument);
}

TEST_CASE("xi table active pattern and values") {
    CoefficientTable t = xi_table(2, 1, 12);
    // E = {0,1} followed by 2,4,6,...
    std::vector<int> expect_active{0, 1, 2, 4, 6, 8, 10, 12};
    for (int m = 0; m <= 12; ++m) {
        bool in = std::find(expect_active.begin(), expect_active.end(), m) !=
                  expect_active.end();
        CHECK((bool)t.active[m] == in);
        if (!in) CHECK(t.values[m] == 0.0);
        if (in) CHECK(t.values[m] > 0.0);
    }
    // gamma-form equals sigma_hat^2 (duplication identity)
    for (int d = 1; d <= 5; ++d)
        for (int k = 0; k <= 3; ++k) {
            CoefficientTable x = xi_table(d, k, 101);
            for (int m = k + 1; m <= 101; ++m) {
                if (!x.active[m]) continue;
                double sh = sigma_hat(d, k, m);
                CHECK(x.values[m] == doctest::Approx(sh * sh).epsilon(1e-10));
            }
        }
}

TEST_CASE("xi dyadic decay ratio") {
    // k odd so that doubling stays inside E
    for (auto [d, k] : {std::pair{2, 1}, {3, 1}, {2, 3}}) {
        CoefficientTable t = xi_table(d, k, 401);
        int m = 200 + ((200 - k - 1) % 2 == 0 ? 0 : 1);  // member of E near 200
        REQUIRE(t.active[m]);
        REQUIRE(t.active[2 * m]);
        double ratio = t.values[2 * m] / t.values[m];
        double expect = std::pow(2.0, -(d + 2 * k + 1));
        CHECK(std::abs(ratio / expect - 1.0) < 0.10);
    }
}

TEST_CASE("xi_s iteration") {
    // s = 0 is bitwise the mass table
    CoefficientTable a = xi_table(2, 2, 40);
    CoefficientTable b = xi_s_table(2, 2, 0, 40);
    for (int m = 0; m <= 40; ++m) {
        CHECK(a.values[m] == b.values[m]);
        CHECK(a.active[m] == b.active[m]);
    }
    // mask is E for every s <= k; positivity on E
    for (int d : {2, 3})
        for (int k = 0; k <= 3; ++k)
            for (int s = 0; s <= k; ++s) {
                CoefficientTable t = xi_s_table(d, k, s, 60);
                for (int m = 0; m <= 60; ++m) {
                    CHECK((bool)t.active[m] == in_active_set(k, m));
                    if (t.active[m])
                        CHECK(t.values[m] > 0.0);
                    else
                        CHECK(t.values[m] == 0.0);
                }
            }
    // t=0 convention: xi_1(0) = b_1 * xi_0(1)
    for (int d : {2, 3, 5}) {
        int k = 2, s = 1;
        CoefficientTable base = xi_table(d, k - s, 10);
        double fk = falling_factorial(k, s);
        CoefficientTable t = xi_s_table(d, k, s, 8);
        CHECK(t.values[0] ==
              doctest::Approx(recurrence_b(d, 1) * fk * fk * base.values[1])
                  .epsilon(1e-14));
    }
    CHECK_THROWS_AS(xi_s_table(2, 1, 2, 40), std::invalid_argument);
}

TEST_CASE("xi_s dyadic decay ratio") {
    for (auto [d, k, s] : {std::tuple{2, 3, 1}, {3, 3, 2}, {2, 1, 1}}) {
        CoefficientTable t = xi_s_table(d, k, s, 401);
        int m = 200 + ((200 - k - 1) % 2 == 0 ? 0 : 1);
        double ratio = t.values[2 * m] / t.values[m];
        double expect = std::pow(2.0, -(d + 2 * k + 1 - 2 * s));
        CHECK(std::abs(ratio / expect - 1.0) < 0.10);
    }
}

TEST_CASE("decay exponent fits") {
    // full (d,k,s) grid runs in the acceptance suite
    for (auto [d, k] : {std::pair{2, 1}, {3, 3}}) {
        CoefficientTable t = xi_table(d, k, 400);
        std::vector<double> xs, ys;
        for (int m = 50; m <= 400; ++m)
            if (t.active[m]) {
                xs.push_back(m);
                ys.push_back(t.values[m]);
            }
        PowerLawFit f = fit_power_law(xs, ys);
        double expect = -(d + 2 * k + 1);
        CHECK(std::abs(f.slope - expect) <= 0.02 * std::abs(expect));
    }
    CoefficientTable ts = xi_s_table(2, 2, 1, 400);
    std::vector<double> xs, ys;
    for (int m = 50; m <= 400; ++m)
        if (ts.active[m]) {
            xs.push_back(m);
            ys.push_back(ts.values[m]);
        }
    PowerLawFit f = fit_power_law(xs, ys);
    CHECK(std::abs(f.slope - (-5.0)) <= 0.02 * 5.0);
}

TEST_CASE("band index cumulative dimensions") {
    BandIndex b = band_index(2, 1, 6);
    REQUIRE(b.degrees.size() == 5);  // {0,1,2,4,6}
    CHECK(b.degrees[0] == 0);
    CHECK(b.cumulative[0] == 1);   // d_0 = 1
    CHECK(b.cumulative[1] == 4);   // d_1 = 1+3
    CHECK(b.cumulative[2] == 9);   // d_2 = 4+5
    CHECK(b.cumulative[3] == 18);  // d_4 = 9+9
    for (std::size_t i = 1; i < b.cumulative.size(); ++i)
        CHECK(b.cumulative[i] > b.cumulative[i - 1]);
}

TEST_CASE("mass diagonal closed form vs series") {
    for (auto [d, k] : {std::pair{2, 1}, {3, 2}, {5, 3}}) {
        CoefficientTable t = xi_table(d, k, 2000);
        double series = 0;
        for (int m = 0; m <= 2000; ++m)
            series += t.values[m] * double(harmonic_dimension(d, m));
        double closed = mass_diagonal_closed_form(d, k);
        CHECK(series == doctest::Approx(closed).epsilon(1e-8));
    }
    // k = 0 has a slow tail; agreement within the a-priori tail bound
    CoefficientTable t0 = xi_table(1, 0, 2000);
    double series = 0;
    for (int m = 0; m <= 2000; ++m)
        series += t0.values[m] * double(harmonic_dimension(1, m));
    CHECK(std::abs(series - mass_diagonal_closed_form(1, 0)) <=
          series_tail_bound(t0));
}

TEST_CASE("helpers") {
    CHECK(falling_factorial(3, 0) == 1.0);
    CHECK(falling_factorial(3, 2) == 6.0);
    CHECK(falling_factorial(3, 3) == 6.0);
    CHECK(default_m_max(2, 400) == 200);
    CHECK(default_m_max(1, 2000) == 20000);
    CHECK(default_m_max(3, 8) == 200);
}
