#include "sphgram/coefficients.hpp"

#include <cmath>
#include <stdexcept>

#include "sphgram/common.hpp"
#include "sphgram/gegenbauer.hpp"

namespace sphgram {

namespace {

constexpr long double kPiL = 3.14159265358979323846264338327950288L;

void check_dk(int d, int k) {
    if (d < 1) throw std::invalid_argument("d must be >= 1");
    if (k < 0) throw std::invalid_argument("k must be >= 0");
}

// log(omega_{d-1}/omega_d) = log Gamma((d+1)/2) - log(sqrt(pi)) - log Gamma(d/2)
double log_omega_ratio(int d) {
    return std::lgamma(0.5 * (d + 1)) - 0.5 * std::log(M_PI) - std::lgamma(0.5 * d);
}

// Half-line monomial moment integral_0^1 t^a (1-t^2)^{(d-2)/2} dt = B((a+1)/2, d/2)/2.
long double half_moment(int d, int a) {
    long double lb = std::lgamma(0.5L * (a + 1)) + std::lgamma(0.5L * d) -
                     std::lgamma(0.5L * (a + 1) + 0.5L * d);
    return 0.5L * std::exp(lb);
}

// Monomial coefficients of p_m, exact recurrence in long double (small m only).
std::vector<long double> monomial_coefficients(int d, int m) {
    std::vector<long double> pm1{1.0L}, pm{0.0L, (long double)(d + 1)};
    if (m == 0) return pm1;
    for (int t = 1; t < m; ++t) {
        long double a = (long double)(t + 1) / (2 * t + d + 1);
        long double b = (t == 1) ? 1.0L : (long double)(t + d - 2) / (2 * t + d - 3);
        std::vector<long double> next(t + 2, 0.0L);
        for (int j = 0; j <= t; ++j) next[j + 1] += pm[j] / a;
        for (int j = 0; j < (int)pm1.size(); ++j) next[j] -= b * pm1[j] / a;
        pm1 = std::move(pm);
        pm = std::move(next);
    }
    return pm;
}

// sigma_hat for m <= k: quotient of exact Beta-moment sums.
double sigma_hat_low(int d, int k, int m) {
    std::vector<long double> c = monomial_coefficients(d, m);
    KahanSum<long double> num;
    for (int j = 0; j < (int)c.size(); ++j)
        if (c[j] != 0.0L) num.add(c[j] * half_moment(d, j + k));
    KahanSum<long double> den;
    for (int j = 0; j < (int)c.size(); ++j)
        for (int l = 0; l < (int)c.size(); ++l)
            if (c[j] != 0.0L && c[l] != 0.0L && (j + l) % 2 == 0)
                den.add(2.0L * c[j] * c[l] * half_moment(d, j + l));
    return static_cast<double>(num.value() / den.value());
}

// log of the xi prefactor C = (omega_{d-1}/omega_d) k! Gamma(d/2) / (2^{k+1} sqrt(pi)).
double log_xi_prefactor(int d, int k) {
    return log_omega_ratio(d) + std::lgamma(k + 1.0) + std::lgamma(0.5 * d) -
           (k + 1) * std::log(2.0) - 0.5 * std::log(M_PI);
}

}  // namespace

bool in_active_set(int k, int m) {
    if (m <= k) return true;
    return (m - k - 1) % 2 == 0;
}

double sigma_hat(int d, int k, int m) {
    check_dk(d, k);
    if (m < 0) throw std::invalid_argument("m must be >= 0");
    if (m <= k) return sigma_hat_low(d, k, m);
    if (!in_active_set(k, m)) return 0.0;
    double lg = log_omega_ratio(d) + std::lgamma(k + 1.0) - m * std::log(2.0) +
                std::lgamma(0.5 * d) + std::lgamma(double(m - k)) -
                std::lgamma(0.5 * (m - k + 1)) - std::lgamma(0.5 * (m + d + k + 1));
    double sign = ((m - k - 1) / 2) % 2 == 0 ? 1.0 : -1.0;
    return sign * std::exp(lg);
}

CoefficientTable xi_table(int d, int k, int m_max) {
    check_dk(d, k);
    if (m_max < k + 1) throw std::invalid_argument("xi_table: m_max must be >= k+1");
    CoefficientTable t;
    t.d = d;
    t.k = k;
    t.s = 0;
    t.m_max = m_max;
    t.values.assign(m_max + 1, 0.0);
    t.active.assign(m_max + 1, 0);
    const double logC = log_xi_prefactor(d, k);
    for (int m = 0; m <= m_max; ++m) {
        if (!in_active_set(k, m)) continue;
        t.active[m] = 1;
        if (m <= k) {
            double sh = sigma_hat_low(d, k, m);
            t.values[m] = sh * sh;
        } else {
            t.values[m] = std::exp(
                2.0 * (logC + std::lgamma(0.5 * (m - k)) - std::lgamma(0.5 * (m + d + k + 1))));
        }
    }
    return t;
}

CoefficientTable xi_s_table(int d, int k, int s, int m_max) {
    check_dk(d, k);
    if (s < 0 || s > k) throw std::invalid_argument("xi_s_table: need 0 <= s <= k");
    if (s == 0) return xi_table(d, k, m_max);

    CoefficientTable base = xi_table(d, k - s, m_max + s);
    const double fk = falling_factorial(k, s);
    std::vector<double> cur(base.values);
    for (double& v : cur) v *= fk * fk;

    // xi_r(t) = a_{t-1} xi_{r-1}(t-1) + b_{t+1} xi_{r-1}(t+1), a_{-1} = 0.
    for (int r = 0; r < s; ++r) {
        std::vector<double> next(cur.size(), 0.0);
        for (int t = 0; t + 1 < (int)cur.size(); ++t) {
            double left = (t >= 1) ? recurrence_a(d, t - 1) * cur[t - 1] : 0.0;
            next[t] = left + recurrence_b(d, t + 1) * cur[t + 1];
        }
        cur = std::move(next);
    }

    CoefficientTable t;
    t.d = d;
    t.k = k;
    t.s = s;
    t.m_max = m_max;
    t.values.assign(cur.begin(), cur.begin() + m_max + 1);
    t.active.assign(m_max + 1, 0);
    for (int m = 0; m <= m_max; ++m) t.active[m] = in_active_set(k, m) ? 1 : 0;
    return t;
}

OracleResult coefficient_oracle(int d, int k, int m) {
    check_dk(d, k);
    if (m < 0 || m > 200)
        throw std::invalid_argument("coefficient_oracle: valid for 0 <= m <= 200");

    const int nodes = 32;
    const GaussLegendre& gl = gauss_legendre(nodes);
    std::vector<long double> ladder(m + 1);

    // One Gauss-Legendre pass of [phi_lo, phi_hi] split into `panels` panels.
    // Returns (integral of p_m cos^k sin^{d-1}, integral of p_m^2 sin^{d-1},
    //          integral of |p_m| cos^k sin^{d-1}) -- the last for an error scale.
    auto sweep = [&](long double lo, long double hi, int panels, bool with_sigma,
                     long double* num, long double* den, long double* mag) {
        KahanSum<long double> sn, sd, sm;
        for (int p = 0; p < panels; ++p) {
            long double a = lo + (hi - lo) * p / panels;
            long double b = lo + (hi - lo) * (p + 1) / panels;
            long double mid = 0.5L * (a + b), hw = 0.5L * (b - a);
            for (int q = 0; q < nodes; ++q) {
                long double phi = mid + hw * (long double)gl.nodes[q];
                long double t = std::cos(phi);
                long double w = hw * (long double)gl.weights[q] *
                                std::pow(std::sin(phi), (long double)(d - 1));
                ladder_eval<long double>(d, m, t, ladder.data());
                long double pm = ladder[m];
                sd.add(w * pm * pm);
                if (with_sigma) {
                    long double sig = (k == 0) ? 1.0L : std::pow(t, (long double)k);
                    sn.add(w * pm * sig);
                    sm.add(w * (pm < 0 ? -pm : pm) * (sig < 0 ? -sig : sig));
                }
            }
        }
        *num = sn.value();
        *den = sd.value();
        *mag = sm.value();
    };

    double prev = 0;
    bool have_prev = false;
    OracleResult res;
    for (int panels = 16; panels <= 2048; panels *= 2) {
        long double n1, d1, m1, n2, d2, m2;
        sweep(0.0L, 0.5L * kPiL, panels, true, &n1, &d1, &m1);   // t > 0: sigma = t^k
        sweep(0.5L * kPiL, kPiL, panels, false, &n2, &d2, &m2);  // t < 0: sigma = 0
        long double den = d1 + d2;
        double value = static_cast<double>(n1 / den);
        double scale = static_cast<double>(m1 / den);  // no-cancellation magnitude
        if (have_prev) {
            double diff = std::abs(value - prev);
            double tol = std::max(1e-12 * std::abs(value), 1e-13 * scale);
            if (diff <= tol) {
                res.value = value;
                res.est_error = diff / std::max(std::abs(value), 1e-13 * scale);
                res.panels = panels;
                return res;
            }
        }
        prev = value;
        have_prev = true;
    }
    throw numerical_error("coefficient_oracle: quadrature did not converge to 1e-12");
}

BandIndex band_index(int d, int k, int m_max) {
    check_dk(d, k);
    if (m_max < 0) throw std::invalid_argument("band_index: m_max >= 0");
    BandIndex b;
    b.d = d;
    b.k = k;
    long long cum = 0;
    for (int m = 0; m <= m_max; ++m) {
        if (!in_active_set(k, m)) continue;
        cum += harmonic_dimension(d, m);
        b.degrees.push_back(m);
        b.cumulative.push_back(cum);
    }
    return b;
}

double falling_factorial(int k, int s) {
    if (s < 0 || s > k) throw std::invalid_argument("falling_factorial: 0 <= s <= k");
    double r = 1;
    for (int i = 0; i < s; ++i) r *= (k - i);
    return r;
}

double mass_diagonal_closed_form(int d, int k) {
    check_dk(d, k);
    return 0.5 * std::exp(log_beta(k + 0.5, 0.5 * d) - log_beta(0.5, 0.5 * d));
}

double tail_envelope_constant(const CoefficientTable& table) {
    const int expo = table.d + 2 * table.k + 1 - 2 * table.s;
    double c = 0;
    for (int m = table.m_max / 2; m <= table.m_max; ++m) {
        if (!table.active[m] || m == 0) continue;
        c = std::max(c, table.values[m] * std::pow(double(m), expo));
    }
    // xi m^expo increases toward its limit; headroom covers the remainder.
    return 1.10 * c;
}

double series_tail_bound(const CoefficientTable& table) {
    const int d = table.d;
    const int expo = d + 2 * table.k + 1 - 2 * table.s;
    const double c = tail_envelope_constant(table);
    const int m0 = table.m_max + 1;
    const int m1 = 10 * table.m_max;
    KahanSum<double> sum;
    for (int m = m0; m <= m1; ++m) {
        if (!in_active_set(table.k, m)) continue;
        sum.add(c * std::pow(double(m), -expo) * double(harmonic_dimension(d, m)));
    }
    // integral remainder with the decreasing ratio N(m)/m^{d-1}
    double ratio = double(harmonic_dimension(d, m1)) / std::pow(double(m1), d - 1);
    double remainder = c * ratio * std::pow(double(m1), d - expo) / (expo - d);
    return sum.value() + remainder;
}

int default_m_max(int d, int n) {
    double root = std::pow(double(n), 1.0 / d);
    return std::max(200, 10 * (int)std::ceil(root));
}

}  // namespace sphgram
