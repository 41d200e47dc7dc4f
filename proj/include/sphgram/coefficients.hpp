#pragma once

#include <vector>

namespace sphgram {

/// Squared Legendre coefficients xi_s(m) of the ReLU^k mass (s=0) or
/// order-s stiffness zonal kernel, on the integer grid 0..m_max.
/// values[m] == 0 exactly iff active[m] is false (m >= k+1, m == k mod 2).
struct CoefficientTable {
    int d = 0, k = 0, s = 0;
    int m_max = 0;
    std::vector<double> values;  // xi_s(m)
    std::vector<char> active;    // m in E
};

/// Cumulative harmonic dimensions d_m = sum_{i in E, i <= m} N(i),
/// listed per element of E up to m_max.
struct BandIndex {
    int d = 0, k = 0;
    std::vector<int> degrees;          // members of E, ascending
    std::vector<long long> cumulative; // d_m for each member
};

/// E = {0..k} plus {k+1, k+3, ...}: degrees where sigma_hat_k != 0.
bool in_active_set(int k, int m);

/// Legendre coefficient sigma_hat_k(m) of sigma_k under the projected
/// measure. Closed Gamma-ratio form (log-space, sign included) for
/// m >= k+1; exact Beta-moment evaluation for m <= k; exact 0 on the
/// vanishing pattern.
double sigma_hat(int d, int k, int m);

/// Mass table: xi(m) = sigma_hat(m)^2, with the m >= k+1 branch computed
/// from the squared-Gamma-ratio form (equal by the duplication identity).
CoefficientTable xi_table(int d, int k, int m_max);

/// Stiffness table via the recurrence-coefficient iteration applied s times
/// to xi_0(t) = ((k)_s)^2 sigma_hat_{k-s}(t)^2, built on 0..m_max+s and
/// truncated. s = 0 reproduces xi_table bitwise.
CoefficientTable xi_s_table(int d, int k, int s, int m_max);

struct OracleResult {
    double value = 0;
    double est_error = 0;   // relative stagnation estimate of the last doubling
    int panels = 0;         // per half-interval at convergence
};

/// Independent quadrature oracle for sigma_hat_k(m): composite
/// Gauss-Legendre in the angle variable (t = cos phi), split at the
/// sigma_k kink, long-double arithmetic, panel doubling to 1e-12.
/// Valid for m <= 200.
OracleResult coefficient_oracle(int d, int k, int m);

BandIndex band_index(int d, int k, int m_max);

/// (k)_s = k!/(k-s)!.
double falling_factorial(int k, int s);

/// q(1) = mass-kernel diagonal = B(k+1/2, d/2) / (2 B(1/2, d/2)).
double mass_diagonal_closed_form(int d, int k);

/// Envelope constant C with xi_s(m) <= C m^{-(d+2k+1-2s)} on the table's
/// upper half, with 10% headroom for the monotone approach to the limit.
double tail_envelope_constant(const CoefficientTable& table);

/// A-priori entrywise truncation bound sum_{m > m_max} C m^{-expo} N(m).
double series_tail_bound(const CoefficientTable& table);

/// Default truncation degree max(200, 10 ceil(n^{1/d})).
int default_m_max(int d, int n);

}  // namespace sphgram
