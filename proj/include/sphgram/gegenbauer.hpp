#pragma once

#include <functional>
#include <vector>

namespace sphgram {

/// dim of the degree-m spherical harmonics on S^d:
/// N(0) = 1, N(m) = (2m+d-1)/m * C(m+d-2, d-1), exact integer arithmetic.
/// Throws std::overflow_error past the int64 range.
long long harmonic_dimension(int d, int m);

/// Three-term recurrence t p_m = a_m p_{m+1} + b_m p_{m-1} for the
/// addition-theorem normalization p_m(1) = N(m).
/// a_t = (t+1)/(2t+d+1); b_1 = 1 and b_t = (t+d-2)/(2t+d-3) for t >= 2.
double recurrence_a(int d, int t);
double recurrence_b(int d, int t);

/// p_0(t)..p_M(t) by forward recurrence. t must lie in [-1,1] within 1e-12
/// (clamped). Stable to M = 5000; the p_m(1)=N(m) drift is test-guarded.
template <class Real>
void ladder_eval(int d, int M, Real t, Real* out);

std::vector<double> ladder_eval(int d, int M, double t);

/// Nodes/weights of G-point Gauss-Legendre on [-1,1], cached per G.
struct GaussLegendre {
    std::vector<double> nodes, weights;
};
const GaussLegendre& gauss_legendre(int points);

/// Mean of f against the projected sphere measure:
///   integral f(t) (1-t^2)^{(d-2)/2} dt / integral (1-t^2)^{(d-2)/2} dt,
/// composite Gauss-Legendre with the weight folded in; the endpoint regions
/// use the substitution t = +-(1 - u^2), which removes the half-integer
/// weight powers of odd d. The denominator is the closed form B(1/2, d/2).
double projected_quadrature(int d, const std::function<double(double)>& f,
                            int panels, int nodes_per_panel);

/// log Beta via lgamma.
double log_beta(double a, double b);

}  // namespace sphgram
