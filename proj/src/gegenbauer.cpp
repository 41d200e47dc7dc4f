#include "sphgram/gegenbauer.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "sphgram/common.hpp"

namespace sphgram {

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;

using int128 = __int128;

long long checked_narrow(int128 v, const char* what) {
    if (v > int128(9223372036854775807ll))
        throw std::overflow_error(std::string(what) + " overflows int64");
    return static_cast<long long>(v);
}
}  // namespace

long long harmonic_dimension(int d, int m) {
    if (d < 1 || m < 0) throw std::invalid_argument("harmonic_dimension: d >= 1, m >= 0");
    if (m == 0) return 1;
    // C(m+d-2, d-1) multiplicatively with overflow checks, then the prefactor.
    int128 binom = 1;
    for (int i = 1; i <= d - 1; ++i) {
        binom = binom * (m - 1 + i);
        binom /= i;  // exact: product of i consecutive integers divisible by i!
        if (binom > (int128(1) << 100))
            throw std::overflow_error("harmonic_dimension overflows int64");
    }
    int128 num = binom * (2 * m + d - 1);
    if (num % m != 0) throw std::logic_error("harmonic_dimension: non-integer result");
    return checked_narrow(num / m, "harmonic_dimension");
}

double recurrence_a(int d, int t) {
    if (t < 0) return 0.0;  // a_{-1} = a_{-2} = ... = 0 convention
    return double(t + 1) / double(2 * t + d + 1);
}

double recurrence_b(int d, int t) {
    if (t < 1) throw std::invalid_argument("recurrence_b defined for t >= 1");
    if (t == 1) return 1.0;  // (t+d-2)/(2t+d-3) at t=1 for every d (0/0 limit at d=1)
    return double(t + d - 2) / double(2 * t + d - 3);
}

template <class Real>
void ladder_eval(int d, int M, Real t, Real* out) {
    if (M < 0) throw std::invalid_argument("ladder_eval: M >= 0");
    Real lim = Real(1) + Real(1e-12);
    if (t > lim || t < -lim)
        throw std::invalid_argument("ladder_eval: t outside [-1,1]");
    t = std::min(Real(1), std::max(Real(-1), t));
    out[0] = Real(1);
    if (M == 0) return;
    out[1] = Real(d + 1) * t;
    for (int m = 1; m < M; ++m) {
        Real a = Real(m + 1) / Real(2 * m + d + 1);
        Real b = (m == 1) ? Real(1) : Real(m + d - 2) / Real(2 * m + d - 3);
        out[m + 1] = (t * out[m] - b * out[m - 1]) / a;
    }
}

template void ladder_eval<double>(int, int, double, double*);
template void ladder_eval<long double>(int, int, long double, long double*);

std::vector<double> ladder_eval(int d, int M, double t) {
    std::vector<double> out(M + 1);
    ladder_eval<double>(d, M, t, out.data());
    return out;
}

const GaussLegendre& gauss_legendre(int points) {
    if (points < 1) throw std::invalid_argument("gauss_legendre: points >= 1");
    static std::map<int, GaussLegendre> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(points);
    if (it != cache.end()) return it->second;

    GaussLegendre gl;
    gl.nodes.resize(points);
    gl.weights.resize(points);
    const int G = points;
    for (int i = 0; i < (G + 1) / 2; ++i) {
        // Newton from the Chebyshev-angle initial guess.
        long double x = std::cos(kPi * (i + 0.75L) / (G + 0.5L));
        long double dp = 0;
        for (int iter = 0; iter < 100; ++iter) {
            long double p0 = 1, p1 = x;
            for (int m = 1; m < G; ++m) {
                long double p2 = ((2 * m + 1) * x * p1 - m * p0) / (m + 1);
                p0 = p1;
                p1 = p2;
            }
            dp = G * (x * p1 - p0) / (x * x - 1);
            long double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-19L) break;
        }
        long double w = 2.0L / ((1 - x * x) * dp * dp);
        gl.nodes[i] = static_cast<double>(-x);  // ascending order
        gl.nodes[G - 1 - i] = static_cast<double>(x);
        gl.weights[i] = gl.weights[G - 1 - i] = static_cast<double>(w);
    }
    if (G % 2 == 1) gl.nodes[G / 2] = 0.0;
    return cache.emplace(points, std::move(gl)).first->second;
}

double log_beta(double a, double b) {
    return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

double projected_quadrature(int d, const std::function<double(double)>& f,
                            int panels, int nodes_per_panel) {
    if (d < 1) throw std::invalid_argument("projected_quadrature: d >= 1");
    if (panels < 1 || nodes_per_panel < 1)
        throw std::invalid_argument("projected_quadrature: panels, nodes >= 1");
    const GaussLegendre& gl = gauss_legendre(nodes_per_panel);
    const double half_power = 0.5 * (d - 2);
    KahanSum<double> acc;
    auto check = [](double v) {
        if (!std::isfinite(v))
            throw numerical_error("projected_quadrature: non-finite integrand");
        return v;
    };

    // Endpoint regions via t = +-(1 - u^2): the weight becomes
    // (2-u^2)^{(d-2)/2} 2 u^{d-1}, smooth for every d (the half-integer
    // endpoint powers for odd d are absorbed by the substitution).
    const double edge_u = 0.5;  // covers |t| in [0.75, 1]
    const int edge_panels = std::max(1, panels / 8);
    const int interior = std::max(1, panels - 2 * edge_panels);
    for (int side = 0; side < 2; ++side) {
        for (int p = 0; p < edge_panels; ++p) {
            double a = edge_u * p / edge_panels, b = edge_u * (p + 1) / edge_panels;
            double mid = 0.5 * (a + b), hw = 0.5 * (b - a);
            for (int q = 0; q < nodes_per_panel; ++q) {
                double u = mid + hw * gl.nodes[q];
                double t = side ? 1.0 - u * u : -1.0 + u * u;
                double w = 2.0 * std::pow(u, d - 1) * std::pow(2.0 - u * u, half_power);
                acc.add(hw * gl.weights[q] * check(f(t)) * w);
            }
        }
    }
    const double lo = -1.0 + edge_u * edge_u, hi = 1.0 - edge_u * edge_u;
    for (int p = 0; p < interior; ++p) {
        double a = lo + (hi - lo) * p / interior, b = lo + (hi - lo) * (p + 1) / interior;
        double mid = 0.5 * (a + b), hw = 0.5 * (b - a);
        for (int q = 0; q < nodes_per_panel; ++q) {
            double t = mid + hw * gl.nodes[q];
            double w = std::pow((1.0 - t) * (1.0 + t), half_power);
            acc.add(hw * gl.weights[q] * check(f(t)) * w);
        }
    }
    return acc.value() / std::exp(log_beta(0.5, 0.5 * d));
}

}  // namespace sphgram
