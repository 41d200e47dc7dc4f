#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sphgram/gram.hpp"

namespace sphgram {

/// Full symmetric eigendecomposition summary, eigenvalues descending.
struct SpectrumReport {
    std::vector<double> eigenvalues;  // lambda_1 >= ... >= lambda_n
    double condition_number = 0;      // lambda_1 / lambda_n (inf if lambda_n <= 0)
    double residual_norm = 0;         // max_j |M v_j - lambda_j v_j|_2 / lambda_1
    double trace_error = 0;           // |sum lambda - tr M| / |tr M|
    GramKind kind = GramKind::mass;
    Weighting weighting = Weighting::unweighted;
    int d = 0, k = 0, s = 0, n = 0, m_max = 0;
    double lambda_max() const { return eigenvalues.front(); }
    double lambda_min() const { return eigenvalues.back(); }
};

SpectrumReport eig_sym(const GramMatrix& g);

struct PowerLawFit {
    double slope = 0, intercept = 0, r_squared = 0;
    double x_lo = 0, x_hi = 0;  // fit range in the original variable
    int points = 0;
};

/// Least-squares fit of log y against log x (positive entries only).
PowerLawFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y);

/// Slope of log lambda_j vs log j over j in [j_lo, j_hi]
/// (defaults: [ceil(n^0.2), floor(n^0.8)]). Needs >= 5 points.
PowerLawFit spectrum_law_fit(const SpectrumReport& r, int j_lo = -1, int j_hi = -1);

enum class Generator { random, riesz };

struct SweepConfig {
    int d = 2, k = 1, s = 0;
    GramKind kind = GramKind::mass;
    std::vector<int> sizes;
    Generator generator = Generator::riesz;
    std::vector<std::uint64_t> seeds{0};
    int riesz_max_iters = 1500;
    double riesz_step_tol = 1e-7;
    bool select_by_mesh_ratio = true;  // per-n restart with the best h/h_lower
    int m_max = -1;                    // -1: default_m_max(d, n)
    int grid_resolution = -1;          // -1: default_grid_resolution(d)
    int threads = 1;
};

struct SweepRecord {
    int n = 0;
    std::uint64_t seed = 0;
    double h = 0, h_lower = 0, mesh_ratio = 0;
    double kappa = 0, lambda_max = 0, lambda_min = 0;
    bool selected = false;  // representative for its n
    bool ok = true;         // finite spectrum, lambda_min > 0
};

struct SweepResult {
    std::vector<SweepRecord> records;     // every (n, seed) cell
    std::vector<SweepRecord> per_n;       // one representative per n
    PowerLawFit fit;                      // log kappa vs log n over per_n
    double theoretical_exponent = 0;      // (d+2(k-s)+1)/d
};

/// Condition-number sweep over sizes: generate, assemble, eigendecompose,
/// fit log kappa vs log n. Singular cells are flagged and excluded.
SweepResult condition_sweep(const SweepConfig& cfg);

struct BandRecord {
    int band = 0;            // m+2 in E
    long long d_m = 0;       // cumulative dim up to m
    long long d_m2 = 0;      // cumulative dim up to m+2
    double ratio_lower = 0;  // lambda_{d_{m+2}} / (n xi(m+2))
    double ratio_upper = 0;  // lambda_{d_m + 1} / (n xi(m+2))
    bool truncated = false;  // d_{m+2} clamped to n
};

/// Plateau diagnostics for bands m+2 in E with d_m+1 <= n and
/// m+2 <= c_degree * n^{1/d}. Ratios use lambda/(n xi) for unweighted
/// matrices and lambda/xi for tau-weighted ones.
std::vector<BandRecord> plateau_check(const SpectrumReport& r, const BandIndex& bands,
                                      const CoefficientTable& xi,
                                      double c_degree = 0.5);

struct EffectiveDimensionCurve {
    std::vector<double> lambda;  // ascending grid
    std::vector<double> d_eff;
    PowerLawFit fit;  // log d_eff vs log(n/lambda)
};

/// d_eff(lambda) = sum_j lambda_j/(lambda_j + lambda), exact, plus the
/// companion fit against (n/lambda)^{d/(d+2k+1)}.
EffectiveDimensionCurve effective_dimension(const SpectrumReport& r,
                                            const std::vector<double>& lambda_grid);

/// Default log-spaced grid on [10 max(lambda_n, 0+), lambda_1/10].
std::vector<double> default_lambda_grid(const SpectrumReport& r, int count = 40);

struct CountingCurve {
    std::vector<double> threshold;
    std::vector<long long> count;  // N_M(t) = #{j : lambda_j >= t}
    PowerLawFit fit;               // log N vs log(n/t), zero counts skipped
};

CountingCurve counting_function(const SpectrumReport& r,
                                const std::vector<double>& t_grid);

}  // namespace sphgram
