#pragma once

#include <Eigen/Core>
#include <cstdint>

#include "sphgram/coefficients.hpp"
#include "sphgram/points.hpp"

namespace sphgram {

enum class GramKind { mass, stiffness };
enum class Weighting { unweighted, uniform_tau };

/// Symmetric n x n Gram matrix of ReLU^k features (mass) or their order-s
/// surface gradients (stiffness), assembled by truncated zonal series.
struct GramMatrix {
    GramKind kind = GramKind::mass;
    int d = 0, k = 0, s = 0;
    int m_max = 0;
    Weighting weighting = Weighting::unweighted;
    double tail_bound = 0;  // a-priori entrywise truncation bound
    Eigen::MatrixXd entries;

    int n() const { return static_cast<int>(entries.rows()); }
};

/// Zonal kernel evaluator: q(t) = sum_{m in E, m <= m_max} xi(m) p_m(t),
/// fused ladder recurrence with compensated accumulation, O(1) memory.
class KernelEvaluator {
public:
    explicit KernelEvaluator(const CoefficientTable& table);
    double operator()(double t) const;
    const CoefficientTable& table() const { return table_; }

private:
    CoefficientTable table_;
    std::vector<double> inv_a_, b_;
};

/// Mass matrix entries(i,j) = sum_{m in E, m <= m_max} xi(m) p_m(theta_i . theta_j).
GramMatrix assemble_mass(const PointSet& ps, int k, int m_max, int threads = 1);

/// Stiffness matrix via the xi_s table, same assembly path (s = 0 is
/// bitwise the mass matrix).
GramMatrix assemble_stiffness(const PointSet& ps, int k, int s, int m_max,
                              int threads = 1);

/// Monte Carlo oracle with per-entry standard errors from `batches`
/// independent batches. For s >= 1 uses the gradient reduction
/// entries = ((k)_s)^2 (theta_i . theta_j)^s * [order k-s mass estimate].
struct QmcGram {
    GramMatrix gram;
    Eigen::MatrixXd standard_error;  // of each entry's mean estimate
    long long samples = 0;
    int batches = 0;
};
QmcGram assemble_qmc(const PointSet& ps, int k, int s, long long n_samples,
                     std::uint64_t seed, int threads = 1, int batches = 16);

/// tau_j = 1/n normalization W^{1/2} M W^{1/2}: entries divided by n.
/// Rejects an already-weighted matrix.
GramMatrix weighted(const GramMatrix& g);

}  // namespace sphgram
