#include "sphgram/gram.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <thread>

#include "sphgram/common.hpp"
#include "sphgram/gegenbauer.hpp"

namespace sphgram {

namespace {

void run_row_blocks(int n, int threads, const std::function<void(int, int)>& body) {
    threads = std::max(1, std::min(threads, n));
    if (threads == 1) {
        body(0, n);
        return;
    }
    // static row partition; each entry is independent, so the result is
    // bitwise identical to the serial pass
    std::vector<std::thread> pool;
    int chunk = (n + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
        int lo = t * chunk, hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back(body, lo, hi);
    }
    for (auto& th : pool) th.join();
}

GramMatrix assemble_series(const PointSet& ps, const CoefficientTable& table,
                           GramKind kind, int threads) {
    ps.validate();
    GramMatrix g;
    g.kind = kind;
    g.d = table.d;
    g.k = table.k;
    g.s = table.s;
    g.m_max = table.m_max;
    g.tail_bound = series_tail_bound(table);
    const int n = ps.n();
    g.entries.resize(n, n);
    KernelEvaluator kernel(table);
    const Eigen::MatrixXd& x = ps.points;
    run_row_blocks(n, threads, [&](int lo, int hi) {
        for (int i = lo; i < hi; ++i)
            for (int j = i; j < n; ++j) {
                double t = std::clamp(x.row(i).dot(x.row(j)), -1.0, 1.0);
                double v = kernel(t);
                g.entries(i, j) = v;
                g.entries(j, i) = v;
            }
    });
    return g;
}

double relu_pow(double u, int k) {
    if (u <= 0.0) return 0.0;
    if (k == 0) return 1.0;
    double r = u;
    for (int i = 1; i < k; ++i) r *= u;
    return r;
}

}  // namespace

KernelEvaluator::KernelEvaluator(const CoefficientTable& table) : table_(table) {
    inv_a_.resize(table_.m_max + 1);
    b_.resize(table_.m_max + 1);
    for (int m = 0; m <= table_.m_max; ++m) {
        inv_a_[m] = 1.0 / recurrence_a(table_.d, m);
        b_[m] = (m >= 1) ? recurrence_b(table_.d, m) : 0.0;
    }
}

double KernelEvaluator::operator()(double t) const {
    const int M = table_.m_max;
    const int d = table_.d;
    KahanSum<double> acc;
    double pm1 = 1.0;
    acc.add(table_.values[0]);
    if (M == 0) return acc.value();
    double pm = (d + 1) * t;
    if (table_.active[1]) acc.add(table_.values[1] * pm);
    for (int m = 1; m < M; ++m) {
        double next = (t * pm - b_[m] * pm1) * inv_a_[m];
        pm1 = pm;
        pm = next;
        if (table_.active[m + 1]) acc.add(table_.values[m + 1] * pm);
    }
    return acc.value();
}

GramMatrix assemble_mass(const PointSet& ps, int k, int m_max, int threads) {
    if (m_max < k + 1) throw std::invalid_argument("assemble_mass: m_max must be >= k+1");
    return assemble_series(ps, xi_table(ps.d, k, m_max), GramKind::mass, threads);
}

GramMatrix assemble_stiffness(const PointSet& ps, int k, int s, int m_max, int threads) {
    if (s < 0 || s > k) throw std::invalid_argument("assemble_stiffness: 0 <= s <= k");
    if (m_max < k + 1)
        throw std::invalid_argument("assemble_stiffness: m_max must be >= k+1");
    return assemble_series(ps, xi_s_table(ps.d, k, s, m_max),
                           s == 0 ? GramKind::mass : GramKind::stiffness, threads);
}

QmcGram assemble_qmc(const PointSet& ps, int k, int s, long long n_samples,
                     std::uint64_t seed, int threads, int batches) {
    ps.validate();
    if (s < 0 || s > k) throw std::invalid_argument("assemble_qmc: 0 <= s <= k");
    if (n_samples < 1000) throw std::invalid_argument("assemble_qmc: n_samples >= 1000");
    if (batches < 2) throw std::invalid_argument("assemble_qmc: batches >= 2");

    const int n = ps.n();
    const int dim = ps.d + 1;
    const int kk = k - s;  // reduced activation order for s >= 1
    const long long per_batch = n_samples / batches;
    const int n_upper = n * (n + 1) / 2;

    // batch_sums[b] holds the upper-triangle sums of sigma_kk(x_i.w) sigma_kk(x_j.w)
    std::vector<std::vector<double>> batch_sums(batches,
                                                std::vector<double>(n_upper, 0.0));
    auto run_batch = [&](int b) {
        Rng rng(child_seed(seed, static_cast<std::uint64_t>(b)));
        std::vector<double> f(n), w(dim);
        std::vector<double>& sums = batch_sums[b];
        for (long long q = 0; q < per_batch; ++q) {
            double norm2 = 0;
            do {
                norm2 = 0;
                for (int c = 0; c < dim; ++c) {
                    w[c] = rng.normal();
                    norm2 += w[c] * w[c];
                }
            } while (norm2 < 1e-16);
            double inv = 1.0 / std::sqrt(norm2);
            for (int c = 0; c < dim; ++c) w[c] *= inv;
            for (int i = 0; i < n; ++i) {
                double u = 0;
                for (int c = 0; c < dim; ++c) u += ps.points(i, c) * w[c];
                f[i] = relu_pow(u, kk);
            }
            int idx = 0;
            for (int i = 0; i < n; ++i) {
                double fi = f[i];
                if (fi == 0.0) {
                    idx += n - i;
                    continue;
                }
                for (int j = i; j < n; ++j) sums[idx++] += fi * f[j];
            }
        }
    };
    threads = std::max(1, std::min(threads, batches));
    if (threads == 1) {
        for (int b = 0; b < batches; ++b) run_batch(b);
    } else {
        std::vector<std::thread> pool;
        std::atomic<int> next{0};
        for (int t = 0; t < threads; ++t)
            pool.emplace_back([&] {
                for (int b = next++; b < batches; b = next++) run_batch(b);
            });
        for (auto& th : pool) th.join();
    }

    QmcGram out;
    out.samples = per_batch * batches;
    out.batches = batches;
    out.gram.kind = (s == 0) ? GramKind::mass : GramKind::stiffness;
    out.gram.d = ps.d;
    out.gram.k = k;
    out.gram.s = s;
    out.gram.m_max = 0;
    out.gram.tail_bound = 0;
    out.gram.entries.resize(n, n);
    out.standard_error.resize(n, n);
    const double fk2 = falling_factorial(k, s) * falling_factorial(k, s);
    int idx = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j, ++idx) {
            double mean = 0;
            for (int b = 0; b < batches; ++b) mean += batch_sums[b][idx] / per_batch;
            mean /= batches;
            double var = 0;
            for (int b = 0; b < batches; ++b) {
                double dlt = batch_sums[b][idx] / per_batch - mean;
                var += dlt * dlt;
            }
            var /= (batches - 1);
            double se = std::sqrt(var / batches);
            double factor = 1.0;
            if (s > 0) {
                double t = std::clamp(ps.points.row(i).dot(ps.points.row(j)), -1.0, 1.0);
                factor = fk2 * std::pow(t, s);
            }
            out.gram.entries(i, j) = out.gram.entries(j, i) = factor * mean;
            out.standard_error(i, j) = out.standard_error(j, i) = std::abs(factor) * se;
        }
    return out;
}

GramMatrix weighted(const GramMatrix& g) {
    if (g.weighting == Weighting::uniform_tau)
        throw std::invalid_argument("weighted: matrix is already tau-weighted");
    GramMatrix out = g;
    out.weighting = Weighting::uniform_tau;
    out.entries /= double(g.n());
    return out;
}

}  // namespace sphgram
