#include "sphgram/spectra.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "sphgram/common.hpp"
#include "sphgram/gegenbauer.hpp"

namespace sphgram {

SpectrumReport eig_sym(const GramMatrix& g) {
    if (!g.entries.allFinite())
        throw numerical_error("eig_sym: non-finite matrix entries");
    const int n = g.n();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(g.entries);
    if (solver.info() != Eigen::Success)
        throw numerical_error("eig_sym: eigensolver did not converge");

    SpectrumReport r;
    r.kind = g.kind;
    r.weighting = g.weighting;
    r.d = g.d;
    r.k = g.k;
    r.s = g.s;
    r.n = n;
    r.m_max = g.m_max;
    r.eigenvalues.resize(n);
    for (int i = 0; i < n; ++i) r.eigenvalues[i] = solver.eigenvalues()(n - 1 - i);

    const Eigen::MatrixXd& v = solver.eigenvectors();
    Eigen::MatrixXd resid = g.entries * v - v * solver.eigenvalues().asDiagonal();
    double lam1 = std::max(std::abs(r.eigenvalues.front()), 1e-300);
    r.residual_norm = resid.colwise().norm().maxCoeff() / lam1;

    double tr = g.entries.trace();
    double sum = 0;
    for (double lam : r.eigenvalues) sum += lam;
    r.trace_error = std::abs(sum - tr) / std::max(std::abs(tr), 1e-300);

    r.condition_number = r.eigenvalues.back() > 0
                             ? r.eigenvalues.front() / r.eigenvalues.back()
                             : std::numeric_limits<double>::infinity();
    return r;
}

PowerLawFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw std::invalid_argument("fit_power_law: size mismatch");
    PowerLawFit f;
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] > 0 && y[i] > 0 && std::isfinite(x[i]) && std::isfinite(y[i])) {
            lx.push_back(std::log(x[i]));
            ly.push_back(std::log(y[i]));
            f.x_lo = f.points == 0 ? x[i] : std::min(f.x_lo, x[i]);
            f.x_hi = f.points == 0 ? x[i] : std::max(f.x_hi, x[i]);
            ++f.points;
        }
    }
    if (f.points < 2) {
        f.slope = std::numeric_limits<double>::quiet_NaN();
        f.intercept = std::numeric_limits<double>::quiet_NaN();
        f.r_squared = 0;
        return f;
    }
    double mx = 0, my = 0;
    for (int i = 0; i < f.points; ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= f.points;
    my /= f.points;
    double sxx = 0, sxy = 0, syy = 0;
    for (int i = 0; i < f.points; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
        syy += (ly[i] - my) * (ly[i] - my);
    }
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.r_squared = syy > 0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return f;
}

PowerLawFit spectrum_law_fit(const SpectrumReport& r, int j_lo, int j_hi) {
    const int n = r.n;
    if (j_lo < 0) j_lo = (int)std::ceil(std::pow(double(n), 0.2));
    if (j_hi < 0) j_hi = (int)std::floor(std::pow(double(n), 0.8));
    j_lo = std::max(1, j_lo);
    j_hi = std::min(n, j_hi);
    if (j_hi - j_lo + 1 < 5)
        throw std::invalid_argument("spectrum_law_fit: fewer than 5 points in range");
    std::vector<double> xs, ys;
    for (int j = j_lo; j <= j_hi; ++j) {
        xs.push_back(double(j));
        ys.push_back(r.eigenvalues[j - 1]);
    }
    return fit_power_law(xs, ys);
}

SweepResult condition_sweep(const SweepConfig& cfg) {
    if (cfg.sizes.size() < 2)
        throw std::invalid_argument("condition_sweep: need at least 2 sizes");
    for (std::size_t i = 1; i < cfg.sizes.size(); ++i)
        if (cfg.sizes[i] <= cfg.sizes[i - 1])
            throw std::invalid_argument("condition_sweep: sizes must be increasing");
    if (cfg.seeds.empty()) throw std::invalid_argument("condition_sweep: no seeds");

    SweepResult out;
    out.theoretical_exponent = double(cfg.d + 2 * (cfg.k - cfg.s) + 1) / cfg.d;
    int grid = cfg.grid_resolution > 0 ? cfg.grid_resolution
                                       : default_grid_resolution(cfg.d);

    for (int n : cfg.sizes) {
        int m_max = cfg.m_max > 0 ? cfg.m_max : default_m_max(cfg.d, n);
        std::vector<SweepRecord> cell;
        for (std::uint64_t seed : cfg.seeds) {
            PointSet ps =
                cfg.generator == Generator::random
                    ? sample_uniform(cfg.d, n, seed)
                    : riesz_minimize(cfg.d, n, seed, cfg.riesz_max_iters,
                                     cfg.riesz_step_tol)
                          .points;
            MeshStatistics ms = mesh_statistics(ps, grid);
            SweepRecord rec;
            rec.n = n;
            rec.seed = seed;
            rec.h = ms.fill_distance;
            rec.h_lower = ms.antipodal_separation;
            rec.mesh_ratio = ms.mesh_ratio;
            GramMatrix g = cfg.kind == GramKind::mass
                               ? assemble_mass(ps, cfg.k, m_max, cfg.threads)
                               : assemble_stiffness(ps, cfg.k, cfg.s, m_max,
                                                    cfg.threads);
            SpectrumReport sr = eig_sym(g);
            rec.lambda_max = sr.lambda_max();
            rec.lambda_min = sr.lambda_min();
            rec.kappa = sr.condition_number;
            rec.ok = std::isfinite(rec.kappa) && rec.lambda_min > 0;
            cell.push_back(rec);
        }
        // representative: best mesh ratio, or the median kappa cell
        std::vector<SweepRecord> good;
        for (const auto& r : cell)
            if (r.ok) good.push_back(r);
        if (!good.empty()) {
            SweepRecord rep;
            if (cfg.select_by_mesh_ratio) {
                rep = *std::min_element(good.begin(), good.end(),
                                        [](const SweepRecord& a, const SweepRecord& b) {
                                            return a.mesh_ratio < b.mesh_ratio;
                                        });
            } else {
                std::sort(good.begin(), good.end(),
                          [](const SweepRecord& a, const SweepRecord& b) {
                              return a.kappa < b.kappa;
                          });
                rep = good[good.size() / 2];
            }
            for (auto& r : cell)
                if (r.seed == rep.seed) r.selected = true;
            rep.selected = true;
            out.per_n.push_back(rep);
        }
        out.records.insert(out.records.end(), cell.begin(), cell.end());
    }
    std::vector<double> xs, ys;
    for (const auto& r : out.per_n) {
        xs.push_back(double(r.n));
        ys.push_back(r.kappa);
    }
    out.fit = fit_power_law(xs, ys);
    return out;
}

std::vector<BandRecord> plateau_check(const SpectrumReport& r, const BandIndex& bands,
                                      const CoefficientTable& xi, double c_degree) {
    const int n = r.n;
    const double scale = (r.weighting == Weighting::uniform_tau) ? 1.0 : double(n);
    const double degree_cap = c_degree * std::pow(double(n), 1.0 / r.d);
    std::vector<BandRecord> out;
    for (std::size_t b = 0; b < bands.degrees.size(); ++b) {
        int m2 = bands.degrees[b];  // the band degree m+2
        if (m2 < 2) continue;       // needs the index pair (m, m+2)
        if (m2 > degree_cap) continue;
        if (m2 > xi.m_max || !xi.active[m2]) continue;
        // d_m with m = m2 - 2, which is always a member of E here
        long long dm = 0;
        for (std::size_t a = 0; a < b; ++a)
            if (bands.degrees[a] == m2 - 2) {
                dm = bands.cumulative[a];
                break;
            }
        long long dm2 = bands.cumulative[b];
        if (dm + 1 > n) continue;
        BandRecord rec;
        rec.band = m2;
        rec.d_m = dm;
        rec.d_m2 = dm2;
        rec.truncated = dm2 > n;
        long long lo_idx = std::min<long long>(dm2, n);
        rec.ratio_lower = r.eigenvalues[lo_idx - 1] / (scale * xi.values[m2]);
        rec.ratio_upper = r.eigenvalues[dm] / (scale * xi.values[m2]);
        out.push_back(rec);
    }
    return out;
}

EffectiveDimensionCurve effective_dimension(const SpectrumReport& r,
                                            const std::vector<double>& lambda_grid) {
    EffectiveDimensionCurve c;
    c.lambda = lambda_grid;
    std::sort(c.lambda.begin(), c.lambda.end());
    for (double lam : c.lambda) {
        if (!(lam > 0))
            throw std::invalid_argument("effective_dimension: grid values must be > 0");
        KahanSum<double> acc;
        for (double ev : r.eigenvalues)
            if (ev > 0) acc.add(ev / (ev + lam));
        c.d_eff.push_back(acc.value());
    }
    std::vector<double> xs;
    for (double lam : c.lambda) xs.push_back(double(r.n) / lam);
    c.fit = fit_power_law(xs, c.d_eff);
    return c;
}

std::vector<double> default_lambda_grid(const SpectrumReport& r, int count) {
    double lam1 = r.lambda_max();
    double lamn = r.lambda_min();
    double lo = 10.0 * std::max(lamn, lam1 * 1e-15);
    double hi = lam1 / 10.0;
    if (!(lo > 0) || lo >= hi) {
        lo = lam1 * 1e-12;
        hi = lam1 / 10.0;
    }
    std::vector<double> grid(count);
    for (int i = 0; i < count; ++i)
        grid[i] = lo * std::pow(hi / lo, double(i) / (count - 1));
    return grid;
}

CountingCurve counting_function(const SpectrumReport& r,
                                const std::vector<double>& t_grid) {
    CountingCurve c;
    c.threshold = t_grid;
    std::sort(c.threshold.begin(), c.threshold.end());
    for (double t : c.threshold) {
        if (!(t > 0))
            throw std::invalid_argument("counting_function: thresholds must be > 0");
        long long cnt = 0;
        for (double ev : r.eigenvalues)
            if (ev >= t) ++cnt;
        c.count.push_back(cnt);
    }
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < c.threshold.size(); ++i) {
        if (c.count[i] > 0) {
            xs.push_back(double(r.n) / c.threshold[i]);
            ys.push_back(double(c.count[i]));
        }
    }
    c.fit = fit_power_law(xs, ys);
    return c;
}

}  // namespace sphgram
