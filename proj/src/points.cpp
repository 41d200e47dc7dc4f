#include "sphgram/points.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sphgram/common.hpp"

namespace sphgram {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

void check_dn(int d, int n) {
    if (d < 1) throw std::invalid_argument("sphere dimension d must be >= 1");
    if (n < 1) throw std::invalid_argument("point count n must be >= 1");
}

Eigen::MatrixXd renormalized(const Eigen::MatrixXd& pts) {
    Eigen::MatrixXd out = pts;
    for (Eigen::Index i = 0; i < out.rows(); ++i) out.row(i).normalize();
    return out;
}

// Tangential part of the Euclidean Riesz gradient at each point.
Eigen::MatrixXd riesz_tangential_gradient(const Eigen::MatrixXd& pts, int s) {
    const Eigen::Index n = pts.rows();
    Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(n, pts.cols());
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            Eigen::VectorXd diff = pts.row(i) - pts.row(j);
            double r2 = diff.squaredNorm();
            // d/dx_i of 2*|x_i-x_j|^{-s} = -2 s |x_i-x_j|^{-(s+2)} (x_i-x_j)
            double w = -2.0 * s * std::pow(r2, -0.5 * (s + 2));
            grad.row(i) += w * diff.transpose();
            grad.row(j) -= w * diff.transpose();
        }
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        double radial = grad.row(i).dot(pts.row(i));
        grad.row(i) -= radial * pts.row(i);
    }
    return grad;
}

}  // namespace

void PointSet::validate() const {
    check_dn(d, n());
    if (points.cols() != d + 1)
        throw std::invalid_argument("point set has wrong ambient dimension");
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
        if (std::abs(points.row(i).norm() - 1.0) > 1e-12)
            throw std::invalid_argument("point " + std::to_string(i) +
                                        " is not unit norm within 1e-12");
    }
}

PointSet sample_uniform(int d, int n, std::uint64_t seed) {
    check_dn(d, n);
    Rng rng(seed);
    PointSet ps;
    ps.d = d;
    ps.points.resize(n, d + 1);
    for (int i = 0; i < n; ++i) {
        double norm2 = 0;
        do {
            for (int c = 0; c <= d; ++c) ps.points(i, c) = rng.normal();
            norm2 = ps.points.row(i).squaredNorm();
        } while (norm2 < 1e-16);  // astronomically rare; redraw
        ps.points.row(i) /= std::sqrt(norm2);
    }
    ps.provenance = {Provenance::Method::random, seed, 0, {}};
    return ps;
}

double riesz_energy(const Eigen::MatrixXd& pts, int s_power) {
    const Eigen::Index n = pts.rows();
    KahanSum<double> acc;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j) {
            double r2 = (pts.row(i) - pts.row(j)).squaredNorm();
            acc.add(2.0 * std::pow(r2, -0.5 * s_power));
        }
    return acc.value();
}

RieszResult riesz_minimize(int d, int n, std::uint64_t seed, int max_iters,
                           double step_tol) {
    if (n < 2) throw std::invalid_argument("riesz_minimize needs n >= 2");
    RieszResult res;
    res.points = sample_uniform(d, n, seed);
    Eigen::MatrixXd x = res.points.points;
    const int s = d;
    double energy = riesz_energy(x, s);
    res.energy_trace.push_back(energy);
    const double step0 = 0.1 / n;

    for (int it = 0; it < max_iters; ++it) {
        Eigen::MatrixXd grad = riesz_tangential_gradient(x, s);
        double eta = step0;
        bool accepted = false;
        Eigen::MatrixXd trial;
        double trial_energy = 0;
        for (int halving = 0; halving < 60; ++halving) {
            trial = renormalized(x - eta * grad);
            trial_energy = riesz_energy(trial, s);
            if (trial_energy < energy) {
                accepted = true;
                break;
            }
            eta *= 0.5;
        }
        if (!accepted) {
            res.converged = true;  // no decreasing step at this resolution
            break;
        }
        double rel = (energy - trial_energy) / std::abs(trial_energy);
        x = trial;
        energy = trial_energy;
        res.energy_trace.push_back(energy);
        res.iterations = it + 1;
        if (rel < step_tol) {
            res.converged = true;
            break;
        }
    }
    res.points.points = x;
    res.points.provenance = {Provenance::Method::riesz, seed, res.iterations, {}};
    return res;
}

double geodesic_distance(const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
    if (u.size() != v.size())
        throw std::invalid_argument("geodesic_distance: dimension mismatch");
    if (std::abs(u.norm() - 1.0) > 1e-9 || std::abs(v.norm() - 1.0) > 1e-9)
        throw std::invalid_argument("geodesic_distance: inputs must be unit vectors");
    double c = std::clamp(u.dot(v), -1.0, 1.0);
    return std::acos(c);
}

int default_grid_resolution(int d) {
    switch (d) {
        case 1: return 4096;
        case 2: return 100;
        case 3: return 36;
        default: return 12;
    }
}

MeshStatistics mesh_statistics(const PointSet& ps, int grid_resolution) {
    ps.validate();
    if (grid_resolution < 10)
        throw std::invalid_argument("grid_resolution must be >= 10");
    const int n = ps.n();
    const int d = ps.d;
    MeshStatistics st;

    // h_lower: antipodal separation. rho(-x_i, x_j) = pi - rho(x_i, x_j).
    if (n >= 2) {
        double best = std::numeric_limits<double>::infinity();
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                double c = std::clamp(ps.points.row(i).dot(ps.points.row(j)), -1.0, 1.0);
                double rho = std::acos(c);
                best = std::min({best, rho, kPi - rho});
            }
        st.antipodal_separation = best;
        st.separation_defined = true;
    } else {
        st.antipodal_separation = std::numeric_limits<double>::quiet_NaN();
        st.separation_defined = false;
    }

    // h: max over a product angular grid of the distance to the nearest point.
    // Angles phi_1..phi_{d-1} in (0,pi), phi_d in (0,2pi); cell midpoints.
    const int res = grid_resolution;
    std::vector<int> idx(d, 0);
    Eigen::VectorXd g(d + 1);
    double hmax = 0;
    for (;;) {
        double sin_prod = 1.0;
        for (int a = 0; a < d; ++a) {
            double span = (a == d - 1) ? 2.0 * kPi : kPi;
            double phi = span * (idx[a] + 0.5) / res;
            g[a] = sin_prod * std::cos(phi);
            sin_prod *= std::sin(phi);
        }
        g[d] = sin_prod;
        double best_dot = -1.0;
        for (int j = 0; j < n; ++j)
            best_dot = std::max(best_dot, ps.points.row(j).dot(g));
        hmax = std::max(hmax, std::acos(std::clamp(best_dot, -1.0, 1.0)));

        int a = d - 1;
        while (a >= 0 && ++idx[a] == res) idx[a--] = 0;
        if (a < 0) break;
    }
    st.fill_distance = hmax;
    st.fill_grid_spacing = kPi * std::sqrt(static_cast<double>(d)) / res;
    st.mesh_ratio = st.separation_defined
                        ? (st.antipodal_separation > 0
                               ? st.fill_distance / st.antipodal_separation
                               : std::numeric_limits<double>::infinity())
                        : std::numeric_limits<double>::quiet_NaN();
    return st;
}

}  // namespace sphgram
