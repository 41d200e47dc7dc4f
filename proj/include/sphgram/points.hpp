#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

namespace sphgram {

struct Provenance {
    enum class Method { random, riesz, file };
    Method method = Method::random;
    std::uint64_t seed = 0;
    int iterations = 0;     // riesz only
    std::string path;       // file only
};

/// n unit vectors on S^d (rows of `points`, living in R^{d+1}).
struct PointSet {
    int d = 0;
    Eigen::MatrixXd points;  // n x (d+1)
    Provenance provenance;

    int n() const { return static_cast<int>(points.rows()); }
    /// Enforces d >= 1, n >= 1 and unit norms within 1e-12.
    void validate() const;
};

/// Mesh statistics of a point set in geodesic distance.
/// fill_distance is a grid lower estimate of the true supremum; the grid
/// spacing is reported as the approximation radius.
struct MeshStatistics {
    double fill_distance = 0;          // h
    double fill_grid_spacing = 0;      // approximation radius of the h grid
    double antipodal_separation = 0;   // h_lower (NaN when undefined)
    double mesh_ratio = 0;             // h / h_lower (inf when h_lower == 0)
    bool separation_defined = false;   // false for n < 2
};

/// i.i.d. surface-uniform draws (normalized Gaussians), deterministic per seed.
PointSet sample_uniform(int d, int n, std::uint64_t seed);

/// Riesz d-energy sum_{i != j} |x_i - x_j|^{-s_power} (ordered pairs).
double riesz_energy(const Eigen::MatrixXd& pts, int s_power);

struct RieszResult {
    PointSet points;
    std::vector<double> energy_trace;  // energy after each accepted step
    bool converged = false;
    int iterations = 0;
};

/// Projected gradient descent on the Riesz d-energy: tangential gradient,
/// renormalization, backtracking line search halving from 0.1/n.
/// Stops when the relative energy decrease falls below step_tol, when no
/// decreasing step exists, or after max_iters (convergence flag false).
RieszResult riesz_minimize(int d, int n, std::uint64_t seed, int max_iters,
                           double step_tol);

/// arccos of the clamped inner product, in [0, pi]. Inputs must be unit
/// vectors within 1e-9.
double geodesic_distance(const Eigen::VectorXd& u, const Eigen::VectorXd& v);

/// h_lower exactly in O(n^2); h from a deterministic product angular grid of
/// about grid_resolution^d points.
MeshStatistics mesh_statistics(const PointSet& ps, int grid_resolution);

/// Sensible grid resolution per dimension (cost ~ resolution^d).
int default_grid_resolution(int d);

}  // namespace sphgram
