#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace sphgram {

/// Thrown when an iterative numerical procedure fails to meet its contract
/// (eigensolver non-convergence, quadrature stagnation, non-finite values).
struct numerical_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Compensated accumulator for long alternating sums.
template <class Real = double>
struct KahanSum {
    Real sum = 0, carry = 0;
    void add(Real x) {
        Real y = x - carry;
        Real t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    Real value() const { return sum; }
};

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

/// Deterministic child-stream seed (sweep cells, QMC batches).
inline std::uint64_t child_seed(std::uint64_t master, std::uint64_t stream) {
    return splitmix64(master ^ splitmix64(stream + 0x51ed270b7a53c4bbull));
}

/// Seeded RNG with portable output: mt19937_64 plus explicit conversions,
/// no libstdc++ distribution objects, so streams are bit-identical everywhere.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in (0,1).
    double uniform01() {
        for (;;) {
            double u = (engine_() >> 11) * 0x1.0p-53;
            if (u > 0.0) return u;
        }
    }

    /// Standard normal via Box-Muller (cached spare).
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform01(), u2 = uniform01();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0;
    bool have_spare_ = false;
};

}  // namespace sphgram
