#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "params.hpp"

namespace rmt::ens {

// Splittable counter-based generator (SplitMix64): one independent stream per
// (seed, draw-index) pair, so batches are reproducible for any worker count.
struct SplitMix64 {
    uint64_t s;
    explicit SplitMix64(uint64_t seed) : s(seed) {}
    uint64_t next() {
        uint64_t z = (s += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
    // Uniform on the open interval (0,1); never returns 0 or 1.
    double uniform01() {
        return ((double)(next() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
    }
    // Box-Muller pair of independent standard normals.
    std::pair<double, double> normal_pair() {
        double u1 = uniform01(), u2 = uniform01();
        double r = std::sqrt(-2.0 * std::log(u1));
        return {r * std::cos(kTwoPi_ * u2), r * std::sin(kTwoPi_ * u2)};
    }

  private:
    static constexpr double kTwoPi_ = 6.283185307179586476925286766559;
};

SplitMix64 draw_stream(uint64_t seed, uint64_t draw_index);

// One draw of the coupled pair (X1: L x M, X2: M x N) with the canonical
// coupling Omega = [diag(delta) 0].
std::pair<Eigen::MatrixXcd, Eigen::MatrixXcd> sample_pair(
    const GaussianEnsembleParams& p, uint64_t seed, uint64_t draw_index);

// Eigenvalues of (X1 X2)^H (X1 X2), ascending, clamped at 0 for tiny negative
// rounding residues.
std::vector<double> squared_singular_values(const Eigen::MatrixXcd& x1,
                                            const Eigen::MatrixXcd& x2);

struct SampleBatch {
    GaussianEnsembleParams params;
    uint64_t seed = 0;
    int draws = 0;
    Eigen::MatrixXd eigenvalues;  // draws x N, ascending per row
};

SampleBatch sample_batch(const GaussianEnsembleParams& p, uint64_t seed, int draws);

struct PdfInfo {
    bool perturbed = false;  // coincident/zero deltas handled by epsilon-splitting
};

// Exact joint eigenvalue PDF including normalization; log-scale internally.
double joint_pdf(const GaussianEnsembleParams& p, const std::vector<double>& x,
                 PdfInfo* info = nullptr);

struct Histogram {
    std::vector<double> edges;  // size bins+1
    std::vector<double> mass;   // size bins, normalized so total mass = N
    std::vector<long> counts;   // raw eigenvalue counts per bin
    long total_points = 0;      // draws (mass normalization divides by this)
};

Histogram empirical_density(const SampleBatch& batch, const std::vector<double>& edges);

// CSV: header draw,idx,value; one row per eigenvalue.
void write_batch_csv(const SampleBatch& batch, const std::string& path);

}  // namespace rmt::ens
