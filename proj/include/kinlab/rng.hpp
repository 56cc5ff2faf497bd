#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace kinlab {

// Deterministic chunked sampling: each chunk gets its own engine seeded by
// (seed, stream_tag, chunk_index), so the stream of samples never depends on
// how chunks are distributed over workers.
std::mt19937_64 chunk_engine(std::uint64_t seed, std::uint64_t stream_tag,
                             std::uint64_t chunk_index);

// Runs fn(chunk_index, engine) for chunk_index in [0, n_chunks) spread over
// `workers` threads. Results must be written into per-chunk slots by fn.
void parallel_chunks(std::uint64_t n_chunks, int workers,
                     const std::function<void(std::uint64_t, std::mt19937_64 &)> &fn,
                     std::uint64_t seed, std::uint64_t stream_tag);

// Pairwise tree reduction in fixed order (independent of worker count).
double tree_reduce(std::vector<double> v);

}  // namespace kinlab

#include "kinlab/vec.hpp"

namespace kinlab {

inline Vec3 sample_unit_sphere(std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> U(0.0, 1.0);
    double z = 2.0 * U(rng) - 1.0;
    double ph = 2.0 * M_PI * U(rng);
    double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    return {r * std::cos(ph), r * std::sin(ph), z};
}

// Isotropic Gaussian with density proportional to exp(-rate*|v|^2).
inline Vec3 sample_gaussian3(std::mt19937_64 &rng, double rate) {
    std::normal_distribution<double> N(0.0, std::sqrt(0.5 / rate));
    double a = N(rng), b = N(rng), c = N(rng);
    return {a, b, c};
}

inline double gaussian3_pdf(const Vec3 &v, double rate) {
    double c = std::pow(rate / M_PI, 1.5);
    return c * std::exp(-rate * norm2(v));
}

}  // namespace kinlab
