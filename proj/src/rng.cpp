#include "kinlab/rng.hpp"

#include <thread>

namespace kinlab {

std::mt19937_64 chunk_engine(std::uint64_t seed, std::uint64_t stream_tag,
                             std::uint64_t chunk_index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed),
                      static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream_tag),
                      static_cast<std::uint32_t>(stream_tag >> 32),
                      static_cast<std::uint32_t>(chunk_index),
                      static_cast<std::uint32_t>(chunk_index >> 32)};
    return std::mt19937_64(seq);
}

void parallel_chunks(std::uint64_t n_chunks, int workers,
                     const std::function<void(std::uint64_t, std::mt19937_64 &)> &fn,
                     std::uint64_t seed, std::uint64_t stream_tag) {
    if (workers < 1) workers = 1;
    if (workers == 1) {
        for (std::uint64_t c = 0; c < n_chunks; ++c) {
            std::mt19937_64 eng = chunk_engine(seed, stream_tag, c);
            fn(c, eng);
        }
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w]() {
            for (std::uint64_t c = w; c < n_chunks; c += workers) {
                std::mt19937_64 eng = chunk_engine(seed, stream_tag, c);
                fn(c, eng);
            }
        });
    }
    for (auto &t : pool) t.join();
}

double tree_reduce(std::vector<double> v) {
    if (v.empty()) return 0.0;
    while (v.size() > 1) {
        std::size_t half = (v.size() + 1) / 2;
        for (std::size_t i = 0; i + half < v.size(); ++i) v[i] += v[i + half];
        v.resize(half);
    }
    return v[0];
}

}  // namespace kinlab
