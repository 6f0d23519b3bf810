#pragma once

#include <cstdint>
#include <thread>
#include <vector>

#include "relbrown/rng.hpp"
#include "relbrown/stats.hpp"

namespace relbrown {

/// Split n items over n_chunks near-evenly; chunk c gets sizes[c] items.
inline std::vector<std::uint64_t> chunk_sizes(std::uint64_t n, unsigned n_chunks) {
    if (n_chunks == 0) n_chunks = 1;
    std::vector<std::uint64_t> sizes(n_chunks, n / n_chunks);
    for (std::uint64_t c = 0; c < n % n_chunks; ++c) ++sizes[c];
    return sizes;
}

/// Run `fill(chunk_index, chunk_size, rng)` for every chunk, each on its own
/// counter-derived RNG substream, and merge the results in chunk order.
/// The merged result depends only on (seed, chunking), not on thread count.
template <typename Acc, typename Fill, typename Merge>
Acc run_chunked_generic(std::uint64_t n, unsigned n_chunks, unsigned n_threads,
                        std::uint64_t seed, Fill&& fill, Merge&& merge_fn) {
    auto sizes = chunk_sizes(n, n_chunks);
    std::vector<Acc> partial(sizes.size());
    if (n_threads <= 1) {
        for (std::size_t c = 0; c < sizes.size(); ++c) {
            Rng rng(chunk_seed(seed, c));
            partial[c] = fill(c, sizes[c], rng);
        }
    } else {
        std::vector<std::thread> workers;
        workers.reserve(n_threads);
        for (unsigned t = 0; t < n_threads; ++t) {
            workers.emplace_back([&, t] {
                for (std::size_t c = t; c < sizes.size(); c += n_threads) {
                    Rng rng(chunk_seed(seed, c));
                    partial[c] = fill(c, sizes[c], rng);
                }
            });
        }
        for (auto& w : workers) w.join();
    }
    Acc total = std::move(partial[0]);
    for (std::size_t c = 1; c < partial.size(); ++c) total = merge_fn(total, partial[c]);
    return total;
}

template <typename Fill>
ComplexMomentAccumulator run_chunked(std::uint64_t n, unsigned n_chunks, unsigned n_threads,
                                     std::uint64_t seed, Fill&& fill) {
    auto sizes = chunk_sizes(n, n_chunks);
    std::vector<ComplexMomentAccumulator> partial(sizes.size());
    if (n_threads <= 1) {
        for (std::size_t c = 0; c < sizes.size(); ++c) {
            Rng rng(chunk_seed(seed, c));
            partial[c] = fill(c, sizes[c], rng);
        }
    } else {
        std::vector<std::thread> workers;
        workers.reserve(n_threads);
        for (unsigned t = 0; t < n_threads; ++t) {
            workers.emplace_back([&, t] {
                for (std::size_t c = t; c < sizes.size(); c += n_threads) {
                    Rng rng(chunk_seed(seed, c));
                    partial[c] = fill(c, sizes[c], rng);
                }
            });
        }
        for (auto& w : workers) w.join();
    }
    ComplexMomentAccumulator total = partial[0];
    for (std::size_t c = 1; c < partial.size(); ++c) total = merge(total, partial[c]);
    return total;
}

}  // namespace relbrown
