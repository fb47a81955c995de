#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace hdmax {

/// Reproducible seed. Identical (master, stream) pairs give bit-identical
/// output for every simulation routine in the library.
struct Seed {
    std::uint64_t master = 0;
    std::uint64_t stream = 0;
};

using Engine = std::mt19937_64;

/// Engine for the substream addressed by `path` below `seed`.
///
/// Every 64-bit word (master, stream, path...) is split into two 32-bit
/// halves and fed through std::seed_seq, so distinct paths yield unrelated
/// Mersenne-Twister states. Parallel code derives one engine per work item
/// (replication, asset, batch) and never shares engines across threads.
inline Engine make_engine(Seed seed, std::initializer_list<std::uint64_t> path = {}) {
    std::vector<std::uint32_t> words;
    words.reserve(4 + 2 * path.size());
    auto push = [&](std::uint64_t v) {
        words.push_back(static_cast<std::uint32_t>(v));
        words.push_back(static_cast<std::uint32_t>(v >> 32));
    };
    push(seed.master);
    push(seed.stream);
    for (auto p : path) push(p);
    std::seed_seq seq(words.begin(), words.end());
    return Engine(seq);
}

/// Fills `out` with independent Rademacher signs (+1/-1 with probability 1/2),
/// 64 signs per engine draw.
template <class Range>
void fill_rademacher(Engine& eng, Range& out) {
    std::uint64_t bits = 0;
    int left = 0;
    for (auto& v : out) {
        if (left == 0) {
            bits = eng();
            left = 64;
        }
        v = (bits & 1u) ? 1.0 : -1.0;
        bits >>= 1;
        --left;
    }
}

template <class Range>
void fill_normal(Engine& eng, Range& out, double stddev = 1.0) {
    std::normal_distribution<double> dist(0.0, stddev);
    for (auto& v : out) v = dist(eng);
}

} // namespace hdmax
