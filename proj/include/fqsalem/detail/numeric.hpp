#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace fqsalem::detail {

/// Neumaier compensated accumulator. Feeding values in a fixed (ascending
/// index) order keeps every reported sum reproducible bit-for-bit.
struct Accumulator {
    double sum = 0.0;
    double comp = 0.0;

    void add(double x) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }
    double value() const { return sum + comp; }
};

/// Static block partition of [0, n); blocks are independent of the worker
/// count, so results that are combined per-block stay deterministic.
inline void parallel_for(std::uint64_t n, unsigned workers,
                         const std::function<void(std::uint64_t, std::uint64_t)>& body) {
    if (workers <= 1 || n < 2) {
        if (n) body(0, n);
        return;
    }
    const unsigned k = static_cast<unsigned>(std::min<std::uint64_t>(workers, n));
    std::vector<std::thread> pool;
    pool.reserve(k);
    const std::uint64_t chunk = (n + k - 1) / k;
    for (unsigned w = 0; w < k; ++w) {
        const std::uint64_t lo = w * chunk;
        const std::uint64_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&body, lo, hi] { body(lo, hi); });
    }
    for (auto& t : pool) t.join();
}

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// FNV-1a over a byte string; used for stable config hashes.
inline std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace fqsalem::detail
