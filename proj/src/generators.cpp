#include "bcsdp/generators.hpp"

#include <bit>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace bcsdp {

ConflictGraph gen_gnp(int n, double p, std::uint64_t seed)
{
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("gen_gnp: p must lie in [0, 1]");
    }
    if (n < 0) {
        throw std::invalid_argument("gen_gnp: n must be nonnegative");
    }
    std::mt19937_64 rng(seed);
    constexpr double scale = 1.0 / 9007199254740992.0;  // 2^-53
    std::vector<Edge> edges;
    for (Vertex u = 0; u < n; ++u) {
        for (Vertex v = u + 1; v < n; ++v) {
            const double x = static_cast<double>(rng() >> 11) * scale;
            if (x < p) {
                edges.push_back({u, v});
            }
        }
    }
    return ConflictGraph(n, std::move(edges));
}

ConflictGraph gen_kneser(int n, int k)
{
    if (k < 1 || k >= n) {
        throw std::invalid_argument("gen_kneser: need n > k >= 1");
    }
    if (n > 30) {
        throw std::invalid_argument("gen_kneser: n > 30 not supported");
    }
    // Lexicographic k-subsets of {0..n-1} as bitmasks.
    std::vector<std::uint32_t> subsets;
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    while (true) {
        std::uint32_t mask = 0;
        for (int i : idx) mask |= 1u << i;
        subsets.push_back(mask);
        int i = k - 1;
        while (i >= 0 && idx[i] == n - k + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
    const int count = static_cast<int>(subsets.size());
    std::vector<Edge> edges;
    for (int a = 0; a < count; ++a) {
        for (int b = a + 1; b < count; ++b) {
            if ((subsets[a] & subsets[b]) == 0) {
                edges.push_back({a, b});
            }
        }
    }
    return ConflictGraph(count, std::move(edges));
}

ConflictGraph gen_hamming_distance(int bits, int distance)
{
    if (bits < 1 || bits > 20) {
        throw std::invalid_argument("gen_hamming_distance: bits must lie in [1, 20]");
    }
    if (distance < 0 || distance > bits) {
        throw std::invalid_argument("gen_hamming_distance: distance out of range");
    }
    const int count = 1 << bits;
    std::vector<Edge> edges;
    if (distance > 0) {
        for (int a = 0; a < count; ++a) {
            for (int b = a + 1; b < count; ++b) {
                if (std::popcount(static_cast<unsigned>(a ^ b)) == distance) {
                    edges.push_back({a, b});
                }
            }
        }
    }
    return ConflictGraph(count, std::move(edges));
}

ConflictGraph gen_forbidden_intersection(int m, double gamma)
{
    const double d = (1.0 - gamma) * m;
    const double rounded = std::round(d);
    if (std::abs(d - rounded) > 1e-9 || rounded < 1.0) {
        throw std::invalid_argument("gen_forbidden_intersection: (1 - gamma) m = " +
                                    std::to_string(d) + " is not a positive integer");
    }
    return gen_hamming_distance(m, static_cast<int>(rounded));
}

ConflictGraph gen_complete(int n)
{
    std::vector<Edge> edges;
    for (Vertex u = 0; u < n; ++u) {
        for (Vertex v = u + 1; v < n; ++v) {
            edges.push_back({u, v});
        }
    }
    return ConflictGraph(n, std::move(edges));
}

ConflictGraph gen_empty(int n) { return ConflictGraph(n); }

ConflictGraph gen_cycle(int n)
{
    if (n < 3) {
        throw std::invalid_argument("gen_cycle: n must be at least 3");
    }
    std::vector<Edge> edges;
    for (Vertex v = 0; v < n; ++v) {
        edges.push_back({v, (v + 1) % n});
    }
    return ConflictGraph(n, std::move(edges));
}

ConflictGraph gen_path(int n)
{
    std::vector<Edge> edges;
    for (Vertex v = 0; v + 1 < n; ++v) {
        edges.push_back({v, v + 1});
    }
    return ConflictGraph(n, std::move(edges));
}

}  // namespace bcsdp
