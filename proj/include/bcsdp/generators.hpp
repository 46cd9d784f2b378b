#pragma once

#include "bcsdp/graph.hpp"

#include <cstdint>

namespace bcsdp {

// Erdos-Renyi G(n, p). The generator is std::mt19937_64 seeded with `seed`;
// pairs (u, v), u < v, are visited in lexicographic order and each consumes
// one 64-bit draw x, the pair being an edge iff (x >> 11) * 2^-53 < p.
ConflictGraph gen_gnp(int n, double p, std::uint64_t seed);

// Kneser graph K(n, k): k-subsets of {1..n} in lexicographic order, adjacent
// iff disjoint.
ConflictGraph gen_kneser(int n, int k);

// All 2^bits bit strings (vertex id = integer value), adjacent iff their
// Hamming distance equals `distance`.
ConflictGraph gen_hamming_distance(int bits, int distance);

// Forbidden-intersection graph FI(m, gamma): strings differing in exactly
// (1 - gamma) m bits. (1 - gamma) m must be a positive integer (within 1e-9).
ConflictGraph gen_forbidden_intersection(int m, double gamma);

ConflictGraph gen_complete(int n);
ConflictGraph gen_empty(int n);
ConflictGraph gen_cycle(int n);
ConflictGraph gen_path(int n);

}  // namespace bcsdp
