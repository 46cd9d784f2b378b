#pragma once

#include <cstddef>
#include <compare>
#include <span>
#include <utility>
#include <vector>

namespace bcsdp {

using Vertex = int;

struct Edge {
    Vertex u;
    Vertex v;

    auto operator<=>(const Edge&) const = default;
};

// Undirected simple graph on vertices 0..n-1. Edges are stored with u < v,
// sorted and deduplicated; the adjacency lists and matrix are derived once.
class ConflictGraph {
public:
    ConflictGraph() = default;
    explicit ConflictGraph(int n);
    ConflictGraph(int n, std::vector<Edge> edges);

    int order() const { return n_; }
    std::size_t edge_count() const { return edges_.size(); }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<Vertex>& neighbours(Vertex v) const { return adjacency_[v]; }
    int degree(Vertex v) const { return static_cast<int>(adjacency_[v].size()); }
    int max_degree() const;

    bool adjacent(Vertex u, Vertex v) const
    {
        return matrix_[static_cast<std::size_t>(u) * n_ + v] != 0;
    }

    // Subgraph induced by `vertices`, renumbered in the given order.
    ConflictGraph induced(std::span<const Vertex> vertices) const;
    ConflictGraph complement() const;

    bool operator==(const ConflictGraph& other) const
    {
        return n_ == other.n_ && edges_ == other.edges_;
    }

private:
    int n_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::vector<Vertex>> adjacency_;
    std::vector<char> matrix_;
};

// Maximal connected vertex sets, largest first (ties by smallest member).
// Each component lists its vertices in increasing order.
std::vector<std::vector<Vertex>> connected_components(const ConflictGraph& g);

// ceil(n / m).
int counting_bound(int n, int m);

// Size of a maximum clique; exact branch and bound, meant for small graphs.
int clique_number(const ConflictGraph& g);

}  // namespace bcsdp
