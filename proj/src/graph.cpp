#include "bcsdp/graph.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>

namespace bcsdp {

ConflictGraph::ConflictGraph(int n) : ConflictGraph(n, {}) {}

ConflictGraph::ConflictGraph(int n, std::vector<Edge> edges) : n_(n)
{
    if (n < 0) {
        throw std::invalid_argument("graph order must be nonnegative");
    }
    for (auto& e : edges) {
        if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n) {
            throw std::out_of_range("edge (" + std::to_string(e.u) + ", " +
                                    std::to_string(e.v) + ") has an endpoint outside [0, " +
                                    std::to_string(n) + ")");
        }
        if (e.u == e.v) {
            throw std::invalid_argument("self-loop at vertex " + std::to_string(e.u));
        }
        if (e.u > e.v) {
            std::swap(e.u, e.v);
        }
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    edges_ = std::move(edges);

    adjacency_.assign(n_, {});
    matrix_.assign(static_cast<std::size_t>(n_) * n_, 0);
    for (const auto& e : edges_) {
        adjacency_[e.u].push_back(e.v);
        adjacency_[e.v].push_back(e.u);
        matrix_[static_cast<std::size_t>(e.u) * n_ + e.v] = 1;
        matrix_[static_cast<std::size_t>(e.v) * n_ + e.u] = 1;
    }
    for (auto& nb : adjacency_) {
        std::sort(nb.begin(), nb.end());
    }
}

int ConflictGraph::max_degree() const
{
    int best = 0;
    for (const auto& nb : adjacency_) {
        best = std::max(best, static_cast<int>(nb.size()));
    }
    return best;
}

ConflictGraph ConflictGraph::induced(std::span<const Vertex> vertices) const
{
    std::vector<int> index(n_, -1);
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        if (vertices[i] < 0 || vertices[i] >= n_) {
            throw std::out_of_range("induced: vertex outside the graph");
        }
        if (index[vertices[i]] != -1) {
            throw std::invalid_argument("induced: repeated vertex");
        }
        index[vertices[i]] = static_cast<int>(i);
    }
    std::vector<Edge> sub;
    for (const auto& e : edges_) {
        if (index[e.u] >= 0 && index[e.v] >= 0) {
            sub.push_back({index[e.u], index[e.v]});
        }
    }
    return ConflictGraph(static_cast<int>(vertices.size()), std::move(sub));
}

ConflictGraph ConflictGraph::complement() const
{
    std::vector<Edge> comp;
    for (Vertex u = 0; u < n_; ++u) {
        for (Vertex v = u + 1; v < n_; ++v) {
            if (!adjacent(u, v)) {
                comp.push_back({u, v});
            }
        }
    }
    return ConflictGraph(n_, std::move(comp));
}

std::vector<std::vector<Vertex>> connected_components(const ConflictGraph& g)
{
    const int n = g.order();
    std::vector<int> seen(n, 0);
    std::vector<std::vector<Vertex>> comps;
    for (Vertex s = 0; s < n; ++s) {
        if (seen[s]) {
            continue;
        }
        std::vector<Vertex> comp{s};
        seen[s] = 1;
        for (std::size_t head = 0; head < comp.size(); ++head) {
            for (Vertex w : g.neighbours(comp[head])) {
                if (!seen[w]) {
                    seen[w] = 1;
                    comp.push_back(w);
                }
            }
        }
        std::sort(comp.begin(), comp.end());
        comps.push_back(std::move(comp));
    }
    std::stable_sort(comps.begin(), comps.end(),
                     [](const auto& a, const auto& b) { return a.size() > b.size(); });
    return comps;
}

int counting_bound(int n, int m)
{
    if (m < 1) {
        throw std::invalid_argument("counting_bound: m must be at least 1");
    }
    return n == 0 ? 0 : (n + m - 1) / m;
}

int clique_number(const ConflictGraph& g)
{
    const int n = g.order();
    int best = n > 0 ? 1 : 0;
    std::vector<Vertex> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](Vertex a, Vertex b) { return g.degree(a) > g.degree(b); });

    // Simple Carraghan-Pardalos style search with size pruning.
    std::function<void(std::vector<Vertex>&, int)> expand = [&](std::vector<Vertex>& cand,
                                                                int size) {
        if (cand.empty()) {
            best = std::max(best, size);
            return;
        }
        while (!cand.empty()) {
            if (size + static_cast<int>(cand.size()) <= best) {
                return;
            }
            Vertex v = cand.back();
            cand.pop_back();
            std::vector<Vertex> next;
            for (Vertex w : cand) {
                if (g.adjacent(v, w)) {
                    next.push_back(w);
                }
            }
            expand(next, size + 1);
        }
    };
    std::vector<Vertex> cand(order.rbegin(), order.rend());
    expand(cand, 0);
    return best;
}

}  // namespace bcsdp
