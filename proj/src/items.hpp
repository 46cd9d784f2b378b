#pragma once

// Pre-colouring groups as atomic search items, shared by the greedy
// colourer, the rounding routines and the exact oracle.

#include "bcsdp/instance.hpp"

#include <vector>

namespace bcsdp::detail {

struct Items {
    std::vector<std::vector<Vertex>> members;  // item -> vertices
    std::vector<int> item_of;                  // vertex -> item
    std::vector<std::vector<char>> conflict;   // item x item
    std::vector<int> degree;                   // item degree in the conflict relation

    int size() const { return static_cast<int>(members.size()); }
};

// Items are numbered by smallest member, pre-colouring classes kept whole.
inline Items make_items(const TimetablingInstance& inst)
{
    const int n = inst.order();
    Items it;
    it.item_of.assign(n, -1);
    std::vector<int> owner(n, -1);
    for (std::size_t i = 0; i < inst.precolouring.size(); ++i) {
        for (Vertex v : inst.precolouring[i]) owner[v] = static_cast<int>(i);
    }
    std::vector<int> class_item(inst.precolouring.size(), -1);
    for (Vertex v = 0; v < n; ++v) {
        if (owner[v] != -1 && class_item[owner[v]] != -1) {
            it.item_of[v] = class_item[owner[v]];
            it.members[it.item_of[v]].push_back(v);
            continue;
        }
        it.item_of[v] = static_cast<int>(it.members.size());
        if (owner[v] != -1) class_item[owner[v]] = it.item_of[v];
        it.members.push_back({v});
    }
    const int k = it.size();
    it.conflict.assign(k, std::vector<char>(k, 0));
    for (const auto& e : inst.graph.edges()) {
        const int a = it.item_of[e.u];
        const int b = it.item_of[e.v];
        it.conflict[a][b] = 1;
        it.conflict[b][a] = 1;
    }
    it.degree.assign(k, 0);
    for (int a = 0; a < k; ++a) {
        for (int b = 0; b < k; ++b) it.degree[a] += it.conflict[a][b] && a != b;
    }
    return it;
}

}  // namespace bcsdp::detail
