#include "bcsdp/rounding.hpp"

#include "items.hpp"

#include <random>
#include <stdexcept>

namespace bcsdp {

void RoundingConfig::validate() const
{
    if (attempts < 1) throw std::invalid_argument("rounding: attempts must be at least 1");
    if (!(delta > 0.0 && delta < 0.5)) {
        throw std::invalid_argument("rounding: delta must lie in (0, 0.5)");
    }
}

Partition greedy_colouring(const TimetablingInstance& inst, std::uint64_t seed)
{
    const RoomProfile profile(inst);
    const detail::Items items = detail::make_items(inst);
    const int k = items.size();

    for (int a = 0; a < k; ++a) {
        if (items.conflict[a][a]) {
            throw std::invalid_argument("greedy_colouring: pre-colouring class contains an edge");
        }
        if (!class_admissible(profile, items.members[a])) {
            throw std::invalid_argument("greedy_colouring: vertex " +
                                        std::to_string(items.members[a].front()) +
                                        " fits no class on its own");
        }
    }

    std::vector<double> priority(k, 0.0);
    if (seed != 0) {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        for (auto& p : priority) p = unit(rng);
    }

    std::vector<std::vector<int>> class_items;
    std::vector<ClassLoad> loads;
    std::vector<int> colour(k, -1);
    // seen[a][c]: item a has a neighbour in class c.
    std::vector<std::vector<char>> seen(k);
    std::vector<int> saturation(k, 0);

    for (int step = 0; step < k; ++step) {
        int pick = -1;
        for (int a = 0; a < k; ++a) {
            if (colour[a] != -1) continue;
            if (pick == -1) {
                pick = a;
                continue;
            }
            if (saturation[a] != saturation[pick]) {
                if (saturation[a] > saturation[pick]) pick = a;
                continue;
            }
            if (seed != 0) {
                if (priority[a] > priority[pick]) pick = a;
            } else if (items.degree[a] > items.degree[pick]) {
                pick = a;
            }
        }
        int chosen = -1;
        for (int c = 0; c < static_cast<int>(class_items.size()); ++c) {
            if (c < static_cast<int>(seen[pick].size()) && seen[pick][c]) continue;
            if (loads[c].can_add(items.members[pick])) {
                chosen = c;
                break;
            }
        }
        if (chosen == -1) {
            chosen = static_cast<int>(class_items.size());
            class_items.emplace_back();
            loads.emplace_back(profile);
        }
        class_items[chosen].push_back(pick);
        loads[chosen].add(items.members[pick]);
        colour[pick] = chosen;
        for (int b = 0; b < k; ++b) {
            if (!items.conflict[pick][b] || colour[b] != -1) continue;
            if (static_cast<int>(seen[b].size()) <= chosen) seen[b].resize(chosen + 1, 0);
            if (!seen[b][chosen]) {
                seen[b][chosen] = 1;
                ++saturation[b];
            }
        }
    }

    Partition part;
    for (const auto& cls : class_items) {
        std::vector<Vertex> vs;
        for (int a : cls) vs.insert(vs.end(), items.members[a].begin(), items.members[a].end());
        part.classes.push_back(std::move(vs));
    }
    part.normalize();
    return part;
}

}  // namespace bcsdp
