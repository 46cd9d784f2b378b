#include "bcsdp/partition.hpp"

#include <algorithm>
#include <functional>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace bcsdp {

void Partition::normalize()
{
    for (auto& cls : classes) {
        std::sort(cls.begin(), cls.end());
    }
    classes.erase(std::remove_if(classes.begin(), classes.end(),
                                 [](const auto& c) { return c.empty(); }),
                  classes.end());
    std::sort(classes.begin(), classes.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
}

std::vector<int> Partition::class_of(int n) const
{
    std::vector<int> owner(n, -1);
    for (std::size_t i = 0; i < classes.size(); ++i) {
        for (Vertex v : classes[i]) {
            if (v >= 0 && v < n) {
                owner[v] = static_cast<int>(i);
            }
        }
    }
    return owner;
}

std::string to_string(ViolationKind kind)
{
    switch (kind) {
    case ViolationKind::coverage: return "coverage";
    case ViolationKind::edge_conflict: return "edge_conflict";
    case ViolationKind::class_size: return "class_size";
    case ViolationKind::capacity: return "capacity";
    case ViolationKind::feature: return "feature";
    case ViolationKind::split_precolouring: return "split_precolouring";
    case ViolationKind::room_mismatch: return "room_mismatch";
    case ViolationKind::duplicate_room: return "duplicate_room";
    }
    return "unknown";
}

ValidationReport validate_partition(const TimetablingInstance& inst, const Partition& part)
{
    ValidationReport report;
    auto flag = [&](ViolationKind kind, int cls, std::string detail) {
        report.ok = false;
        report.violations.push_back({kind, cls, std::move(detail)});
    };

    const int n = inst.order();
    std::vector<int> owner(n, -1);
    for (std::size_t i = 0; i < part.classes.size(); ++i) {
        for (Vertex v : part.classes[i]) {
            if (v < 0 || v >= n) {
                flag(ViolationKind::coverage, static_cast<int>(i),
                     "vertex " + std::to_string(v) + " is not in the instance");
                continue;
            }
            if (owner[v] != -1) {
                flag(ViolationKind::coverage, static_cast<int>(i),
                     "vertex " + std::to_string(v) + " appears in two classes");
            }
            owner[v] = static_cast<int>(i);
        }
    }
    for (Vertex v = 0; v < n; ++v) {
        if (owner[v] == -1) {
            flag(ViolationKind::coverage, -1, "vertex " + std::to_string(v) + " is uncovered");
        }
    }

    for (const auto& e : inst.graph.edges()) {
        if (owner[e.u] != -1 && owner[e.u] == owner[e.v]) {
            flag(ViolationKind::edge_conflict, owner[e.u],
                 "edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) + ")");
        }
    }

    const RoomProfile profile(inst);
    for (std::size_t i = 0; i < part.classes.size(); ++i) {
        const auto& cls = part.classes[i];
        const int ci = static_cast<int>(i);
        int load = 0;
        for (Vertex v : cls) {
            if (v >= 0 && v < n) load += inst.weight(v);
        }
        if (load > inst.m) {
            flag(ViolationKind::class_size, ci,
                 "load " + std::to_string(load) + " exceeds m = " + std::to_string(inst.m));
        }
        for (int j = 0; j < profile.threshold_count(); ++j) {
            int need = 0;
            for (Vertex v : cls) {
                if (v >= 0 && v < n && profile.threshold_reach(v) > j) ++need;
            }
            if (need > profile.rooms_at_least(j)) {
                flag(ViolationKind::capacity, ci,
                     std::to_string(need) + " events of size >= " +
                         std::to_string(profile.threshold_value(j)) + " but only " +
                         std::to_string(profile.rooms_at_least(j)) + " such rooms");
            }
        }
        for (Feature f = 0; f < profile.feature_count(); ++f) {
            int need = 0;
            for (Vertex v : cls) {
                if (v < 0 || v >= n) continue;
                const auto& fs = profile.features_of(v);
                if (std::binary_search(fs.begin(), fs.end(), f)) ++need;
            }
            if (need > profile.feature_rooms(f)) {
                flag(ViolationKind::feature, ci,
                     std::to_string(need) + " events need feature " + std::to_string(f) +
                         " but " + std::to_string(profile.feature_rooms(f)) + " rooms have it");
            }
        }
    }

    for (std::size_t k = 0; k < inst.precolouring.size(); ++k) {
        const auto& pc = inst.precolouring[k];
        for (Vertex v : pc) {
            if (owner[v] != owner[pc.front()]) {
                flag(ViolationKind::split_precolouring, owner[v],
                     "pre-colouring class " + std::to_string(k) + " is split");
                break;
            }
        }
    }

    if (part.room_of) {
        const auto& room_of = *part.room_of;
        if (static_cast<int>(room_of.size()) != n) {
            flag(ViolationKind::room_mismatch, -1, "room assignment has the wrong length");
        } else {
            std::vector<std::vector<char>> room_has(inst.m,
                                                    std::vector<char>(inst.feature_count, 0));
            for (auto [r, f] : inst.room_features) room_has[r][f] = 1;
            for (std::size_t i = 0; i < part.classes.size(); ++i) {
                std::vector<int> used(inst.m, 0);
                for (Vertex v : part.classes[i]) {
                    if (v < 0 || v >= n) continue;
                    const Room r = room_of[v];
                    if (r < 0 || r >= inst.m) {
                        flag(ViolationKind::room_mismatch, static_cast<int>(i),
                             "vertex " + std::to_string(v) + " has no valid room");
                        continue;
                    }
                    if (used[r]++) {
                        flag(ViolationKind::duplicate_room, static_cast<int>(i),
                             "room " + std::to_string(r) + " used twice");
                    }
                    bool fits = inst.room_capacities.empty() ||
                                inst.room_capacities[r] >= inst.event_sizes[v];
                    for (Feature f : profile.features_of(v)) fits = fits && room_has[r][f];
                    if (!fits) {
                        flag(ViolationKind::room_mismatch, static_cast<int>(i),
                             "vertex " + std::to_string(v) + " does not fit room " +
                                 std::to_string(r));
                    }
                }
            }
        }
    }
    return report;
}

std::optional<std::vector<Room>> assign_rooms(const TimetablingInstance& inst,
                                              const Partition& part)
{
    const int n = inst.order();
    std::vector<std::vector<char>> room_has(inst.m, std::vector<char>(inst.feature_count, 0));
    for (auto [r, f] : inst.room_features) room_has[r][f] = 1;
    std::vector<std::vector<Feature>> needs(n);
    for (auto [v, f] : inst.event_features) needs[v].push_back(f);

    auto fits = [&](Vertex v, Room r) {
        if (!inst.room_capacities.empty() && inst.room_capacities[r] < inst.event_sizes[v]) {
            return false;
        }
        for (Feature f : needs[v]) {
            if (!room_has[r][f]) return false;
        }
        return true;
    };

    std::vector<Room> room_of(n, -1);
    for (const auto& cls : part.classes) {
        std::vector<int> holder(inst.m, -1);  // index into cls
        std::function<bool(int, std::vector<char>&)> augment = [&](int i,
                                                                  std::vector<char>& seen) {
            for (Room r = 0; r < inst.m; ++r) {
                if (seen[r] || !fits(cls[i], r)) continue;
                seen[r] = 1;
                if (holder[r] == -1 || augment(holder[r], seen)) {
                    holder[r] = i;
                    return true;
                }
            }
            return false;
        };
        for (int i = 0; i < static_cast<int>(cls.size()); ++i) {
            std::vector<char> seen(inst.m, 0);
            if (!augment(i, seen)) return std::nullopt;
        }
        for (Room r = 0; r < inst.m; ++r) {
            if (holder[r] >= 0) room_of[cls[holder[r]]] = r;
        }
    }
    return room_of;
}

void write_partition(std::ostream& out, const Partition& part)
{
    for (const auto& cls : part.classes) {
        for (std::size_t i = 0; i < cls.size(); ++i) {
            if (i) out << ' ';
            out << cls[i];
            if (part.room_of) out << '@' << (*part.room_of)[cls[i]];
        }
        out << '\n';
    }
}

Partition read_partition(std::istream& in)
{
    Partition part;
    std::vector<std::pair<Vertex, Room>> rooms;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string tok;
        std::vector<Vertex> cls;
        while (ls >> tok) {
            try {
                const auto at = tok.find('@');
                std::size_t used = 0;
                const Vertex v = std::stoi(tok.substr(0, at), &used);
                if (used != (at == std::string::npos ? tok.size() : at)) {
                    throw std::invalid_argument(tok);
                }
                cls.push_back(v);
                if (at != std::string::npos) rooms.emplace_back(v, std::stoi(tok.substr(at + 1)));
            } catch (const std::logic_error&) {
                throw std::runtime_error("partition line " + std::to_string(line_no) +
                                         ": bad token '" + tok + "'");
            }
        }
        if (!cls.empty()) part.classes.push_back(std::move(cls));
    }
    if (!rooms.empty()) {
        int n = 0;
        for (const auto& cls : part.classes)
            for (Vertex v : cls) n = std::max(n, v + 1);
        std::vector<Room> room_of(n, -1);
        for (auto [v, r] : rooms) room_of[v] = r;
        part.room_of = std::move(room_of);
    }
    return part;
}

}  // namespace bcsdp
