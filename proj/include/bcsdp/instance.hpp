#pragma once

#include "bcsdp/graph.hpp"

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace bcsdp {

using Room = int;
using Feature = int;

// Conflict graph plus the timetabling side data: m rooms with capacities and
// features, event sizes and feature requirements, a pre-colouring and
// optional per-vertex weights (used by the weighted reformulation).
//
// A plain m-bounded colouring instance is the special case with unit sizes,
// unit capacities, no features and no pre-colouring; see `bounded`.
struct TimetablingInstance {
    ConflictGraph graph;
    int m = 1;
    std::vector<int> event_sizes;      // p, one per vertex
    std::vector<int> room_capacities;  // r, one per room
    int feature_count = 0;             // f_max
    std::vector<std::pair<Vertex, Feature>> event_features;  // F
    std::vector<std::pair<Room, Feature>> room_features;     // G
    std::vector<std::vector<Vertex>> precolouring;           // C
    std::vector<int> weights;  // c; empty means unit weights
    // Groups of events that should share a room across periods (used only by
    // the room-stability constraints of the room-assignment relaxation).
    std::vector<std::vector<Vertex>> stability_groups;

    static TimetablingInstance bounded(ConflictGraph g, int m);

    int order() const { return graph.order(); }
    int weight(Vertex v) const { return weights.empty() ? 1 : weights[v]; }
    bool has_capacities() const;
    bool has_features() const { return feature_count > 0 && !event_features.empty(); }

    // Throws std::invalid_argument naming the first broken invariant.
    void validate() const;

    bool operator==(const TimetablingInstance&) const = default;
};

// Per-class admissibility data derived from an instance. A class is
// admissible when its weighted size is at most m, and for every distinct
// event size q the events of size >= q number at most the rooms of capacity
// >= q, and every feature is required by at most as many events as rooms
// offer it. The counting rules are exact for laminar instances.
class RoomProfile {
public:
    explicit RoomProfile(const TimetablingInstance& inst);

    int m() const { return m_; }
    int threshold_count() const { return static_cast<int>(rooms_at_least_.size()); }
    int feature_count() const { return static_cast<int>(feature_rooms_.size()); }
    int rooms_at_least(int threshold) const { return rooms_at_least_[threshold]; }
    int threshold_value(int threshold) const { return thresholds_[threshold]; }
    int feature_rooms(Feature f) const { return feature_rooms_[f]; }

    int weight(Vertex v) const { return weight_[v]; }
    // Number of thresholds q with q <= size(v); v counts toward thresholds 0..k-1.
    int threshold_reach(Vertex v) const { return reach_[v]; }
    const std::vector<Feature>& features_of(Vertex v) const { return features_[v]; }

    // Some room fits v on its own (capacity and features).
    bool placeable(Vertex v) const { return placeable_[v]; }

private:
    int m_ = 1;
    std::vector<int> thresholds_;
    std::vector<int> rooms_at_least_;
    std::vector<int> feature_rooms_;
    std::vector<int> weight_;
    std::vector<int> reach_;
    std::vector<std::vector<Feature>> features_;
    std::vector<char> placeable_;
};

// Running load of one colour class against a RoomProfile.
class ClassLoad {
public:
    explicit ClassLoad(const RoomProfile& profile);

    bool can_add(std::span<const Vertex> members) const;
    void add(std::span<const Vertex> members);
    void remove(std::span<const Vertex> members);

    int weight() const { return weight_; }
    // Members reaching size threshold j, and members needing feature f.
    int size_count(int j) const { return size_counts_[j]; }
    int feature_load(Feature f) const { return feature_counts_[f]; }

private:
    const RoomProfile* profile_;
    int weight_ = 0;
    std::vector<int> size_counts_;
    std::vector<int> feature_counts_;
};

bool class_admissible(const RoomProfile& profile, std::span<const Vertex> members);

}  // namespace bcsdp
