#include "bcsdp/instance.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace bcsdp {

TimetablingInstance TimetablingInstance::bounded(ConflictGraph g, int m)
{
    TimetablingInstance inst;
    const int n = g.order();
    inst.graph = std::move(g);
    inst.m = m;
    inst.event_sizes.assign(n, 1);
    inst.room_capacities.assign(std::max(m, 0), 1);
    return inst;
}

bool TimetablingInstance::has_capacities() const
{
    if (room_capacities.empty()) {
        return false;
    }
    const int smallest = *std::min_element(room_capacities.begin(), room_capacities.end());
    return std::any_of(event_sizes.begin(), event_sizes.end(),
                       [&](int s) { return s > smallest; });
}

void TimetablingInstance::validate() const
{
    const int n = graph.order();
    auto fail = [](const std::string& what) { throw std::invalid_argument(what); };

    if (m < 1) {
        fail("m must be at least 1");
    }
    if (static_cast<int>(event_sizes.size()) != n) {
        fail("event_sizes must have one entry per vertex");
    }
    if (static_cast<int>(room_capacities.size()) != m) {
        fail("room_capacities must have one entry per room");
    }
    for (int s : event_sizes) {
        if (s < 1) fail("event sizes must be positive");
    }
    for (int r : room_capacities) {
        if (r < 1) fail("room capacities must be positive");
    }
    if (feature_count < 0) {
        fail("feature_count must be nonnegative");
    }
    for (auto [v, f] : event_features) {
        if (v < 0 || v >= n) fail("event feature refers to an unknown vertex");
        if (f < 0 || f >= feature_count) fail("event feature id out of range");
    }
    for (auto [r, f] : room_features) {
        if (r < 0 || r >= m) fail("room feature refers to an unknown room");
        if (f < 0 || f >= feature_count) fail("room feature id out of range");
    }
    if (!weights.empty()) {
        if (static_cast<int>(weights.size()) != n) fail("weights must have one entry per vertex");
        for (int w : weights) {
            if (w < 1) fail("weights must be positive");
        }
    }
    std::vector<int> owner(n, -1);
    for (std::size_t i = 0; i < precolouring.size(); ++i) {
        const auto& cls = precolouring[i];
        if (static_cast<int>(cls.size()) > m) fail("pre-colouring class larger than m");
        for (Vertex v : cls) {
            if (v < 0 || v >= n) fail("pre-colouring refers to an unknown vertex");
            if (owner[v] != -1) fail("pre-colouring classes overlap");
            owner[v] = static_cast<int>(i);
        }
    }
    for (const auto& grp : stability_groups) {
        for (Vertex v : grp) {
            if (v < 0 || v >= n) fail("stability group refers to an unknown vertex");
        }
    }
}

RoomProfile::RoomProfile(const TimetablingInstance& inst) : m_(inst.m)
{
    const int n = inst.order();
    std::vector<int> sizes = inst.event_sizes;
    if (static_cast<int>(sizes.size()) != n) {
        sizes.assign(n, 1);
    }
    std::vector<int> caps = inst.room_capacities;
    if (caps.empty()) {
        caps.assign(inst.m, std::numeric_limits<int>::max());
    }

    thresholds_ = sizes;
    std::sort(thresholds_.begin(), thresholds_.end());
    thresholds_.erase(std::unique(thresholds_.begin(), thresholds_.end()), thresholds_.end());
    rooms_at_least_.resize(thresholds_.size());
    for (std::size_t j = 0; j < thresholds_.size(); ++j) {
        rooms_at_least_[j] = static_cast<int>(
            std::count_if(caps.begin(), caps.end(), [&](int c) { return c >= thresholds_[j]; }));
    }

    weight_.resize(n);
    reach_.resize(n);
    for (Vertex v = 0; v < n; ++v) {
        weight_[v] = inst.weight(v);
        reach_[v] = static_cast<int>(
            std::upper_bound(thresholds_.begin(), thresholds_.end(), sizes[v]) -
            thresholds_.begin());
    }

    const int nf = inst.feature_count;
    feature_rooms_.assign(nf, 0);
    std::vector<std::vector<char>> room_has(caps.size(), std::vector<char>(nf, 0));
    for (auto [r, f] : inst.room_features) {
        if (!room_has[r][f]) {
            room_has[r][f] = 1;
            ++feature_rooms_[f];
        }
    }
    features_.assign(n, {});
    for (auto [v, f] : inst.event_features) {
        features_[v].push_back(f);
    }
    for (auto& fs : features_) {
        std::sort(fs.begin(), fs.end());
        fs.erase(std::unique(fs.begin(), fs.end()), fs.end());
    }

    placeable_.assign(n, 0);
    for (Vertex v = 0; v < n; ++v) {
        for (std::size_t r = 0; r < caps.size(); ++r) {
            if (caps[r] < sizes[v]) {
                continue;
            }
            bool ok = true;
            for (Feature f : features_[v]) {
                ok = ok && room_has[r][f];
            }
            if (ok) {
                placeable_[v] = 1;
                break;
            }
        }
        if (weight_[v] > m_) {
            placeable_[v] = 0;
        }
    }
}

ClassLoad::ClassLoad(const RoomProfile& profile)
    : profile_(&profile),
      size_counts_(profile.threshold_count(), 0),
      feature_counts_(profile.feature_count(), 0)
{
}

bool ClassLoad::can_add(std::span<const Vertex> members) const
{
    int w = weight_;
    for (Vertex v : members) {
        w += profile_->weight(v);
    }
    if (w > profile_->m()) {
        return false;
    }
    // Threshold counts: only thresholds reached by the new members change.
    int deepest = 0;
    for (Vertex v : members) {
        deepest = std::max(deepest, profile_->threshold_reach(v));
    }
    for (int j = 0; j < deepest; ++j) {
        int c = size_counts_[j];
        for (Vertex v : members) {
            if (profile_->threshold_reach(v) > j) {
                ++c;
            }
        }
        if (c > profile_->rooms_at_least(j)) {
            return false;
        }
    }
    for (Vertex v : members) {
        for (Feature f : profile_->features_of(v)) {
            int c = feature_counts_[f];
            for (Vertex u : members) {
                const auto& fu = profile_->features_of(u);
                if (std::binary_search(fu.begin(), fu.end(), f)) {
                    ++c;
                }
            }
            if (c > profile_->feature_rooms(f)) {
                return false;
            }
        }
    }
    return true;
}

void ClassLoad::add(std::span<const Vertex> members)
{
    for (Vertex v : members) {
        weight_ += profile_->weight(v);
        for (int j = 0; j < profile_->threshold_reach(v); ++j) {
            ++size_counts_[j];
        }
        for (Feature f : profile_->features_of(v)) {
            ++feature_counts_[f];
        }
    }
}

void ClassLoad::remove(std::span<const Vertex> members)
{
    for (Vertex v : members) {
        weight_ -= profile_->weight(v);
        for (int j = 0; j < profile_->threshold_reach(v); ++j) {
            --size_counts_[j];
        }
        for (Feature f : profile_->features_of(v)) {
            --feature_counts_[f];
        }
    }
}

bool class_admissible(const RoomProfile& profile, std::span<const Vertex> members)
{
    ClassLoad load(profile);
    return load.can_add(members);
}

}  // namespace bcsdp
