#include "bcsdp/oracle.hpp"

#include "bcsdp/relax.hpp"
#include "bcsdp/rounding.hpp"
#include "items.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace bcsdp {

namespace {

int ceil_div(int a, int b) { return (a + b - 1) / b; }

ConflictGraph item_graph(const detail::Items& items)
{
    std::vector<Edge> edges;
    for (int a = 0; a < items.size(); ++a) {
        for (int b = a + 1; b < items.size(); ++b) {
            if (items.conflict[a][b]) edges.push_back({a, b});
        }
    }
    return ConflictGraph(items.size(), std::move(edges));
}

// Decides whether the items fit into `k` classes.
class FixedKSearch {
public:
    FixedKSearch(const detail::Items& items, const RoomProfile& profile, int k,
                 std::chrono::steady_clock::time_point deadline, long long& nodes)
        : items_(items),
          profile_(profile),
          k_(k),
          deadline_(deadline),
          nodes_(nodes),
          colour_(items.size(), -1),
          blocked_(items.size(), std::vector<int>(k, 0)),
          members_(k)
    {
        loads_.reserve(k);
        for (int c = 0; c < k; ++c) loads_.emplace_back(profile);
        for (int a = 0; a < items.size(); ++a) {
            for (Vertex v : items.members[a]) {
                rem_weight_ += profile.weight(v);
            }
        }
        rem_size_.assign(profile.threshold_count(), 0);
        rem_feature_.assign(profile.feature_count(), 0);
        for (int a = 0; a < items.size(); ++a) {
            for (Vertex v : items.members[a]) {
                for (int j = 0; j < profile.threshold_reach(v); ++j) ++rem_size_[j];
                for (Feature f : profile.features_of(v)) ++rem_feature_[f];
            }
        }
    }

    // 1: feasible, 0: infeasible, -1: timed out.
    int run()
    {
        const int r = dfs(items_.size());
        return r;
    }

    Partition witness() const
    {
        Partition p;
        for (int c = 0; c < k_; ++c) {
            std::vector<Vertex> vs;
            for (int a : members_[c]) {
                vs.insert(vs.end(), items_.members[a].begin(), items_.members[a].end());
            }
            if (!vs.empty()) p.classes.push_back(std::move(vs));
        }
        p.normalize();
        return p;
    }

private:
    bool fits(int a, int c) const
    {
        return blocked_[a][c] == 0 && loads_[c].can_add(items_.members[a]);
    }

    bool capacity_left() const
    {
        long long room = 0;
        for (int c = 0; c < k_; ++c) room += profile_.m() - loads_[c].weight();
        if (rem_weight_ > room) return false;
        for (int j = 0; j < profile_.threshold_count(); ++j) {
            long long slots = 0;
            for (int c = 0; c < k_; ++c) slots += profile_.rooms_at_least(j) - loads_[c].size_count(j);
            if (rem_size_[j] > slots) return false;
        }
        for (Feature f = 0; f < profile_.feature_count(); ++f) {
            long long slots = 0;
            for (int c = 0; c < k_; ++c) slots += profile_.feature_rooms(f) - loads_[c].feature_load(f);
            if (rem_feature_[f] > slots) return false;
        }
        return true;
    }

    void place(int a, int c, int sign)
    {
        const auto& mem = items_.members[a];
        if (sign > 0) {
            loads_[c].add(mem);
            members_[c].push_back(a);
            colour_[a] = c;
        } else {
            loads_[c].remove(mem);
            members_[c].pop_back();
            colour_[a] = -1;
        }
        for (Vertex v : mem) {
            rem_weight_ -= sign * profile_.weight(v);
            for (int j = 0; j < profile_.threshold_reach(v); ++j) rem_size_[j] -= sign;
            for (Feature f : profile_.features_of(v)) rem_feature_[f] -= sign;
        }
        for (int b = 0; b < items_.size(); ++b) {
            if (items_.conflict[a][b] && b != a) blocked_[b][c] += sign;
        }
    }

    int dfs(int remaining)
    {
        if (remaining == 0) return 1;
        if ((++nodes_ & 1023) == 0 && std::chrono::steady_clock::now() > deadline_) return -1;
        if (!capacity_left()) return 0;

        // Classes in use are 0..used-1; only the first empty class may open.
        int used = 0;
        for (int c = 0; c < k_; ++c) {
            if (!members_[c].empty()) used = c + 1;
        }
        int pick = -1;
        int pick_options = 0;
        for (int a = 0; a < items_.size(); ++a) {
            if (colour_[a] != -1) continue;
            int options = 0;
            for (int c = 0; c < used; ++c) options += fits(a, c);
            if (used < k_) ++options;
            if (pick == -1 || options < pick_options ||
                (options == pick_options && items_.degree[a] > items_.degree[pick])) {
                pick = a;
                pick_options = options;
            }
            if (options == 0) return 0;
        }
        for (int c = 0; c < used; ++c) {
            if (!fits(pick, c)) continue;
            place(pick, c, +1);
            const int r = dfs(remaining - 1);
            if (r != 0) return r;
            place(pick, c, -1);
        }
        if (used < k_) {
            place(pick, used, +1);
            const int r = dfs(remaining - 1);
            if (r != 0) return r;
            place(pick, used, -1);
        }
        return 0;
    }

    const detail::Items& items_;
    const RoomProfile& profile_;
    int k_;
    std::chrono::steady_clock::time_point deadline_;
    long long& nodes_;
    std::vector<int> colour_;
    std::vector<std::vector<int>> blocked_;
    std::vector<std::vector<int>> members_;
    std::vector<ClassLoad> loads_;
    long long rem_weight_ = 0;
    std::vector<long long> rem_size_;
    std::vector<long long> rem_feature_;
};

}  // namespace

int combinatorial_lower_bound(const TimetablingInstance& inst)
{
    if (inst.order() == 0) return 0;
    const RoomProfile profile(inst);
    const detail::Items items = detail::make_items(inst);
    int lb = clique_number(item_graph(items));
    long long weight = 0;
    for (Vertex v = 0; v < inst.order(); ++v) weight += profile.weight(v);
    lb = std::max<long long>(lb, (weight + inst.m - 1) / inst.m);
    for (int j = 0; j < profile.threshold_count(); ++j) {
        int need = 0;
        for (Vertex v = 0; v < inst.order(); ++v) need += profile.threshold_reach(v) > j;
        if (need > 0 && profile.rooms_at_least(j) == 0) {
            throw std::invalid_argument("instance has events that fit no room");
        }
        if (need > 0) lb = std::max(lb, ceil_div(need, profile.rooms_at_least(j)));
    }
    for (Feature f = 0; f < profile.feature_count(); ++f) {
        int need = 0;
        for (Vertex v = 0; v < inst.order(); ++v) {
            const auto& fs = profile.features_of(v);
            need += std::binary_search(fs.begin(), fs.end(), f);
        }
        if (need > 0 && profile.feature_rooms(f) == 0) {
            throw std::invalid_argument("instance has events needing an unavailable feature");
        }
        if (need > 0) lb = std::max(lb, ceil_div(need, profile.feature_rooms(f)));
    }
    return lb;
}

OracleResult exact_bounded_chromatic(const TimetablingInstance& inst, double time_limit_seconds)
{
    inst.validate();
    OracleResult out;
    if (inst.order() == 0) {
        out.chi_m = 0;
        out.witness = Partition{};
        return out;
    }
    const auto deadline = std::chrono::steady_clock::now() +
                          std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                              std::chrono::duration<double>(time_limit_seconds));
    const RoomProfile profile(inst);
    const detail::Items items = detail::make_items(inst);

    Partition best = greedy_colouring(inst);
    out.upper_bound = static_cast<int>(best.size());
    out.lower_bound = combinatorial_lower_bound(inst);
    out.witness = best;

    for (int k = out.lower_bound; k < out.upper_bound; ++k) {
        FixedKSearch search(items, profile, k, deadline, out.nodes_explored);
        const int r = search.run();
        if (r < 0) {
            out.timed_out = true;
            return out;
        }
        if (r == 1) {
            out.witness = search.witness();
            out.upper_bound = k;
            break;
        }
        out.lower_bound = k + 1;
    }
    out.lower_bound = out.upper_bound;
    out.chi_m = out.upper_bound;
    return out;
}

int enumerate_bounded_chromatic(const TimetablingInstance& inst)
{
    const int n = inst.order();
    if (n > 10) throw std::invalid_argument("enumerate_bounded_chromatic: n > 10");
    if (n == 0) return 0;
    const RoomProfile profile(inst);
    std::vector<int> owner(n, -1);
    for (std::size_t i = 0; i < inst.precolouring.size(); ++i) {
        for (Vertex v : inst.precolouring[i]) owner[v] = static_cast<int>(i);
    }

    int best = n + 1;
    std::vector<int> label(n, 0);
    // Restricted growth strings: label[0] = 0, label[i] <= 1 + max(label[0..i-1]).
    std::vector<int> prefix_max(n, 0);
    std::function<void(int)> rec = [&](int i) {
        if (i == n) {
            const int k = prefix_max[n - 1] + 1;
            if (k >= best) return;
            std::vector<std::vector<Vertex>> classes(k);
            for (Vertex v = 0; v < n; ++v) classes[label[v]].push_back(v);
            for (const auto& e : inst.graph.edges()) {
                if (label[e.u] == label[e.v]) return;
            }
            for (Vertex u = 0; u < n; ++u) {
                for (Vertex v = u + 1; v < n; ++v) {
                    if (owner[u] != -1 && owner[u] == owner[v] && label[u] != label[v]) return;
                }
            }
            for (const auto& cls : classes) {
                if (!class_admissible(profile, cls)) return;
            }
            best = k;
            return;
        }
        const int top = i == 0 ? 0 : prefix_max[i - 1] + 1;
        for (int c = 0; c <= top; ++c) {
            label[i] = c;
            prefix_max[i] = i == 0 ? c : std::max(prefix_max[i - 1], c);
            if (prefix_max[i] + 1 >= best) continue;
            rec(i + 1);
        }
    };
    rec(0);
    if (best > n) throw std::invalid_argument("enumerate_bounded_chromatic: infeasible instance");
    return best;
}

SandwichReport sandwich_check(const ConflictGraph& g, int m, const SolverConfig& cfg,
                              double oracle_time_limit)
{
    SandwichReport rep;
    const int n = g.order();
    rep.omega = clique_number(g);
    rep.counting = counting_bound(n, m);

    const auto theta = build_theta(g, ThetaVariant::lovasz);
    rep.theta = solve(theta.model, theta.semantics, cfg).value;
    const auto bounded = build_bounded(g, m);
    const auto sdp = solve(bounded.model, bounded.semantics, cfg);
    rep.sdp = sdp.value;
    rep.sdp_certified = extract_bound(sdp, cfg.eps).certified;

    const auto inst = TimetablingInstance::bounded(g, m);
    const auto oracle = exact_bounded_chromatic(inst, oracle_time_limit);
    if (oracle.timed_out) throw std::runtime_error("sandwich_check: oracle timed out");
    rep.chi_m = oracle.chi_m;
    rep.greedy = static_cast<int>(greedy_colouring(inst).size());

    auto tol = [&](double v) { return 10.0 * cfg.eps * std::max(1.0, std::abs(v)); };
    const double chi = *rep.chi_m;
    rep.pass = rep.omega <= rep.theta + tol(rep.theta) && rep.theta <= rep.sdp + tol(rep.sdp) &&
               rep.sdp <= chi + tol(chi) && chi <= rep.greedy && rep.counting <= rep.sdp_certified &&
               rep.sdp_certified <= chi;
    return rep;
}

}  // namespace bcsdp
