#include "bcsdp/relax.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

namespace bcsdp {

namespace {

const double kHalfRoot = 1.0 / std::sqrt(2.0);

// Y_uv = value, written with unit norm for u != v.
SketchRow pin(Vertex u, Vertex v)
{
    return {{{u, v, kHalfRoot}, {v, u, kHalfRoot}}, 0.0, 0, 0.0};
}

SketchRow nonneg(Vertex u, Vertex v) { return pin(u, v); }

SketchRow chain(Vertex w, Vertex v) { return {{{w, w, 1.0}, {v, v, -1.0}}, 0.0, 0, 0.0}; }

// sum_{u in members} c_u Y(u, v) <= cap * t, for each v in `over`.
// `transposed` sums along row v instead of column v.
SketchBlock sum_block(std::string name, const std::vector<Vertex>& members,
                      const std::vector<Vertex>& over, double cap,
                      const std::vector<int>* weights, bool transposed)
{
    SketchBlock block{std::move(name), {}};
    for (Vertex v : over) {
        SketchRow row;
        for (Vertex u : members) {
            const double c = weights ? (*weights)[u] : 1.0;
            row.terms.push_back(transposed ? Entry{v, u, -c} : Entry{u, v, -c});
        }
        row.t_coef = cap;
        row.t_vertex = v;
        block.rows.push_back(std::move(row));
    }
    return block;
}

// sum_{u in members, v in V} Y_uv <= cap * t.
SketchRow aggregate_row(const std::vector<Vertex>& members, int n, double cap, int anchor,
                        bool transposed)
{
    SketchRow row;
    for (Vertex u : members) {
        for (Vertex v = 0; v < n; ++v) {
            row.terms.push_back(transposed ? Entry{v, u, -1.0} : Entry{u, v, -1.0});
        }
    }
    row.t_coef = cap;
    row.t_vertex = anchor;
    return row;
}

std::vector<Vertex> all_vertices(int n)
{
    std::vector<Vertex> v(n);
    std::iota(v.begin(), v.end(), 0);
    return v;
}

ShiftedSketch base_sketch(const ConflictGraph& g)
{
    ShiftedSketch s;
    s.n = g.order();
    s.anchor = 0;
    for (const auto& e : g.edges()) s.eq_graph.push_back(pin(e.u, e.v));
    for (Vertex v = 1; v < s.n; ++v) s.eq_other.push_back(chain(0, v));
    s.claimed.a1_edge_indicator = true;
    s.claimed.a2_diagonal_chain = true;
    s.claimed.b_row_sum = true;
    s.claimed.objective_single_entry = true;
    return s;
}

void add_nonneg_bounds(ShiftedSketch& s, const ConflictGraph& g,
                       const std::set<std::pair<Vertex, Vertex>>& skip = {})
{
    for (Vertex u = 0; u < s.n; ++u) {
        for (Vertex v = u + 1; v < s.n; ++v) {
            if (!g.adjacent(u, v) && !skip.count({u, v})) s.bounds.push_back(nonneg(u, v));
        }
    }
}

// Adds the pre-colouring equalities; returns the pairs they pin.
std::set<std::pair<Vertex, Vertex>> add_precolouring(ShiftedSketch& s, const ConflictGraph& g,
                                                     int m,
                                                     const std::vector<std::vector<Vertex>>& pre)
{
    const int n = g.order();
    std::vector<int> owner(n, -1);
    for (std::size_t i = 0; i < pre.size(); ++i) {
        if (static_cast<int>(pre[i].size()) > m) {
            throw std::invalid_argument("pre-colouring class larger than m");
        }
        for (Vertex v : pre[i]) {
            if (v < 0 || v >= n) throw std::invalid_argument("pre-colouring vertex out of range");
            if (owner[v] != -1) throw std::invalid_argument("pre-colouring classes overlap");
            owner[v] = static_cast<int>(i);
        }
    }
    std::set<std::pair<Vertex, Vertex>> pinned;
    for (Vertex u = 0; u < n; ++u) {
        for (Vertex v = u + 1; v < n; ++v) {
            if (owner[u] == -1 || owner[v] == -1) continue;
            if (owner[u] == owner[v]) {
                if (g.adjacent(u, v)) {
                    throw std::invalid_argument("pre-colouring class contains an edge");
                }
                // Y_uv = t
                s.eq_other.push_back({{{u, v, kHalfRoot}, {v, u, kHalfRoot}},
                                      -std::sqrt(2.0), s.anchor, 0.0});
                s.claimed.a2_diagonal_chain = false;
                pinned.insert({u, v});
            } else if (!g.adjacent(u, v)) {
                s.eq_graph.push_back(pin(u, v));
                pinned.insert({u, v});
            }
        }
    }
    return pinned;
}

void merge_entries(std::vector<Entry>& entries)
{
    std::map<std::pair<int, int>, double> acc;
    for (const auto& e : entries) acc[{e.row, e.col}] += e.coef;
    entries.clear();
    for (const auto& [k, c] : acc) {
        if (c != 0.0) entries.push_back({k.first, k.second, c});
    }
}

// Y = X + J, t = X(tv, tv) + 1, all indices shifted by `offset`.
SparseRow shifted(const SketchRow& r, int offset)
{
    SparseRow out;
    double rhs = r.rhs;
    for (const auto& e : r.terms) {
        out.entries.push_back({e.row + offset, e.col + offset, e.coef});
        rhs -= e.coef;
    }
    if (r.t_coef != 0.0) {
        out.entries.push_back({r.t_vertex + offset, r.t_vertex + offset, r.t_coef});
        rhs -= r.t_coef;
    }
    merge_entries(out.entries);
    out.rhs = rhs;
    return out;
}

// Y itself is the variable (block at `offset`), t = Y(tv, tv).
SparseRow direct(const SketchRow& r, int offset)
{
    SparseRow out;
    for (const auto& e : r.terms) out.entries.push_back({e.row + offset, e.col + offset, e.coef});
    if (r.t_coef != 0.0) {
        out.entries.push_back({r.t_vertex + offset, r.t_vertex + offset, r.t_coef});
    }
    merge_entries(out.entries);
    out.rhs = r.rhs;
    return out;
}

void check_bound(const ConflictGraph& g, int m)
{
    if (m < 1 || m > g.order()) {
        throw std::invalid_argument("m must satisfy 1 <= m <= n (got m = " + std::to_string(m) +
                                    ", n = " + std::to_string(g.order()) + ")");
    }
}

}  // namespace

BuiltModel build_theta(const ConflictGraph& g, ThetaVariant variant)
{
    const int n = g.order();
    if (n < 1) throw std::invalid_argument("build_theta: empty graph");
    BuiltModel out;
    SdpModel& md = out.model;
    md.dim = n;
    md.sense = Sense::maximize;
    for (Vertex u = 0; u < n; ++u) {
        for (Vertex v = 0; v < n; ++v) md.objective.push_back({u, v, 1.0});
    }
    SparseRow trace;
    for (Vertex v = 0; v < n; ++v) trace.entries.push_back({v, v, 1.0});
    trace.rhs = 1.0;
    md.eq_other.push_back(trace);
    for (Vertex u = 0; u < n; ++u) {
        for (Vertex v = u + 1; v < n; ++v) {
            SparseRow r{{{u, v, kHalfRoot}, {v, u, kHalfRoot}}, 0.0};
            if (!g.adjacent(u, v)) {
                if (variant == ThetaVariant::strong) {
                    for (auto& e : r.entries) e.coef = -e.coef;
                    md.bounds.rows.push_back(r);
                } else {
                    md.eq_graph.push_back(r);
                }
            } else if (variant == ThetaVariant::strict) {
                md.bounds.rows.push_back(r);
            }
        }
    }
    md.structure = detect_structure(md);
    out.semantics.transform = Transform::direct;
    out.semantics.sense = Sense::maximize;
    out.semantics.anchor_vertex = 0;
    out.semantics.graph_order = n;
    out.semantics.offset = 0.0;
    out.semantics.value_map = "value = <J, X>";
    return out;
}

BuiltModel to_standard_form(const ShiftedSketch& sketch, Transform transform)
{
    const int n = sketch.n;
    const int w = sketch.anchor;
    if (n < 1 || w < 0 || w >= n) throw std::invalid_argument("to_standard_form: bad sketch");
    BuiltModel out;
    SdpModel& md = out.model;
    BoundSemantics& sem = out.semantics;
    sem.anchor_vertex = w;
    sem.graph_order = n;
    sem.sense = Sense::minimize;
    sem.transform = transform;
    md.sense = Sense::minimize;

    if (transform == Transform::scaled) {
        md.dim = n;
        md.objective = {{w, w, 1.0}};
        for (const auto& r : sketch.eq_graph) md.eq_graph.push_back(shifted(r, 0));
        for (const auto& r : sketch.eq_other) md.eq_other.push_back(shifted(r, 0));
        for (const auto& b : sketch.ineq) {
            InequalityBlock blk{b.name, {}};
            for (const auto& r : b.rows) blk.rows.push_back(shifted(r, 0));
            md.ineq.push_back(std::move(blk));
        }
        for (const auto& r : sketch.bounds) md.bounds.rows.push_back(shifted(r, 0));
        md.structure = sketch.claimed;
        sem.offset = 1.0;
        sem.value_map = "value = X_ww + 1 with X = Y - J, w = " + std::to_string(w);
    } else if (transform == Transform::rewritten) {
        // Block variable [[Z, *], [*, Y]]: Z = Y - J occupies 0..n-1 and Y
        // occupies n..2n-1; Y - Z = J is imposed entrywise.
        md.dim = 2 * n;
        md.objective = {{n + w, n + w, 1.0}};
        for (const auto& r : sketch.eq_graph) md.eq_graph.push_back(shifted(r, 0));
        for (const auto& r : sketch.eq_other) md.eq_other.push_back(shifted(r, 0));
        for (Vertex u = 0; u < n; ++u) {
            for (Vertex v = u; v < n; ++v) {
                SparseRow link;
                if (u == v) {
                    link.entries = {{n + u, n + u, 1.0}, {u, u, -1.0}};
                } else {
                    link.entries = {{n + u, n + v, 0.5}, {n + v, n + u, 0.5},
                                    {u, v, -0.5},         {v, u, -0.5}};
                }
                link.rhs = 1.0;
                md.eq_other.push_back(std::move(link));
            }
        }
        for (const auto& b : sketch.ineq) {
            InequalityBlock blk{b.name, {}};
            for (const auto& r : b.rows) blk.rows.push_back(direct(r, n));
            md.ineq.push_back(std::move(blk));
        }
        for (const auto& r : sketch.bounds) md.bounds.rows.push_back(direct(r, n));
        md.structure = sketch.claimed;
        md.structure.a2_diagonal_chain = false;
        sem.offset = 0.0;
        sem.value_map = "value = Y_ww in the block variable [[Z, *], [*, Y]], w = " +
                        std::to_string(w);
    } else {
        throw std::invalid_argument("to_standard_form: unsupported transform");
    }
    drop_trivial_rows(out.model);
    return out;
}

BuiltModel build_bounded(const ConflictGraph& g, std::optional<int> m, Transform transform)
{
    if (g.order() < 1) throw std::invalid_argument("build_bounded: empty graph");
    ShiftedSketch s = base_sketch(g);
    if (m) {
        check_bound(g, *m);
        const auto all = all_vertices(s.n);
        s.ineq.push_back(sum_block("IN", all, all, *m, nullptr, false));
    }
    add_nonneg_bounds(s, g);
    return to_standard_form(s, transform);
}

BuiltModel build_precoloured(const ConflictGraph& g, int m,
                             const std::vector<std::vector<Vertex>>& pre, Transform transform)
{
    check_bound(g, m);
    ShiftedSketch s = base_sketch(g);
    const auto pinned = add_precolouring(s, g, m, pre);
    const auto all = all_vertices(s.n);
    s.ineq.push_back(sum_block("L1", all, all, m, nullptr, false));
    s.ineq.push_back(sum_block("L2", all, all, m, nullptr, true));
    add_nonneg_bounds(s, g, pinned);
    s.ineq.push_back({"L4", {aggregate_row(all, s.n, double(s.n) * m, s.anchor, false)}});
    return to_standard_form(s, transform);
}

BuiltModel build_weighted(const ConflictGraph& g, int m, const std::vector<int>& weights,
                          Transform transform)
{
    if (g.order() < 1) throw std::invalid_argument("build_weighted: empty graph");
    if (static_cast<int>(weights.size()) != g.order()) {
        throw std::invalid_argument("build_weighted: one weight per vertex required");
    }
    for (int c : weights) {
        if (c < 1) throw std::invalid_argument("build_weighted: weights must be positive");
    }
    if (m < 1) throw std::invalid_argument("build_weighted: m must be positive");
    ShiftedSketch s = base_sketch(g);
    const auto all = all_vertices(s.n);
    s.ineq.push_back(sum_block("L1", all, all, m, &weights, false));
    s.ineq.push_back(sum_block("L2", all, all, m, &weights, true));
    add_nonneg_bounds(s, g);
    return to_standard_form(s, transform);
}

ReducedInstance reduce_precolouring(const ConflictGraph& g, int m,
                                    const std::vector<std::vector<Vertex>>& pre)
{
    const int n = g.order();
    std::vector<int> owner(n, -1);
    for (std::size_t i = 0; i < pre.size(); ++i) {
        if (static_cast<int>(pre[i].size()) > m) {
            throw std::invalid_argument("pre-colouring class larger than m");
        }
        for (Vertex v : pre[i]) {
            if (v < 0 || v >= n) throw std::invalid_argument("pre-colouring vertex out of range");
            if (owner[v] != -1) throw std::invalid_argument("pre-colouring classes overlap");
            owner[v] = static_cast<int>(i);
        }
    }
    for (const auto& e : g.edges()) {
        if (owner[e.u] != -1 && owner[e.u] == owner[e.v]) {
            throw std::invalid_argument("infeasible pre-colouring: class contains edge (" +
                                        std::to_string(e.u) + ", " + std::to_string(e.v) + ")");
        }
    }
    ReducedInstance out;
    out.group_of.assign(n, -1);
    std::vector<int> class_group(pre.size(), -1);
    for (Vertex v = 0; v < n; ++v) {
        if (owner[v] == -1) {
            out.group_of[v] = static_cast<int>(out.members.size());
            out.members.push_back({v});
        } else if (class_group[owner[v]] == -1) {
            class_group[owner[v]] = static_cast<int>(out.members.size());
            out.group_of[v] = class_group[owner[v]];
            out.members.push_back({v});
        } else {
            out.group_of[v] = class_group[owner[v]];
            out.members[out.group_of[v]].push_back(v);
        }
    }
    std::vector<Edge> edges;
    for (const auto& e : g.edges()) edges.push_back({out.group_of[e.u], out.group_of[e.v]});
    out.graph = ConflictGraph(static_cast<int>(out.members.size()), std::move(edges));
    for (const auto& grp : out.members) out.weights.push_back(static_cast<int>(grp.size()));
    return out;
}

bool is_laminar(std::vector<std::vector<Vertex>> family)
{
    for (auto& s : family) {
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
    }
    std::sort(family.begin(), family.end(),
              [](const auto& a, const auto& b) { return a.size() > b.size(); });
    // Largest first; each set must sit inside the most recent set it meets.
    for (std::size_t i = 0; i < family.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            const auto& big = family[j];
            const auto& small = family[i];
            std::vector<Vertex> common;
            std::set_intersection(big.begin(), big.end(), small.begin(), small.end(),
                                  std::back_inserter(common));
            if (!common.empty() && common.size() != small.size()) return false;
        }
    }
    return true;
}

BuiltModel build_laminar(const TimetablingInstance& inst, LaminarOptions options)
{
    inst.validate();
    const ConflictGraph& g = inst.graph;
    const int n = g.order();
    if (n < 1) throw std::invalid_argument("build_laminar: empty graph");
    ShiftedSketch s = base_sketch(g);
    std::set<std::pair<Vertex, Vertex>> pinned;
    if (!inst.precolouring.empty()) pinned = add_precolouring(s, g, inst.m, inst.precolouring);

    std::vector<int> sizes = inst.event_sizes;
    std::sort(sizes.begin(), sizes.end());
    sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());

    std::vector<std::vector<Vertex>> level_sets;
    std::vector<int> level_rooms;
    for (int p : sizes) {
        std::vector<Vertex> L;
        for (Vertex v = 0; v < n; ++v) {
            if (inst.event_sizes[v] >= p) L.push_back(v);
        }
        const int R = static_cast<int>(std::count_if(
            inst.room_capacities.begin(), inst.room_capacities.end(), [&](int c) { return c >= p; }));
        if (R == 0) {
            throw std::invalid_argument("build_laminar: no room holds events of size " +
                                        std::to_string(p));
        }
        level_sets.push_back(L);
        level_rooms.push_back(R);
        const std::string tag = std::to_string(p);
        s.ineq.push_back(sum_block("PR1:" + tag, L, L, R, nullptr, false));
        s.ineq.push_back(sum_block("PR2:" + tag, L, L, R, nullptr, true));
    }

    // A class holding k of the L-events has at most m members, and k <= |R|,
    // so sum_{u in L} |class(u)| <= t * min(m |L|, n |R|).
    auto aggregate_cap = [&](std::size_t members, int rooms) {
        return std::min(double(inst.m) * double(members), double(n) * rooms);
    };
    if (options.counting) {
        SketchBlock cb1{"CB1", {}}, cb2{"CB2", {}};
        for (std::size_t i = 0; i < level_sets.size(); ++i) {
            const double cap = aggregate_cap(level_sets[i].size(), level_rooms[i]);
            cb1.rows.push_back(aggregate_row(level_sets[i], n, cap, s.anchor, false));
            cb2.rows.push_back(aggregate_row(level_sets[i], n, cap, s.anchor, true));
        }
        s.ineq.push_back(std::move(cb1));
        s.ineq.push_back(std::move(cb2));
    }

    if (options.features) {
        std::vector<std::vector<Vertex>> needs(inst.feature_count);
        for (auto [v, f] : inst.event_features) needs[f].push_back(v);
        std::vector<std::set<Room>> offers(inst.feature_count);
        for (auto [r, f] : inst.room_features) offers[f].insert(r);
        std::vector<std::vector<Vertex>> family = level_sets;
        for (auto& fs : needs) {
            std::sort(fs.begin(), fs.end());
            fs.erase(std::unique(fs.begin(), fs.end()), fs.end());
            if (!fs.empty()) family.push_back(fs);
        }
        if (!is_laminar(family)) {
            throw std::invalid_argument(
                "build_laminar: feature and size sets are not laminar");
        }
        SketchBlock fc1{"FC1", {}}, fc2{"FC2", {}};
        for (Feature f = 0; f < inst.feature_count; ++f) {
            if (needs[f].empty()) continue;
            const int G = static_cast<int>(offers[f].size());
            if (G == 0) {
                throw std::invalid_argument("build_laminar: no room offers feature " +
                                            std::to_string(f));
            }
            const std::string tag = std::to_string(f);
            s.ineq.push_back(sum_block("FR1:" + tag, needs[f], needs[f], G, nullptr, false));
            s.ineq.push_back(sum_block("FR2:" + tag, needs[f], needs[f], G, nullptr, true));
            if (options.counting) {
                const double cap = aggregate_cap(needs[f].size(), G);
                fc1.rows.push_back(aggregate_row(needs[f], n, cap, s.anchor, false));
                fc2.rows.push_back(aggregate_row(needs[f], n, cap, s.anchor, true));
            }
        }
        if (!fc1.rows.empty()) {
            s.ineq.push_back(std::move(fc1));
            s.ineq.push_back(std::move(fc2));
        }
    }

    add_nonneg_bounds(s, g, pinned);
    return to_standard_form(s, Transform::scaled);
}

BuiltModel build_room_assignment(const TimetablingInstance& inst, bool room_stability)
{
    inst.validate();
    const ConflictGraph& g = inst.graph;
    const int n = g.order();
    const int m = inst.m;
    if (n < 1) throw std::invalid_argument("build_room_assignment: empty graph");

    std::vector<std::vector<char>> room_has(m, std::vector<char>(inst.feature_count, 0));
    for (auto [r, f] : inst.room_features) room_has[r][f] = 1;
    std::vector<std::vector<char>> allowed(n, std::vector<char>(m, 1));
    for (Vertex v = 0; v < n; ++v) {
        for (Room r = 0; r < m; ++r) {
            if (inst.event_sizes[v] > inst.room_capacities[r]) allowed[v][r] = 0;
        }
    }
    for (auto [v, f] : inst.event_features) {
        for (Room r = 0; r < m; ++r) {
            if (!room_has[r][f]) allowed[v][r] = 0;
        }
    }
    for (Vertex v = 0; v < n; ++v) {
        if (std::none_of(allowed[v].begin(), allowed[v].end(), [](char a) { return a; })) {
            throw std::invalid_argument("build_room_assignment: event " + std::to_string(v) +
                                        " fits no room");
        }
    }

    BuiltModel out = build_bounded(g, std::min(m, n), Transform::scaled);
    SdpModel& md = out.model;
    md.dim = n + n * m;
    md.structure.a2_diagonal_chain = false;
    auto R = [&](Vertex v, Room r) { return room_index(n, m, v, r); };
    const int w = out.semantics.anchor_vertex;

    // sum_r R_vr = t = X_vv + 1; R_vr = 0 where the room does not fit.
    for (Vertex v = 0; v < n; ++v) {
        SparseRow iff{{{v, v, -1.0}}, 1.0};
        for (Room r = 0; r < m; ++r) iff.entries.push_back({R(v, r), R(v, r), 1.0});
        md.eq_other.push_back(std::move(iff));
        for (Room r = 0; r < m; ++r) {
            if (!allowed[v][r]) md.eq_other.push_back({{{R(v, r), R(v, r), 1.0}}, 0.0});
        }
    }

    // R_vr + R_vr' <= t.
    InequalityBlock iff2{"rooms:iff2", {}};
    for (Vertex v = 0; v < n; ++v) {
        for (Room r = 0; r < m; ++r) {
            for (Room q = r + 1; q < m; ++q) {
                if (!allowed[v][r] || !allowed[v][q]) continue;
                iff2.rows.push_back(
                    {{{v, v, 1.0}, {R(v, r), R(v, r), -1.0}, {R(v, q), R(v, q), -1.0}}, -1.0});
            }
        }
    }
    if (!iff2.rows.empty()) md.ineq.push_back(std::move(iff2));

    // R_ur + R_vr + Y_uv <= 2t.
    InequalityBlock exclusive{"rooms:exclusive", {}};
    for (Vertex u = 0; u < n; ++u) {
        for (Vertex v = u + 1; v < n; ++v) {
            for (Room r = 0; r < m; ++r) {
                if (!allowed[u][r] || !allowed[v][r]) continue;
                exclusive.rows.push_back({{{u, u, 1.0},
                                           {v, v, 1.0},
                                           {u, v, -0.5},
                                           {v, u, -0.5},
                                           {R(u, r), R(u, r), -1.0},
                                           {R(v, r), R(v, r), -1.0}},
                                          -1.0});
            }
        }
    }
    if (!exclusive.rows.empty()) md.ineq.push_back(std::move(exclusive));

    if (room_stability) {
        InequalityBlock stab{"rooms:stability", {}};
        for (const auto& grp : inst.stability_groups) {
            for (std::size_t i = 0; i < grp.size(); ++i) {
                for (std::size_t j = i + 1; j < grp.size(); ++j) {
                    const Vertex a = grp[i], b = grp[j];
                    if (a == b) continue;
                    for (Room r = 0; r < m; ++r) {
                        for (Room q = 0; q < m; ++q) {
                            if (r == q || !allowed[a][r] || !allowed[b][q]) continue;
                            stab.rows.push_back({{{w, w, 1.0},
                                                  {R(a, r), R(a, r), -1.0},
                                                  {R(b, q), R(b, q), -1.0}},
                                                 -1.0});
                        }
                    }
                }
            }
        }
        if (!stab.rows.empty()) md.ineq.push_back(std::move(stab));
    }
    md.structure.b_row_sum = detect_structure(md).b_row_sum;
    out.semantics.value_map += "; R_vr on the diagonal after the n x n block";
    drop_trivial_rows(out.model);
    return out;
}

}  // namespace bcsdp
