#pragma once

#include "bcsdp/instance.hpp"
#include "bcsdp/sdp_model.hpp"

#include <optional>
#include <string>
#include <vector>

namespace bcsdp {

struct BuiltModel {
    SdpModel model;
    BoundSemantics semantics;
};

enum class ThetaVariant { lovasz, strict, strong };

// Colouring-side theta bounds on the complement of g: maximise <J, X> with
// trace one. lovasz pins X_uv = 0 on the non-edges of g, strict also asks
// X_uv >= 0 on its edges, strong relaxes the pins to X_uv <= 0.
BuiltModel build_theta(const ConflictGraph& g, ThetaVariant variant);

// A relaxation written over Y and the scalar t, with Y - J PSD. Every row is
//   sum_k coef_k Y(i_k, j_k) + t_coef * t  (== or >=)  rhs
// where t is read off the diagonal entry Y(t_vertex, t_vertex). Since the
// diagonal is pinned to t, any vertex serves; rows pick one whose position
// keeps their block orthogonal.
struct SketchRow {
    std::vector<Entry> terms;
    double t_coef = 0.0;
    int t_vertex = 0;
    double rhs = 0.0;
};

struct SketchBlock {
    std::string name;
    std::vector<SketchRow> rows;
};

struct ShiftedSketch {
    int n = 0;
    int anchor = 0;
    std::vector<SketchRow> eq_graph;   // Y_uv = 0 pins
    std::vector<SketchRow> eq_other;   // diagonal chain and other equalities
    std::vector<SketchBlock> ineq;     // >= rows
    std::vector<SketchRow> bounds;     // elementwise Y_uv >= 0
    StructureTags claimed;             // identities the scaled form satisfies
};

BuiltModel to_standard_form(const ShiftedSketch& sketch, Transform transform);

// Bounded colouring: min t with Y_vv = t, Y_uv = 0 on edges, row sums <= t m,
// Y_uv >= 0 on non-edges and Y - J PSD. std::nullopt drops the row sums.
BuiltModel build_bounded(const ConflictGraph& g, std::optional<int> m,
                         Transform transform = Transform::scaled);

BuiltModel build_precoloured(const ConflictGraph& g, int m,
                             const std::vector<std::vector<Vertex>>& pre,
                             Transform transform = Transform::scaled);

BuiltModel build_weighted(const ConflictGraph& g, int m, const std::vector<int>& weights,
                          Transform transform = Transform::scaled);

struct ReducedInstance {
    ConflictGraph graph;
    std::vector<int> weights;
    std::vector<int> group_of;                 // original vertex -> reduced vertex
    std::vector<std::vector<Vertex>> members;  // reduced vertex -> original vertices
};

// Contracts each pre-colouring class to one vertex weighted by its size.
// Reduced vertices are numbered by their smallest original member.
ReducedInstance reduce_precolouring(const ConflictGraph& g, int m,
                                    const std::vector<std::vector<Vertex>>& pre);

struct LaminarOptions {
    bool counting = false;
    bool features = false;
};

// Nested/disjoint check for a set family.
bool is_laminar(std::vector<std::vector<Vertex>> family);

BuiltModel build_laminar(const TimetablingInstance& inst, LaminarOptions options);

BuiltModel build_room_assignment(const TimetablingInstance& inst, bool room_stability);

// Index of R_{v,r} in the room-assignment matrix variable.
inline int room_index(int n, int m, Vertex v, Room r) { return n + v * m + r; }

}  // namespace bcsdp
