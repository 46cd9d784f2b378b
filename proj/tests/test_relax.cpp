#include "bcsdp/generators.hpp"
#include "bcsdp/oracle.hpp"
#include "bcsdp/relax.hpp"
#include "bcsdp/solver.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>

using namespace bcsdp;

namespace {

double value(const BuiltModel& b)
{
    const auto r = solve(b.model, b.semantics);
    REQUIRE(r.status == SolveStatus::converged);
    return r.value;
}

std::set<std::pair<bool, CanonicalRow>> canonical_set(const SdpModel& m)
{
    std::set<std::pair<bool, CanonicalRow>> out;
    auto add = [&](const std::vector<SparseRow>& rows, bool eq) {
        for (const auto& r : rows) out.insert({eq, canonical(r)});
    };
    add(m.eq_graph, true);
    add(m.eq_other, true);
    for (const auto& b : m.ineq) add(b.rows, false);
    add(m.bounds.rows, false);
    return out;
}

std::vector<ConflictGraph> small_graphs()
{
    return {gen_complete(3), gen_path(4), gen_cycle(5), gen_empty(4), gen_kneser(5, 2),
            gen_gnp(6, 0.5, 2), gen_gnp(6, 0.3, 5)};
}

}  // namespace

TEST_SUITE("relax") {

TEST_CASE("theta examples")
{
    CHECK(value(build_theta(gen_complete(2), ThetaVariant::lovasz)) == doctest::Approx(2.0).epsilon(1e-3));
    CHECK(value(build_theta(gen_cycle(5), ThetaVariant::lovasz)) == doctest::Approx(2.2360680).epsilon(1e-3));
    for (auto v : {ThetaVariant::lovasz, ThetaVariant::strict, ThetaVariant::strong}) {
        CHECK(value(build_theta(gen_empty(4), v)) == doctest::Approx(1.0).epsilon(1e-3));
    }
    // strict tightens and strong loosens the Lovasz value.
    const auto g = gen_gnp(8, 0.5, 3);
    const double l = value(build_theta(g, ThetaVariant::lovasz));
    CHECK(value(build_theta(g, ThetaVariant::strict)) >= l - 1e-3);
    CHECK(value(build_theta(g, ThetaVariant::strong)) <= l + 1e-3);
}

TEST_CASE("bounded examples")
{
    for (int m : {1, 2, 5}) {
        CHECK(value(build_bounded(gen_complete(5), m)) == doctest::Approx(5.0).epsilon(1e-3));
    }
    CHECK(value(build_bounded(gen_empty(10), 2)) == doctest::Approx(5.0).epsilon(1e-3));
    CHECK_THROWS(build_bounded(gen_complete(3), 0));
    CHECK_THROWS(build_bounded(gen_complete(3), 4));
}

TEST_CASE("scaled P3 model shape")
{
    const auto b = build_bounded(gen_path(3), 2);
    const auto& m = b.model;
    CHECK(m.dim == 3);
    CHECK(m.eq_graph.size() == 2);
    for (const auto& r : m.eq_graph) {
        // (E_uv + E_vu)/sqrt2 . X = -sqrt2 means X_uv = -1.
        const double coef = [&] {
            Eigen::MatrixXd probe = Eigen::MatrixXd::Ones(3, 3);
            return apply_row(r, probe);
        }();
        CHECK(coef == doctest::Approx(std::sqrt(2.0)));
        CHECK(r.rhs == doctest::Approx(-std::sqrt(2.0)));
    }
    CHECK(m.eq_other.size() == 2);
    CHECK(m.ineq_rows() == 3);
    CHECK(m.bounds.rows.size() == 1);
    CHECK(b.semantics.offset == doctest::Approx(1.0));
    CHECK(m.structure.a1_edge_indicator);
    CHECK(m.structure.a2_diagonal_chain);
    CHECK(detect_structure(m, 1e-12) == m.structure);
}

TEST_CASE("rewritten P3 model doubles the order")
{
    const auto b = build_bounded(gen_path(3), 2, Transform::rewritten);
    CHECK(b.model.dim == 6);
    CHECK(b.semantics.transform == Transform::rewritten);
}

TEST_CASE("scaled and rewritten transforms agree")
{
    for (const auto& g : small_graphs()) {
        for (int m = 1; m <= g.order(); m += 2) {
            const double a = value(build_bounded(g, m));
            const double b = value(build_bounded(g, m, Transform::rewritten));
            CHECK(a == doctest::Approx(b).epsilon(2e-3));
        }
    }
}

TEST_CASE("monotone in m and above theta")
{
    for (const auto& g : small_graphs()) {
        const double theta = value(build_theta(g, ThetaVariant::lovasz));
        double prev = 1e9;
        for (int m = 1; m <= g.order(); ++m) {
            const double v = value(build_bounded(g, m));
            CHECK(v <= prev + 1e-3);
            CHECK(v >= theta - 1e-3);
            prev = v;
        }
    }
}

TEST_CASE("precoloured examples")
{
    CHECK(value(build_precoloured(gen_empty(4), 2, {{0, 1}, {2, 3}})) == doctest::Approx(2.0).epsilon(1e-3));
    CHECK(value(build_precoloured(gen_complete(3), 3, {{0}})) == doctest::Approx(3.0).epsilon(1e-3));
    CHECK(value(build_precoloured(gen_path(3), 1, {})) == doctest::Approx(3.0).epsilon(1e-3));
    CHECK_THROWS(build_precoloured(gen_empty(4), 2, {{0, 1}, {1, 2}}));
    CHECK_THROWS(build_precoloured(gen_empty(4), 1, {{0, 1}}));
}

TEST_CASE("weighted examples")
{
    for (const auto& g : small_graphs()) {
        const std::vector<int> ones(g.order(), 1);
        for (int m = 1; m <= g.order(); m += 2) {
            CHECK(value(build_weighted(g, m, ones)) == doctest::Approx(value(build_bounded(g, m))).epsilon(2e-3));
        }
    }
    CHECK(value(build_weighted(gen_empty(1), 3, {3})) == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(value(build_weighted(gen_empty(2), 3, {3, 3})) == doctest::Approx(2.0).epsilon(1e-3));
    CHECK_THROWS(build_weighted(gen_empty(2), 3, {0, 1}));
}

TEST_CASE("reduce_precolouring")
{
    const auto r = reduce_precolouring(gen_empty(3), 2, {{0, 1}});
    CHECK(r.graph.order() == 2);
    CHECK(r.weights == std::vector<int>{2, 1});
    CHECK(r.group_of == std::vector<int>{0, 0, 1});
    CHECK_THROWS(reduce_precolouring(gen_path(3), 3, {{0, 1}}));

    // Oracle values agree on both sides.
    for (std::uint64_t s = 1; s <= 10; ++s) {
        const auto g = gen_gnp(6, 0.3, s);
        for (int m = 2; m <= 4; ++m) {
            std::vector<std::vector<Vertex>> pre;
            if (!g.adjacent(0, 1)) pre.push_back({0, 1});
            if (!g.adjacent(2, 3) && m >= 2) pre.push_back({2, 3});
            TimetablingInstance a = TimetablingInstance::bounded(g, m);
            a.precolouring = pre;
            const auto red = reduce_precolouring(g, m, pre);
            TimetablingInstance b = TimetablingInstance::bounded(red.graph, m);
            b.weights = red.weights;
            CHECK(enumerate_bounded_chromatic(a) == enumerate_bounded_chromatic(b));
        }
    }
}

TEST_CASE("precoloured bound through the weighted reduction")
{
    // Pinning Y_uv = t inside a class leaves no strictly feasible point, so
    // the direct model converges slowly; its merged weighted form does not.
    for (std::uint64_t s = 1; s <= 8; ++s) {
        const auto g = gen_gnp(7, 0.4, s);
        for (int m = 2; m <= 3; ++m) {
            std::vector<std::vector<Vertex>> pre;
            if (!g.adjacent(0, 1)) pre.push_back({0, 1});
            if (!g.adjacent(2, 3)) pre.push_back({2, 3});
            TimetablingInstance inst = TimetablingInstance::bounded(g, m);
            inst.precolouring = pre;
            const auto red = reduce_precolouring(g, m, pre);
            const double w = value(build_weighted(red.graph, m, red.weights));
            CHECK(w >= value(build_bounded(g, m)) - 1e-3);
            CHECK(w <= enumerate_bounded_chromatic(inst) + 1e-3);

            const auto direct = build_precoloured(g, m, pre);
            const auto r = solve(direct.model, direct.semantics);
            CHECK(r.status != SolveStatus::diverged);
            CHECK(r.value == doctest::Approx(w).epsilon(0.01));
        }
    }
}

TEST_CASE("laminar with uniform capacities equals bounded")
{
    for (const auto& g : small_graphs()) {
        const int m = std::max(1, g.order() / 2);
        TimetablingInstance inst = TimetablingInstance::bounded(g, m);
        inst.room_capacities.assign(m, 40);
        inst.event_sizes.assign(g.order(), 25);
        const auto lam = build_laminar(inst, {});
        const auto bnd = build_bounded(g, m);
        CHECK(canonical_set(lam.model) == canonical_set(bnd.model));
    }
}

TEST_CASE("laminar capacity and feature examples")
{
    TimetablingInstance big = TimetablingInstance::bounded(gen_empty(4), 2);
    big.room_capacities = {100, 30};
    big.event_sizes.assign(4, 100);
    CHECK(value(build_laminar(big, {})) == doctest::Approx(4.0).epsilon(1e-3));
    CHECK(value(build_laminar(big, {.counting = true, .features = false})) == doctest::Approx(4.0).epsilon(1e-3));

    TimetablingInstance feat = TimetablingInstance::bounded(gen_empty(3), 3);
    feat.room_capacities = {10, 10, 10};
    feat.feature_count = 1;
    feat.room_features = {{0, 0}};
    feat.event_features = {{0, 0}, {1, 0}, {2, 0}};
    CHECK(value(build_laminar(feat, {.counting = true, .features = true})) >= 3.0 - 1e-3);

    TimetablingInstance bad = TimetablingInstance::bounded(gen_empty(3), 2);
    bad.room_capacities = {10, 10};
    bad.event_sizes = {5, 20, 5};
    bad.feature_count = 1;
    bad.room_features = {{0, 0}};
    bad.event_features = {{0, 0}, {1, 0}};
    CHECK_THROWS(build_laminar(bad, {.counting = true, .features = true}));

    CHECK(is_laminar({{0, 1, 2}, {0, 1}, {3}}));
    CHECK_FALSE(is_laminar({{0, 1}, {1, 2}}));
}

TEST_CASE("room assignment examples")
{
    TimetablingInstance one = TimetablingInstance::bounded(gen_empty(1), 1);
    const auto b1 = build_room_assignment(one, false);
    const auto r1 = solve(b1.model, b1.semantics);
    REQUIRE(r1.status == SolveStatus::converged);
    const int idx = room_index(1, 1, 0, 0);
    // R_{0,0} sits unshifted on the diagonal of the enlarged variable: it equals t.
    CHECK(r1.X_final(idx, idx) == doctest::Approx(r1.value).epsilon(1e-3));

    TimetablingInstance two = TimetablingInstance::bounded(gen_complete(2), 1);
    CHECK(value(build_room_assignment(two, false)) >= 2.0 - 1e-3);

    TimetablingInstance nofit = TimetablingInstance::bounded(gen_empty(2), 1);
    nofit.feature_count = 1;
    nofit.event_features = {{0, 0}};
    CHECK_THROWS(build_room_assignment(nofit, false));

    TimetablingInstance stab = TimetablingInstance::bounded(gen_empty(4), 2);
    stab.stability_groups = {{0, 1}};
    const auto bs = build_room_assignment(stab, true);
    CHECK(bs.model.find_block("rooms:stability") != nullptr);
}

TEST_CASE("builder structure tags hold on the emitted matrices")
{
    for (const auto& g : small_graphs()) {
        const auto b = build_bounded(g, std::max(1, g.order() / 2));
        const auto tags = detect_structure(b.model, 1e-12);
        if (b.model.structure.a1_edge_indicator) CHECK(tags.a1_edge_indicator);
        if (b.model.structure.a2_diagonal_chain) CHECK(tags.a2_diagonal_chain);
        if (b.model.structure.b_row_sum) CHECK(tags.b_row_sum);
        if (b.model.structure.objective_single_entry) CHECK(tags.objective_single_entry);
    }
}

}
