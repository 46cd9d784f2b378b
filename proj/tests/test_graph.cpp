#include "bcsdp/generators.hpp"
#include "bcsdp/graph.hpp"
#include "bcsdp/instance.hpp"
#include "bcsdp/oracle.hpp"
#include "bcsdp/partition.hpp"

#include <doctest.h>

#include <sstream>

using namespace bcsdp;

TEST_SUITE("graph-core") {

TEST_CASE("gnp extremes and determinism")
{
    CHECK(gen_gnp(5, 0.0, 3).edge_count() == 0);
    CHECK(gen_gnp(5, 1.0, 3).edge_count() == 10);
    const auto g = gen_gnp(100, 0.5, 1);
    CHECK(g.edge_count() >= 2200);
    CHECK(g.edge_count() <= 2700);
    CHECK(gen_gnp(30, 0.3, 9) == gen_gnp(30, 0.3, 9));
    CHECK_FALSE(gen_gnp(30, 0.3, 9) == gen_gnp(30, 0.3, 10));
    CHECK_THROWS(gen_gnp(5, 1.5, 1));
    CHECK_THROWS(gen_gnp(5, -0.1, 1));
}

TEST_CASE("gnp edge counts are frozen")
{
    // Pins the documented generator stream.
    const auto g = gen_gnp(20, 0.5, 1);
    CHECK(g.order() == 20);
    CHECK(g.edge_count() == 102);
}

TEST_CASE("kneser graphs")
{
    CHECK(gen_kneser(3, 1) == gen_complete(3));
    const auto p = gen_kneser(5, 2);
    CHECK(p.order() == 10);
    CHECK(p.edge_count() == 15);
    const auto k62 = gen_kneser(6, 2);
    CHECK(k62.order() == 15);
    CHECK(k62.edge_count() == 45);
    for (Vertex v = 0; v < k62.order(); ++v) CHECK(k62.degree(v) == 6);
    CHECK_THROWS(gen_kneser(3, 3));
}

TEST_CASE("forbidden intersection graphs")
{
    const auto cube = gen_forbidden_intersection(6, 5.0 / 6.0);
    CHECK(cube.order() == 64);
    for (Vertex v = 0; v < 64; ++v) CHECK(cube.degree(v) == 6);
    const auto d2 = gen_forbidden_intersection(6, 2.0 / 3.0);
    for (Vertex v = 0; v < 64; ++v) CHECK(d2.degree(v) == 15);
    const auto c4 = gen_forbidden_intersection(2, 0.5);
    CHECK(c4.order() == 4);
    CHECK(c4.edge_count() == 4);
    CHECK_THROWS(gen_forbidden_intersection(6, 0.3));
}

TEST_CASE("connected components")
{
    const auto e = connected_components(gen_empty(4));
    CHECK(e.size() == 4);
    for (const auto& c : e) CHECK(c.size() == 1);
    const auto k = connected_components(gen_complete(5));
    REQUIRE(k.size() == 1);
    CHECK(k[0].size() == 5);
    // Largest first: a triangle plus an edge plus an isolated vertex.
    const ConflictGraph g(6, {{3, 4}, {4, 5}, {3, 5}, {0, 1}});
    const auto c = connected_components(g);
    REQUIRE(c.size() == 3);
    CHECK(c[0] == std::vector<Vertex>{3, 4, 5});
    CHECK(c[1] == std::vector<Vertex>{0, 1});
    CHECK(c[2] == std::vector<Vertex>{2});
}

TEST_CASE("counting bound")
{
    CHECK(counting_bound(47, 5) == 10);
    CHECK(counting_bound(10, 10) == 1);
    CHECK(counting_bound(47, 2) == 24);
}

TEST_CASE("counting bound never exceeds the bounded chromatic number")
{
    for (int n = 1; n <= 7; ++n) {
        for (std::uint64_t s = 1; s <= 5; ++s) {
            const auto g = gen_gnp(n, 0.4, s);
            for (int m = 1; m <= n; ++m) {
                CHECK(counting_bound(n, m) <= enumerate_bounded_chromatic(TimetablingInstance::bounded(g, m)));
            }
        }
    }
}

TEST_CASE("validate_partition examples")
{
    {
        const auto inst = TimetablingInstance::bounded(gen_complete(2), 2);
        const auto rep = validate_partition(inst, Partition{{{0, 1}}, {}});
        CHECK_FALSE(rep.ok);
        REQUIRE(rep.violations.size() == 1);
        CHECK(rep.violations[0].kind == ViolationKind::edge_conflict);
    }
    {
        const auto inst = TimetablingInstance::bounded(gen_empty(4), 2);
        CHECK(validate_partition(inst, Partition{{{0, 1}, {2, 3}}, {}}).ok);
        const auto big = validate_partition(inst, Partition{{{0, 1, 2}, {3}}, {}});
        CHECK_FALSE(big.ok);
        CHECK(big.violations[0].kind == ViolationKind::class_size);
        const auto cover = validate_partition(inst, Partition{{{0, 1}, {2}}, {}});
        CHECK_FALSE(cover.ok);
        CHECK(cover.violations[0].kind == ViolationKind::coverage);
    }
    {
        const auto inst = TimetablingInstance::bounded(gen_kneser(5, 2), 3);
        const auto res = exact_bounded_chromatic(inst);
        REQUIRE(res.witness);
        CHECK(res.witness->size() == 4);
        CHECK(validate_partition(inst, *res.witness).ok);
    }
}

TEST_CASE("validate_partition capacity, features and pre-colouring")
{
    TimetablingInstance inst = TimetablingInstance::bounded(gen_empty(3), 2);
    inst.room_capacities = {100, 30};
    inst.event_sizes = {90, 80, 10};
    CHECK_FALSE(validate_partition(inst, Partition{{{0, 1}, {2}}, {}}).ok);
    CHECK(validate_partition(inst, Partition{{{0, 2}, {1}}, {}}).ok);

    inst.feature_count = 1;
    inst.room_features = {{0, 0}};
    inst.event_features = {{0, 0}, {2, 0}};
    // Events 0 and 2 both need the feature only room 0 has.
    const auto rep = validate_partition(inst, Partition{{{0, 2}, {1}}, {}});
    CHECK_FALSE(rep.ok);
    CHECK(rep.violations[0].kind == ViolationKind::feature);
    CHECK(validate_partition(inst, Partition{{{0}, {1, 2}}, {}}).ok);

    TimetablingInstance pre = TimetablingInstance::bounded(gen_empty(4), 2);
    pre.precolouring = {{0, 1}};
    const auto split = validate_partition(pre, Partition{{{0, 2}, {1, 3}}, {}});
    CHECK_FALSE(split.ok);
    CHECK(split.violations[0].kind == ViolationKind::split_precolouring);
    CHECK(validate_partition(pre, Partition{{{0, 1}, {2, 3}}, {}}).ok);
}

TEST_CASE("room assignment and partition files round-trip")
{
    TimetablingInstance inst = TimetablingInstance::bounded(gen_empty(4), 2);
    inst.room_capacities = {50, 20};
    inst.event_sizes = {40, 10, 20, 45};
    Partition p{{{0, 1}, {2, 3}}, {}};
    const auto rooms = assign_rooms(inst, p);
    REQUIRE(rooms);
    CHECK((*rooms)[0] == 0);
    CHECK((*rooms)[1] == 1);
    CHECK((*rooms)[3] == 0);
    p.room_of = rooms;
    CHECK(validate_partition(inst, p).ok);

    std::stringstream ss;
    write_partition(ss, p);
    const Partition back = read_partition(ss);
    CHECK(back == p);

    std::stringstream dup("0@0 1@0\n2 3\n");
    const Partition d = read_partition(dup);
    const auto rep = validate_partition(inst, d);
    CHECK_FALSE(rep.ok);
}

TEST_CASE("validate_partition agrees with the oracle on small graphs")
{
    for (std::uint64_t s = 1; s <= 20; ++s) {
        const auto g = gen_gnp(7, 0.5, s);
        for (int m = 1; m <= 4; ++m) {
            const auto inst = TimetablingInstance::bounded(g, m);
            const auto res = exact_bounded_chromatic(inst);
            REQUIRE(res.witness);
            CHECK(validate_partition(inst, *res.witness).ok);
        }
    }
}

}
