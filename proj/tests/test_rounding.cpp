#include "bcsdp/generators.hpp"
#include "bcsdp/oracle.hpp"
#include "bcsdp/relax.hpp"
#include "bcsdp/rounding.hpp"
#include "bcsdp/solver.hpp"

#include <doctest.h>

using namespace bcsdp;

namespace {

Eigen::MatrixXd solved_x(const ConflictGraph& g, int m)
{
    const auto b = build_bounded(g, m);
    return solve(b.model, b.semantics).X_final;
}

bool valid(const TimetablingInstance& inst, const Partition& p) { return validate_partition(inst, p).ok; }

}  // namespace

TEST_SUITE("rounding") {

TEST_CASE("greedy examples")
{
    const auto k4 = TimetablingInstance::bounded(gen_complete(4), 4);
    CHECK(greedy_colouring(k4).size() == 4);
    const auto e6 = TimetablingInstance::bounded(gen_empty(6), 2);
    const auto p = greedy_colouring(e6);
    CHECK(p.size() == 3);
    CHECK(valid(e6, p));
    const auto c5 = TimetablingInstance::bounded(gen_cycle(5), 5);
    CHECK(greedy_colouring(c5).size() == 3);
    // Seeded tie breaking still yields valid colourings.
    const auto g = TimetablingInstance::bounded(gen_gnp(15, 0.4, 2), 4);
    for (std::uint64_t s = 1; s <= 5; ++s) CHECK(valid(g, greedy_colouring(g, s)));
}

TEST_CASE("kms examples")
{
    RoundingConfig cfg;
    const auto e4 = TimetablingInstance::bounded(gen_empty(4), 2);
    auto p = kms_round(solved_x(e4.graph, 2), e4, cfg);
    CHECK(p.size() == 2);
    CHECK(valid(e4, p));

    const auto pet = TimetablingInstance::bounded(gen_kneser(5, 2), 3);
    p = kms_round(solved_x(pet.graph, 3), pet, cfg);
    CHECK(p.size() == 4);
    CHECK(valid(pet, p));

    const auto k5 = TimetablingInstance::bounded(gen_complete(5), 2);
    p = kms_round(solved_x(k5.graph, 2), k5, cfg);
    CHECK(p.size() == 5);
}

TEST_CASE("kms is deterministic for a seed")
{
    const auto inst = TimetablingInstance::bounded(gen_gnp(14, 0.5, 9), 3);
    const auto x = solved_x(inst.graph, 3);
    RoundingConfig cfg;
    cfg.seed = 42;
    CHECK(kms_round(x, inst, cfg) == kms_round(x, inst, cfg));
}

TEST_CASE("iterative rounding on an exact block indicator")
{
    // Two classes {0,1} and {2,3} on an empty graph with m = 2: X = Y - J with
    // Y the scaled block indicator (t = 2).
    const auto inst = TimetablingInstance::bounded(gen_empty(4), 2);
    Eigen::MatrixXd y = Eigen::MatrixXd::Zero(4, 4);
    y.block(0, 0, 2, 2).setConstant(2.0);
    y.block(2, 2, 2, 2).setConstant(2.0);
    const Eigen::MatrixXd x = y - Eigen::MatrixXd::Ones(4, 4);
    const auto r = iterative_round(x, inst, {});
    CHECK(r.partition.size() == 2);
    CHECK(valid(inst, r.partition));
    CHECK(r.partition.class_of(4)[0] == r.partition.class_of(4)[1]);
    CHECK(r.partition.class_of(4)[2] == r.partition.class_of(4)[3]);
}

TEST_CASE("iterative rounding from solver output")
{
    for (std::uint64_t s = 1; s <= 4; ++s) {
        const auto inst = TimetablingInstance::bounded(gen_gnp(12, 0.5, s), 3);
        const auto r = iterative_round(solved_x(inst.graph, 3), inst, {});
        CHECK(valid(inst, r.partition));
        for (double v : r.diagnostics.violations) {
            CHECK(v >= 0.0);
            CHECK(v <= r.diagnostics.violation_bound + 1e-9);
        }
        CHECK(r.diagnostics.rounds >= 1);
    }
}

TEST_CASE("config validation")
{
    RoundingConfig bad;
    bad.attempts = 0;
    CHECK_THROWS(bad.validate());
    bad = {};
    bad.delta = -1.0;
    CHECK_THROWS(bad.validate());
}

}
