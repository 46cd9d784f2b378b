#include "bcsdp/generators.hpp"
#include "bcsdp/oracle.hpp"

#include <doctest.h>

using namespace bcsdp;

TEST_SUITE("oracle") {

TEST_CASE("examples")
{
    const auto pet = exact_bounded_chromatic(TimetablingInstance::bounded(gen_kneser(5, 2), 3));
    REQUIRE(pet.chi_m);
    CHECK(*pet.chi_m == 4);
    REQUIRE(pet.witness);
    CHECK(validate_partition(TimetablingInstance::bounded(gen_kneser(5, 2), 3), *pet.witness).ok);

    CHECK(*exact_bounded_chromatic(TimetablingInstance::bounded(gen_complete(5), 3)).chi_m == 5);
    CHECK(*exact_bounded_chromatic(TimetablingInstance::bounded(gen_empty(7), 3)).chi_m == 3);
    CHECK(*exact_bounded_chromatic(TimetablingInstance::bounded(gen_cycle(5), 2)).chi_m == 3);
    CHECK(*exact_bounded_chromatic(TimetablingInstance::bounded(gen_cycle(7), 2)).chi_m == 4);
}

TEST_CASE("frozen Kneser values")
{
    // Bounded chromatic numbers of K(6,2) at m = 5, 4, 3, 2.
    const auto g = gen_kneser(6, 2);
    const std::pair<int, int> rows[] = {{5, 4}, {4, 4}, {3, 5}, {2, 8}};
    for (auto [m, chi] : rows) {
        CHECK(*exact_bounded_chromatic(TimetablingInstance::bounded(g, m)).chi_m == chi);
    }
}

TEST_CASE("extremes of m")
{
    for (std::uint64_t s = 1; s <= 10; ++s) {
        const auto g = gen_gnp(9, 0.5, s);
        const int chi = *exact_bounded_chromatic(TimetablingInstance::bounded(g, 9)).chi_m;
        CHECK(*exact_bounded_chromatic(TimetablingInstance::bounded(g, 1)).chi_m == 9);
        CHECK(chi == enumerate_bounded_chromatic(TimetablingInstance::bounded(g, 9)));
        CHECK(chi >= clique_number(g));
    }
}

TEST_CASE("agrees with enumeration")
{
    for (std::uint64_t s = 1; s <= 20; ++s) {
        const auto g = gen_gnp(7, 0.4, s);
        for (int m = 1; m <= 7; ++m) {
            const auto inst = TimetablingInstance::bounded(g, m);
            const auto r = exact_bounded_chromatic(inst);
            REQUIRE(r.chi_m);
            CHECK(*r.chi_m == enumerate_bounded_chromatic(inst));
            CHECK(r.lower_bound <= *r.chi_m);
            CHECK(combinatorial_lower_bound(inst) <= *r.chi_m);
        }
    }
}

TEST_CASE("enumeration refuses large inputs")
{
    CHECK_THROWS(enumerate_bounded_chromatic(TimetablingInstance::bounded(gen_empty(11), 3)));
}

TEST_CASE("sandwich")
{
    const auto c5 = sandwich_check(gen_cycle(5), 2);
    CHECK(c5.pass);
    CHECK(c5.omega == 2);
    CHECK(c5.chi_m == 3);
    CHECK(c5.theta == doctest::Approx(2.2360680).epsilon(1e-3));

    const auto k4 = sandwich_check(gen_complete(4), 2);
    CHECK(k4.pass);
    CHECK(k4.sdp_certified == 4);
    CHECK(k4.greedy == 4);
}

}
