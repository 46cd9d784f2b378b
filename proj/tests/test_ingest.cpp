#include "bcsdp/generators.hpp"
#include "bcsdp/ingest.hpp"

#include <doctest.h>

#include <sstream>

using namespace bcsdp;

namespace {

ConflictGraph dimacs(const std::string& text)
{
    std::istringstream in(text);
    return parse_dimacs(in);
}

const char* kItcSmall = R"(Name: tiny
Courses: 4
Rooms: 2
Days: 2
Periods_per_day: 2
Curricula: 1
Constraints: 2

COURSES:
c1 t1 2 1 30
c2 t2 1 1 20
c3 t3 1 1 10
c4 t1 1 1 40

ROOMS:
rA 50
rB 25

CURRICULA:
q1 3 c1 c2 c3

UNAVAILABILITY_CONSTRAINTS:
c2 0 1
c4 1 0

END.
)";

}  // namespace

TEST_SUITE("ingest") {

TEST_CASE("dimacs examples")
{
    const auto p3 = dimacs("c path\np edge 3 2\ne 1 2\ne 2 3\n");
    CHECK(p3 == gen_path(3));
    const auto dup = dimacs("p edge 2 2\ne 1 2\ne 1 2\n");
    CHECK(dup.edge_count() == 1);
    try {
        dimacs("p edge 3 2\ne 4 1\ne 1 2\n");
        FAIL("expected an error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }
}

TEST_CASE("dimacs errors carry line numbers")
{
    CHECK_THROWS_AS(dimacs("e 1 2\n"), ParseError);
    CHECK_THROWS_AS(dimacs("p edge x 2\n"), ParseError);
    CHECK_THROWS_AS(dimacs("p edge 3 5\ne 1 2\n"), ParseError);
    CHECK_THROWS_AS(dimacs(""), ParseError);
    try {
        dimacs("c\nc\np edge 3 1\nq 1 2\n");
        FAIL("expected an error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 4);
    }
}

TEST_CASE("toronto pair")
{
    std::istringstream crs("0001 3\n0002 2\n0003 1\n0004 2\n");
    std::istringstream stu("0001 0002\n0002 0004\n0003\n0001 0002\n");
    const auto doc = parse_toronto(crs, stu, "mini");
    CHECK(doc.name == "mini");
    CHECK(doc.source_format == SourceFormat::toronto);
    CHECK(doc.instance.order() == 4);
    CHECK(doc.instance.graph == ConflictGraph(4, {{0, 1}, {1, 3}}));
    CHECK(doc.instance.event_sizes == std::vector<int>{3, 2, 1, 2});
    CHECK(doc.labels[2] == "0003");
}

TEST_CASE("toronto edge set ignores student order; single-exam students add nothing")
{
    std::istringstream crs1("1 5\n2 5\n3 5\n");
    std::istringstream stu1("1 2\n2 3\n3\n");
    std::istringstream crs2("1 5\n2 5\n3 5\n");
    std::istringstream stu2("3\n3 2\n2 1\n");
    CHECK(parse_toronto(crs1, stu1).instance.graph == parse_toronto(crs2, stu2).instance.graph);

    std::istringstream crs3("1 5\n2 5\n");
    std::istringstream stu3("1\n2\n1\n");
    CHECK(parse_toronto(crs3, stu3).instance.graph.edge_count() == 0);

    std::istringstream crs4("1 5\n");
    std::istringstream stu4("1 9\n");
    CHECK_THROWS_AS(parse_toronto(crs4, stu4), ParseError);
}

TEST_CASE("itc2007 extraction")
{
    std::istringstream in(kItcSmall);
    const auto doc = parse_itc2007(in);
    CHECK(doc.name == "tiny");
    CHECK(doc.instance.order() == 4);
    CHECK(doc.instance.m == 2);
    CHECK(doc.instance.room_capacities == std::vector<int>{50, 25});
    CHECK(doc.instance.event_sizes == std::vector<int>{30, 20, 10, 40});
    // Triangle from the curriculum plus the shared teacher t1 (c1, c4).
    CHECK(doc.instance.graph == ConflictGraph(4, {{0, 1}, {0, 2}, {1, 2}, {0, 3}}));
    CHECK(doc.itc.lectures == std::vector<int>{2, 1, 1, 1});
    REQUIRE(doc.itc.unavailability.size() == 2);
    CHECK(doc.itc.unavailability[1].course == 3);

    // Re-extraction is bit-identical.
    std::istringstream again(kItcSmall);
    CHECK(parse_itc2007(again).instance == doc.instance);
}

TEST_CASE("itc2007 teacher-only and error cases")
{
    std::string text = R"(Name: t
Courses: 2
Rooms: 1
Days: 1
Periods_per_day: 1
Curricula: 0
Constraints: 0

COURSES:
a T 1 1 5
b T 1 1 5

ROOMS:
r 10

CURRICULA:

UNAVAILABILITY_CONSTRAINTS:

END.
)";
    std::istringstream in(text);
    CHECK(parse_itc2007(in).instance.graph == gen_complete(2));

    std::string missing = text.substr(0, text.find("ROOMS:"));
    std::istringstream bad(missing);
    CHECK_THROWS_AS(parse_itc2007(bad), ParseError);

    std::string wrong = text;
    wrong.replace(wrong.find("Courses: 2"), 10, "Courses: 3");
    std::istringstream bad2(wrong);
    CHECK_THROWS_AS(parse_itc2007(bad2), ParseError);
}

TEST_CASE("native format round-trips every field")
{
    InstanceDocument doc;
    doc.name = "round trip";
    doc.source_format = SourceFormat::itc2007;
    auto& inst = doc.instance;
    inst.graph = ConflictGraph(5, {{0, 1}, {1, 2}, {3, 4}});
    inst.m = 3;
    inst.event_sizes = {10, 20, 30, 5, 5};
    inst.room_capacities = {30, 20, 10};
    inst.feature_count = 2;
    inst.event_features = {{0, 1}, {2, 0}};
    inst.room_features = {{0, 0}, {0, 1}, {1, 1}};
    inst.precolouring = {{0, 3}, {4}};
    inst.weights = {1, 2, 1, 1, 3};
    inst.stability_groups = {{1, 2}};
    doc.labels = {"a", "b", "c d", "e", "f"};

    std::stringstream ss;
    write_native(ss, doc);
    const auto back = read_native(ss);
    CHECK(back.name == doc.name);
    CHECK(back.source_format == doc.source_format);
    CHECK(back.labels == doc.labels);
    CHECK(back.instance == doc.instance);
}

TEST_CASE("native format rejects malformed input")
{
    std::istringstream no_magic("GRAPH 1 0\nEND\n");
    CHECK_THROWS_AS(read_native(no_magic), ParseError);
    std::istringstream no_end("bcsdp-v1\nname x\nGRAPH 1 0\nROOMS 1\nr 0 1\n");
    CHECK_THROWS_AS(read_native(no_end), ParseError);
    std::istringstream bad_count("bcsdp-v1\nname x\nGRAPH 2 2\ne 0 1\nROOMS 1\nr 0 1\nEND\n");
    CHECK_THROWS_AS(read_native(bad_count), ParseError);
}

}
