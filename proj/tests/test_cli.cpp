#include "../tools/cli.hpp"

#include "bcsdp/generators.hpp"

#include <doctest.h>

#include <json.hpp>
#include <sstream>

using namespace bcsdp;
using namespace bcsdp::cli;

TEST_SUITE("cli") {

TEST_CASE("generators")
{
    CHECK(generate("complete:5").instance.graph.edge_count() == 10);
    CHECK(generate("petersen").instance.graph.edge_count() == 15);
    CHECK(generate("kneser:6,2").instance.order() == 15);
    CHECK(generate("gnp:20,0.5,1").instance.graph.edge_count() == 102);
    CHECK(generate("fi:6,0.5").instance.order() == 64);
    CHECK(generate("hamming:6,4").instance.graph.edge_count() == 64 * 15 / 2);
    CHECK_THROWS_AS(generate("nonsense:3"), std::invalid_argument);
    CHECK_THROWS_AS(generate("kneser:6"), std::invalid_argument);
}

TEST_CASE("restrict_instance renumbers")
{
    auto inst = TimetablingInstance::bounded(gen_path(5), 2);
    const auto sub = restrict_instance(inst, {1, 2, 4});
    CHECK(sub.order() == 3);
    CHECK(sub.graph.edge_count() == 1);
    CHECK(sub.graph.adjacent(0, 1));
}

TEST_CASE("resolve_m rules")
{
    RunSpec spec;
    spec.generator = "complete:4";
    const auto doc = load_input(spec);
    CHECK_THROWS(resolve_m(spec, doc));
    spec.m = 2;
    CHECK(resolve_m(spec, doc) == 2);
    spec.m_offset = -1;
    CHECK_THROWS(resolve_m(spec, doc));
    spec.m.reset();
    spec.class_cap = 3;
    CHECK(resolve_m(spec, doc) == 2);
    spec.relaxation = "unbounded";
    CHECK_THROWS(resolve_m(spec, doc));
}

TEST_CASE("bound on K5")
{
    RunSpec spec;
    spec.generator = "complete:5";
    spec.m = 1;
    const auto row = run_bound(spec);
    CHECK(row.certified == 5);
    CHECK(row.status == "converged");
    CHECK(row.bound == doctest::Approx(5.0).epsilon(1e-3));
}

TEST_CASE("colour")
{
    RunSpec spec;
    spec.generator = "petersen";
    spec.m = 3;
    auto rep = run_colour(spec);
    CHECK(rep.valid);
    CHECK(rep.partition.size() == 4);
    CHECK(rep.gap == 0);

    spec.generator = "empty:10";
    spec.m = 2;
    spec.method = "iterative";
    rep = run_colour(spec);
    CHECK(rep.valid);
    CHECK(rep.partition.size() == 5);

    spec.method = "greedy";
    CHECK(run_colour(spec).partition.size() == 5);
}

TEST_CASE("table writers")
{
    Table t;
    t.header = {"instance", "value"};
    t.rows = {{"kneser:8,2", "9.33"}, {"say \"hi\"", "1"}};
    std::ostringstream csv;
    write_table(csv, t, OutputFormat::csv);
    CHECK(csv.str() == "instance,value\n\"kneser:8,2\",9.33\n\"say \"\"hi\"\"\",1\n");

    std::ostringstream js;
    write_table(js, t, OutputFormat::json);
    const auto parsed = nlohmann::json::parse(js.str());
    REQUIRE(parsed.is_array());
    CHECK(parsed.size() == 2);
    CHECK(parsed[0]["instance"] == "kneser:8,2");
}

}
