#include "cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>

using namespace bcsdp;
using namespace bcsdp::cli;

namespace {

void add_input(CLI::App* app, RunSpec& spec)
{
    app->add_option("inputs", spec.inputs, "Instance file(s); a Toronto stem or .crs/.stu pair");
    app->add_option("--format", spec.format, "Input format override")
        ->check(CLI::IsMember({"dimacs", "toronto", "itc2007", "native"}));
    app->add_option("--gen", spec.generator, "Generated instance, e.g. complete:5 or kneser:8,2");
    app->add_option("--component", spec.component, "Use the k-th largest connected component")
        ->check(CLI::PositiveNumber);
}

void add_relax(CLI::App* app, RunSpec& spec)
{
    app->add_option("--relax", spec.relaxation, "Relaxation")
        ->check(CLI::IsMember({"bounded", "unbounded", "precoloured", "weighted", "theta", "theta-strict",
                               "theta-strong", "laminar", "laminar-counting", "laminar-features", "rooms",
                               "rooms-stability"}));
    app->add_option("--transform", spec.transform, "PSD transform for sketch-based relaxations")
        ->check(CLI::IsMember({"scaled", "rewritten"}));
    app->add_option("--m", spec.m, "Class size bound")->check(CLI::PositiveNumber);
    app->add_option("--m-offset", spec.m_offset, "m = C + offset, C the largest optimal class");
    app->add_option("--class-cap", spec.class_cap, "Use this C instead of asking the oracle")
        ->check(CLI::PositiveNumber);
    app->add_option("--eps", spec.solver.eps, "Solver tolerance")->check(CLI::PositiveNumber);
    app->add_option("--max-iter", spec.solver.max_iter, "Solver iteration cap")->check(CLI::PositiveNumber);
    app->add_option("--oracle-seconds", spec.oracle_seconds, "Oracle time limit")->check(CLI::PositiveNumber);
}

void add_output(CLI::App* app, RunSpec& spec)
{
    const std::map<std::string, OutputFormat> fmts{
        {"text", OutputFormat::text}, {"csv", OutputFormat::csv}, {"json", OutputFormat::json}};
    app->add_option("--output-format", spec.output, "text | csv | json")
        ->transform(CLI::CheckedTransformer(fmts, CLI::ignore_case));
    app->add_option("-o,--output", spec.output_path, "Write the report here instead of stdout");
}

template <typename F>
void with_output(const RunSpec& spec, F&& body)
{
    if (spec.output_path.empty()) {
        body(std::cout);
        return;
    }
    std::ofstream f(spec.output_path);
    if (!f) throw std::runtime_error("cannot write " + spec.output_path);
    body(f);
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Bounded-colouring SDP bounds for timetabling"};
    app.require_subcommand(1);
    RunSpec spec;
    spec.data_dir = std::getenv("BCSDP_DATA") ? std::getenv("BCSDP_DATA") : "data";

    auto* bound = app.add_subcommand("bound", "Solve a relaxation and print the bound");
    add_input(bound, spec);
    add_relax(bound, spec);
    add_output(bound, spec);

    auto* colour = app.add_subcommand("colour", "Solve, round and report the class count");
    add_input(colour, spec);
    add_relax(colour, spec);
    add_output(colour, spec);
    colour->add_option("--method", spec.method, "Rounding method")
        ->check(CLI::IsMember({"kms", "iterative", "greedy"}));
    colour->add_option("--attempts", spec.rounding.attempts, "Rounding attempts")->check(CLI::PositiveNumber);
    colour->add_option("--seed", spec.rounding.seed, "Rounding seed");
    colour->add_option("--partition", spec.partition_path, "Write the partition to this file");

    auto* gen = app.add_subcommand("gen", "Write a generated instance in native format");
    gen->add_option("spec", spec.generator, "Generator, e.g. kneser:8,2")->required();
    gen->add_option("--m", spec.m, "Room count to store")->check(CLI::PositiveNumber);
    gen->add_option("-o,--output", spec.output_path, "Output file");

    auto* convert = app.add_subcommand("convert", "Convert an instance to native format");
    add_input(convert, spec);
    convert->add_option("-o,--output", spec.output_path, "Output file");

    auto* bench = app.add_subcommand("bench", "Regenerate a benchmark table");
    bench->add_option("suite", spec.suite, "toronto-sta83 | kneser-fi | itc2007 | random-sweep")->required();
    bench->add_option("--data", spec.data_dir, "Dataset directory");
    bench->add_option("--n", spec.sweep_n, "random-sweep order")->check(CLI::PositiveNumber);
    bench->add_option("--p", spec.sweep_p, "random-sweep edge probability")->check(CLI::Range(0.0, 1.0));
    bench->add_option("--seeds", spec.sweep_seeds, "random-sweep seed count")->check(CLI::PositiveNumber);
    bench->add_option("--m", spec.sweep_m, "random-sweep class bound")->check(CLI::PositiveNumber);
    bench->add_option("--eps", spec.solver.eps, "Solver tolerance")->check(CLI::PositiveNumber);
    bench->add_option("--oracle-seconds", spec.oracle_seconds, "Oracle time limit per row")
        ->check(CLI::PositiveNumber);
    add_output(bench, spec);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*bound) {
            spec.command = "bound";
            const auto row = run_bound(spec);
            with_output(spec, [&](std::ostream& out) { write_bound(out, {row}, spec.output); });
            return row.status == "diverged" ? 1 : 0;
        }
        if (*colour) {
            spec.command = "colour";
            const auto rep = run_colour(spec);
            if (!spec.partition_path.empty()) {
                std::ofstream f(spec.partition_path);
                if (!f) throw std::runtime_error("cannot write " + spec.partition_path);
                write_partition(f, rep.partition);
            }
            with_output(spec, [&](std::ostream& out) {
                if (spec.output == OutputFormat::text) {
                    write_bound(out, {rep.bound}, spec.output);
                    out << "method      " << spec.method << '\n'
                        << "classes     " << rep.partition.size() << '\n'
                        << "valid       " << (rep.valid ? "yes" : "no") << '\n'
                        << "gap         " << rep.gap << '\n';
                    if (spec.partition_path.empty()) write_partition(out, rep.partition);
                } else {
                    Table t;
                    t.header = {"instance", "m", "relaxation", "certified", "method", "classes", "valid", "gap"};
                    t.rows.push_back({rep.bound.instance, rep.bound.m, rep.bound.relaxation,
                                      std::to_string(rep.bound.certified), spec.method,
                                      std::to_string(rep.partition.size()), rep.valid ? "yes" : "no",
                                      std::to_string(rep.gap)});
                    write_table(out, t, spec.output);
                }
            });
            return rep.valid ? 0 : 1;
        }
        if (*gen) {
            auto doc = generate(spec.generator);
            if (spec.m) {
                doc.instance.m = *spec.m;
                doc.instance.room_capacities.assign(*spec.m, 1);
            }
            with_output(spec, [&](std::ostream& out) { write_native(out, doc); });
            return 0;
        }
        if (*convert) {
            const auto doc = load_input(spec);
            with_output(spec, [&](std::ostream& out) { write_native(out, doc); });
            return 0;
        }
        if (*bench) {
            const auto table = run_bench(spec);
            with_output(spec, [&](std::ostream& out) { write_table(out, table, spec.output); });
            return table.ok ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "bcsdp: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
