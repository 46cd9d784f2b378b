#pragma once

#include "bcsdp/ingest.hpp"
#include "bcsdp/partition.hpp"
#include "bcsdp/relax.hpp"
#include "bcsdp/rounding.hpp"
#include "bcsdp/solver.hpp"

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace bcsdp::cli {

enum class OutputFormat { text, csv, json };

struct RunSpec {
    std::string command;  // bound | colour | gen | convert | bench
    std::vector<std::string> inputs;
    std::string format;     // empty: by extension
    std::string generator;  // e.g. "kneser:8,2"
    int component = 0;      // 1-based, 0 keeps the whole graph
    std::string relaxation = "bounded";
    std::string transform = "scaled";
    std::optional<int> m;
    std::optional<int> m_offset;
    std::optional<int> class_cap;
    SolverConfig solver;
    RoundingConfig rounding;
    std::string method = "kms";  // kms | iterative | greedy
    OutputFormat output = OutputFormat::text;
    std::string output_path;
    std::string partition_path;
    std::string suite;
    std::string data_dir;
    double oracle_seconds = 600.0;
    // random-sweep parameters
    int sweep_n = 20;
    double sweep_p = 0.5;
    int sweep_seeds = 10;
    int sweep_m = 3;
};

// Builds an instance from "--gen" syntax: complete:N, empty:N, cycle:N,
// path:N, petersen, kneser:N,K, gnp:N,P,SEED, fi:M,GAMMA, hamming:BITS,D.
InstanceDocument generate(const std::string& spec);

// Resolves inputs, format override and component selection.
InstanceDocument load_input(const RunSpec& spec);

// Sub-instance induced by `vertices` (renumbered in order); side data that
// refers to dropped vertices is dropped with them.
TimetablingInstance restrict_instance(const TimetablingInstance& inst, const std::vector<Vertex>& vertices);

// Largest class of an optimal unbounded colouring, from the oracle witness.
int largest_optimal_class(const ConflictGraph& g, double time_limit);

struct BoundRow {
    std::string instance;
    std::string m;  // "-" when unbounded
    std::string relaxation;
    double bound = 0.0;
    int certified = 0;
    int iterations = 0;
    double seconds = 0.0;
    std::string status;
    Residuals residuals;
};

struct ColourReport {
    BoundRow bound;
    Partition partition;
    bool valid = false;
    int gap = 0;
};

// Effective m for a bounded-family relaxation (explicit, offset or none).
std::optional<int> resolve_m(const RunSpec& spec, const InstanceDocument& doc);

// The instance whose colourings the relaxation bounds.
TimetablingInstance target_instance(const RunSpec& spec, const InstanceDocument& doc, std::optional<int> m);

BuiltModel build_relaxation(const RunSpec& spec, const InstanceDocument& doc, std::optional<int> m);

BoundRow run_bound(const RunSpec& spec);
ColourReport run_colour(const RunSpec& spec);

// Each suite returns CSV-shaped rows (header first). Rows with missing data
// carry an error status; `ok` turns false when any row failed.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    bool ok = true;
};
Table run_bench(const RunSpec& spec);

void write_bound(std::ostream& out, const std::vector<BoundRow>& rows, OutputFormat fmt);
void write_table(std::ostream& out, const Table& table, OutputFormat fmt);

int worker_count();

}  // namespace bcsdp::cli
