#include "cli.hpp"

#include "bcsdp/generators.hpp"
#include "bcsdp/oracle.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <sstream>
#include <thread>

namespace bcsdp::cli {

namespace {

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream ss(s);
    while (std::getline(ss, cur, sep)) out.push_back(cur);
    return out;
}

std::string fixed(double v, int digits)
{
    std::ostringstream ss;
    ss << std::fixed << std::setprecision(digits) << v;
    return ss.str();
}

bool bounded_family(const std::string& relax)
{
    return relax == "bounded" || relax == "unbounded" || relax == "precoloured" || relax == "weighted";
}

Transform parse_transform(const std::string& t)
{
    if (t == "scaled") return Transform::scaled;
    if (t == "rewritten") return Transform::rewritten;
    throw std::invalid_argument("unknown transform '" + t + "' (scaled | rewritten)");
}

}  // namespace

InstanceDocument generate(const std::string& spec)
{
    const auto colon = spec.find(':');
    const std::string kind = spec.substr(0, colon);
    const auto args = colon == std::string::npos ? std::vector<std::string>{} : split(spec.substr(colon + 1), ',');
    auto arg_i = [&](std::size_t i) {
        if (i >= args.size()) throw std::invalid_argument("--gen " + spec + ": missing argument");
        return std::stoi(args[i]);
    };
    auto arg_d = [&](std::size_t i) {
        if (i >= args.size()) throw std::invalid_argument("--gen " + spec + ": missing argument");
        return std::stod(args[i]);
    };
    ConflictGraph g;
    if (kind == "complete") g = gen_complete(arg_i(0));
    else if (kind == "empty") g = gen_empty(arg_i(0));
    else if (kind == "cycle") g = gen_cycle(arg_i(0));
    else if (kind == "path") g = gen_path(arg_i(0));
    else if (kind == "petersen") g = gen_kneser(5, 2);
    else if (kind == "kneser") g = gen_kneser(arg_i(0), arg_i(1));
    else if (kind == "gnp") g = gen_gnp(arg_i(0), arg_d(1), args.size() > 2 ? std::stoull(args[2]) : 1);
    else if (kind == "fi") g = gen_forbidden_intersection(arg_i(0), arg_d(1));
    else if (kind == "hamming") g = gen_hamming_distance(arg_i(0), arg_i(1));
    else throw std::invalid_argument("unknown generator '" + kind + "'");
    InstanceDocument doc;
    doc.name = spec;
    doc.source_format = SourceFormat::native;
    doc.instance = TimetablingInstance::bounded(std::move(g), 1);
    return doc;
}

TimetablingInstance restrict_instance(const TimetablingInstance& inst, const std::vector<Vertex>& vertices)
{
    std::vector<int> pos(inst.order(), -1);
    for (std::size_t i = 0; i < vertices.size(); ++i) pos[vertices[i]] = static_cast<int>(i);
    TimetablingInstance out = inst;
    out.graph = inst.graph.induced(vertices);
    out.event_sizes.clear();
    for (Vertex v : vertices) out.event_sizes.push_back(inst.event_sizes[v]);
    if (!inst.weights.empty()) {
        out.weights.clear();
        for (Vertex v : vertices) out.weights.push_back(inst.weights[v]);
    }
    out.event_features.clear();
    for (auto [v, f] : inst.event_features) {
        if (pos[v] >= 0) out.event_features.push_back({pos[v], f});
    }
    auto remap = [&](const std::vector<std::vector<Vertex>>& groups) {
        std::vector<std::vector<Vertex>> res;
        for (const auto& grp : groups) {
            std::vector<Vertex> g2;
            for (Vertex v : grp) {
                if (pos[v] >= 0) g2.push_back(pos[v]);
            }
            if (!g2.empty()) res.push_back(std::move(g2));
        }
        return res;
    };
    out.precolouring = remap(inst.precolouring);
    out.stability_groups = remap(inst.stability_groups);
    return out;
}

InstanceDocument load_input(const RunSpec& spec)
{
    InstanceDocument doc;
    if (!spec.generator.empty()) {
        doc = generate(spec.generator);
    } else {
        if (spec.inputs.empty()) throw std::invalid_argument("no input given (path or --gen)");
        const std::string& path = spec.inputs.front();
        auto open = [](const std::string& p) {
            std::ifstream f(p);
            if (!f) throw std::runtime_error("cannot open " + p);
            return f;
        };
        if (spec.format.empty()) {
            doc = load_document(path);
        } else if (spec.format == "dimacs") {
            auto f = open(path);
            doc.name = std::filesystem::path(path).stem().string();
            doc.source_format = SourceFormat::dimacs;
            doc.instance = TimetablingInstance::bounded(parse_dimacs(f), 1);
        } else if (spec.format == "toronto") {
            // Either "<stem>" or explicit "<crs> <stu>".
            std::string crs = path, stu;
            if (spec.inputs.size() > 1) {
                stu = spec.inputs[1];
            } else {
                std::filesystem::path p(path);
                if (p.extension() == ".crs" || p.extension() == ".stu") p.replace_extension();
                crs = p.string() + ".crs";
                stu = p.string() + ".stu";
            }
            auto fc = open(crs);
            auto fs = open(stu);
            doc = parse_toronto(fc, fs, std::filesystem::path(crs).stem().string());
        } else if (spec.format == "itc2007") {
            auto f = open(path);
            doc = parse_itc2007(f);
        } else if (spec.format == "native") {
            auto f = open(path);
            doc = read_native(f);
        } else {
            throw std::invalid_argument("unknown format '" + spec.format + "'");
        }
    }
    if (spec.component > 0) {
        const auto comps = connected_components(doc.instance.graph);
        if (spec.component > static_cast<int>(comps.size())) {
            throw std::invalid_argument("--component " + std::to_string(spec.component) + " but the graph has " +
                                        std::to_string(comps.size()) + " components");
        }
        const auto& vs = comps[spec.component - 1];
        doc.instance = restrict_instance(doc.instance, vs);
        if (!doc.labels.empty()) {
            std::vector<std::string> labels;
            for (Vertex v : vs) labels.push_back(doc.labels[v]);
            doc.labels = std::move(labels);
        }
        doc.name += "#" + std::to_string(spec.component);
    }
    return doc;
}

int largest_optimal_class(const ConflictGraph& g, double time_limit)
{
    const int n = g.order();
    if (n == 0) return 0;
    const auto res = exact_bounded_chromatic(TimetablingInstance::bounded(g, n), time_limit);
    if (res.timed_out || !res.witness) throw std::runtime_error("oracle timed out while computing C");
    std::size_t c = 0;
    for (const auto& cls : res.witness->classes) c = std::max(c, cls.size());
    return static_cast<int>(c);
}

std::optional<int> resolve_m(const RunSpec& spec, const InstanceDocument& doc)
{
    if (!bounded_family(spec.relaxation)) {
        if (spec.m || spec.m_offset) {
            throw std::invalid_argument("--m/--m-offset apply only to bounded-family relaxations");
        }
        return doc.instance.m;
    }
    if (spec.relaxation == "unbounded") {
        if (spec.m || spec.m_offset) throw std::invalid_argument("--m makes no sense with --relax unbounded");
        return std::nullopt;
    }
    if (spec.m && spec.m_offset) throw std::invalid_argument("--m and --m-offset are exclusive");
    int m = 0;
    if (spec.m) {
        m = *spec.m;
    } else if (spec.m_offset) {
        const int c = spec.class_cap ? *spec.class_cap : largest_optimal_class(doc.instance.graph, spec.oracle_seconds);
        m = c + *spec.m_offset;
    } else {
        throw std::invalid_argument("bounded relaxation needs --m or --m-offset");
    }
    if (m < 1) throw std::invalid_argument("resolved m = " + std::to_string(m) + " is below 1");
    return m;
}

TimetablingInstance target_instance(const RunSpec& spec, const InstanceDocument& doc, std::optional<int> m)
{
    if (!bounded_family(spec.relaxation)) return doc.instance;
    const int n = doc.instance.order();
    TimetablingInstance inst = TimetablingInstance::bounded(doc.instance.graph, m ? *m : std::max(n, 1));
    if (spec.relaxation == "precoloured") inst.precolouring = doc.instance.precolouring;
    return inst;
}

BuiltModel build_relaxation(const RunSpec& spec, const InstanceDocument& doc, std::optional<int> m)
{
    const auto& inst = doc.instance;
    const auto& g = inst.graph;
    const Transform t = parse_transform(spec.transform);
    const std::string& r = spec.relaxation;
    if (r == "bounded" || r == "unbounded") return build_bounded(g, m, t);
    if (r == "precoloured") return build_precoloured(g, *m, inst.precolouring, t);
    if (r == "weighted") {
        const auto red = reduce_precolouring(g, *m, inst.precolouring);
        return build_weighted(red.graph, *m, red.weights, t);
    }
    if (r == "theta") return build_theta(g, ThetaVariant::lovasz);
    if (r == "theta-strict") return build_theta(g, ThetaVariant::strict);
    if (r == "theta-strong") return build_theta(g, ThetaVariant::strong);
    if (r == "laminar") return build_laminar(inst, {});
    if (r == "laminar-counting") return build_laminar(inst, {.counting = true, .features = false});
    if (r == "laminar-features") return build_laminar(inst, {.counting = true, .features = true});
    if (r == "rooms") return build_room_assignment(inst, false);
    if (r == "rooms-stability") return build_room_assignment(inst, true);
    throw std::invalid_argument("unknown relaxation '" + r + "'");
}

namespace {

BoundRow bound_with(const RunSpec& spec, const InstanceDocument& doc, std::optional<int> m, SolveResult* keep)
{
    const auto built = build_relaxation(spec, doc, m);
    SolveResult res = solve(built.model, built.semantics, spec.solver);
    BoundRow row;
    row.instance = doc.name;
    row.m = m ? std::to_string(*m) : "-";
    row.relaxation = spec.relaxation;
    row.iterations = res.iterations;
    row.seconds = res.seconds;
    row.status = to_string(res.status);
    row.residuals = res.residuals;
    if (res.status != SolveStatus::diverged) {
        const auto rep = extract_bound(res, spec.solver.eps);
        row.bound = rep.bound;
        row.certified = rep.certified;
    }
    if (keep) *keep = std::move(res);
    return row;
}

}  // namespace

BoundRow run_bound(const RunSpec& spec)
{
    const auto doc = load_input(spec);
    const auto m = resolve_m(spec, doc);
    return bound_with(spec, doc, m, nullptr);
}

ColourReport run_colour(const RunSpec& spec)
{
    const auto doc = load_input(spec);
    const auto m = resolve_m(spec, doc);
    if (spec.relaxation == "weighted" || spec.relaxation.rfind("theta", 0) == 0) {
        throw std::invalid_argument("colour needs a relaxation over the original vertices");
    }
    const auto inst = target_instance(spec, doc, m);
    ColourReport rep;
    SolveResult res;
    rep.bound = bound_with(spec, doc, m, &res);
    if (spec.method == "greedy") {
        rep.partition = greedy_colouring(inst, spec.rounding.seed);
    } else if (res.status == SolveStatus::diverged) {
        throw std::runtime_error("solver diverged; nothing to round");
    } else if (spec.method == "kms") {
        rep.partition = kms_round(res.X_final, inst, spec.rounding);
    } else if (spec.method == "iterative") {
        rep.partition = iterative_round(res.X_final, inst, spec.rounding).partition;
    } else {
        throw std::invalid_argument("unknown rounding method '" + spec.method + "'");
    }
    rep.valid = validate_partition(inst, rep.partition).ok;
    rep.gap = static_cast<int>(rep.partition.size()) - rep.bound.certified;
    return rep;
}

int worker_count()
{
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw <= 0) hw = 1;
    if (const char* env = std::getenv("BCSDP_THREADS")) {
        try {
            const int cap = std::stoi(env);
            if (cap >= 1) return std::min(cap, hw);
        } catch (const std::exception&) {
        }
    }
    return hw;
}

namespace {

using RowTask = std::function<std::vector<std::string>()>;

// Runs the tasks in a worker pool; results keep the task order.
std::vector<std::vector<std::string>> run_pool(const std::vector<RowTask>& tasks)
{
    std::vector<std::vector<std::string>> out(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) out[i] = tasks[i]();
    };
    const int threads = std::min<int>(worker_count(), static_cast<int>(tasks.size()));
    std::vector<std::thread> pool;
    for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    return out;
}

std::string oracle_cell(const TimetablingInstance& inst, double seconds)
{
    const auto r = exact_bounded_chromatic(inst, seconds);
    if (r.timed_out) return "timeout[" + std::to_string(r.lower_bound) + "," + std::to_string(r.upper_bound) + "]";
    return std::to_string(*r.chi_m);
}

Table toronto_suite(const RunSpec& spec)
{
    Table t;
    t.header = {"instance", "m", "counting", "bound", "certified", "chi_m", "iterations", "seconds", "status"};
    const std::filesystem::path base = std::filesystem::path(spec.data_dir) / "sta-f-83";
    const std::vector<int> ms{1, 2, 3, 4, 5, 6, 7, 8, 9, 47, 0};
    std::optional<InstanceDocument> doc;
    std::string error;
    try {
        RunSpec s = spec;
        s.generator.clear();
        s.inputs = {base.string() + ".crs", base.string() + ".stu"};
        s.format = "toronto";
        s.component = 2;
        doc = load_input(s);
    } catch (const std::exception& e) {
        error = e.what();
    }
    std::vector<RowTask> tasks;
    for (int m : ms) {
        tasks.push_back([&, m]() -> std::vector<std::string> {
            const std::string ms_ = m ? std::to_string(m) : "-";
            if (!doc) return {"sta-f-83#2", ms_, "", "", "", "", "", "", "missing-data: " + error};
            const int n = doc->instance.order();
            const std::optional<int> mm = m ? std::optional<int>(m) : std::nullopt;
            RunSpec s = spec;
            s.relaxation = m ? "bounded" : "unbounded";
            const auto row = bound_with(s, *doc, mm, nullptr);
            const auto inst = TimetablingInstance::bounded(doc->instance.graph, m ? m : n);
            return {doc->name, ms_, std::to_string(m ? counting_bound(n, m) : 1), fixed(row.bound, 4),
                    std::to_string(row.certified), oracle_cell(inst, spec.oracle_seconds),
                    std::to_string(row.iterations), fixed(row.seconds, 3), row.status};
        });
    }
    t.rows = run_pool(tasks);
    for (const auto& r : t.rows) t.ok = t.ok && (r.back() == "converged");
    return t;
}

struct KneserRow {
    std::string name;
    ConflictGraph graph;
    int c;
};

Table kneser_suite(const RunSpec& spec)
{
    // C is the largest class of the optimal colourings the table refers to;
    // FI rows connect strings at Hamming distance round(gamma * m).
    std::vector<KneserRow> rows{
        {"K(5,2)", gen_kneser(5, 2), 4},
        {"K(6,2)", gen_kneser(6, 2), 5},
        {"K(7,2)", gen_kneser(7, 2), 6},
        {"K(8,2)", gen_kneser(8, 2), 6},
        {"FI(6,0.50)", gen_hamming_distance(6, 3), 32},
        {"FI(6,0.67)", gen_hamming_distance(6, 4), 10},
        {"FI(6,0.83)", gen_hamming_distance(6, 5), 32},
        {"FI(6,1.00)", gen_hamming_distance(6, 6), 32},
    };
    Table t;
    t.header = {"instance", "C"};
    for (int o = 0; o >= -3; --o) {
        t.header.push_back("bound" + std::to_string(o));
        t.header.push_back("chi" + std::to_string(o));
    }
    t.header.push_back("seconds");
    std::vector<RowTask> tasks;
    for (const auto& r : rows) {
        tasks.push_back([&spec, &r]() -> std::vector<std::string> {
            const auto t0 = std::chrono::steady_clock::now();
            std::vector<std::string> cells{r.name, std::to_string(r.c)};
            for (int o = 0; o >= -3; --o) {
                const int m = r.c + o;
                const auto built = build_bounded(r.graph, m);
                const auto res = solve(built.model, built.semantics, spec.solver);
                cells.push_back(res.status == SolveStatus::converged ? fixed(res.value, 2) : to_string(res.status));
                const bool small = r.graph.order() <= 30;
                cells.push_back(small ? oracle_cell(TimetablingInstance::bounded(r.graph, m), spec.oracle_seconds)
                                      : "-");
            }
            cells.push_back(fixed(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(), 3));
            return cells;
        });
    }
    t.rows = run_pool(tasks);
    return t;
}

Table itc_suite(const RunSpec& spec)
{
    Table t;
    t.header = {"instance", "n", "rooms", "unbounded", "bounded", "certified", "classes", "seconds", "status"};
    std::vector<RowTask> tasks;
    for (int k = 1; k <= 21; ++k) {
        std::ostringstream name;
        name << "comp" << std::setw(2) << std::setfill('0') << k;
        const std::string stem = name.str();
        tasks.push_back([&spec, stem]() -> std::vector<std::string> {
            const auto path = std::filesystem::path(spec.data_dir) / (stem + ".ctt");
            try {
                const auto t0 = std::chrono::steady_clock::now();
                std::ifstream f(path);
                if (!f) throw std::runtime_error("cannot open " + path.string());
                const auto doc = parse_itc2007(f);
                const auto& g = doc.instance.graph;
                const int m = doc.instance.m;
                const auto ub = build_bounded(g, std::nullopt);
                const auto ru = solve(ub.model, ub.semantics, spec.solver);
                const auto bb = build_bounded(g, m);
                const auto rb = solve(bb.model, bb.semantics, spec.solver);
                const auto inst = TimetablingInstance::bounded(g, m);
                const auto part = kms_round(rb.X_final, inst, spec.rounding);
                const bool ok = ru.status == SolveStatus::converged && rb.status == SolveStatus::converged;
                return {stem,
                        std::to_string(g.order()),
                        std::to_string(m),
                        fixed(ru.value, 2),
                        fixed(rb.value, 2),
                        std::to_string(extract_bound(rb, spec.solver.eps).certified),
                        std::to_string(part.size()),
                        fixed(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(), 3),
                        ok ? "converged" : "not-converged"};
            } catch (const std::exception& e) {
                return {stem, "", "", "", "", "", "", "", std::string("missing-data: ") + e.what()};
            }
        });
    }
    t.rows = run_pool(tasks);
    for (const auto& r : t.rows) t.ok = t.ok && r.back() == "converged";
    return t;
}

Table sweep_suite(const RunSpec& spec)
{
    Table t;
    t.header = {"instance", "m", "omega", "counting", "theta", "sdp", "certified", "chi_m", "greedy", "consistent"};
    std::vector<RowTask> tasks;
    for (int s = 1; s <= spec.sweep_seeds; ++s) {
        tasks.push_back([&spec, s]() -> std::vector<std::string> {
            const auto g = gen_gnp(spec.sweep_n, spec.sweep_p, static_cast<std::uint64_t>(s));
            std::ostringstream name;
            name << "gnp:" << spec.sweep_n << "," << spec.sweep_p << "," << s;
            const auto rep = sandwich_check(g, spec.sweep_m, spec.solver, spec.oracle_seconds);
            return {name.str(),
                    std::to_string(spec.sweep_m),
                    std::to_string(rep.omega),
                    std::to_string(rep.counting),
                    fixed(rep.theta, 4),
                    fixed(rep.sdp, 4),
                    std::to_string(rep.sdp_certified),
                    rep.chi_m ? std::to_string(*rep.chi_m) : "-",
                    std::to_string(rep.greedy),
                    rep.pass ? "yes" : "no"};
        });
    }
    t.rows = run_pool(tasks);
    for (const auto& r : t.rows) t.ok = t.ok && r.back() == "yes";
    return t;
}

}  // namespace

Table run_bench(const RunSpec& spec)
{
    if (spec.suite == "toronto-sta83") return toronto_suite(spec);
    if (spec.suite == "kneser-fi") return kneser_suite(spec);
    if (spec.suite == "itc2007") return itc_suite(spec);
    if (spec.suite == "random-sweep") return sweep_suite(spec);
    throw std::invalid_argument("unknown suite '" + spec.suite +
                                "' (toronto-sta83 | kneser-fi | itc2007 | random-sweep)");
}

void write_table(std::ostream& out, const Table& table, OutputFormat fmt)
{
    if (fmt == OutputFormat::json) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& r : table.rows) {
            nlohmann::json obj;
            for (std::size_t i = 0; i < table.header.size() && i < r.size(); ++i) obj[table.header[i]] = r[i];
            arr.push_back(obj);
        }
        out << arr.dump(2) << '\n';
        return;
    }
    const bool csv = fmt == OutputFormat::csv;
    auto cell = [&](const std::string& c) {
        if (!csv || c.find_first_of(",\"\n") == std::string::npos) return c;
        std::string q = "\"";
        for (char ch : c) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
        return q + "\"";
    };
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? (csv ? "," : "\t") : "") << cell(cells[i]);
        out << '\n';
    };
    line(table.header);
    for (const auto& r : table.rows) line(r);
}

void write_bound(std::ostream& out, const std::vector<BoundRow>& rows, OutputFormat fmt)
{
    Table t;
    t.header = {"instance", "m", "relaxation", "bound", "certified", "iterations", "seconds", "status"};
    for (const auto& r : rows) {
        t.rows.push_back({r.instance, r.m, r.relaxation, fixed(r.bound, 6), std::to_string(r.certified),
                          std::to_string(r.iterations), fixed(r.seconds, 3), r.status});
    }
    if (fmt != OutputFormat::text) {
        write_table(out, t, fmt);
        return;
    }
    for (const auto& r : rows) {
        out << "instance    " << r.instance << '\n'
            << "m           " << r.m << '\n'
            << "relaxation  " << r.relaxation << '\n'
            << "bound       " << fixed(r.bound, 6) << '\n'
            << "certified   " << r.certified << '\n'
            << "residuals   primal " << std::scientific << std::setprecision(2) << r.residuals.primal << " dual "
            << r.residuals.dual << " gap " << r.residuals.gap << std::defaultfloat << '\n'
            << "iterations  " << r.iterations << '\n'
            << "seconds     " << fixed(r.seconds, 3) << '\n'
            << "status      " << r.status << '\n';
    }
}

}  // namespace bcsdp::cli
