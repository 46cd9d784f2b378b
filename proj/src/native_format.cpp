#include "bcsdp/ingest.hpp"

#include <sstream>

// Layout (one record per line, '#' starts a comment line):
//
//   bcsdp-v1
//   name <rest of line>
//   source <dimacs|toronto|itc2007|native>
//   GRAPH <n> <edges>         followed by "e u v" (0-based, u < v)
//   EVENTS                    "s v size"
//   ROOMS <m>                 "r id capacity"
//   FEATURES <f>              "ef v f" and "rf r f"
//   PRECOLOUR <k>             "c v1 v2 ..."
//   WEIGHTS                   "w v weight" (section omitted for unit weights)
//   STABILITY <k>             "g v1 v2 ..."
//   LABELS                    "l v <rest of line>"
//   END

namespace bcsdp {

void write_native(std::ostream& out, const InstanceDocument& doc)
{
    const auto& inst = doc.instance;
    const int n = inst.order();
    out << "bcsdp-v1\n";
    out << "name " << doc.name << '\n';
    out << "source " << to_string(doc.source_format) << '\n';
    out << "GRAPH " << n << ' ' << inst.graph.edge_count() << '\n';
    for (const auto& e : inst.graph.edges()) out << "e " << e.u << ' ' << e.v << '\n';
    out << "EVENTS\n";
    for (int v = 0; v < static_cast<int>(inst.event_sizes.size()); ++v) {
        out << "s " << v << ' ' << inst.event_sizes[v] << '\n';
    }
    out << "ROOMS " << inst.m << '\n';
    for (int r = 0; r < static_cast<int>(inst.room_capacities.size()); ++r) {
        out << "r " << r << ' ' << inst.room_capacities[r] << '\n';
    }
    out << "FEATURES " << inst.feature_count << '\n';
    for (auto [v, f] : inst.event_features) out << "ef " << v << ' ' << f << '\n';
    for (auto [r, f] : inst.room_features) out << "rf " << r << ' ' << f << '\n';
    out << "PRECOLOUR " << inst.precolouring.size() << '\n';
    for (const auto& cls : inst.precolouring) {
        out << 'c';
        for (Vertex v : cls) out << ' ' << v;
        out << '\n';
    }
    if (!inst.weights.empty()) {
        out << "WEIGHTS\n";
        for (int v = 0; v < n; ++v) out << "w " << v << ' ' << inst.weights[v] << '\n';
    }
    out << "STABILITY " << inst.stability_groups.size() << '\n';
    for (const auto& grp : inst.stability_groups) {
        out << 'g';
        for (Vertex v : grp) out << ' ' << v;
        out << '\n';
    }
    if (!doc.labels.empty()) {
        out << "LABELS\n";
        for (int v = 0; v < static_cast<int>(doc.labels.size()); ++v) {
            out << "l " << v << ' ' << doc.labels[v] << '\n';
        }
    }
    out << "END\n";
}

namespace {

std::string rest_of(std::istringstream& ss)
{
    std::string rest;
    std::getline(ss, rest);
    const auto b = rest.find_first_not_of(' ');
    return b == std::string::npos ? std::string{} : rest.substr(b);
}

template <typename T>
T read_field(std::istringstream& ss, int line, const char* what)
{
    T v{};
    if (!(ss >> v)) throw ParseError(std::string("expected ") + what, line);
    return v;
}

}  // namespace

InstanceDocument read_native(std::istream& in)
{
    InstanceDocument doc;
    auto& inst = doc.instance;
    std::string raw;
    int line = 0;
    bool seen_magic = false;
    bool ended = false;
    int n = -1;
    std::size_t declared_edges = 0;
    std::vector<Edge> edges;
    std::size_t declared_pre = 0, declared_stab = 0;

    while (!ended && std::getline(in, raw)) {
        ++line;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        if (raw.empty() || raw[0] == '#') continue;
        if (!seen_magic) {
            if (raw != "bcsdp-v1") throw ParseError("expected 'bcsdp-v1' magic line", line);
            seen_magic = true;
            continue;
        }
        std::istringstream ss(raw);
        std::string tag;
        ss >> tag;
        if (tag == "name") {
            doc.name = rest_of(ss);
        } else if (tag == "source") {
            try {
                doc.source_format = source_format_from_string(read_field<std::string>(ss, line, "format"));
            } catch (const std::invalid_argument& e) {
                throw ParseError(e.what(), line);
            }
        } else if (tag == "GRAPH") {
            n = read_field<int>(ss, line, "vertex count");
            declared_edges = read_field<std::size_t>(ss, line, "edge count");
            if (n < 0) throw ParseError("negative vertex count", line);
        } else if (tag == "e") {
            const int u = read_field<int>(ss, line, "vertex");
            const int v = read_field<int>(ss, line, "vertex");
            if (n < 0 || u < 0 || v < 0 || u >= n || v >= n || u == v) {
                throw ParseError("bad edge", line);
            }
            edges.push_back({u, v});
        } else if (tag == "EVENTS" || tag == "WEIGHTS" || tag == "LABELS") {
            if (n < 0) throw ParseError(tag + " before GRAPH", line);
            if (tag == "EVENTS") inst.event_sizes.assign(n, 1);
            if (tag == "WEIGHTS") inst.weights.assign(n, 1);
            if (tag == "LABELS") doc.labels.assign(n, {});
        } else if (tag == "s" || tag == "w" || tag == "l") {
            const int v = read_field<int>(ss, line, "vertex");
            auto check = [&](std::size_t size) {
                if (v < 0 || static_cast<std::size_t>(v) >= size) throw ParseError("vertex out of range", line);
            };
            if (tag == "s") {
                check(inst.event_sizes.size());
                inst.event_sizes[v] = read_field<int>(ss, line, "size");
            } else if (tag == "w") {
                check(inst.weights.size());
                inst.weights[v] = read_field<int>(ss, line, "weight");
            } else {
                check(doc.labels.size());
                doc.labels[v] = rest_of(ss);
            }
        } else if (tag == "ROOMS") {
            inst.m = read_field<int>(ss, line, "room count");
            if (inst.m < 0) throw ParseError("negative room count", line);
            inst.room_capacities.assign(inst.m, 1);
        } else if (tag == "r") {
            const int r = read_field<int>(ss, line, "room");
            if (r < 0 || r >= static_cast<int>(inst.room_capacities.size())) {
                throw ParseError("room out of range", line);
            }
            inst.room_capacities[r] = read_field<int>(ss, line, "capacity");
        } else if (tag == "FEATURES") {
            inst.feature_count = read_field<int>(ss, line, "feature count");
        } else if (tag == "ef") {
            const int v = read_field<int>(ss, line, "vertex");
            inst.event_features.push_back({v, read_field<int>(ss, line, "feature")});
        } else if (tag == "rf") {
            const int r = read_field<int>(ss, line, "room");
            inst.room_features.push_back({r, read_field<int>(ss, line, "feature")});
        } else if (tag == "PRECOLOUR" || tag == "STABILITY") {
            (tag == "PRECOLOUR" ? declared_pre : declared_stab) =
                read_field<std::size_t>(ss, line, "group count");
        } else if (tag == "c" || tag == "g") {
            std::vector<Vertex> grp;
            int v;
            while (ss >> v) grp.push_back(v);
            if (!ss.eof()) throw ParseError("expected vertex ids", line);
            (tag == "c" ? inst.precolouring : inst.stability_groups).push_back(std::move(grp));
        } else if (tag == "END") {
            ended = true;
        } else {
            throw ParseError("unknown record '" + tag + "'", line);
        }
    }
    if (!seen_magic) throw ParseError("empty input", 0);
    if (!ended) throw ParseError("missing END", line);
    if (n < 0) throw ParseError("missing GRAPH section", 0);
    if (edges.size() != declared_edges) throw ParseError("edge count does not match GRAPH header", 0);
    if (inst.precolouring.size() != declared_pre) throw ParseError("PRECOLOUR count mismatch", 0);
    if (inst.stability_groups.size() != declared_stab) throw ParseError("STABILITY count mismatch", 0);
    inst.graph = ConflictGraph(n, std::move(edges));
    if (inst.event_sizes.empty()) inst.event_sizes.assign(n, 1);
    doc.validate();
    return doc;
}

}  // namespace bcsdp
