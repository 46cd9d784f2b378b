#include "bcsdp/ingest.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace bcsdp {

ParseError::ParseError(const std::string& what, int line)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line)
{
}

std::string to_string(SourceFormat f)
{
    switch (f) {
    case SourceFormat::dimacs: return "dimacs";
    case SourceFormat::toronto: return "toronto";
    case SourceFormat::itc2007: return "itc2007";
    case SourceFormat::native: return "native";
    }
    return "native";
}

SourceFormat source_format_from_string(const std::string& s)
{
    if (s == "dimacs") return SourceFormat::dimacs;
    if (s == "toronto") return SourceFormat::toronto;
    if (s == "itc2007") return SourceFormat::itc2007;
    if (s == "native") return SourceFormat::native;
    throw std::invalid_argument("unknown source format '" + s + "'");
}

void InstanceDocument::validate() const
{
    if (name.empty()) throw std::invalid_argument("document name must be non-empty");
    if (!labels.empty() && static_cast<int>(labels.size()) != instance.order()) {
        throw std::invalid_argument("labels must have one entry per vertex");
    }
    instance.validate();
}

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

int to_int(const std::string& tok, int line, const char* what)
{
    try {
        std::size_t used = 0;
        const int v = std::stoi(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw ParseError(std::string("expected integer ") + what + ", got '" + tok + "'", line);
    }
}

}  // namespace

ConflictGraph parse_dimacs(std::istream& in)
{
    std::string raw;
    int line = 0;
    int n = -1;
    long long declared = 0;
    int header_line = 0;
    long long edge_lines = 0;
    std::vector<Edge> edges;
    while (std::getline(in, raw)) {
        ++line;
        std::istringstream ss(raw);
        std::string tag;
        if (!(ss >> tag) || tag == "c") continue;
        if (tag == "p") {
            std::string kind, sn, sm, extra;
            if (n >= 0) throw ParseError("second problem line", line);
            if (!(ss >> kind >> sn >> sm) || (ss >> extra) || (kind != "edge" && kind != "col")) {
                throw ParseError("malformed header, expected 'p edge n m'", line);
            }
            n = to_int(sn, line, "vertex count");
            declared = to_int(sm, line, "edge count");
            if (n < 0 || declared < 0) throw ParseError("negative count in header", line);
            header_line = line;
        } else if (tag == "e") {
            if (n < 0) throw ParseError("edge before header", line);
            std::string su, sv, extra;
            if (!(ss >> su >> sv) || (ss >> extra)) throw ParseError("malformed edge line", line);
            const int u = to_int(su, line, "vertex id");
            const int v = to_int(sv, line, "vertex id");
            if (u < 1 || u > n || v < 1 || v > n) {
                throw ParseError("vertex id out of range 1.." + std::to_string(n), line);
            }
            if (u == v) throw ParseError("self-loop", line);
            edges.push_back({u - 1, v - 1});
            ++edge_lines;
        } else {
            throw ParseError("unknown line type '" + tag + "'", line);
        }
    }
    if (n < 0) throw ParseError("missing 'p edge' header", 0);
    if (edge_lines != declared) {
        throw ParseError("header declares " + std::to_string(declared) + " edges but " +
                             std::to_string(edge_lines) + " edge lines follow",
                         header_line);
    }
    return ConflictGraph(n, std::move(edges));
}

InstanceDocument parse_toronto(std::istream& crs, std::istream& stu, const std::string& name)
{
    InstanceDocument doc;
    doc.name = name;
    doc.source_format = SourceFormat::toronto;
    std::map<std::string, int> index;
    std::vector<int> sizes;
    std::string raw;
    int line = 0;
    while (std::getline(crs, raw)) {
        ++line;
        std::istringstream ss(raw);
        std::string id, enrol;
        if (!(ss >> id)) continue;
        if (!(ss >> enrol)) throw ParseError("expected 'EXAMID ENROLMENT'", line);
        const int e = to_int(enrol, line, "enrolment");
        if (e < 0) throw ParseError("negative enrolment", line);
        if (!index.emplace(id, static_cast<int>(sizes.size())).second) {
            throw ParseError("duplicate exam id '" + id + "'", line);
        }
        sizes.push_back(std::max(e, 1));
        doc.labels.push_back(id);
    }
    const int n = static_cast<int>(sizes.size());

    std::set<Edge> edges;
    line = 0;
    while (std::getline(stu, raw)) {
        ++line;
        std::istringstream ss(raw);
        std::vector<int> exams;
        std::string id;
        while (ss >> id) {
            auto it = index.find(id);
            if (it == index.end()) {
                // Some distributions zero-pad ids differently in the two files.
                bool found = false;
                try {
                    const int numeric = std::stoi(id);
                    for (const auto& [key, v] : index) {
                        if (std::stoi(key) == numeric) {
                            exams.push_back(v);
                            found = true;
                            break;
                        }
                    }
                } catch (const std::exception&) {
                }
                if (!found) throw ParseError("exam '" + id + "' is not listed in the course file", line);
                continue;
            }
            exams.push_back(it->second);
        }
        std::sort(exams.begin(), exams.end());
        exams.erase(std::unique(exams.begin(), exams.end()), exams.end());
        for (std::size_t i = 0; i < exams.size(); ++i) {
            for (std::size_t j = i + 1; j < exams.size(); ++j) edges.insert({exams[i], exams[j]});
        }
    }

    auto& inst = doc.instance;
    inst.graph = ConflictGraph(n, std::vector<Edge>(edges.begin(), edges.end()));
    inst.event_sizes = sizes;
    inst.m = std::max(n, 1);
    const int cap = sizes.empty() ? 1 : *std::max_element(sizes.begin(), sizes.end());
    inst.room_capacities.assign(inst.m, cap);
    doc.validate();
    return doc;
}

InstanceDocument parse_itc2007(std::istream& in)
{
    InstanceDocument doc;
    doc.source_format = SourceFormat::itc2007;
    std::map<std::string, std::string> header;
    std::vector<std::string> lines;
    std::string raw;
    while (std::getline(in, raw)) lines.push_back(trim(raw));

    auto need = [&](const std::string& key) {
        auto it = header.find(key);
        if (it == header.end()) throw ParseError("missing header field '" + key + "'", 0);
        return it->second;
    };

    std::size_t i = 0;
    for (; i < lines.size(); ++i) {
        const auto& l = lines[i];
        if (l.empty()) continue;
        if (l.back() == ':' && l.find(' ') == std::string::npos) break;  // first section
        const auto colon = l.find(':');
        if (colon == std::string::npos) throw ParseError("expected 'Key: value'", static_cast<int>(i + 1));
        header[trim(l.substr(0, colon))] = trim(l.substr(colon + 1));
    }
    doc.name = need("Name");
    const int n_courses = to_int(need("Courses"), 0, "course count");
    const int n_rooms = to_int(need("Rooms"), 0, "room count");
    const int n_curricula = to_int(need("Curricula"), 0, "curriculum count");
    const int n_constraints = to_int(need("Constraints"), 0, "constraint count");
    doc.itc.days = to_int(need("Days"), 0, "day count");
    doc.itc.periods_per_day = to_int(need("Periods_per_day"), 0, "period count");

    // Collect the body lines of each section.
    std::map<std::string, std::vector<std::pair<int, std::string>>> sections;
    std::string current;
    for (; i < lines.size(); ++i) {
        const auto& l = lines[i];
        if (l.empty()) continue;
        if (l == "END.") break;
        if (l.back() == ':' && l.find(' ') == std::string::npos) {
            current = l.substr(0, l.size() - 1);
            sections[current];
            continue;
        }
        if (current.empty()) throw ParseError("data outside any section", static_cast<int>(i + 1));
        sections[current].push_back({static_cast<int>(i + 1), l});
    }
    auto section = [&](const std::string& key, int expected) -> const std::vector<std::pair<int, std::string>>& {
        auto it = sections.find(key);
        if (it == sections.end()) throw ParseError("missing section " + key, 0);
        if (static_cast<int>(it->second.size()) != expected) {
            throw ParseError("section " + key + " has " + std::to_string(it->second.size()) +
                                 " entries, header says " + std::to_string(expected),
                             0);
        }
        return it->second;
    };

    std::map<std::string, int> course_index;
    std::vector<int> students;
    for (const auto& [ln, l] : section("COURSES", n_courses)) {
        std::istringstream ss(l);
        std::string id, teacher, lec, days, stud;
        if (!(ss >> id >> teacher >> lec >> days >> stud)) throw ParseError("malformed course line", ln);
        if (!course_index.emplace(id, static_cast<int>(students.size())).second) {
            throw ParseError("duplicate course '" + id + "'", ln);
        }
        doc.labels.push_back(id);
        doc.itc.teachers.push_back(teacher);
        doc.itc.lectures.push_back(to_int(lec, ln, "lecture count"));
        doc.itc.min_working_days.push_back(to_int(days, ln, "minimum working days"));
        students.push_back(std::max(1, to_int(stud, ln, "student count")));
    }
    std::vector<int> caps;
    for (const auto& [ln, l] : section("ROOMS", n_rooms)) {
        std::istringstream ss(l);
        std::string id, cap;
        if (!(ss >> id >> cap)) throw ParseError("malformed room line", ln);
        doc.itc.room_names.push_back(id);
        caps.push_back(std::max(1, to_int(cap, ln, "room capacity")));
    }
    auto course_of = [&](const std::string& id, int ln) {
        auto it = course_index.find(id);
        if (it == course_index.end()) throw ParseError("unknown course '" + id + "'", ln);
        return it->second;
    };

    std::set<Edge> edges;
    auto clique = [&](std::vector<int> vs) {
        std::sort(vs.begin(), vs.end());
        vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
        for (std::size_t a = 0; a < vs.size(); ++a) {
            for (std::size_t b = a + 1; b < vs.size(); ++b) edges.insert({vs[a], vs[b]});
        }
    };
    for (const auto& [ln, l] : section("CURRICULA", n_curricula)) {
        std::istringstream ss(l);
        std::string id, count;
        if (!(ss >> id >> count)) throw ParseError("malformed curriculum line", ln);
        const int k = to_int(count, ln, "curriculum size");
        std::vector<int> members;
        std::string c;
        while (ss >> c) members.push_back(course_of(c, ln));
        if (static_cast<int>(members.size()) != k) {
            throw ParseError("curriculum lists " + std::to_string(members.size()) + " courses, expected " +
                                 std::to_string(k),
                             ln);
        }
        doc.itc.curricula.push_back(id);
        clique(std::move(members));
    }
    std::map<std::string, std::vector<int>> by_teacher;
    for (int c = 0; c < n_courses; ++c) by_teacher[doc.itc.teachers[c]].push_back(c);
    for (auto& [t, cs] : by_teacher) clique(cs);

    std::string unavail_key = sections.count("UNAVAILABILITY_CONSTRAINTS") ? "UNAVAILABILITY_CONSTRAINTS"
                                                                           : "UNAVAILABILITY";
    for (const auto& [ln, l] : section(unavail_key, n_constraints)) {
        std::istringstream ss(l);
        std::string c, d, p;
        if (!(ss >> c >> d >> p)) throw ParseError("malformed unavailability line", ln);
        doc.itc.unavailability.push_back(
            {course_of(c, ln), to_int(d, ln, "day"), to_int(p, ln, "period")});
    }

    auto& inst = doc.instance;
    inst.graph = ConflictGraph(n_courses, std::vector<Edge>(edges.begin(), edges.end()));
    inst.m = n_rooms;
    inst.room_capacities = caps;
    inst.event_sizes = students;
    doc.validate();
    return doc;
}

InstanceDocument load_document(const std::string& path)
{
    namespace fs = std::filesystem;
    const fs::path p(path);
    const std::string ext = p.extension().string();
    auto open = [](const fs::path& q) {
        std::ifstream f(q);
        if (!f) throw std::runtime_error("cannot open " + q.string());
        return f;
    };
    if (ext == ".col") {
        auto f = open(p);
        InstanceDocument doc;
        doc.name = p.stem().string();
        doc.source_format = SourceFormat::dimacs;
        doc.instance = TimetablingInstance::bounded(parse_dimacs(f), 1);
        return doc;
    }
    if (ext == ".ctt") {
        auto f = open(p);
        return parse_itc2007(f);
    }
    if (ext == ".crs" || ext == ".stu") {
        fs::path crs = p, stu = p;
        crs.replace_extension(".crs");
        stu.replace_extension(".stu");
        auto fc = open(crs);
        auto fs_ = open(stu);
        return parse_toronto(fc, fs_, p.stem().string());
    }
    auto f = open(p);
    return read_native(f);
}

}  // namespace bcsdp
