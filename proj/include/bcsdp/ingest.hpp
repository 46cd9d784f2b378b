#pragma once

#include "bcsdp/instance.hpp"

#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace bcsdp {

enum class SourceFormat { dimacs, toronto, itc2007, native };

std::string to_string(SourceFormat f);
SourceFormat source_format_from_string(const std::string& s);

// ITC-2007 data that the relaxations do not use but that is kept so a
// document can be inspected or re-exported.
struct ItcExtras {
    std::vector<std::string> teachers;  // per course
    std::vector<int> lectures;          // per course
    std::vector<int> min_working_days;  // per course
    std::vector<std::string> curricula;
    std::vector<std::string> room_names;
    // (course, day, period) triples.
    struct Unavailable {
        int course;
        int day;
        int period;
        bool operator==(const Unavailable&) const = default;
    };
    std::vector<Unavailable> unavailability;
    int days = 0;
    int periods_per_day = 0;

    bool operator==(const ItcExtras&) const = default;
};

struct InstanceDocument {
    std::string name;
    TimetablingInstance instance;
    SourceFormat source_format = SourceFormat::native;
    std::vector<std::string> labels;  // external id per vertex; may be empty
    ItcExtras itc;                    // filled by parse_itc2007 only

    // Throws std::invalid_argument if the name is empty or the instance is invalid.
    void validate() const;
};

// Raised on malformed input; `line` is 1-based, 0 when not tied to a line.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, int line);
    int line() const { return line_; }

private:
    int line_;
};

// DIMACS .col: "c" comments, one "p edge n m" header, "e u v" lines (1-based).
// Duplicate edges are collapsed; the header count must match the number of
// edge lines.
ConflictGraph parse_dimacs(std::istream& in);

// Toronto benchmark pair. Exams become vertices in .crs order; two exams
// conflict iff some student sits both. Rooms are not part of the format, so
// the document carries m = n rooms each large enough for any exam.
InstanceDocument parse_toronto(std::istream& crs, std::istream& stu, const std::string& name = "toronto");

// ITC-2007 track 3 (.ctt). One vertex per course; courses conflict when they
// share a curriculum or a teacher.
InstanceDocument parse_itc2007(std::istream& in);

// Line-oriented "bcsdp-v1" text format. write/read round-trip every field
// of TimetablingInstance plus name, source format and labels.
void write_native(std::ostream& out, const InstanceDocument& doc);
InstanceDocument read_native(std::istream& in);

// Reads a file by extension: .col (DIMACS), .ctt (ITC), .bcsdp (native),
// or a Toronto stem given as "<path>.crs" with "<path>.stu" next to it.
InstanceDocument load_document(const std::string& path);

}  // namespace bcsdp
