#pragma once

#include "bcsdp/instance.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace bcsdp {

// A colouring: ordered colour classes, optionally with a room per vertex.
struct Partition {
    std::vector<std::vector<Vertex>> classes;
    std::optional<std::vector<Room>> room_of;

    std::size_t size() const { return classes.size(); }

    // Sorts members within classes and classes by smallest member; room
    // assignments are kept per vertex so they survive the reordering.
    void normalize();

    // Class index per vertex, -1 where uncovered.
    std::vector<int> class_of(int n) const;

    bool operator==(const Partition&) const = default;
};

enum class ViolationKind {
    coverage,
    edge_conflict,
    class_size,
    capacity,
    feature,
    split_precolouring,
    room_mismatch,
    duplicate_room,
};

std::string to_string(ViolationKind kind);

struct Violation {
    ViolationKind kind;
    int class_index = -1;
    std::string detail;
};

struct ValidationReport {
    bool ok = true;
    std::vector<Violation> violations;
};

ValidationReport validate_partition(const TimetablingInstance& inst, const Partition& part);

// Room per vertex by bipartite matching inside every class (capacity and
// features must fit). Returns nullopt when some class admits no matching.
std::optional<std::vector<Room>> assign_rooms(const TimetablingInstance& inst,
                                              const Partition& part);

// Partition file: one class per line, space separated vertex ids, each id
// optionally suffixed with `@room`. Blank lines and '#' comments are skipped.
void write_partition(std::ostream& out, const Partition& part);
Partition read_partition(std::istream& in);

}  // namespace bcsdp
