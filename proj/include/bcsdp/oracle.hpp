#pragma once

#include "bcsdp/instance.hpp"
#include "bcsdp/partition.hpp"
#include "bcsdp/solver.hpp"

#include <optional>

namespace bcsdp {

struct OracleResult {
    std::optional<int> chi_m;
    std::optional<Partition> witness;  // best partition found
    long long nodes_explored = 0;
    bool timed_out = false;
    int lower_bound = 0;
    int upper_bound = 0;
};

// Exact bounded chromatic number by branch and bound. Pre-colouring groups
// are searched as single items; classes must pass the ClassLoad rules.
// Practical up to a few dozen vertices.
OracleResult exact_bounded_chromatic(const TimetablingInstance& inst, double time_limit_seconds = 60.0);

// Full enumeration of set partitions (restricted growth strings). Only for
// n <= 10; throws beyond that.
int enumerate_bounded_chromatic(const TimetablingInstance& inst);

// Lower bound from cliques and the counting rules of RoomProfile.
int combinatorial_lower_bound(const TimetablingInstance& inst);

struct SandwichReport {
    int omega = 0;
    int counting = 0;
    double theta = 0.0;
    double sdp = 0.0;
    int sdp_certified = 0;
    std::optional<int> chi_m;
    int greedy = 0;
    bool pass = false;
};

// Computes clique number, counting bound, Lovasz-side theta, the bounded SDP
// value, the oracle value and the greedy class count, and checks
//   omega <= theta <= sdp <= chi_m <= greedy,  counting <= certified <= chi_m.
// Real-valued links allow the solver safeguard 10 eps max(1, |value|).
// Throws std::runtime_error if the oracle times out.
SandwichReport sandwich_check(const ConflictGraph& g, int m, const SolverConfig& cfg = {},
                              double oracle_time_limit = 60.0);

}  // namespace bcsdp
