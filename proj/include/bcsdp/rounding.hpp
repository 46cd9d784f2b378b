#pragma once

#include "bcsdp/instance.hpp"
#include "bcsdp/partition.hpp"
#include "bcsdp/relax.hpp"
#include "bcsdp/solver.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace bcsdp {

struct RoundingConfig {
    int attempts = 50;
    std::uint64_t seed = 0;
    double delta = 1e-6;
    // Lower bound k used by the KMS threshold; 0 means "derive from x".
    int lower_bound = 0;

    void validate() const;
};

// Saturation-degree greedy over pre-colouring groups (kept whole) that opens
// a new class only when no existing one admits the next group. A nonzero
// seed breaks ties between equally saturated groups at random; seed 0 breaks
// them by degree and then by id. Throws std::invalid_argument when some group
// fits no class on its own.
Partition greedy_colouring(const TimetablingInstance& inst, std::uint64_t seed = 0);

// Vector-rounding in the style of Karger, Motwani and Sudan. `x` is the
// matrix variable of a scaled bounded-colouring model (X = Y - J, order >= n).
Partition kms_round(const Eigen::MatrixXd& x, const TimetablingInstance& inst,
                    const RoundingConfig& cfg);

struct RoundingDiagnostics {
    std::vector<double> violations;  // one per relaxed constraint, >= 0
    double violation_bound = 0.0;    // max over sampled subsets of the singular-value sum
    int rounds = 0;
    bool ambiguous_clusters = false;
    bool repaired = false;
    bool aborted = false;
};

struct IterativeResult {
    Partition partition;
    RoundingDiagnostics diagnostics;
};

// Inner SDP solver handle; defaults to `solve`.
using SubSolver = std::function<SolveResult(const SdpModel&, const BoundSemantics&,
                                            const SolverConfig&)>;

// Eigenvalue-freezing iterative rounding on the box form 0 <= P <= I of the
// normalised same-class matrix P = D^{-1/2} Y D^{-1/2}.
IterativeResult iterative_round(const Eigen::MatrixXd& x, const TimetablingInstance& inst,
                                const RoundingConfig& cfg, SubSolver subsolver = {});

}  // namespace bcsdp
