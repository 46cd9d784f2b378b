#pragma once

#include <Eigen/Dense>

#include <string>
#include <tuple>
#include <vector>

namespace bcsdp {

// One coefficient of a linear functional on an n x n matrix: coef * X(row, col).
// A symmetric constraint matrix A with A_uv = A_vu = a/2 is stored as two
// entries; non-symmetric rows are allowed and act on X through <A, X>.
struct Entry {
    int row;
    int col;
    double coef;
};

struct SparseRow {
    std::vector<Entry> entries;
    double rhs = 0.0;
};

// Rows read <B_i, X> >= d_i. Rows inside a block are expected to have
// pairwise orthogonal coefficient vectors; the solver checks this and
// falls back to one row at a time when it does not hold.
struct InequalityBlock {
    std::string name;
    std::vector<SparseRow> rows;
};

enum class Sense { minimize, maximize };

struct StructureTags {
    bool a1_edge_indicator = false;       // A1 A1^T = I
    bool a2_diagonal_chain = false;       // A2 A2^T = I + J, A1 A2^T = 0
    bool b_row_sum = false;               // every block of B has diagonal Gram
    bool objective_single_entry = false;  // C = E_ww

    bool operator==(const StructureTags&) const = default;
};

// Standard-form data: optimise <C, X> subject to eq_graph, eq_other,
// the inequality blocks and the elementwise bounds, X symmetric PSD.
struct SdpModel {
    int dim = 0;
    Sense sense = Sense::minimize;
    std::vector<Entry> objective;
    std::vector<SparseRow> eq_graph;
    std::vector<SparseRow> eq_other;
    std::vector<InequalityBlock> ineq;
    // Elementwise bounds X_uv >= d (the nonnegativity family); kept apart from
    // `ineq` so the structured B counts stay what the formulations print.
    InequalityBlock bounds{"bounds", {}};
    StructureTags structure;

    std::size_t ineq_rows() const;
    const InequalityBlock* find_block(const std::string& name) const;
};

enum class Transform { scaled, rewritten, direct };

std::string to_string(Transform t);

// How the model objective maps to the colouring-side value.
struct BoundSemantics {
    Transform transform = Transform::scaled;
    int anchor_vertex = 0;
    int graph_order = 0;  // vertices of the conflict graph behind the model
    Sense sense = Sense::minimize;
    double offset = 0.0;  // value = objective + offset
    std::string value_map;
};

double apply_row(const SparseRow& row, const Eigen::MatrixXd& x);
void add_adjoint(const SparseRow& row, double weight, Eigen::MatrixXd& out);
Eigen::MatrixXd objective_matrix(const SdpModel& model);

// Inner products of rows as vectors in R^{n x n}.
double row_dot(const SparseRow& a, const SparseRow& b);
Eigen::MatrixXd gram_matrix(const std::vector<const SparseRow*>& rows);

// Recomputes which structure identities actually hold for `model`.
StructureTags detect_structure(const SdpModel& model, double tol = 1e-12);

// Max over all rows of the violation of `x` (equalities in absolute value,
// inequalities and bounds by their shortfall).
double max_violation(const SdpModel& model, const Eigen::MatrixXd& x);

// Removes inequality and bound rows whose coefficients cancel to zero, as
// happens for one-vertex or one-room instances. Throws std::invalid_argument
// if such a row demands 0 >= rhs with rhs > tol.
void drop_trivial_rows(SdpModel& model, double tol = 1e-12);

// A row rewritten as a functional on symmetric matrices: entries folded to the
// upper triangle, merged, zeros dropped, and the whole row scaled so its first
// coefficient is +-1. Two rows with equal canonical forms and proportionally
// equal right-hand sides describe the same constraint on symmetric X.
struct CanonicalRow {
    std::vector<std::tuple<int, int, long long>> entries;  // coef * 1e9, rounded
    long long rhs;
    bool operator<(const CanonicalRow& o) const
    {
        return std::tie(entries, rhs) < std::tie(o.entries, o.rhs);
    }
    bool operator==(const CanonicalRow& o) const = default;
};

CanonicalRow canonical(const SparseRow& row);

}  // namespace bcsdp
