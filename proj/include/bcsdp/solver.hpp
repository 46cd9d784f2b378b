#pragma once

#include "bcsdp/partition.hpp"
#include "bcsdp/sdp_model.hpp"

#include <Eigen/Dense>

#include <iosfwd>
#include <optional>
#include <vector>

namespace bcsdp {

struct SolverConfig {
    double eps = 1e-5;
    int max_iter = 20000;
    double mu0 = 1.0;
    double mu_ratio = 10.0;   // adapt when one residual exceeds the other by this
    double mu_factor = 2.0;   // ... multiplying or dividing mu by this
    double mu_min = 1e-4;
    double mu_max = 1e4;
    int check_every = 10;
    std::optional<Partition> warm_start;
    std::ostream* trace = nullptr;  // one line per `trace_every` iterations
    int trace_every = 100;

    void validate() const;
};

// ADMM iterates. v stacks the rows of every inequality block in model order,
// then the elementwise bounds. The dual slack S keeps the skew part of the
// dual residual so that X stays symmetric while B may act non-symmetrically.
struct SolverState {
    Eigen::MatrixXd X;
    Eigen::MatrixXd S;
    Eigen::VectorXd y1;
    Eigen::VectorXd y2;
    Eigen::VectorXd v;
    double mu = 1.0;
    int iteration = 0;

    // Cached adjoints A*(y) and B*(v).
    Eigen::MatrixXd Aty;
    Eigen::MatrixXd Btv;
};

struct Residuals {
    double primal = 0.0;
    double dual = 0.0;
    double gap = 0.0;
};

enum class SolveStatus { converged, max_iter, diverged };

std::string to_string(SolveStatus s);

struct SolveResult {
    double value = 0.0;  // colouring-side value through BoundSemantics
    double primal_objective = 0.0;
    double dual_objective = 0.0;
    Eigen::MatrixXd X_final;
    Residuals residuals;
    int iterations = 0;
    SolveStatus status = SolveStatus::max_iter;
    double seconds = 0.0;
};

// Operators precomputed from a model: the equality Gram inverse (closed form
// when the structure identities verify, Cholesky otherwise) and inequality
// row groups whose Gram is diagonal.
class SolverWorkspace {
public:
    explicit SolverWorkspace(const SdpModel& model);

    const SdpModel& model() const { return *model_; }
    int dim() const { return model_->dim; }
    bool structured_equalities() const { return structured_; }
    const StructureTags& verified() const { return verified_; }

    int eq_graph_count() const { return static_cast<int>(model_->eq_graph.size()); }
    int eq_other_count() const { return static_cast<int>(model_->eq_other.size()); }
    int ineq_count() const { return static_cast<int>(ineq_rows_.size()); }

    const SparseRow& ineq_row(int i) const { return *ineq_rows_[i]; }
    double ineq_norm2(int i) const { return ineq_norm2_[i]; }
    const std::vector<std::vector<int>>& ineq_groups() const { return groups_; }

    const Eigen::MatrixXd& C() const { return c_; }  // minimisation form
    double objective_sign() const { return sign_; }

    Eigen::VectorXd apply_eq(const Eigen::MatrixXd& x) const;  // (A1 x; A2 x)
    Eigen::VectorXd eq_rhs() const;
    Eigen::VectorXd ineq_rhs() const;
    Eigen::MatrixXd eq_adjoint(const Eigen::VectorXd& y1, const Eigen::VectorXd& y2) const;
    // Solves (A A^T) y = r for the stacked equalities.
    Eigen::VectorXd solve_eq_gram(const Eigen::VectorXd& r) const;

private:
    const SdpModel* model_;
    Eigen::MatrixXd c_;
    double sign_ = 1.0;
    bool structured_ = false;
    StructureTags verified_;
    Eigen::LDLT<Eigen::MatrixXd> gram_ldlt_;
    std::vector<const SparseRow*> ineq_rows_;
    std::vector<double> ineq_norm2_;
    std::vector<std::vector<int>> groups_;
};

SolverState initial_state(const SolverWorkspace& ws, const SolverConfig& cfg, int graph_order,
                          Transform transform);

// The four ADMM sub-steps, in the order y -> v -> S -> X.
void update_y(SolverState& st, const SolverWorkspace& ws);
void update_v(SolverState& st, const SolverWorkspace& ws);
void update_s(SolverState& st, const SolverWorkspace& ws);
void update_x(SolverState& st, const SolverWorkspace& ws);

Residuals compute_residuals(const SolverState& st, const SolverWorkspace& ws);

SolveResult solve(const SdpModel& model, const BoundSemantics& sem, const SolverConfig& cfg = {});

// Dense references for the structured kernels: y from a Householder solve of
// the explicit normal equations, v from projected Gauss-Seidel on the explicit
// QP of each row group.
Eigen::VectorXd reference_update_y(const SolverState& st, const SolverWorkspace& ws);
Eigen::VectorXd reference_update_v(const SolverState& st, const SolverWorkspace& ws);

struct BoundReport {
    double bound = 0.0;
    int certified = 0;
};

// certified = ceil(bound - 10 eps max(1, |bound|)). Throws on diverged input.
BoundReport extract_bound(const SolveResult& result, double eps = 1e-5);

}  // namespace bcsdp
