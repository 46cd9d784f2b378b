#include "bcsdp/solver.hpp"

#include "bcsdp/linalg.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <map>
#include <ostream>
#include <stdexcept>

namespace bcsdp {

void SolverConfig::validate() const
{
    if (!(eps > 0.0)) throw std::invalid_argument("solver: eps must be positive");
    if (max_iter < 1) throw std::invalid_argument("solver: max_iter must be at least 1");
    if (!(mu0 > 0.0)) throw std::invalid_argument("solver: mu0 must be positive");
    if (check_every < 1) throw std::invalid_argument("solver: check_every must be at least 1");
}

std::string to_string(SolveStatus s)
{
    switch (s) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::max_iter: return "max_iter";
    case SolveStatus::diverged: return "diverged";
    }
    return "unknown";
}

namespace {

// True when no two rows share a position, or every sharing pair has zero dot.
bool rows_orthogonal(const std::vector<const SparseRow*>& rows, double tol)
{
    std::map<std::pair<int, int>, std::vector<int>> by_pos;
    for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
        for (const auto& e : rows[i]->entries) {
            auto& list = by_pos[{e.row, e.col}];
            if (list.empty() || list.back() != i) list.push_back(i);
        }
    }
    std::map<std::pair<int, int>, bool> checked;
    for (const auto& [pos, list] : by_pos) {
        for (std::size_t a = 0; a < list.size(); ++a) {
            for (std::size_t b = a + 1; b < list.size(); ++b) {
                auto key = std::make_pair(list[a], list[b]);
                if (checked.count(key)) continue;
                checked[key] = true;
                if (std::abs(row_dot(*rows[list[a]], *rows[list[b]])) > tol) return false;
            }
        }
    }
    return true;
}

double norm2(const SparseRow& r) { return row_dot(r, r); }

}  // namespace

SolverWorkspace::SolverWorkspace(const SdpModel& model) : model_(&model)
{
    const int n = model.dim;
    if (n < 1) throw std::invalid_argument("solver: model has no variables");
    sign_ = model.sense == Sense::maximize ? -1.0 : 1.0;
    c_ = sign_ * objective_matrix(model);

    auto check_rows = [n](const std::vector<SparseRow>& rows) {
        for (const auto& r : rows) {
            for (const auto& e : r.entries) {
                if (e.row < 0 || e.row >= n || e.col < 0 || e.col >= n) {
                    throw std::invalid_argument("solver: constraint entry outside the matrix");
                }
            }
        }
    };
    check_rows(model.eq_graph);
    check_rows(model.eq_other);
    for (const auto& b : model.ineq) check_rows(b.rows);
    check_rows(model.bounds.rows);

    verified_ = detect_structure(model, 1e-12);
    structured_ = model.structure.a1_edge_indicator && model.structure.a2_diagonal_chain &&
                  verified_.a1_edge_indicator && verified_.a2_diagonal_chain;
    if (!structured_) {
        std::vector<const SparseRow*> rows;
        for (const auto& r : model.eq_graph) rows.push_back(&r);
        for (const auto& r : model.eq_other) rows.push_back(&r);
        if (!rows.empty()) {
            gram_ldlt_.compute(gram_matrix(rows));
            if (gram_ldlt_.info() != Eigen::Success) {
                throw std::runtime_error("solver: equality Gram matrix is singular");
            }
        }
    }

    auto add_block = [&](const InequalityBlock& block) {
        std::vector<const SparseRow*> rows;
        for (const auto& r : block.rows) rows.push_back(&r);
        const int base = static_cast<int>(ineq_rows_.size());
        for (const auto* r : rows) {
            ineq_rows_.push_back(r);
            const double nn = norm2(*r);
            if (!(nn > 0.0)) throw std::invalid_argument("solver: zero inequality row");
            ineq_norm2_.push_back(nn);
        }
        if (rows.empty()) return;
        if (rows_orthogonal(rows, 1e-12)) {
            std::vector<int> g(rows.size());
            for (std::size_t i = 0; i < rows.size(); ++i) g[i] = base + static_cast<int>(i);
            groups_.push_back(std::move(g));
        } else {
            for (std::size_t i = 0; i < rows.size(); ++i) {
                groups_.push_back({base + static_cast<int>(i)});
            }
        }
    };
    for (const auto& b : model.ineq) add_block(b);
    add_block(model.bounds);
}

Eigen::VectorXd SolverWorkspace::apply_eq(const Eigen::MatrixXd& x) const
{
    const int k1 = eq_graph_count();
    Eigen::VectorXd out(k1 + eq_other_count());
    for (int i = 0; i < k1; ++i) out[i] = apply_row(model_->eq_graph[i], x);
    for (int i = 0; i < eq_other_count(); ++i) out[k1 + i] = apply_row(model_->eq_other[i], x);
    return out;
}

Eigen::VectorXd SolverWorkspace::eq_rhs() const
{
    const int k1 = eq_graph_count();
    Eigen::VectorXd out(k1 + eq_other_count());
    for (int i = 0; i < k1; ++i) out[i] = model_->eq_graph[i].rhs;
    for (int i = 0; i < eq_other_count(); ++i) out[k1 + i] = model_->eq_other[i].rhs;
    return out;
}

Eigen::VectorXd SolverWorkspace::ineq_rhs() const
{
    Eigen::VectorXd out(ineq_count());
    for (int i = 0; i < ineq_count(); ++i) out[i] = ineq_rows_[i]->rhs;
    return out;
}

Eigen::MatrixXd SolverWorkspace::eq_adjoint(const Eigen::VectorXd& y1,
                                            const Eigen::VectorXd& y2) const
{
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(dim(), dim());
    for (int i = 0; i < eq_graph_count(); ++i) add_adjoint(model_->eq_graph[i], y1[i], out);
    for (int i = 0; i < eq_other_count(); ++i) add_adjoint(model_->eq_other[i], y2[i], out);
    return out;
}

Eigen::VectorXd SolverWorkspace::solve_eq_gram(const Eigen::VectorXd& r) const
{
    if (r.size() == 0) return r;
    if (!structured_) return gram_ldlt_.solve(r);
    // A1 A1^T = I, A1 A2^T = 0 and (I + J)^{-1} = I - J / (k + 1).
    const int k2 = eq_other_count();
    Eigen::VectorXd y = r;
    if (k2 > 0) {
        const double s = r.tail(k2).sum() / (k2 + 1.0);
        y.tail(k2).array() -= s;
    }
    return y;
}

SolverState initial_state(const SolverWorkspace& ws, const SolverConfig& cfg, int graph_order,
                          Transform transform)
{
    const int d = ws.dim();
    const int n = graph_order;
    SolverState st;
    st.mu = cfg.mu0;
    st.X = Eigen::MatrixXd::Zero(d, d);

    // Y from the warm-start colouring (k classes: Y = k * same-class
    // indicator), otherwise Y = n I.
    Eigen::MatrixXd y = Eigen::MatrixXd::Zero(n, n);
    double t = n;
    if (cfg.warm_start && cfg.warm_start->size() > 0) {
        const auto& classes = cfg.warm_start->classes;
        t = static_cast<double>(classes.size());
        for (const auto& cls : classes) {
            for (Vertex u : cls) {
                for (Vertex v : cls) {
                    if (u < n && v < n) y(u, v) = t;
                }
            }
        }
        for (int v = 0; v < n; ++v) y(v, v) = t;
    } else {
        y = t * Eigen::MatrixXd::Identity(n, n);
    }
    const Eigen::MatrixXd J = Eigen::MatrixXd::Ones(n, n);
    switch (transform) {
    case Transform::scaled:
        st.X.topLeftCorner(n, n) = y - J;
        for (int i = n; i < d; ++i) st.X(i, i) = 1.0;
        break;
    case Transform::rewritten:
        st.X.topLeftCorner(n, n) = y - J;
        st.X.block(n, n, n, n) = y;
        break;
    case Transform::direct:
        st.X = Eigen::MatrixXd::Identity(d, d) / d;
        break;
    }
    st.S = Eigen::MatrixXd::Zero(d, d);
    st.y1 = Eigen::VectorXd::Zero(ws.eq_graph_count());
    st.y2 = Eigen::VectorXd::Zero(ws.eq_other_count());
    st.v = Eigen::VectorXd::Zero(ws.ineq_count());
    st.Aty = Eigen::MatrixXd::Zero(d, d);
    st.Btv = Eigen::MatrixXd::Zero(d, d);
    return st;
}

void update_y(SolverState& st, const SolverWorkspace& ws)
{
    const Eigen::MatrixXd rest = st.Btv + st.S - ws.C();
    const Eigen::VectorXd r = st.mu * (ws.apply_eq(st.X) - ws.eq_rhs()) + ws.apply_eq(rest);
    const Eigen::VectorXd y = -ws.solve_eq_gram(r);
    const int k1 = ws.eq_graph_count();
    st.y1 = y.head(k1);
    st.y2 = y.tail(ws.eq_other_count());
    st.Aty = ws.eq_adjoint(st.y1, st.y2);
}

void update_v(SolverState& st, const SolverWorkspace& ws)
{
    // R tracks A*y + B*v + S - C while the groups are swept in order.
    Eigen::MatrixXd R = st.Aty + st.Btv + st.S - ws.C();
    std::vector<double> next;
    for (const auto& group : ws.ineq_groups()) {
        next.resize(group.size());
        for (std::size_t k = 0; k < group.size(); ++k) {
            const int i = group[k];
            const SparseRow& row = ws.ineq_row(i);
            const double d2 = ws.ineq_norm2(i);
            const double q = st.mu * (row.rhs - apply_row(row, st.X)) - apply_row(row, R) +
                             d2 * st.v[i];
            next[k] = std::max(0.0, q / d2);
        }
        for (std::size_t k = 0; k < group.size(); ++k) {
            const int i = group[k];
            const double delta = next[k] - st.v[i];
            if (delta != 0.0) {
                add_adjoint(ws.ineq_row(i), delta, st.Btv);
                add_adjoint(ws.ineq_row(i), delta, R);
            }
            st.v[i] = next[k];
        }
    }
}

void update_s(SolverState& st, const SolverWorkspace& ws)
{
    const Eigen::MatrixXd W = ws.C() - st.Aty - st.Btv - st.mu * st.X;
    const Eigen::MatrixXd skew = 0.5 * (W - W.transpose());
    st.S = project_psd(W) + skew;
}

void update_x(SolverState& st, const SolverWorkspace& ws)
{
    st.X += (st.Aty + st.Btv + st.S - ws.C()) / st.mu;
    st.X = 0.5 * (st.X + st.X.transpose()).eval();
}

Residuals compute_residuals(const SolverState& st, const SolverWorkspace& ws)
{
    const Eigen::VectorXd b = ws.eq_rhs();
    const Eigen::VectorXd d = ws.ineq_rhs();
    const Eigen::VectorXd eq_res = ws.apply_eq(st.X) - b;
    double short2 = 0.0;
    for (int i = 0; i < ws.ineq_count(); ++i) {
        const double s = std::max(0.0, d[i] - apply_row(ws.ineq_row(i), st.X));
        short2 += s * s;
    }
    Residuals r;
    const double bnorm = std::sqrt(b.squaredNorm() + d.squaredNorm());
    r.primal = std::sqrt(eq_res.squaredNorm() + short2) / (1.0 + bnorm);
    r.dual = (st.Aty + st.Btv + st.S - ws.C()).norm() / (1.0 + ws.C().norm());
    const double p = (ws.C().cwiseProduct(st.X)).sum();
    Eigen::VectorXd y(st.y1.size() + st.y2.size());
    y << st.y1, st.y2;
    const double q = b.dot(y) + d.dot(st.v);
    r.gap = std::abs(p - q) / (1.0 + std::abs(p) + std::abs(q));
    return r;
}

SolveResult solve(const SdpModel& model, const BoundSemantics& sem, const SolverConfig& cfg)
{
    cfg.validate();
    const auto start = std::chrono::steady_clock::now();
    SolverWorkspace ws(model);
    const int n = sem.graph_order > 0 ? sem.graph_order : model.dim;
    SolverState st = initial_state(ws, cfg, n, sem.transform);

    SolveResult res;
    double best = std::numeric_limits<double>::infinity();
    Residuals r;
    for (int k = 0; k < cfg.max_iter; ++k) {
        st.iteration = k + 1;
        update_y(st, ws);
        update_v(st, ws);
        update_s(st, ws);
        update_x(st, ws);
        const bool last = k + 1 == cfg.max_iter;
        if (k % cfg.check_every != 0 && !last) continue;

        r = compute_residuals(st, ws);
        const double worst = std::max({r.primal, r.dual, r.gap});
        if (!std::isfinite(worst) || !st.X.allFinite()) {
            res.status = SolveStatus::diverged;
            break;
        }
        best = std::min(best, std::max(r.primal, r.dual));
        if (std::max(r.primal, r.dual) > 1e6 * best && std::max(r.primal, r.dual) > 1.0) {
            res.status = SolveStatus::diverged;
            break;
        }
        if (cfg.trace && k % cfg.trace_every == 0) {
            const double value = ws.objective_sign() * (ws.C().cwiseProduct(st.X)).sum() +
                                 sem.offset;
            *cfg.trace << "iter=" << st.iteration << " mu=" << std::setprecision(6) << st.mu
                       << " pinf=" << r.primal << " dinf=" << r.dual << " gap=" << r.gap
                       << " value=" << std::setprecision(10) << value << '\n';
        }
        if (worst < cfg.eps) {
            res.status = SolveStatus::converged;
            break;
        }
        if (r.primal > cfg.mu_ratio * r.dual) {
            st.mu = std::min(st.mu * cfg.mu_factor, cfg.mu_max);
        } else if (r.dual > cfg.mu_ratio * r.primal) {
            st.mu = std::max(st.mu / cfg.mu_factor, cfg.mu_min);
        }
    }

    Eigen::VectorXd y(st.y1.size() + st.y2.size());
    y << st.y1, st.y2;
    const double p = (ws.C().cwiseProduct(st.X)).sum();
    const double q = ws.eq_rhs().dot(y) + ws.ineq_rhs().dot(st.v);
    res.primal_objective = ws.objective_sign() * p;
    res.dual_objective = ws.objective_sign() * q;
    res.value = res.primal_objective + sem.offset;
    res.X_final = st.X;
    res.residuals = r;
    res.iterations = st.iteration;
    res.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return res;
}

Eigen::VectorXd reference_update_y(const SolverState& st, const SolverWorkspace& ws)
{
    const int d = ws.dim();
    const int k1 = ws.eq_graph_count();
    const int k = k1 + ws.eq_other_count();
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(k, d * d);
    const auto& md = ws.model();
    for (int i = 0; i < k; ++i) {
        const SparseRow& row = i < k1 ? md.eq_graph[i] : md.eq_other[i - k1];
        for (const auto& e : row.entries) A(i, e.row * d + e.col) += e.coef;
    }
    auto vec = [d](const Eigen::MatrixXd& m) {
        Eigen::VectorXd out(d * d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) out[i * d + j] = m(i, j);
        return out;
    };
    Eigen::VectorXd b(k);
    for (int i = 0; i < k; ++i) b[i] = i < k1 ? md.eq_graph[i].rhs : md.eq_other[i - k1].rhs;
    const Eigen::VectorXd rhs =
        -(st.mu * (A * vec(st.X) - b) + A * vec(st.Btv + st.S - ws.C()));
    const Eigen::MatrixXd G = A * A.transpose();
    return G.colPivHouseholderQr().solve(rhs);
}

Eigen::VectorXd reference_update_v(const SolverState& st, const SolverWorkspace& ws)
{
    const int d = ws.dim();
    auto vec = [d](const Eigen::MatrixXd& m) {
        Eigen::VectorXd out(d * d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) out[i * d + j] = m(i, j);
        return out;
    };
    const int q = ws.ineq_count();
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(q, d * d);
    for (int i = 0; i < q; ++i) {
        for (const auto& e : ws.ineq_row(i).entries) B(i, e.row * d + e.col) += e.coef;
    }
    Eigen::VectorXd v = st.v;
    const Eigen::VectorXd x = vec(st.X);
    const Eigen::VectorXd base = vec(st.Aty + st.S - ws.C());
    for (const auto& group : ws.ineq_groups()) {
        const int gs = static_cast<int>(group.size());
        Eigen::MatrixXd Bg(gs, d * d);
        for (int a = 0; a < gs; ++a) Bg.row(a) = B.row(group[a]);
        // Contribution of every row outside the group.
        Eigen::VectorXd other = B.transpose() * v;
        for (int a = 0; a < gs; ++a) other -= B.row(group[a]).transpose() * v[group[a]];
        Eigen::VectorXd dg(gs);
        for (int a = 0; a < gs; ++a) dg[a] = ws.ineq_row(group[a]).rhs;
        const Eigen::MatrixXd H = Bg * Bg.transpose();
        const Eigen::VectorXd lin = st.mu * (dg - Bg * x) - Bg * (base + other);
        Eigen::VectorXd vg(gs);
        for (int a = 0; a < gs; ++a) vg[a] = v[group[a]];
        for (int sweep = 0; sweep < 10000; ++sweep) {
            double change = 0.0;
            for (int a = 0; a < gs; ++a) {
                const double off = H.row(a).dot(vg) - H(a, a) * vg[a];
                const double next = std::max(0.0, (lin[a] - off) / H(a, a));
                change = std::max(change, std::abs(next - vg[a]));
                vg[a] = next;
            }
            if (change < 1e-15) break;
        }
        for (int a = 0; a < gs; ++a) v[group[a]] = vg[a];
    }
    return v;
}

BoundReport extract_bound(const SolveResult& result, double eps)
{
    if (result.status == SolveStatus::diverged) {
        throw std::runtime_error("extract_bound: solver diverged");
    }
    BoundReport out;
    out.bound = result.value;
    const double guard = 10.0 * eps * std::max(1.0, std::abs(out.bound));
    out.certified = static_cast<int>(std::ceil(out.bound - guard));
    return out;
}

}  // namespace bcsdp
