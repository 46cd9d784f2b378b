#include "bcsdp/sdp_model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <tuple>

namespace bcsdp {

std::size_t SdpModel::ineq_rows() const
{
    std::size_t total = 0;
    for (const auto& b : ineq) total += b.rows.size();
    return total;
}

const InequalityBlock* SdpModel::find_block(const std::string& name) const
{
    for (const auto& b : ineq) {
        if (b.name == name) return &b;
    }
    return name == bounds.name ? &bounds : nullptr;
}

std::string to_string(Transform t)
{
    switch (t) {
    case Transform::scaled: return "scaled";
    case Transform::rewritten: return "rewritten";
    case Transform::direct: return "direct";
    }
    return "unknown";
}

double apply_row(const SparseRow& row, const Eigen::MatrixXd& x)
{
    double s = 0.0;
    for (const auto& e : row.entries) s += e.coef * x(e.row, e.col);
    return s;
}

void add_adjoint(const SparseRow& row, double weight, Eigen::MatrixXd& out)
{
    if (weight == 0.0) return;
    for (const auto& e : row.entries) out(e.row, e.col) += weight * e.coef;
}

Eigen::MatrixXd objective_matrix(const SdpModel& model)
{
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(model.dim, model.dim);
    for (const auto& e : model.objective) c(e.row, e.col) += e.coef;
    return c;
}

namespace {

using Key = std::pair<int, int>;

std::map<Key, double> as_map(const SparseRow& r)
{
    std::map<Key, double> m;
    for (const auto& e : r.entries) m[{e.row, e.col}] += e.coef;
    return m;
}

}  // namespace

double row_dot(const SparseRow& a, const SparseRow& b)
{
    const auto ma = as_map(a);
    double s = 0.0;
    for (const auto& [k, c] : as_map(b)) {
        if (auto it = ma.find(k); it != ma.end()) s += it->second * c;
    }
    return s;
}

Eigen::MatrixXd gram_matrix(const std::vector<const SparseRow*>& rows)
{
    const int k = static_cast<int>(rows.size());
    // Bucket coefficients by position so the cost is sum over positions of
    // (rows touching it)^2 rather than k^2 row comparisons.
    std::map<Key, std::vector<std::pair<int, double>>> by_pos;
    for (int i = 0; i < k; ++i) {
        for (const auto& [key, c] : as_map(*rows[i])) by_pos[key].emplace_back(i, c);
    }
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(k, k);
    for (const auto& [key, list] : by_pos) {
        for (const auto& [i, ci] : list) {
            for (const auto& [j, cj] : list) g(i, j) += ci * cj;
        }
    }
    return g;
}

StructureTags detect_structure(const SdpModel& model, double tol)
{
    StructureTags tags;
    std::vector<const SparseRow*> a1;
    for (const auto& r : model.eq_graph) a1.push_back(&r);
    std::vector<const SparseRow*> a2;
    for (const auto& r : model.eq_other) a2.push_back(&r);

    {
        const Eigen::MatrixXd g = gram_matrix(a1);
        tags.a1_edge_indicator =
            g.size() == 0 ||
            (g - Eigen::MatrixXd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff() <= tol;
    }
    {
        std::vector<const SparseRow*> both = a1;
        both.insert(both.end(), a2.begin(), a2.end());
        const Eigen::MatrixXd g = gram_matrix(both);
        const int k1 = static_cast<int>(a1.size());
        const int k2 = static_cast<int>(a2.size());
        bool ok = true;
        if (k1 > 0 && k2 > 0) {
            ok = g.block(0, k1, k1, k2).cwiseAbs().maxCoeff() <= tol;
        }
        if (ok && k2 > 0) {
            const Eigen::MatrixXd target = Eigen::MatrixXd::Identity(k2, k2) +
                                           Eigen::MatrixXd::Ones(k2, k2);
            ok = (g.block(k1, k1, k2, k2) - target).cwiseAbs().maxCoeff() <= tol;
        }
        tags.a2_diagonal_chain = ok;
    }
    {
        bool ok = true;
        for (const auto& block : model.ineq) {
            std::vector<const SparseRow*> rows;
            for (const auto& r : block.rows) rows.push_back(&r);
            Eigen::MatrixXd g = gram_matrix(rows);
            g.diagonal().setZero();
            if (g.size() > 0 && g.cwiseAbs().maxCoeff() > tol) ok = false;
        }
        tags.b_row_sum = ok;
    }
    {
        std::map<Key, double> c;
        for (const auto& e : model.objective) c[{e.row, e.col}] += e.coef;
        int nonzero = 0;
        bool diag_unit = false;
        for (const auto& [k, v] : c) {
            if (std::abs(v) > tol) {
                ++nonzero;
                diag_unit = k.first == k.second && std::abs(std::abs(v) - 1.0) <= tol;
            }
        }
        tags.objective_single_entry = nonzero == 1 && diag_unit;
    }
    return tags;
}

void drop_trivial_rows(SdpModel& model, double tol)
{
    auto prune = [tol](std::vector<SparseRow>& rows, const std::string& name) {
        std::erase_if(rows, [&](const SparseRow& r) {
            if (row_dot(r, r) > tol * tol) return false;
            if (r.rhs > tol) throw std::invalid_argument("infeasible constant row in block " + name);
            return true;
        });
    };
    for (auto& b : model.ineq) prune(b.rows, b.name);
    std::erase_if(model.ineq, [](const InequalityBlock& b) { return b.rows.empty(); });
    prune(model.bounds.rows, "bounds");
}

double max_violation(const SdpModel& model, const Eigen::MatrixXd& x)
{
    double worst = 0.0;
    for (const auto* rows : {&model.eq_graph, &model.eq_other}) {
        for (const auto& r : *rows) worst = std::max(worst, std::abs(apply_row(r, x) - r.rhs));
    }
    for (const auto& b : model.ineq) {
        for (const auto& r : b.rows) worst = std::max(worst, r.rhs - apply_row(r, x));
    }
    for (const auto& r : model.bounds.rows) worst = std::max(worst, r.rhs - apply_row(r, x));
    return worst;
}

CanonicalRow canonical(const SparseRow& row)
{
    std::map<Key, double> folded;
    for (const auto& e : row.entries) {
        folded[{std::min(e.row, e.col), std::max(e.row, e.col)}] += e.coef;
    }
    double lead = 0.0;
    for (const auto& [k, c] : folded) {
        if (std::abs(c) > 1e-12) {
            lead = std::abs(c);
            break;
        }
    }
    CanonicalRow out;
    if (lead == 0.0) lead = 1.0;
    for (const auto& [k, c] : folded) {
        if (std::abs(c) > 1e-12) {
            out.entries.emplace_back(k.first, k.second, std::llround(c / lead * 1e9));
        }
    }
    out.rhs = std::llround(row.rhs / lead * 1e9);
    return out;
}

}  // namespace bcsdp
