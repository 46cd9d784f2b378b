#include "bcsdp/linalg.hpp"
#include "bcsdp/rounding.hpp"

#include "items.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace bcsdp {

namespace {

// A constraint <A, P> >= b on the n x n same-class matrix, A = sum of
// coef * (e_i e_j^T + e_j e_i^T) / 2 terms, scaled to unit Frobenius norm.
struct BoxConstraint {
    std::vector<Entry> terms;  // symmetric pairs stored once, i <= j
    double rhs;
};

double frob(const std::vector<Entry>& terms)
{
    double s = 0.0;
    for (const auto& t : terms) s += t.row == t.col ? t.coef * t.coef : 0.5 * t.coef * t.coef;
    return std::sqrt(s);
}

BoxConstraint make(std::vector<Entry> terms, double rhs)
{
    const double nrm = frob(terms);
    for (auto& t : terms) t.coef /= nrm;
    return {std::move(terms), rhs / nrm};
}

Eigen::MatrixXd dense(const BoxConstraint& c, int n)
{
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (const auto& t : c.terms) {
        if (t.row == t.col) {
            a(t.row, t.row) += t.coef;
        } else {
            a(t.row, t.col) += 0.5 * t.coef;
            a(t.col, t.row) += 0.5 * t.coef;
        }
    }
    return a;
}

double inner(const BoxConstraint& c, const Eigen::MatrixXd& p)
{
    double s = 0.0;
    for (const auto& t : c.terms) s += t.coef * p(t.row, t.col);
    return s;
}

// <F^T A F, Z> as a dense row over the r x r block.
SparseRow restricted(const BoxConstraint& c, const Eigen::MatrixXd& F, double rhs)
{
    const int r = static_cast<int>(F.cols());
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(r, r);
    for (const auto& t : c.terms) {
        if (t.row == t.col) {
            m += t.coef * F.row(t.row).transpose() * F.row(t.row);
        } else {
            const Eigen::MatrixXd outer = F.row(t.row).transpose() * F.row(t.col);
            m += 0.5 * t.coef * (outer + outer.transpose());
        }
    }
    SparseRow row;
    for (int a = 0; a < r; ++a) {
        for (int b = 0; b < r; ++b) {
            if (m(a, b) != 0.0) row.entries.push_back({a, b, m(a, b)});
        }
    }
    row.rhs = rhs;
    return row;
}

std::vector<BoxConstraint> box_constraints(const TimetablingInstance& inst)
{
    const int n = inst.order();
    std::vector<BoxConstraint> out;
    for (Vertex u = 0; u < n; ++u) {
        for (Vertex v = u + 1; v < n; ++v) {
            const double sign = inst.graph.adjacent(u, v) ? -1.0 : 1.0;
            out.push_back(make({{u, v, sign}}, 0.0));
        }
    }
    for (Vertex v = 0; v < n; ++v) {
        std::vector<Entry> sum{{v, v, 1.0}};
        for (Vertex u = 0; u < n; ++u) {
            if (u != v) sum.push_back({std::min(u, v), std::max(u, v), 1.0});
        }
        out.push_back(make(sum, 1.0));
        for (auto& t : sum) t.coef = -t.coef;
        out.push_back(make(sum, -1.0));
    }
    for (Vertex v = 0; v < n; ++v) out.push_back(make({{v, v, 1.0}}, 1.0 / inst.m));
    return out;
}

// max over singletons and sampled subsets S of the sum of the
// floor(sqrt(2|S|) + 1) largest singular values of the mean of A_i, i in S.
double violation_bound(const std::vector<BoxConstraint>& cons, int n, std::uint64_t seed)
{
    std::vector<Eigen::MatrixXd> mats;
    mats.reserve(cons.size());
    for (const auto& c : cons) mats.push_back(dense(c, n));
    auto score = [&](const std::vector<int>& subset) {
        Eigen::MatrixXd avg = Eigen::MatrixXd::Zero(n, n);
        for (int i : subset) avg += mats[i];
        avg /= static_cast<double>(subset.size());
        const Eigen::VectorXd sv = eigh(avg).eigenvalues.cwiseAbs();
        std::vector<double> s(sv.data(), sv.data() + sv.size());
        std::sort(s.rbegin(), s.rend());
        const int take = std::min<int>(
            static_cast<int>(s.size()),
            static_cast<int>(std::floor(std::sqrt(2.0 * subset.size()) + 1.0)));
        double total = 0.0;
        for (int i = 0; i < take; ++i) total += s[i];
        return total;
    };
    double best = 0.0;
    const int m = static_cast<int>(mats.size());
    for (int i = 0; i < m; ++i) best = std::max(best, score({i}));
    std::mt19937_64 rng(seed);
    for (int sample = 0; sample < 64 && m > 1; ++sample) {
        std::uniform_int_distribution<int> size_dist(2, m);
        const int k = size_dist(rng);
        std::vector<int> idx(m);
        for (int i = 0; i < m; ++i) idx[i] = i;
        std::shuffle(idx.begin(), idx.end(), rng);
        idx.resize(k);
        best = std::max(best, score(idx));
    }
    return best;
}

Eigen::MatrixXd append_cols(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b)
{
    Eigen::MatrixXd out(std::max(a.rows(), b.rows()), a.cols() + b.cols());
    if (a.cols() > 0) out.leftCols(a.cols()) = a;
    if (b.cols() > 0) out.rightCols(b.cols()) = b;
    return out;
}

// Groups vertices whose rows of F1 coincide. Rows within 1e-6 are identical;
// rows within `loose` are merged but flagged as ambiguous.
std::vector<int> cluster_rows(const Eigen::MatrixXd& F1, int n, bool& ambiguous)
{
    constexpr double exact = 1e-6;
    constexpr double loose = 1e-2;
    std::vector<int> label(n, -1);
    std::vector<int> reps;
    for (int v = 0; v < n; ++v) {
        const Eigen::VectorXd row = F1.cols() > 0 ? Eigen::VectorXd(F1.row(v).transpose())
                                                  : Eigen::VectorXd::Zero(1);
        if (row.norm() <= exact) {
            label[v] = static_cast<int>(reps.size());
            reps.push_back(v);
            continue;
        }
        int found = -1;
        for (std::size_t c = 0; c < reps.size(); ++c) {
            const double d = (F1.row(reps[c]).transpose() - row).norm();
            if (d <= exact) {
                found = static_cast<int>(c);
                break;
            }
            if (d <= loose * std::max(1.0, row.norm()) && found == -1) {
                found = static_cast<int>(c);
                ambiguous = true;
            }
        }
        if (found == -1) {
            found = static_cast<int>(reps.size());
            reps.push_back(v);
        }
        label[v] = found;
    }
    return label;
}

// Turns cluster labels into a valid partition: groups stay whole, invalid
// clusters are split first-fit, then classes are merged first-fit.
Partition repair(const TimetablingInstance& inst, const std::vector<int>& label, bool& repaired)
{
    const detail::Items items = detail::make_items(inst);
    const RoomProfile profile(inst);
    int clusters = 0;
    for (int l : label) clusters = std::max(clusters, l + 1);
    std::vector<std::vector<int>> by_cluster(clusters);
    for (int a = 0; a < items.size(); ++a) by_cluster[label[items.members[a].front()]].push_back(a);

    struct Cls {
        std::vector<int> items;
        ClassLoad load;
    };
    std::vector<Cls> classes;
    for (const auto& group : by_cluster) {
        std::vector<Cls> local;
        for (int a : group) {
            bool placed = false;
            for (auto& c : local) {
                bool ok = c.load.can_add(items.members[a]);
                for (int b : c.items) ok = ok && !items.conflict[a][b];
                if (ok) {
                    c.items.push_back(a);
                    c.load.add(items.members[a]);
                    placed = true;
                    break;
                }
            }
            if (!placed) {
                if (!local.empty()) repaired = true;
                Cls c{{a}, ClassLoad(profile)};
                c.load.add(items.members[a]);
                local.push_back(std::move(c));
            }
        }
        for (auto& c : local) classes.push_back(std::move(c));
    }

    std::stable_sort(classes.begin(), classes.end(), [&](const Cls& x, const Cls& y) {
        return x.load.weight() > y.load.weight();
    });
    std::vector<Cls> merged;
    for (auto& c : classes) {
        std::vector<Vertex> members;
        for (int a : c.items) {
            members.insert(members.end(), items.members[a].begin(), items.members[a].end());
        }
        bool placed = false;
        for (auto& target : merged) {
            bool ok = target.load.can_add(members);
            for (int a : c.items) {
                for (int b : target.items) ok = ok && !items.conflict[a][b];
            }
            if (ok) {
                target.items.insert(target.items.end(), c.items.begin(), c.items.end());
                target.load.add(members);
                placed = true;
                break;
            }
        }
        if (!placed) merged.push_back(std::move(c));
    }

    Partition part;
    for (const auto& c : merged) {
        std::vector<Vertex> vs;
        for (int a : c.items) vs.insert(vs.end(), items.members[a].begin(), items.members[a].end());
        part.classes.push_back(std::move(vs));
    }
    part.normalize();
    return part;
}

}  // namespace

IterativeResult iterative_round(const Eigen::MatrixXd& x, const TimetablingInstance& inst,
                                const RoundingConfig& cfg, SubSolver subsolver)
{
    cfg.validate();
    const int n = inst.order();
    IterativeResult out;
    if (n == 0) return out;
    if (x.rows() < n) throw std::invalid_argument("iterative_round: x too small");
    if (!subsolver) subsolver = [](const SdpModel& m, const BoundSemantics& s,
                                   const SolverConfig& c) { return solve(m, s, c); };

    // Normalised same-class matrix: for Y = t * (block indicator) this is the
    // orthogonal projection onto the class indicator vectors.
    Eigen::MatrixXd Y = x.topLeftCorner(n, n) + Eigen::MatrixXd::Ones(n, n);
    Y = 0.5 * (Y + Y.transpose()).eval();
    Eigen::VectorXd dinv(n);
    for (int v = 0; v < n; ++v) dinv[v] = 1.0 / std::sqrt(std::max(Y.row(v).sum(), 1e-12));
    const Eigen::MatrixXd P0 = dinv.asDiagonal() * Y * dinv.asDiagonal();

    const auto cons = box_constraints(inst);
    std::vector<char> active(cons.size(), 1);
    const int d = static_cast<int>(greedy_colouring(inst).size());

    Eigen::MatrixXd F0(n, 0), F1(n, 0), F = Eigen::MatrixXd::Identity(n, n);
    Eigen::MatrixXd Z = P0;  // current solution in the coordinates of F
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> jitter(-1.0, 1.0);

    const int max_rounds = 2 * n + 2;
    for (int round = 0; F.cols() > 0 && round < max_rounds; ++round) {
        if (round > 0) {
            const int r = static_cast<int>(F.cols());
            const Eigen::MatrixXd fixed = F1 * F1.transpose();
            SdpModel md;
            md.dim = 2 * r;
            md.sense = Sense::minimize;
            Eigen::MatrixXd pert(r, r);
            for (int a = 0; a < r; ++a)
                for (int b = a; b < r; ++b) pert(a, b) = pert(b, a) = 1e-3 * jitter(rng);
            for (int a = 0; a < r; ++a) {
                for (int b = 0; b < r; ++b) {
                    const double c = (a == b ? 1.0 : 0.0) + pert(a, b);
                    if (c != 0.0) md.objective.push_back({a, b, c});
                }
            }
            // Z + W = I keeps 0 <= Z <= I.
            for (int a = 0; a < r; ++a) {
                for (int b = a; b < r; ++b) {
                    SparseRow row;
                    if (a == b) {
                        row.entries = {{a, a, 1.0}, {r + a, r + a, 1.0}};
                        row.rhs = 1.0;
                    } else {
                        const double h = 0.5;
                        row.entries = {{a, b, h}, {b, a, h}, {r + a, r + b, h}, {r + b, r + a, h}};
                        row.rhs = 0.0;
                    }
                    md.eq_other.push_back(std::move(row));
                }
            }
            InequalityBlock trace{"trace", {}};
            SparseRow tr;
            for (int a = 0; a < r; ++a) tr.entries.push_back({a, a, -1.0});
            tr.rhs = -(d - static_cast<double>(F1.cols()));
            trace.rows.push_back(std::move(tr));
            md.ineq.push_back(std::move(trace));
            for (std::size_t i = 0; i < cons.size(); ++i) {
                if (!active[i]) continue;
                SparseRow row = restricted(cons[i], F, cons[i].rhs - inner(cons[i], fixed));
                if (row.entries.empty()) continue;
                md.ineq.push_back({"c" + std::to_string(i), {std::move(row)}});
            }
            BoundSemantics sem;
            sem.transform = Transform::direct;
            sem.graph_order = 2 * r;
            SolverConfig sc;
            sc.eps = 1e-4;
            sc.max_iter = 600;
            const SolveResult res = subsolver(md, sem, sc);
            if (res.status == SolveStatus::diverged) {
                out.diagnostics.aborted = true;
                break;
            }
            Z = res.X_final.topLeftCorner(r, r);
        }
        ++out.diagnostics.rounds;

        const auto dec = eigh(0.5 * (Z + Z.transpose()));
        const int r = static_cast<int>(dec.eigenvalues.size());
        std::vector<int> low, high, mid;
        for (int j = 0; j < r; ++j) {
            const double lam = dec.eigenvalues[j];
            if (lam < cfg.delta) low.push_back(j);
            else if (lam > 1.0 - cfg.delta) high.push_back(j);
            else mid.push_back(j);
        }
        if (low.empty() && high.empty() && !mid.empty()) {
            // Inexact inner solves rarely land on an extreme point; freeze the
            // eigenvalue closest to {0, 1} so every round makes progress.
            int pick = mid.front();
            double dist = 2.0;
            for (int j : mid) {
                const double lam = dec.eigenvalues[j];
                const double dj = std::min(lam, 1.0 - lam);
                if (dj < dist) {
                    dist = dj;
                    pick = j;
                }
            }
            mid.erase(std::find(mid.begin(), mid.end(), pick));
            (dec.eigenvalues[pick] < 0.5 ? low : high).push_back(pick);
        }

        // Constraints barely touching the fractional part are dropped.
        Eigen::MatrixXd xf = Eigen::MatrixXd::Zero(r, r);
        for (int j : mid) {
            xf += dec.eigenvalues[j] * dec.eigenvectors.col(j) * dec.eigenvectors.col(j).transpose();
        }
        const Eigen::MatrixXd Pf = F * xf * F.transpose();
        for (std::size_t i = 0; i < cons.size(); ++i) {
            if (active[i] && std::abs(inner(cons[i], Pf)) < cfg.delta) active[i] = 0;
        }

        auto take = [&](const std::vector<int>& idx) {
            Eigen::MatrixXd cols(n, static_cast<int>(idx.size()));
            for (std::size_t j = 0; j < idx.size(); ++j) {
                cols.col(static_cast<int>(j)) = F * dec.eigenvectors.col(idx[j]);
            }
            return cols;
        };
        F0 = append_cols(F0, take(low));
        F1 = append_cols(F1, take(high));
        F = take(mid);
        Z = Eigen::MatrixXd::Zero(F.cols(), F.cols());
        for (std::size_t j = 0; j < mid.size(); ++j) Z(j, j) = dec.eigenvalues[mid[j]];
    }

    const Eigen::MatrixXd Pt = F1 * F1.transpose();
    for (const auto& c : cons) {
        out.diagnostics.violations.push_back(std::max(0.0, c.rhs - inner(c, Pt)));
    }
    out.diagnostics.violation_bound = violation_bound(cons, n, cfg.seed);

    const std::vector<int> label = cluster_rows(F1, n, out.diagnostics.ambiguous_clusters);
    out.partition = repair(inst, label, out.diagnostics.repaired);
    return out;
}

}  // namespace bcsdp
