#include "bcsdp/linalg.hpp"
#include "bcsdp/rounding.hpp"

#include "items.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace bcsdp {

namespace {

constexpr int kEmptyRoundsBeforeFallback = 20;

struct Candidate {
    double score;
    int item;
};

// Unit Gram vectors of the n x n block of x, one row per vertex.
Eigen::MatrixXd unit_vectors(const Eigen::MatrixXd& x, int n)
{
    const Eigen::MatrixXd block = x.topLeftCorner(n, n);
    Eigen::MatrixXd L = cholesky_psd(project_psd(block));
    for (int i = 0; i < n; ++i) {
        const double norm = L.row(i).norm();
        if (norm > 0.0) L.row(i) /= norm;
    }
    return L;
}

int residual_max_degree(const detail::Items& items, const std::vector<char>& left)
{
    int best = 0;
    for (int a = 0; a < items.size(); ++a) {
        if (!left[a]) continue;
        int d = 0;
        for (int b = 0; b < items.size(); ++b) d += left[b] && b != a && items.conflict[a][b];
        best = std::max(best, d);
    }
    return best;
}

Partition one_attempt(const Eigen::MatrixXd& vecs, const detail::Items& items,
                      const RoomProfile& profile, int k, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const int dim = static_cast<int>(vecs.cols());
    const int count = items.size();

    std::vector<char> left(count, 1);
    int remaining = count;
    int empty_rounds = 0;
    Partition part;
    Eigen::VectorXd r(dim);
    while (remaining > 0) {
        const int delta = residual_max_degree(items, left);
        double c = 0.0;
        if (delta > 1 && k > 2) {
            c = std::sqrt(2.0 * (k - 2) / (k * std::log(static_cast<double>(delta))));
        }
        for (int i = 0; i < dim; ++i) r[i] = gauss(rng);
        const Eigen::VectorXd proj = vecs * r;

        const bool fallback = empty_rounds >= kEmptyRoundsBeforeFallback;
        std::vector<Candidate> cand;
        for (int a = 0; a < count; ++a) {
            if (!left[a]) continue;
            double s = 0.0;
            for (Vertex v : items.members[a]) s += proj[v];
            s /= static_cast<double>(items.members[a].size());
            if (fallback || (s > 0.0 && s >= c)) cand.push_back({s, a});
        }
        std::sort(cand.begin(), cand.end(), [](const Candidate& x, const Candidate& y) {
            return x.score != y.score ? x.score > y.score : x.item < y.item;
        });

        ClassLoad load(profile);
        std::vector<int> admitted;
        for (const auto& cd : cand) {
            const int a = cd.item;
            bool independent = true;
            for (int b : admitted) {
                if (items.conflict[a][b]) {
                    independent = false;
                    break;
                }
            }
            if (!independent || !load.can_add(items.members[a])) continue;
            load.add(items.members[a]);
            admitted.push_back(a);
        }
        if (admitted.empty()) {
            ++empty_rounds;
            continue;
        }
        empty_rounds = 0;
        std::vector<Vertex> cls;
        for (int a : admitted) {
            left[a] = 0;
            --remaining;
            cls.insert(cls.end(), items.members[a].begin(), items.members[a].end());
        }
        part.classes.push_back(std::move(cls));
    }
    return part;
}

// Folds small classes into larger compatible ones, first fit. Hyperplane
// rounds often strand a few items in classes that have room elsewhere.
void merge_classes(Partition& part, const detail::Items& items, const RoomProfile& profile)
{
    std::vector<std::vector<int>> cls;
    for (const auto& c : part.classes) {
        std::vector<int> ids;
        for (Vertex v : c) {
            const int a = items.item_of[v];
            if (std::find(ids.begin(), ids.end(), a) == ids.end()) ids.push_back(a);
        }
        cls.push_back(std::move(ids));
    }
    std::stable_sort(cls.begin(), cls.end(),
                     [](const auto& x, const auto& y) { return x.size() > y.size(); });
    std::vector<std::vector<int>> out;
    std::vector<ClassLoad> loads;
    for (const auto& c : cls) {
        std::vector<Vertex> members;
        for (int a : c) members.insert(members.end(), items.members[a].begin(), items.members[a].end());
        bool placed = false;
        for (std::size_t t = 0; t < out.size() && !placed; ++t) {
            bool ok = loads[t].can_add(members);
            for (int a : c) {
                for (int b : out[t]) ok = ok && !items.conflict[a][b];
            }
            if (ok) {
                out[t].insert(out[t].end(), c.begin(), c.end());
                loads[t].add(members);
                placed = true;
            }
        }
        if (!placed) {
            out.push_back(c);
            loads.emplace_back(profile);
            loads.back().add(members);
        }
    }
    part.classes.clear();
    for (const auto& c : out) {
        std::vector<Vertex> vs;
        for (int a : c) vs.insert(vs.end(), items.members[a].begin(), items.members[a].end());
        part.classes.push_back(std::move(vs));
    }
    part.normalize();
}

}  // namespace

Partition kms_round(const Eigen::MatrixXd& x, const TimetablingInstance& inst,
                    const RoundingConfig& cfg)
{
    cfg.validate();
    const int n = inst.order();
    if (n == 0) return {};
    if (x.rows() < n || x.cols() < n) throw std::invalid_argument("kms_round: x too small");
    const detail::Items items = detail::make_items(inst);
    const RoomProfile profile(inst);
    for (int a = 0; a < items.size(); ++a) {
        if (items.conflict[a][a] || !class_admissible(profile, items.members[a])) {
            throw std::invalid_argument("kms_round: some pre-colouring group fits no class");
        }
    }

    int k = cfg.lower_bound;
    if (k <= 0) {
        const double t = x.topLeftCorner(n, n).diagonal().mean() + 1.0;
        k = static_cast<int>(std::ceil(t - 1e-6));
    }
    const Eigen::MatrixXd vecs = unit_vectors(x, n);

    Partition best;
    bool have = false;
    for (int a = 0; a < cfg.attempts; ++a) {
        Partition p = one_attempt(vecs, items, profile, k, cfg.seed + static_cast<std::uint64_t>(a));
        merge_classes(p, items, profile);
        if (!have || p.size() < best.size()) {
            best = std::move(p);
            have = true;
        }
    }
    return best;
}

}  // namespace bcsdp
