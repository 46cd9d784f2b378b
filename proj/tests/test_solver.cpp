#include "bcsdp/generators.hpp"
#include "bcsdp/linalg.hpp"
#include "bcsdp/relax.hpp"
#include "bcsdp/rounding.hpp"
#include "bcsdp/solver.hpp"

#include <doctest.h>

#include <random>
#include <sstream>

using namespace bcsdp;

namespace {

// A random but internally consistent iterate (cached adjoints match y, v).
SolverState random_state(const SolverWorkspace& ws, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const int d = ws.dim();
    SolverState st;
    Eigen::MatrixXd x(d, d), s(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            x(i, j) = g(rng);
            s(i, j) = g(rng);
        }
    st.X = 0.5 * (x + x.transpose());
    st.S = s;
    st.y1 = Eigen::VectorXd::NullaryExpr(ws.eq_graph_count(), [&] { return g(rng); });
    st.y2 = Eigen::VectorXd::NullaryExpr(ws.eq_other_count(), [&] { return g(rng); });
    st.v = Eigen::VectorXd::NullaryExpr(ws.ineq_count(), [&] { return u(rng) < 0.5 ? 0.0 : u(rng); });
    st.mu = 0.1 + 2.0 * u(rng);
    st.Aty = ws.eq_adjoint(st.y1, st.y2);
    st.Btv = Eigen::MatrixXd::Zero(d, d);
    for (int i = 0; i < ws.ineq_count(); ++i) add_adjoint(ws.ineq_row(i), st.v[i], st.Btv);
    return st;
}

Eigen::VectorXd stacked_y(const SolverState& st)
{
    Eigen::VectorXd y(st.y1.size() + st.y2.size());
    y << st.y1, st.y2;
    return y;
}

}  // namespace

TEST_SUITE("solver") {

TEST_CASE("solve examples")
{
    const auto k5 = build_bounded(gen_complete(5), 1);
    const auto r = solve(k5.model, k5.semantics);
    CHECK(r.status == SolveStatus::converged);
    CHECK(r.value == doctest::Approx(5.0).epsilon(1e-3));
    CHECK(extract_bound(r).certified == 5);

    const auto c5 = build_theta(gen_cycle(5), ThetaVariant::lovasz);
    CHECK(solve(c5.model, c5.semantics).value == doctest::Approx(2.2360680).epsilon(1e-3));
}

TEST_CASE("frozen values on Kneser graphs")
{
    // Cross-checked against an interior-point reference.
    const auto g = gen_kneser(8, 2);
    const std::pair<int, double> rows[] = {{6, 4.6667}, {5, 5.6}, {4, 7.0}, {3, 9.3333}};
    for (auto [m, v] : rows) {
        const auto b = build_bounded(g, m);
        CHECK(solve(b.model, b.semantics).value == doctest::Approx(v).epsilon(5e-4));
    }
    const auto u = build_bounded(g, std::nullopt);
    CHECK(solve(u.model, u.semantics).value == doctest::Approx(4.0).epsilon(5e-4));
}

TEST_CASE("structured kernels match dense references")
{
    for (std::uint64_t s = 1; s <= 5; ++s) {
        const auto g = gen_gnp(6, 0.5, s);
        const auto b = build_bounded(g, 3);
        SolverWorkspace ws(b.model);
        CHECK(ws.structured_equalities());
        SolverState st = random_state(ws, s);
        const Eigen::VectorXd ref_y = reference_update_y(st, ws);
        update_y(st, ws);
        CHECK((stacked_y(st) - ref_y).cwiseAbs().maxCoeff() < 1e-10);
        const Eigen::VectorXd ref_v = reference_update_v(st, ws);
        update_v(st, ws);
        CHECK((st.v - ref_v).cwiseAbs().maxCoeff() < 1e-10);
        CHECK(st.v.minCoeff() >= 0.0);
    }
}

TEST_CASE("update_y keeps y at a fixed point")
{
    const auto b = build_bounded(gen_path(4), 2);
    SolverWorkspace ws(b.model);
    SolverState st = random_state(ws, 7);
    // A feasible X for the equalities and S closing the dual residual.
    st.X = 2.0 * Eigen::MatrixXd::Identity(4, 4) - Eigen::MatrixXd::Ones(4, 4);
    st.X(0, 2) = st.X(2, 0) = 1.0;
    st.X(1, 3) = st.X(3, 1) = 1.0;
    REQUIRE((ws.apply_eq(st.X) - ws.eq_rhs()).norm() < 1e-12);
    st.S = ws.C() - st.Aty - st.Btv;
    const Eigen::VectorXd before = stacked_y(st);
    update_y(st, ws);
    CHECK((stacked_y(st) - before).norm() < 1e-10);
}

TEST_CASE("update_v clamps")
{
    const auto b = build_bounded(gen_path(3), 2);
    SolverWorkspace ws(b.model);
    auto st = initial_state(ws, {}, 3, Transform::scaled);
    // Far inside every inequality: all multipliers stay at zero.
    update_v(st, ws);
    CHECK(st.v.isZero());
    // Every row violated with a zero dual residual: positive multipliers.
    st.X = -5.0 * Eigen::MatrixXd::Ones(3, 3);
    st.S = ws.C();
    update_v(st, ws);
    CHECK(st.v.minCoeff() >= 0.0);
    CHECK(st.v.maxCoeff() > 0.0);
}

TEST_CASE("update_s projects")
{
    const auto b = build_bounded(gen_path(3), 2);
    SolverWorkspace ws(b.model);
    auto st = initial_state(ws, {}, 3, Transform::scaled);
    st.X.setZero();
    update_s(st, ws);
    CHECK((st.S - ws.C()).norm() < 1e-12);
    st.X = 10.0 * Eigen::MatrixXd::Identity(3, 3);
    update_s(st, ws);
    CHECK(st.S.norm() < 1e-12);
    st.X = Eigen::MatrixXd::Random(3, 3);
    st.X = 0.5 * (st.X + st.X.transpose()).eval();
    update_s(st, ws);
    const Eigen::MatrixXd w = ws.C() - st.Aty - st.Btv - st.mu * st.X;
    CHECK((st.S - project_psd(w)).norm() < 1e-12);
    CHECK(eigh(st.S).eigenvalues.minCoeff() >= -1e-10);
}

TEST_CASE("update_x examples")
{
    const auto b = build_bounded(gen_path(3), 2);
    SolverWorkspace ws(b.model);
    auto st = initial_state(ws, {}, 3, Transform::scaled);
    const Eigen::MatrixXd x0 = st.X;
    st.S = ws.C();
    update_x(st, ws);
    CHECK((st.X - x0).norm() < 1e-14);
    st.S.setZero();
    st.mu = 1e300;
    update_x(st, ws);
    CHECK((st.X - x0).norm() < 1e-14);
}

TEST_CASE("one iteration on P3 from the identity start")
{
    // X0 = 3I - J, mu = 1. By hand: y1 = 0, y2 = (1/3, 1/3), v = 0,
    // S = J/9 and X1 = (8/3) I - (8/9) J.
    const auto b = build_bounded(gen_path(3), 2);
    SolverWorkspace ws(b.model);
    auto st = initial_state(ws, {}, 3, Transform::scaled);
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(3, 3);
    const Eigen::MatrixXd J = Eigen::MatrixXd::Ones(3, 3);
    CHECK((st.X - (3.0 * I - J)).norm() < 1e-14);
    update_y(st, ws);
    CHECK(st.y1.norm() < 1e-14);
    CHECK(st.y2[0] == doctest::Approx(1.0 / 3.0));
    CHECK(st.y2[1] == doctest::Approx(1.0 / 3.0));
    update_v(st, ws);
    CHECK(st.v.isZero());
    update_s(st, ws);
    CHECK((st.S - J / 9.0).norm() < 1e-12);
    update_x(st, ws);
    CHECK((st.X - (8.0 / 3.0 * I - 8.0 / 9.0 * J)).norm() < 1e-12);
}

TEST_CASE("determinism, warm start and trace")
{
    const auto g = gen_gnp(10, 0.5, 4);
    const auto b = build_bounded(g, 3);
    const auto r1 = solve(b.model, b.semantics);
    const auto r2 = solve(b.model, b.semantics);
    CHECK(r1.iterations == r2.iterations);
    CHECK(r1.value == r2.value);
    CHECK((r1.X_final - r2.X_final).norm() == 0.0);

    SolverConfig cfg;
    cfg.warm_start = greedy_colouring(TimetablingInstance::bounded(g, 3));
    std::ostringstream trace;
    cfg.trace = &trace;
    const auto rw = solve(b.model, b.semantics, cfg);
    CHECK(rw.status == SolveStatus::converged);
    CHECK(rw.value == doctest::Approx(r1.value).epsilon(1e-3));
    CHECK(trace.str().find("iter=1 ") != std::string::npos);
}

TEST_CASE("extract_bound safeguard")
{
    SolveResult r;
    r.status = SolveStatus::converged;
    r.value = 14.00001;
    CHECK(extract_bound(r, 1e-5).certified == 14);
    r.value = 13.2;
    CHECK(extract_bound(r, 1e-5).certified == 14);
    r.value = 10.0;
    CHECK(extract_bound(r, 1e-5).certified == 10);
    r.status = SolveStatus::diverged;
    CHECK_THROWS(extract_bound(r));
}

TEST_CASE("config validation and max_iter status")
{
    SolverConfig bad;
    bad.eps = 0.0;
    CHECK_THROWS(bad.validate());
    bad = {};
    bad.max_iter = 0;
    CHECK_THROWS(bad.validate());
    SolverConfig few;
    few.max_iter = 3;
    const auto b = build_bounded(gen_kneser(6, 2), 3);
    const auto r = solve(b.model, b.semantics, few);
    CHECK(r.status == SolveStatus::max_iter);
    CHECK(r.iterations == 3);
}

TEST_CASE("solver certifies within the sandwich on small graphs")
{
    for (std::uint64_t s = 1; s <= 10; ++s) {
        const auto g = gen_gnp(8, 0.5, s);
        for (int m = 1; m <= 8; m += 3) {
            const auto b = build_bounded(g, m);
            const auto r = solve(b.model, b.semantics);
            const int cert = extract_bound(r).certified;
            CHECK(counting_bound(8, m) <= cert);
        }
    }
}

}
