#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "obm/benchmark.hpp"
#include "obm/errors.hpp"

using namespace obm;

namespace {

// Central differences of the exact value function, the oracle for the PDE.
double fd_t(const SpaceTimeField& u, double x, double t, double h = 1e-5)
{
    return (u(x, t + h) - u(x, t - h)) / (2 * h);
}

double fd_xx(const SpaceTimeField& u, double x, double t, double h = 1e-4)
{
    return (u(x + h, t) - 2 * u(x, t) + u(x - h, t)) / (h * h);
}

}  // namespace

TEST(Benchmark, PdeAndObstacleConditions)
{
    const auto u = bench::exact_solution();
    const auto f = bench::source();
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> X(-1, 1), T(0.001, 0.499);
    int n_points = 0;
    while (n_points < 1000) {
        const double x = X(rng), t = T(rng);
        const double gap = 4 * std::abs(x) - (2 * t + 1);
        if (std::abs(gap) < 1e-3 || std::abs(x) > 1 - 1e-3)
            continue;
        ++n_points;
        EXPECT_GE(u(x, t), 0.0);
        if (gap > 0) {
            // Off the obstacle the heat equation holds with the tabulated f.
            EXPECT_NEAR(fd_t(u, x, t) - fd_xx(u, x, t), f(x, t), 1e-4 * (1 + std::abs(f(x, t))));
            EXPECT_NEAR(u.d_t(x, t), fd_t(u, x, t), 1e-6);
        } else {
            EXPECT_EQ(u(x, t), 0.0);
            EXPECT_LE(f(x, t), 0.0);
        }
    }
}

TEST(Benchmark, FreeBoundaryIsSmooth)
{
    const auto u = bench::exact_solution();
    for (double t : {0.0, 0.2, 0.5}) {
        const double r = (2 * t + 1) / 4;
        EXPECT_NEAR(u(r + 1e-9, t), 0.0, 1e-15);
        EXPECT_NEAR(u.grad_x(r + 1e-9, t), 0.0, 1e-7);
        EXPECT_NEAR(u.grad_x(-r - 1e-9, t), 0.0, 1e-7);
    }
}

TEST(Benchmark, SpotValues)
{
    EXPECT_DOUBLE_EQ(bench::tau_exact()(1.0, 0.0), 24.0);
    EXPECT_DOUBLE_EQ(bench::boundary_value(0.0), 9.0);
    EXPECT_NEAR(bench::boundary_value(0.5), 1.0, 1e-15);
    EXPECT_NEAR(bench::exact_solution()(1.0, 0.3), bench::boundary_value(0.3), 1e-14);
    const double h = 1e-6;
    EXPECT_NEAR(bench::boundary_value_dt(0.2),
                (bench::boundary_value(0.2 + h) - bench::boundary_value(0.2 - h)) / (2 * h), 1e-6);
}

TEST(Benchmark, ApproximationsStayAdmissible)
{
    for (double eps : {0.0, 0.1, 0.5}) {
        const auto v = bench::v_eps(eps);
        for (int j = 0; j <= 20; ++j)
            for (int i = 0; i <= 40; ++i) {
                const double x = -1 + i / 20.0, t = 0.5 * j / 20;
                ASSERT_GE(v(x, t), 0.0);
            }
        EXPECT_NEAR(v(1.0, 0.3), bench::boundary_value(0.3), 1e-14);
    }
    EXPECT_THROW(bench::v_eps(0.6), DomainError);
    EXPECT_THROW(bench::w_delta(0.0), DomainError);
    EXPECT_THROW(bench::tau_delta(0.3, NAN, 1.0), DomainError);
}

TEST(Benchmark, OneSlabInterpolantHitsSnapshots)
{
    const auto w = bench::w_delta(0.3);
    const auto u = bench::exact_solution();
    for (double x : {-0.9, -0.3, 0.1, 0.7}) {
        EXPECT_NEAR(w(x, 0.0), u(x, 0.0), 1e-14);
        EXPECT_NEAR(w(x, 0.3), u(x, 0.3), 1e-14);
    }
}

TEST(Benchmark, FluxesAreContinuous)
{
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> xi(0, 40);
    for (double delta : {0.2, 0.3, 0.5}) {
        const auto td = bench::tau_delta(delta, xi(rng), xi(rng));
        const auto th = bench::tau_hat(delta);
        for (double t : {0.01, 0.5 * delta, delta}) {
            const double r1 = (1 + 2 * t) / 4;
            const double r2 = (delta + 3 * t) / (4 * delta);
            const double rh = bench::tau_hat_radius(delta, t);
            for (double r : {r1, r2}) {
                if (r >= 1)
                    continue;
                EXPECT_NEAR(td(r - 1e-10, t), td(r + 1e-10, t), 1e-7) << "r=" << r;
                EXPECT_NEAR(td(-r - 1e-10, t), td(-r + 1e-10, t), 1e-7);
            }
            if (rh > 0 && rh < 1)
                EXPECT_NEAR(th(rh - 1e-10, t), th(rh + 1e-10, t), 1e-7) << "t=" << t;
        }
    }
}

TEST(Benchmark, ExactPairEvaluatesToZero)
{
    const QuadratureConfig cfg;
    const auto e = bench::evaluate(bench::exact_solution(), bench::tau_exact(), 0.5, 1.0, cfg);
    EXPECT_LT(e.lhs.combined, 1e-20);
    EXPECT_LT(e.rhs.total, 1e-20);
}

TEST(Benchmark, ToleranceRule)
{
    using bench::Match;
    EXPECT_EQ(bench::compare(1.01, {1.0, 0.01}), Match::relative);
    EXPECT_EQ(bench::compare(0.0333, {0.0324, 1e-4}), Match::absolute);
    EXPECT_EQ(bench::compare(0.134997, {0.13, 0.01}), Match::rounding);
    EXPECT_EQ(bench::compare(0.146, {0.13, 0.01}), Match::none);
    EXPECT_EQ(bench::compare(2.58, {1.58, 0.01}), Match::none);
}

TEST(Benchmark, FirstTableShape)
{
    const auto t = bench::reproduce_table(1);
    ASSERT_EQ(t.rows.size(), 6u);
    double prev = INFINITY;
    for (const auto& row : t.rows) {
        const double g = row.cell("grad_sq").value;
        EXPECT_LT(g, prev);
        prev = g;
        EXPECT_EQ(row.cell("e0_sq").value, 0.0);
    }
    EXPECT_LT(t.rows.back().cell("residual_norm").value, 1e-10);
}

TEST(Benchmark, SecondTableIdentities)
{
    const auto t = bench::reproduce_table(2);
    for (const auto& row : t.rows) {
        const double lhs = row.cell("lhs").value, rhs = row.cell("rhs").value;
        if (lhs == 0.0)
            continue;
        EXPECT_NEAR(row.cell("ieff").value, std::sqrt(rhs / lhs), 1e-12);
        EXPECT_GE(row.cell("ieff").value, 1.0);
    }
    // rhs is linear in alpha because e0 = 0.
    for (std::size_t i = 0; i + 1 < t.rows.size(); i += 2)
        EXPECT_NEAR(t.rows[i + 1].cell("rhs").value, 2 * t.rows[i].cell("rhs").value, 1e-10);
}

TEST(Benchmark, OptimizerDoesNotWorsenTheBound)
{
    const QuadratureConfig cfg;
    const double delta = 0.3;
    const auto v = bench::v_eps(0.0);
    const auto r = bench::optimize_xi_eta(delta, v, 1.0, cfg);
    const double at_guess = bench::evaluate(v, bench::tau_delta(delta, 16, 7), delta, 1.0, cfg).rhs.total;
    EXPECT_TRUE(r.converged);
    EXPECT_LE(r.rhs, at_guess * (1 + 1e-6));
}
