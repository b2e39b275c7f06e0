#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "obm/benchmark.hpp"
#include "obm/domain.hpp"
#include "obm/errors.hpp"
#include "obm/quadrature.hpp"

using namespace obm;

namespace {

// Smallest eigenvalue of the Dirichlet finite-difference Laplacian by inverse
// iteration with a Thomas solve; returns 1/sqrt(lambda).
double fd_friedrichs(double a, double b, int n)
{
    const double h = (b - a) / (n + 1);
    std::vector<double> x(static_cast<std::size_t>(n), 1.0);
    double lambda = 0.0;
    for (int it = 0; it < 200; ++it) {
        // Solve (1/h^2) tridiag(-1, 2, -1) y = x.
        std::vector<double> c(x.size()), d(x.size()), y(x.size());
        const double off = -1.0 / (h * h);
        const double diag = 2.0 / (h * h);
        c[0] = off / diag;
        d[0] = x[0] / diag;
        for (std::size_t i = 1; i < x.size(); ++i) {
            const double m = diag - off * c[i - 1];
            c[i] = off / m;
            d[i] = (x[i] - off * d[i - 1]) / m;
        }
        y.back() = d.back();
        for (std::size_t i = x.size() - 1; i-- > 0;)
            y[i] = d[i] - c[i] * y[i + 1];
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            num += x[i] * y[i];
            den += y[i] * y[i];
        }
        lambda = num / den;
        const double norm = std::sqrt(den);
        for (std::size_t i = 0; i < x.size(); ++i)
            x[i] = y[i] / norm;
    }
    return 1.0 / std::sqrt(lambda);
}

}  // namespace

TEST(Domain, RejectsDegenerateIntervals)
{
    EXPECT_THROW(IntervalDomain(1.0, 1.0), DomainError);
    EXPECT_THROW(IntervalDomain(2.0, 1.0), DomainError);
    EXPECT_THROW(IntervalDomain(0.0, INFINITY), DomainError);
    EXPECT_THROW(SpaceTimeBox(IntervalDomain(0, 1), 0.0), DomainError);
    EXPECT_DOUBLE_EQ(SpaceTimeBox(IntervalDomain(-1, 1), 0.5).measure(), 1.0);
}

TEST(Domain, FriedrichsConstantMatchesDiscreteEigenvalue)
{
    for (auto [a, b] : {std::pair{-1.0, 1.0}, std::pair{0.0, 1.0}, std::pair{2.0, 5.5}}) {
        const double exact = friedrichs_constant(IntervalDomain(a, b));
        EXPECT_DOUBLE_EQ(exact, (b - a) / std::numbers::pi);
        EXPECT_NEAR(fd_friedrichs(a, b, 2000), exact, 1e-6 * exact);
    }
    EXPECT_NEAR(friedrichs_constant(IntervalDomain(-1, 1)), 0.6366, 1e-4);
}

TEST(Quadrature, ConfigValidation)
{
    QuadratureConfig c;
    EXPECT_NO_THROW(c.validate());
    c.base_cells = 1;
    EXPECT_THROW(c.validate(), DomainError);
    c = {};
    c.tol = 0;
    EXPECT_THROW(c.validate(), DomainError);
    c = {};
    c.refinement = 1;
    EXPECT_THROW(c.validate(), DomainError);
}

TEST(Quadrature, PolynomialsAreExact)
{
    const QuadratureConfig cfg;
    const double v =
        integrate_line([](double x) { return x * x * x * x * x - 3 * x * x; }, -1, 2, {}, {}, cfg);
    EXPECT_NEAR(v, (64.0 - 1.0) / 6.0 - (8.0 + 1.0), 1e-12);
}

TEST(Quadrature, SplitsAtLevelSetCrossings)
{
    // Indicator of {x > r}: the area is exact only if the jump is located.
    const QuadratureConfig cfg;
    const double r = 0.123456789;
    const std::vector<LineFn> levels = {[r](double x) { return x - r; }};
    const double v = integrate_line([r](double x) { return x > r ? 1.0 : 0.0; }, 0, 1, levels, {},
                                    cfg);
    EXPECT_NEAR(v, 1.0 - r, 1e-13);
}

TEST(Quadrature, SpaceTimeCurveRegion)
{
    // Area of {4|x| > 2t+1} in (-1,1) x (0,0.5) is 0.625.
    const QuadratureConfig cfg;
    RegionDecomposition r;
    r.add_curve("c", [](double x, double t) { return 4 * std::abs(x) - (2 * t + 1); });
    const double v = integrate_qt(
        [](double x, double t) { return 4 * std::abs(x) > 2 * t + 1 ? 1.0 : 0.0; },
        SpaceTimeBox(IntervalDomain(-1, 1), 0.5), r, cfg);
    EXPECT_NEAR(v, 0.625, 1e-12);
}

TEST(Quadrature, ZeroIntegralConvergesOnAbsoluteFloor)
{
    const QuadratureConfig cfg;
    EXPECT_EQ(integrate_line([](double) { return 0.0; }, 0, 1, {}, {}, cfg), 0.0);
}

TEST(Quadrature, NonConvergenceCarriesEstimates)
{
    QuadratureConfig cfg;
    cfg.max_levels = 3;
    cfg.tol = 1e-14;
    try {
        integrate_line([](double x) { return std::sin(1.0 / (x + 1e-9)); }, 0, 1, {}, {}, cfg);
        FAIL() << "expected QuadratureError";
    } catch (const QuadratureError& e) {
        EXPECT_TRUE(std::isfinite(e.previous_estimate()));
        EXPECT_TRUE(std::isfinite(e.last_estimate()));
        EXPECT_NE(e.previous_estimate(), e.last_estimate());
    }
}

TEST(Quadrature, NormsOfSimpleFields)
{
    const QuadratureConfig cfg;
    const SpaceTimeBox box(IntervalDomain(-1, 1), 0.5);
    // g = 1 - f with f = f - 1: norm^2 equals |Q_T| = 1.
    EXPECT_NEAR(l2_norm_qt([](double, double) { return 1.0; }, box, {}, cfg), 1.0, 1e-14);
    EXPECT_NEAR(l2_norm_space_at([](double x, double) { return x; }, box.domain(), 0.3, {}, cfg),
                std::sqrt(2.0 / 3.0), 1e-14);
    const double br[] = {0.0};
    EXPECT_NEAR(l2_norm_space([](double x) { return std::abs(x); }, box.domain(), br, cfg),
                std::sqrt(2.0 / 3.0), 1e-14);
}

TEST(Quadrature, GradientErrorOfBenchmarkApproximation)
{
    // ||grad u - grad v_eps||^2 at eps = 0.5, printed as 2.42.
    const QuadratureConfig cfg;
    const auto e = bench::v_eps(0.5) - bench::exact_solution();
    const double g = l2_norm_qt([&e](double x, double t) { return e.grad_x(x, t); },
                                SpaceTimeBox(bench::omega(), 0.5), e.regions(), cfg);
    EXPECT_NEAR(g * g, 2.42, 0.02 * 2.42);
}

TEST(Quadrature, TimeIntegralAtPoint)
{
    const QuadratureConfig cfg;
    EXPECT_NEAR(integrate_time_at([](double x, double t) { return x * t; }, 2.0, 0, 1, {}, cfg),
                1.0, 1e-14);
}
