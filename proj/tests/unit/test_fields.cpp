#include <gtest/gtest.h>

#include <cmath>

#include "obm/errors.hpp"
#include "obm/fields.hpp"

using namespace obm;

TEST(Fields, MissingDerivativesThrow)
{
    const SpaceTimeField f([](double x, double) { return x; }, {}, {}, {}, "f");
    EXPECT_FALSE(f.has_grad_x());
    EXPECT_THROW(f.grad_x(0, 0), MissingDerivative);
    EXPECT_THROW(f.d_t(0, 0), MissingDerivative);
    const FluxField tau([](double, double) { return 0.0; }, {}, {}, "tau");
    EXPECT_THROW(tau.div(0, 0), MissingDerivative);
}

TEST(Fields, ArithmeticCarriesDerivativesAndRegions)
{
    RegionDecomposition ra;
    ra.add_curve("a", [](double x, double) { return x; });
    RegionDecomposition rb;
    rb.add_curve("a", [](double x, double) { return x; });
    rb.add_curve("b", [](double x, double t) { return x - t; });
    rb.add_x_break(0.5);
    const SpaceTimeField a([](double x, double t) { return x * t; },
                           [](double, double t) { return t; }, [](double x, double) { return x; },
                           ra, "a");
    const SpaceTimeField b([](double x, double) { return x * x; },
                           [](double x, double) { return 2 * x; }, [](double, double) { return 0.0; },
                           rb, "b");
    const auto d = a - 2.0 * b;
    EXPECT_DOUBLE_EQ(d(3, 2), 6 - 18);
    EXPECT_DOUBLE_EQ(d.grad_x(3, 2), 2 - 12);
    EXPECT_DOUBLE_EQ(d.d_t(3, 2), 3);
    EXPECT_EQ(d.regions().curves().size(), 2u);
    EXPECT_EQ(d.regions().x_breaks().size(), 1u);
}

TEST(Fields, GridGeometry)
{
    const SpatialGrid g(IntervalDomain(-1, 1), 5);
    EXPECT_DOUBLE_EQ(g.h(), 0.5);
    EXPECT_DOUBLE_EQ(g.node(4), 1.0);
    EXPECT_EQ(g.cell_of(-1.0), 0);
    EXPECT_EQ(g.cell_of(1.0), 3);
    EXPECT_EQ(g.cell_of(0.1), 2);
    EXPECT_THROW(SpatialGrid(IntervalDomain(0, 1), 2), DomainError);
}

TEST(Fields, PiecewiseLinearInterpolant)
{
    const SpatialGrid g(IntervalDomain(0, 1), 3);
    const auto f = piecewise_linear_field(g, {0.0, 1.0, 3.0});
    EXPECT_DOUBLE_EQ(f(0.25), 0.5);
    EXPECT_DOUBLE_EQ(f(0.75), 2.0);
    EXPECT_DOUBLE_EQ(f.grad(0.25), 2.0);
    EXPECT_DOUBLE_EQ(f.grad(0.75), 4.0);
    EXPECT_EQ(f.breaks().size(), 3u);
    const auto s = piecewise_linear_flux(g, {1.0, 1.0, 0.0});
    EXPECT_DOUBLE_EQ(s.div(0.9), -2.0);
    EXPECT_THROW(piecewise_linear_field(g, {0.0, 1.0}), DomainError);
}

TEST(Fields, SpatialExtensionsAreStationary)
{
    const SpatialField p([](double x) { return x * x; }, [](double x) { return 2 * x; });
    const auto st = p.as_space_time();
    EXPECT_DOUBLE_EQ(st(0.5, 7.0), 0.25);
    EXPECT_DOUBLE_EQ(st.d_t(0.5, 7.0), 0.0);
    EXPECT_DOUBLE_EQ(st.grad_x(0.5, 7.0), 1.0);
}
