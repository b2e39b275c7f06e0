#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "obm/benchmark.hpp"
#include "obm/errors.hpp"
#include "obm/incremental.hpp"
#include "obm/solver.hpp"

using namespace obm;

namespace {

constexpr double kPi = std::numbers::pi;

IntervalDomain unit() { return IntervalDomain(-1, 1); }

SpatialField parabola()
{
    return SpatialField([](double x) { return 1 - x * x; }, [](double x) { return -2 * x; });
}

SpatialFlux parabola_flux()
{
    return SpatialFlux([](double x) { return -2 * x; }, [](double) { return -2.0; });
}

// Midpoint oracle for (1/(t1 - t0)) int f(x, t) dt.
double midpoint_mean(const SpaceTimeField& f, double x, double t0, double t1, int n)
{
    const double h = (t1 - t0) / n;
    double s = 0.0;
    for (int i = 0; i < n; ++i)
        s += f(x, t0 + (i + 0.5) * h);
    return s / n;
}

}  // namespace

TEST(TimePartition, Validation)
{
    EXPECT_THROW(TimePartition({0.0}), DomainError);
    EXPECT_THROW(TimePartition({0.1, 0.5}), DomainError);
    EXPECT_THROW(TimePartition({0.0, 0.3, 0.3}), DomainError);
    EXPECT_THROW(TimePartition::uniform(0.5, 0), DomainError);
    const auto p = TimePartition({0.0, 0.1, 0.4, 0.5});
    EXPECT_DOUBLE_EQ(p.max_step(), 0.3);
    EXPECT_EQ(p.slab_of(0.05), 0);
    EXPECT_EQ(p.slab_of(0.2), 1);
    EXPECT_EQ(p.slab_of(0.5), 2);
    EXPECT_DOUBLE_EQ(TimePartition::uniform(0.5, 4).node(3), 0.375);
}

TEST(Incremental, InterpolationIsAffineInTime)
{
    const auto p = TimePartition::uniform(1.0, 2);
    IncrementalApprox a{p, {SpatialField::constant(0.0), SpatialField::constant(2.0),
                            SpatialField::constant(1.0)}};
    const auto v = interpolate_in_time(a);
    EXPECT_DOUBLE_EQ(v(0.3, 0.25), 1.0);
    EXPECT_DOUBLE_EQ(v(0.3, 0.75), 1.5);
    EXPECT_DOUBLE_EQ(v.d_t(0.3, 0.25), 4.0);
    EXPECT_DOUBLE_EQ(v.d_t(0.3, 0.75), -2.0);
    a.v.pop_back();
    EXPECT_THROW(interpolate_in_time(a), DomainError);
    EXPECT_THROW(a.validate(unit(), SpatialField::constant(0.0), 1e-12), DomainError);
}

TEST(Incremental, AveragedSourceOfLinearTime)
{
    const QuadratureConfig cfg;
    const SpaceTimeField f([](double, double t) { return t; }, {}, {});
    const auto p = TimePartition::uniform(1.0, 1);
    EXPECT_NEAR(averaged_source(f, p, 0, cfg)(0.2), 0.5, 1e-14);
}

TEST(Incremental, AveragedBenchmarkSourceMatchesMidpointRule)
{
    const QuadratureConfig cfg;
    const auto f = bench::source();
    const auto p = TimePartition::uniform(0.5, 1);
    for (double x : {0.9, -0.6, 0.3}) {
        const double oracle = midpoint_mean(f, x, 0.0, 0.5, 20000);
        EXPECT_NEAR(averaged_source(f, p, 0, cfg)(x), oracle, 1e-6 * (1 + std::abs(oracle)))
            << "x=" << x;
    }
}

TEST(Incremental, AffineSourceCorrection)
{
    // f = t^2 on (0, 1): endpoints 0, 1 and mean 1/3, so zeta = -1/6.
    const QuadratureConfig cfg;
    const SpaceTimeField f([](double, double t) { return t * t; }, {}, {});
    const auto p = TimePartition::uniform(1.0, 1);
    const auto g = affine_source(f, p, 0, cfg);
    EXPECT_NEAR(g(0.0, 0.0), -1.0 / 6, 1e-12);
    EXPECT_NEAR(g(0.0, 1.0), 1 - 1.0 / 6, 1e-12);
    // The correction preserves the slab mean.
    EXPECT_NEAR(g(0.0, 0.5), 1.0 / 3, 1e-12);
}

TEST(Incremental, SlabFluxTerms)
{
    const QuadratureConfig cfg;
    const auto zero = SpatialField::constant(0.0);
    const SpatialField ramp([](double x) { return x; }, [](double) { return 1.0; });
    EXPECT_NEAR(d1(zero, ramp, unit(), cfg), 2.0 / 12, 1e-14);
    EXPECT_NEAR(d2(zero, ramp, SpatialFlux::zero(), unit(), cfg), 2.0 / 4, 1e-14);
}

TEST(Incremental, AffineSquareIdentity)
{
    // Oracle: int_0^D (g0 + (g1 - g0) s/D)^2 ds = D (g0^2 + g0 g1 + g1^2) / 3.
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-5, 5), d(0.01, 1);
    for (int i = 0; i < 1000; ++i) {
        const double g0 = u(rng), g1 = u(rng), step = d(rng);
        const double direct = step * (g0 * g0 + g0 * g1 + g1 * g1) / 3;
        const double sum = (g0 + g1) * (g0 + g1), diff = (g1 - g0) * (g1 - g0);
        EXPECT_NEAR(affine_sq_integral(sum, diff, step), direct, 1e-12 * (1 + direct));
    }
}

TEST(Incremental, SwappedAffineIdentityIsWrong)
{
    // Placing the 1/3 on the sum instead of the difference fails for g0 = g1 = 1.
    const double step = 0.25;
    const double swapped = step / 4 * (4.0 / 3 + 0.0);
    EXPECT_NEAR(affine_sq_integral(4.0, 0.0, step), step, 1e-15);
    EXPECT_GT(std::abs(swapped - step), 0.1);
}

TEST(Incremental, AverageGradientsOfQuadratic)
{
    const SpatialGrid g(unit(), 11);
    const auto vals = sample(g, [](double x) { return x * x; });
    const auto s = average_gradients(g, vals);
    for (int i = 1; i + 1 < g.size(); ++i)
        EXPECT_NEAR(s.values[static_cast<std::size_t>(i)], 2 * g.node(i), 1e-13);
    EXPECT_NEAR(s.values.front(), g.node(0) + g.node(1), 1e-13);
    EXPECT_NEAR(s.values.back(), g.node(9) + g.node(10), 1e-13);
}

TEST(Incremental, AverageGradientsOfHat)
{
    const SpatialGrid g(unit(), 5);
    const std::vector<double> hat{0, 0.5, 1, 0.5, 0};
    const auto s = average_gradients(g, hat);
    EXPECT_DOUBLE_EQ(s.values[2], 0.0);
    EXPECT_DOUBLE_EQ(s.values[1], 1.0);
    EXPECT_DOUBLE_EQ(s.values[0], 1.0);
    EXPECT_DOUBLE_EQ(s.values[4], -1.0);
}

TEST(Incremental, MidpointFluxNeedsMatchingGrids)
{
    const NodalFlux a{SpatialGrid(unit(), 5), std::vector<double>(5, 1.0)};
    const NodalFlux b{SpatialGrid(unit(), 7), std::vector<double>(7, 1.0)};
    EXPECT_THROW(midpoint_flux(a, b), DomainError);
    const NodalFlux c{SpatialGrid(unit(), 5), std::vector<double>(5, 3.0)};
    EXPECT_DOUBLE_EQ(midpoint_flux(a, c).values[2], 2.0);
}

TEST(Incremental, BoundaryLiftMatchesSchedule)
{
    const auto p = TimePartition::uniform(0.5, 4);
    const auto sched = bench::boundary_schedule();
    IncrementalApprox a{p, {}};
    for (int k = 0; k <= 4; ++k)
        a.v.push_back(bench::exact_slice(p.node(k)));
    const auto v = boundary_lifted(interpolate_in_time(a), p, unit(), sched, 0.1);
    for (double t : {0.01, 0.1, 0.2, 0.33, 0.49}) {
        EXPECT_NEAR(v(-1, t), bench::boundary_value(t), 1e-12);
        EXPECT_NEAR(v(1, t), bench::boundary_value(t), 1e-12);
        EXPECT_DOUBLE_EQ(v(0.5, t), interpolate_in_time(a)(0.5, t));
    }
    EXPECT_THROW(boundary_lifted(interpolate_in_time(a), p, unit(), sched, 1.5), DomainError);
}

TEST(Incremental, StationarySolutionGivesZero)
{
    // u = 1 - x^2 with f = 2 is stationary; every term vanishes.
    const QuadratureConfig cfg;
    const auto p = TimePartition::uniform(0.5, 5);
    IncrementalApprox a{p, std::vector<SpatialField>(6, parabola())};
    const auto f = SpaceTimeField::constant(2.0);
    const auto phi = SpatialField::constant(-10.0);
    const auto u0 = parabola();
    const auto dom = unit();
    const IncrementalInputs in{a, f, phi, u0, dom, 1.0, 2 / kPi};
    const auto s = simple_incremental_majorant(in, std::vector<SpatialFlux>(5, parabola_flux()), cfg);
    EXPECT_LT(s.total, 1e-20);
    const FluxSequence fl{p, std::vector<SpatialFlux>(6, parabola_flux())};
    EXPECT_LT(advanced_incremental_majorant(in, fl, cfg).total, 1e-20);
}

TEST(Incremental, ContactResidualIsFiltered)
{
    // v = phi = 0, f = -1: R = -1 lies on the contact set, so only the
    // unfiltered advanced variant sees it.
    const QuadratureConfig cfg;
    const auto p = TimePartition::uniform(0.5, 2);
    IncrementalApprox a{p, std::vector<SpatialField>(3, SpatialField::constant(0.0))};
    const auto f = SpaceTimeField::constant(-1.0);
    const auto phi = SpatialField::constant(0.0);
    const auto u0 = SpatialField::constant(0.0);
    const auto dom = unit();
    const IncrementalInputs in{a, f, phi, u0, dom, 1.0, 2 / kPi};
    const FluxSequence fl{p, std::vector<SpatialFlux>(3, SpatialFlux::zero())};
    const auto filtered = advanced_incremental_majorant(in, fl, cfg, true);
    const auto plain = advanced_incremental_majorant(in, fl, cfg, false);
    EXPECT_LT(filtered.total, 1e-20);
    EXPECT_GT(plain.total, 0.1);
    EXPECT_LT(simple_incremental_majorant(in, std::vector<SpatialFlux>(2, SpatialFlux::zero()), cfg)
                  .total,
              1e-20);
}

TEST(Incremental, SolverSequenceBoundsAndFiltering)
{
    // Heat problem far from the obstacle; exact solution known.
    const QuadratureConfig cfg;
    const double k = kPi * kPi / 4;
    const SpaceTimeField u(
        [k](double x, double t) { return std::exp(-k * t) * std::cos(kPi * x / 2); },
        [k](double x, double t) { return -kPi / 2 * std::exp(-k * t) * std::sin(kPi * x / 2); },
        [k](double x, double t) { return -k * std::exp(-k * t) * std::cos(kPi * x / 2); });
    const ProblemData data{SpaceTimeBox(unit(), 0.5), SpaceTimeField::constant(0.0),
                           SpatialField([](double x) { return std::cos(kPi * x / 2); },
                                        [](double x) { return -kPi / 2 * std::sin(kPi * x / 2); }),
                           SpatialField::constant(-10.0), 2 / kPi, {}};
    for (int n : {5, 10}) {
        const auto sol = solve_sequence(data, TimePartition::uniform(0.5, n), 41, SolverConfig{});
        const auto v = interpolate_in_time(sol.approx);
        const IncrementalInputs in{sol.approx, data.f, data.phi, data.u0, data.box.domain(), 1.0,
                                   data.friedrichs};
        const auto simple = simple_incremental_majorant(in, sol.midpoint_fluxes(), cfg);
        const auto adv = advanced_incremental_majorant(in, sol.fluxes, cfg, true);
        const auto adv_plain = advanced_incremental_majorant(in, sol.fluxes, cfg, false);
        const auto err = combined_error_norm(u, v, 1.0, data, cfg);
        EXPECT_GE(simple.total, err.combined);
        EXPECT_GE(adv.total, err.combined);
        EXPECT_LE(adv.total, adv_plain.total + 1e-14);
        ASSERT_EQ(adv.slabs.size(), static_cast<std::size_t>(n));
    }
}
