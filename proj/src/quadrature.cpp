#include "obm/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "obm/errors.hpp"

namespace obm {

void QuadratureConfig::validate() const
{
    if (base_cells < 2)
        throw DomainError("QuadratureConfig: base_cells must be >= 2");
    if (refinement < 2)
        throw DomainError("QuadratureConfig: refinement must be >= 2");
    if (!(tol > 0.0))
        throw DomainError("QuadratureConfig: tol must be > 0");
    if (max_levels < 1)
        throw DomainError("QuadratureConfig: max_levels must be >= 1");
    if (!(abs_floor >= 0.0))
        throw DomainError("QuadratureConfig: abs_floor must be >= 0");
}

namespace {

// 3-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 3> kNodes = {-0.77459666924148337704, 0.0, 0.77459666924148337704};
constexpr std::array<double, 3> kWeights = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};

int sign_of(double v)
{
    return (v > 0.0) - (v < 0.0);
}

double bisect(const LineFn& level, double lo, double hi, int sign_lo)
{
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi)
            break;
        const int s = sign_of(level(mid));
        if (s == 0)
            return mid;
        if (s == sign_lo)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double composite_estimate(const LineFn& fn, double s0, double s1, std::span<const LineFn> levels,
                          std::span<const double> breaks, long cells)
{
    const double h = (s1 - s0) / static_cast<double>(cells);
    std::vector<double> pts;
    pts.reserve(static_cast<std::size_t>(cells) + 1 + breaks.size());
    for (long i = 0; i <= cells; ++i)
        pts.push_back(i == cells ? s1 : s0 + static_cast<double>(i) * h);

    for (double b : breaks)
        if (b > s0 && b < s1)
            pts.push_back(b);

    for (const auto& level : levels) {
        double prev_s = s0;
        int prev_sign = sign_of(level(s0));
        for (long i = 1; i <= cells; ++i) {
            const double s = (i == cells) ? s1 : s0 + static_cast<double>(i) * h;
            const int sg = sign_of(level(s));
            if (sg != 0 && prev_sign != 0 && sg != prev_sign)
                pts.push_back(bisect(level, prev_s, s, prev_sign));
            prev_s = s;
            prev_sign = sg;
        }
    }

    std::sort(pts.begin(), pts.end());
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const double lo = pts[i];
        const double hi = pts[i + 1];
        if (!(hi > lo))
            continue;
        const double mid = 0.5 * (lo + hi);
        const double half = 0.5 * (hi - lo);
        double cell = 0.0;
        for (std::size_t q = 0; q < kNodes.size(); ++q)
            cell += kWeights[q] * fn(mid + half * kNodes[q]);
        total += half * cell;
    }
    return total;
}

std::vector<LineFn> restrict_in_x(const RegionDecomposition& regions, double t)
{
    std::vector<LineFn> out;
    out.reserve(regions.curves().size());
    for (const auto& c : regions.curves())
        out.emplace_back([&level = c.level, t](double x) { return level(x, t); });
    return out;
}

std::vector<LineFn> restrict_in_t(const RegionDecomposition& regions, double x)
{
    std::vector<LineFn> out;
    out.reserve(regions.curves().size());
    for (const auto& c : regions.curves())
        out.emplace_back([&level = c.level, x](double t) { return level(x, t); });
    return out;
}

}  // namespace

double integrate_line(const LineFn& fn, double s0, double s1, std::span<const LineFn> levels,
                      std::span<const double> breaks, const QuadratureConfig& cfg)
{
    if (!(s1 > s0))
        return 0.0;
    long cells = cfg.base_cells;
    double prev = composite_estimate(fn, s0, s1, levels, breaks, cells);
    for (int level = 1; level < cfg.max_levels; ++level) {
        cells *= cfg.refinement;
        const double next = composite_estimate(fn, s0, s1, levels, breaks, cells);
        if (!std::isfinite(next))
            throw QuadratureError("quadrature produced a non-finite value", prev, next);
        if (std::abs(next - prev) <= cfg.tol * std::max(std::abs(next), std::abs(prev)) +
                                         cfg.abs_floor)
            return next;
        if (level + 1 == cfg.max_levels)
            throw QuadratureError("quadrature did not converge within " +
                                      std::to_string(cfg.max_levels) + " levels",
                                  prev, next);
        prev = next;
    }
    // max_levels == 1: no refinement check possible, accept the base estimate.
    return prev;
}

double integrate_slab(const SpaceTimeFn& fn, const IntervalDomain& domain, double t0, double t1,
                      const RegionDecomposition& regions, const QuadratureConfig& cfg)
{
    const auto& xb = regions.x_breaks();
    auto inner = [&](double t) {
        auto levels = restrict_in_x(regions, t);
        return integrate_line([&fn, t](double x) { return fn(x, t); }, domain.a(), domain.b(),
                              levels, xb, cfg);
    };
    return integrate_line(inner, t0, t1, {}, regions.t_breaks(), cfg);
}

double integrate_qt(const SpaceTimeFn& fn, const SpaceTimeBox& box,
                    const RegionDecomposition& regions, const QuadratureConfig& cfg)
{
    return integrate_slab(fn, box.domain(), 0.0, box.horizon(), regions, cfg);
}

double integrate_space_at(const SpaceTimeFn& fn, const IntervalDomain& domain, double t,
                          const RegionDecomposition& regions, const QuadratureConfig& cfg)
{
    auto levels = restrict_in_x(regions, t);
    return integrate_line([&fn, t](double x) { return fn(x, t); }, domain.a(), domain.b(), levels,
                          regions.x_breaks(), cfg);
}

double integrate_time_at(const SpaceTimeFn& fn, double x, double t0, double t1,
                         const RegionDecomposition& regions, const QuadratureConfig& cfg)
{
    auto levels = restrict_in_t(regions, x);
    return integrate_line([&fn, x](double t) { return fn(x, t); }, t0, t1, levels,
                          regions.t_breaks(), cfg);
}

double l2_norm_qt(const SpaceTimeFn& g, const SpaceTimeBox& box,
                  const RegionDecomposition& regions, const QuadratureConfig& cfg)
{
    const double sq = integrate_qt(
        [&g](double x, double t) {
            const double v = g(x, t);
            return v * v;
        },
        box, regions, cfg);
    return std::sqrt(std::max(0.0, sq));
}

double l2_norm_qt(const SpaceTimeField& g, const SpaceTimeBox& box, const QuadratureConfig& cfg)
{
    return l2_norm_qt(g.value_fn(), box, g.regions(), cfg);
}

double l2_norm_space_at(const SpaceTimeFn& g, const IntervalDomain& domain, double t,
                        const RegionDecomposition& regions, const QuadratureConfig& cfg)
{
    const double sq = integrate_space_at(
        [&g](double x, double s) {
            const double v = g(x, s);
            return v * v;
        },
        domain, t, regions, cfg);
    return std::sqrt(std::max(0.0, sq));
}

double l2_norm_space_at(const SpaceTimeField& g, const IntervalDomain& domain, double t,
                        const QuadratureConfig& cfg)
{
    return l2_norm_space_at(g.value_fn(), domain, t, g.regions(), cfg);
}

double l2_norm_space(const SpatialFn& g, const IntervalDomain& domain,
                     std::span<const double> breaks, const QuadratureConfig& cfg)
{
    const double sq = integrate_line(
        [&g](double x) {
            const double v = g(x);
            return v * v;
        },
        domain.a(), domain.b(), {}, breaks, cfg);
    return std::sqrt(std::max(0.0, sq));
}

}  // namespace obm
