#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "obm/domain.hpp"

namespace obm {

using SpaceTimeFn = std::function<double(double x, double t)>;
using SpatialFn = std::function<double(double x)>;

/// A curve in the (x, t) plane given as the zero set of a level function.
/// Integrands may be non-smooth across the curve; quadrature splits there.
struct BreakpointCurve {
    std::string name;
    SpaceTimeFn level;
};

/// Declares where a piecewise-defined field may lose smoothness: level-set
/// curves in (x, t), vertical lines x = const and horizontal lines t = const.
class RegionDecomposition {
public:
    RegionDecomposition& add_curve(std::string name, SpaceTimeFn level);
    RegionDecomposition& add_x_break(double x);
    RegionDecomposition& add_x_breaks(std::span<const double> xs);
    RegionDecomposition& add_t_break(double t);

    /// Union of both decompositions; curves with equal names are kept once.
    RegionDecomposition merged(const RegionDecomposition& other) const;

    const std::vector<BreakpointCurve>& curves() const noexcept { return curves_; }
    const std::vector<double>& x_breaks() const noexcept { return x_breaks_; }
    const std::vector<double>& t_breaks() const noexcept { return t_breaks_; }

private:
    std::vector<BreakpointCurve> curves_;
    std::vector<double> x_breaks_;
    std::vector<double> t_breaks_;
};

/// Scalar function on the space-time cylinder with optional analytic
/// derivatives. Accessing a missing derivative throws MissingDerivative.
class SpaceTimeField {
public:
    SpaceTimeField() = default;
    SpaceTimeField(SpaceTimeFn value, SpaceTimeFn grad_x, SpaceTimeFn d_t,
                   RegionDecomposition regions = {}, std::string name = {});

    static SpaceTimeField constant(double c);

    double operator()(double x, double t) const { return value_(x, t); }
    double value(double x, double t) const { return value_(x, t); }
    double grad_x(double x, double t) const;
    double d_t(double x, double t) const;

    bool has_grad_x() const noexcept { return static_cast<bool>(grad_x_); }
    bool has_d_t() const noexcept { return static_cast<bool>(d_t_); }

    const RegionDecomposition& regions() const noexcept { return regions_; }
    const std::string& name() const noexcept { return name_; }

    const SpaceTimeFn& value_fn() const noexcept { return value_; }

private:
    SpaceTimeFn value_;
    SpaceTimeFn grad_x_;
    SpaceTimeFn d_t_;
    RegionDecomposition regions_;
    std::string name_;
};

SpaceTimeField operator+(const SpaceTimeField& lhs, const SpaceTimeField& rhs);
SpaceTimeField operator-(const SpaceTimeField& lhs, const SpaceTimeField& rhs);
SpaceTimeField operator*(double s, const SpaceTimeField& field);

/// Flux tau(x, t) (one spatial component) with its spatial divergence.
class FluxField {
public:
    FluxField() = default;
    FluxField(SpaceTimeFn value, SpaceTimeFn div, RegionDecomposition regions = {},
              std::string name = {});

    static FluxField zero();

    double operator()(double x, double t) const { return value_(x, t); }
    double value(double x, double t) const { return value_(x, t); }
    double div(double x, double t) const;
    bool has_div() const noexcept { return static_cast<bool>(div_); }

    const RegionDecomposition& regions() const noexcept { return regions_; }
    const std::string& name() const noexcept { return name_; }

private:
    SpaceTimeFn value_;
    SpaceTimeFn div_;
    RegionDecomposition regions_;
    std::string name_;
};

/// Function of x alone (initial datum, obstacle, time-slice of an approximation).
class SpatialField {
public:
    SpatialField() = default;
    SpatialField(SpatialFn value, SpatialFn grad, std::vector<double> breaks = {},
                 std::string name = {});

    static SpatialField constant(double c);

    double operator()(double x) const { return value_(x); }
    double value(double x) const { return value_(x); }
    double grad(double x) const;
    bool has_grad() const noexcept { return static_cast<bool>(grad_); }

    const std::vector<double>& breaks() const noexcept { return breaks_; }
    const std::string& name() const noexcept { return name_; }

    /// Constant-in-time extension, d_t = 0.
    SpaceTimeField as_space_time() const;

private:
    SpatialFn value_;
    SpatialFn grad_;
    std::vector<double> breaks_;
    std::string name_;
};

/// Spatial flux sigma(x) with divergence.
class SpatialFlux {
public:
    SpatialFlux() = default;
    SpatialFlux(SpatialFn value, SpatialFn div, std::vector<double> breaks = {},
                std::string name = {});

    static SpatialFlux zero();

    double operator()(double x) const { return value_(x); }
    double value(double x) const { return value_(x); }
    double div(double x) const;

    const std::vector<double>& breaks() const noexcept { return breaks_; }

    /// Constant-in-time extension.
    FluxField as_flux_field() const;

private:
    SpatialFn value_;
    SpatialFn div_;
    std::vector<double> breaks_;
    std::string name_;
};

/// Uniform nodes a = x_0 < ... < x_{m-1} = b.
class SpatialGrid {
public:
    SpatialGrid(IntervalDomain domain, int nodes);

    const IntervalDomain& domain() const noexcept { return domain_; }
    int size() const noexcept { return nodes_; }
    int cells() const noexcept { return nodes_ - 1; }
    double h() const noexcept { return h_; }
    double node(int i) const noexcept;
    std::vector<double> nodes() const;

    /// Index of the cell containing x (clamped to the grid).
    int cell_of(double x) const noexcept;

    bool operator==(const SpatialGrid& other) const noexcept;

private:
    IntervalDomain domain_;
    int nodes_;
    double h_;
};

/// Continuous piecewise-linear interpolant of nodal values; gradient is the
/// cellwise slope, breakpoints are the grid nodes.
SpatialField piecewise_linear_field(const SpatialGrid& grid, std::vector<double> values,
                                    std::string name = {});

/// Continuous piecewise-linear flux from nodal values; divergence is the
/// cellwise slope.
SpatialFlux piecewise_linear_flux(const SpatialGrid& grid, std::vector<double> values,
                                  std::string name = {});

/// Samples a spatial function at the grid nodes.
std::vector<double> sample(const SpatialGrid& grid, const SpatialFn& fn);

}  // namespace obm
