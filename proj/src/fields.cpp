#include "obm/fields.hpp"

#include <algorithm>
#include <cmath>

#include "obm/errors.hpp"

namespace obm {

RegionDecomposition& RegionDecomposition::add_curve(std::string name, SpaceTimeFn level)
{
    auto same = [&](const BreakpointCurve& c) { return c.name == name; };
    if (name.empty() || std::none_of(curves_.begin(), curves_.end(), same))
        curves_.push_back({std::move(name), std::move(level)});
    return *this;
}

RegionDecomposition& RegionDecomposition::add_x_break(double x)
{
    if (std::find(x_breaks_.begin(), x_breaks_.end(), x) == x_breaks_.end())
        x_breaks_.push_back(x);
    return *this;
}

RegionDecomposition& RegionDecomposition::add_x_breaks(std::span<const double> xs)
{
    if (x_breaks_.empty()) {
        x_breaks_.assign(xs.begin(), xs.end());
        return *this;
    }
    x_breaks_.insert(x_breaks_.end(), xs.begin(), xs.end());
    std::sort(x_breaks_.begin(), x_breaks_.end());
    x_breaks_.erase(std::unique(x_breaks_.begin(), x_breaks_.end()), x_breaks_.end());
    return *this;
}

RegionDecomposition& RegionDecomposition::add_t_break(double t)
{
    if (std::find(t_breaks_.begin(), t_breaks_.end(), t) == t_breaks_.end())
        t_breaks_.push_back(t);
    return *this;
}

RegionDecomposition RegionDecomposition::merged(const RegionDecomposition& other) const
{
    RegionDecomposition out = *this;
    for (const auto& c : other.curves_)
        out.add_curve(c.name, c.level);
    out.add_x_breaks(other.x_breaks_);
    for (double t : other.t_breaks_)
        out.add_t_break(t);
    return out;
}

SpaceTimeField::SpaceTimeField(SpaceTimeFn value, SpaceTimeFn grad_x, SpaceTimeFn d_t,
                               RegionDecomposition regions, std::string name)
    : value_(std::move(value)),
      grad_x_(std::move(grad_x)),
      d_t_(std::move(d_t)),
      regions_(std::move(regions)),
      name_(std::move(name))
{
    if (!value_)
        throw DomainError("SpaceTimeField: value function is required");
}

SpaceTimeField SpaceTimeField::constant(double c)
{
    auto zero = [](double, double) { return 0.0; };
    return SpaceTimeField([c](double, double) { return c; }, zero, zero, {}, "const");
}

double SpaceTimeField::grad_x(double x, double t) const
{
    if (!grad_x_)
        throw MissingDerivative("field '" + name_ + "' has no spatial gradient");
    return grad_x_(x, t);
}

double SpaceTimeField::d_t(double x, double t) const
{
    if (!d_t_)
        throw MissingDerivative("field '" + name_ + "' has no time derivative");
    return d_t_(x, t);
}

namespace {

SpaceTimeField combine(const SpaceTimeField& lhs, const SpaceTimeField& rhs, double sign)
{
    auto value = [lhs, rhs, sign](double x, double t) { return lhs(x, t) + sign * rhs(x, t); };
    SpaceTimeFn grad;
    if (lhs.has_grad_x() && rhs.has_grad_x())
        grad = [lhs, rhs, sign](double x, double t) {
            return lhs.grad_x(x, t) + sign * rhs.grad_x(x, t);
        };
    SpaceTimeFn dt;
    if (lhs.has_d_t() && rhs.has_d_t())
        dt = [lhs, rhs, sign](double x, double t) { return lhs.d_t(x, t) + sign * rhs.d_t(x, t); };
    return SpaceTimeField(value, grad, dt, lhs.regions().merged(rhs.regions()),
                          lhs.name() + (sign > 0 ? "+" : "-") + rhs.name());
}

}  // namespace

SpaceTimeField operator+(const SpaceTimeField& lhs, const SpaceTimeField& rhs)
{
    return combine(lhs, rhs, 1.0);
}

SpaceTimeField operator-(const SpaceTimeField& lhs, const SpaceTimeField& rhs)
{
    return combine(lhs, rhs, -1.0);
}

SpaceTimeField operator*(double s, const SpaceTimeField& field)
{
    auto value = [s, field](double x, double t) { return s * field(x, t); };
    SpaceTimeFn grad;
    if (field.has_grad_x())
        grad = [s, field](double x, double t) { return s * field.grad_x(x, t); };
    SpaceTimeFn dt;
    if (field.has_d_t())
        dt = [s, field](double x, double t) { return s * field.d_t(x, t); };
    return SpaceTimeField(value, grad, dt, field.regions(), field.name());
}

FluxField::FluxField(SpaceTimeFn value, SpaceTimeFn div, RegionDecomposition regions,
                     std::string name)
    : value_(std::move(value)),
      div_(std::move(div)),
      regions_(std::move(regions)),
      name_(std::move(name))
{
    if (!value_)
        throw DomainError("FluxField: value function is required");
}

FluxField FluxField::zero()
{
    auto zero = [](double, double) { return 0.0; };
    return FluxField(zero, zero, {}, "zero");
}

double FluxField::div(double x, double t) const
{
    if (!div_)
        throw MissingDerivative("flux '" + name_ + "' has no divergence");
    return div_(x, t);
}

SpatialField::SpatialField(SpatialFn value, SpatialFn grad, std::vector<double> breaks,
                           std::string name)
    : value_(std::move(value)),
      grad_(std::move(grad)),
      breaks_(std::move(breaks)),
      name_(std::move(name))
{
    if (!value_)
        throw DomainError("SpatialField: value function is required");
}

SpatialField SpatialField::constant(double c)
{
    return SpatialField([c](double) { return c; }, [](double) { return 0.0; }, {}, "const");
}

double SpatialField::grad(double x) const
{
    if (!grad_)
        throw MissingDerivative("spatial field '" + name_ + "' has no gradient");
    return grad_(x);
}

SpaceTimeField SpatialField::as_space_time() const
{
    RegionDecomposition regions;
    regions.add_x_breaks(breaks_);
    SpaceTimeFn grad;
    if (grad_)
        grad = [g = grad_](double x, double) { return g(x); };
    return SpaceTimeField([v = value_](double x, double) { return v(x); }, grad,
                          [](double, double) { return 0.0; }, std::move(regions), name_);
}

SpatialFlux::SpatialFlux(SpatialFn value, SpatialFn div, std::vector<double> breaks,
                         std::string name)
    : value_(std::move(value)),
      div_(std::move(div)),
      breaks_(std::move(breaks)),
      name_(std::move(name))
{
    if (!value_)
        throw DomainError("SpatialFlux: value function is required");
}

SpatialFlux SpatialFlux::zero()
{
    return SpatialFlux([](double) { return 0.0; }, [](double) { return 0.0; }, {}, "zero");
}

double SpatialFlux::div(double x) const
{
    if (!div_)
        throw MissingDerivative("spatial flux '" + name_ + "' has no divergence");
    return div_(x);
}

FluxField SpatialFlux::as_flux_field() const
{
    RegionDecomposition regions;
    regions.add_x_breaks(breaks_);
    SpaceTimeFn div;
    if (div_)
        div = [d = div_](double x, double) { return d(x); };
    return FluxField([v = value_](double x, double) { return v(x); }, div, std::move(regions),
                     name_);
}

SpatialGrid::SpatialGrid(IntervalDomain domain, int nodes)
    : domain_(domain), nodes_(nodes), h_(0.0)
{
    if (nodes < 3)
        throw DomainError("SpatialGrid: need at least 3 nodes, got " + std::to_string(nodes));
    h_ = domain.length() / (nodes - 1);
}

double SpatialGrid::node(int i) const noexcept
{
    if (i == nodes_ - 1)
        return domain_.b();
    return domain_.a() + i * h_;
}

std::vector<double> SpatialGrid::nodes() const
{
    std::vector<double> out(static_cast<std::size_t>(nodes_));
    for (int i = 0; i < nodes_; ++i)
        out[static_cast<std::size_t>(i)] = node(i);
    return out;
}

int SpatialGrid::cell_of(double x) const noexcept
{
    const int c = static_cast<int>(std::floor((x - domain_.a()) / h_));
    return std::clamp(c, 0, nodes_ - 2);
}

bool SpatialGrid::operator==(const SpatialGrid& other) const noexcept
{
    return nodes_ == other.nodes_ && domain_.a() == other.domain_.a() &&
           domain_.b() == other.domain_.b();
}

namespace {

struct PiecewiseLinear {
    SpatialGrid grid;
    std::shared_ptr<const std::vector<double>> values;

    double value(double x) const
    {
        const int c = grid.cell_of(x);
        const double x0 = grid.node(c);
        const auto& v = *values;
        const double s = (x - x0) / grid.h();
        return v[static_cast<std::size_t>(c)] * (1.0 - s) + v[static_cast<std::size_t>(c) + 1] * s;
    }

    double slope(double x) const
    {
        const int c = grid.cell_of(x);
        const auto& v = *values;
        return (v[static_cast<std::size_t>(c) + 1] - v[static_cast<std::size_t>(c)]) / grid.h();
    }
};

PiecewiseLinear make_pl(const SpatialGrid& grid, std::vector<double> values)
{
    if (values.size() != static_cast<std::size_t>(grid.size()))
        throw DomainError("piecewise-linear field: " + std::to_string(values.size()) +
                          " values for a grid of " + std::to_string(grid.size()) + " nodes");
    return {grid, std::make_shared<const std::vector<double>>(std::move(values))};
}

}  // namespace

SpatialField piecewise_linear_field(const SpatialGrid& grid, std::vector<double> values,
                                    std::string name)
{
    auto pl = make_pl(grid, std::move(values));
    return SpatialField([pl](double x) { return pl.value(x); },
                        [pl](double x) { return pl.slope(x); }, grid.nodes(), std::move(name));
}

SpatialFlux piecewise_linear_flux(const SpatialGrid& grid, std::vector<double> values,
                                  std::string name)
{
    auto pl = make_pl(grid, std::move(values));
    return SpatialFlux([pl](double x) { return pl.value(x); },
                       [pl](double x) { return pl.slope(x); }, grid.nodes(), std::move(name));
}

std::vector<double> sample(const SpatialGrid& grid, const SpatialFn& fn)
{
    std::vector<double> out(static_cast<std::size_t>(grid.size()));
    for (int i = 0; i < grid.size(); ++i)
        out[static_cast<std::size_t>(i)] = fn(grid.node(i));
    return out;
}

}  // namespace obm
