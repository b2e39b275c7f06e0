#include "obm/incremental.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

#include "obm/errors.hpp"

namespace obm {

TimePartition::TimePartition(std::vector<double> nodes) : nodes_(std::move(nodes))
{
    if (nodes_.size() < 2)
        throw DomainError("TimePartition: need at least two nodes");
    if (nodes_.front() != 0.0)
        throw DomainError("TimePartition: first node must be 0");
    for (std::size_t k = 0; k + 1 < nodes_.size(); ++k)
        if (!(nodes_[k + 1] > nodes_[k]))
            throw DomainError("TimePartition: nodes must be strictly increasing");
}

TimePartition TimePartition::uniform(double horizon, int slabs)
{
    if (slabs < 1 || !(horizon > 0.0))
        throw DomainError("TimePartition::uniform: need slabs >= 1 and horizon > 0");
    std::vector<double> nodes(static_cast<std::size_t>(slabs) + 1);
    for (int k = 0; k <= slabs; ++k)
        nodes[static_cast<std::size_t>(k)] = horizon * k / slabs;
    nodes.back() = horizon;
    return TimePartition(std::move(nodes));
}

double TimePartition::max_step() const noexcept
{
    double m = 0.0;
    for (std::size_t k = 0; k + 1 < nodes_.size(); ++k)
        m = std::max(m, nodes_[k + 1] - nodes_[k]);
    return m;
}

int TimePartition::slab_of(double t) const noexcept
{
    const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), t);
    const auto k = static_cast<int>(it - nodes_.begin()) - 1;
    return std::clamp(k, 0, slabs() - 1);
}

void IncrementalApprox::validate(const IntervalDomain& domain, const SpatialField& phi, double tol,
                                 int samples) const
{
    if (v.size() != partition.nodes().size())
        throw DomainError("IncrementalApprox: " + std::to_string(v.size()) + " snapshots for " +
                          std::to_string(partition.nodes().size()) + " time nodes");
    for (std::size_t k = 0; k < v.size(); ++k)
        for (int i = 0; i <= samples; ++i) {
            const double x = domain.a() + domain.length() * i / samples;
            if (v[k](x) < phi(x) - tol)
                throw InadmissibleError("snapshot " + std::to_string(k) +
                                            " violates the obstacle at x=" + std::to_string(x),
                                        x, partition.node(static_cast<int>(k)));
        }
}

namespace {

std::vector<double> merged_breaks(const std::vector<std::vector<double>>& lists)
{
    std::vector<double> out;
    for (const auto& l : lists)
        out.insert(out.end(), l.begin(), l.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

template <class Seq, class Get>
std::vector<double> union_breaks(const Seq& seq, Get get)
{
    std::vector<std::vector<double>> lists;
    for (const auto& item : seq)
        lists.push_back(get(item));
    return merged_breaks(lists);
}

RegionDecomposition partition_regions(const TimePartition& p, std::span<const double> xbreaks)
{
    RegionDecomposition r;
    r.add_x_breaks(xbreaks);
    for (double t : p.nodes())
        r.add_t_break(t);
    return r;
}

}  // namespace

SpaceTimeField interpolate_in_time(const IncrementalApprox& approx)
{
    if (approx.v.size() != approx.partition.nodes().size())
        throw DomainError("interpolate_in_time: snapshot count does not match the partition");
    auto data = std::make_shared<const IncrementalApprox>(approx);
    auto value = [data](double x, double t) {
        const int k = data->partition.slab_of(t);
        const double s = (t - data->partition.node(k)) / data->partition.step(k);
        const auto& a = data->v[static_cast<std::size_t>(k)];
        const auto& b = data->v[static_cast<std::size_t>(k) + 1];
        return a(x) + (b(x) - a(x)) * s;
    };
    auto grad = [data](double x, double t) {
        const int k = data->partition.slab_of(t);
        const double s = (t - data->partition.node(k)) / data->partition.step(k);
        const auto& a = data->v[static_cast<std::size_t>(k)];
        const auto& b = data->v[static_cast<std::size_t>(k) + 1];
        return a.grad(x) + (b.grad(x) - a.grad(x)) * s;
    };
    auto dt = [data](double x, double t) {
        const int k = data->partition.slab_of(t);
        const auto& a = data->v[static_cast<std::size_t>(k)];
        const auto& b = data->v[static_cast<std::size_t>(k) + 1];
        return (b(x) - a(x)) / data->partition.step(k);
    };
    const auto xb = union_breaks(approx.v, [](const SpatialField& f) { return f.breaks(); });
    return SpaceTimeField(value, grad, dt, partition_regions(approx.partition, xb), "v_interp");
}

FluxField interpolate_flux_in_time(const FluxSequence& fluxes)
{
    if (fluxes.sigma.size() != fluxes.partition.nodes().size())
        throw DomainError("interpolate_flux_in_time: flux count does not match the partition");
    auto data = std::make_shared<const FluxSequence>(fluxes);
    auto value = [data](double x, double t) {
        const int k = data->partition.slab_of(t);
        const double s = (t - data->partition.node(k)) / data->partition.step(k);
        const auto& a = data->sigma[static_cast<std::size_t>(k)];
        const auto& b = data->sigma[static_cast<std::size_t>(k) + 1];
        return a(x) + (b(x) - a(x)) * s;
    };
    auto div = [data](double x, double t) {
        const int k = data->partition.slab_of(t);
        const double s = (t - data->partition.node(k)) / data->partition.step(k);
        const auto& a = data->sigma[static_cast<std::size_t>(k)];
        const auto& b = data->sigma[static_cast<std::size_t>(k) + 1];
        return a.div(x) + (b.div(x) - a.div(x)) * s;
    };
    const auto xb = union_breaks(fluxes.sigma, [](const SpatialFlux& f) { return f.breaks(); });
    return FluxField(value, div, partition_regions(fluxes.partition, xb), "tau_interp");
}

FluxField slab_constant_flux(const TimePartition& partition, const std::vector<SpatialFlux>& taus)
{
    if (taus.size() != static_cast<std::size_t>(partition.slabs()))
        throw DomainError("slab_constant_flux: " + std::to_string(taus.size()) +
                          " fluxes for " + std::to_string(partition.slabs()) + " slabs");
    auto p = std::make_shared<const TimePartition>(partition);
    auto fl = std::make_shared<const std::vector<SpatialFlux>>(taus);
    auto value = [p, fl](double x, double t) {
        return (*fl)[static_cast<std::size_t>(p->slab_of(t))](x);
    };
    auto div = [p, fl](double x, double t) {
        return (*fl)[static_cast<std::size_t>(p->slab_of(t))].div(x);
    };
    const auto xb = union_breaks(taus, [](const SpatialFlux& f) { return f.breaks(); });
    return FluxField(value, div, partition_regions(partition, xb), "tau_slab");
}

SpaceTimeField boundary_lifted(const SpaceTimeField& v, const TimePartition& partition,
                               const IntervalDomain& domain, const BoundarySchedule& schedule,
                               double layer)
{
    if (!(layer > 0.0) || 2.0 * layer > domain.length())
        throw DomainError("boundary_lifted: layer must be in (0, |Omega|/2]");
    struct Gap {
        std::function<double(double)> g;
        std::function<double(double)> g_dt;
        TimePartition p;
        double value(double t) const
        {
            const int k = p.slab_of(t);
            const double s = (t - p.node(k)) / p.step(k);
            return g(t) - (g(p.node(k)) * (1.0 - s) + g(p.node(k + 1)) * s);
        }
        double dt(double t) const
        {
            const int k = p.slab_of(t);
            return g_dt(t) - (g(p.node(k + 1)) - g(p.node(k))) / p.step(k);
        }
    };
    auto left = std::make_shared<const Gap>(Gap{schedule.left, schedule.left_dt, partition});
    auto right = std::make_shared<const Gap>(Gap{schedule.right, schedule.right_dt, partition});
    const double a = domain.a();
    const double b = domain.b();
    auto psi_l = [a, layer](double x) { return std::max(0.0, 1.0 - (x - a) / layer); };
    auto psi_r = [b, layer](double x) { return std::max(0.0, 1.0 - (b - x) / layer); };
    auto dpsi_l = [a, layer](double x) { return x < a + layer ? -1.0 / layer : 0.0; };
    auto dpsi_r = [b, layer](double x) { return x > b - layer ? 1.0 / layer : 0.0; };

    SpaceTimeField lift(
        [=](double x, double t) { return left->value(t) * psi_l(x) + right->value(t) * psi_r(x); },
        [=](double x, double t) { return left->value(t) * dpsi_l(x) + right->value(t) * dpsi_r(x); },
        [=](double x, double t) { return left->dt(t) * psi_l(x) + right->dt(t) * psi_r(x); },
        partition_regions(partition, std::vector<double>{a + layer, b - layer}), "lift");
    return v + lift;
}

SpatialField averaged_source(const SpaceTimeField& f, const TimePartition& partition, int k,
                             const QuadratureConfig& cfg)
{
    const double t0 = partition.node(k);
    const double t1 = partition.node(k + 1);
    auto regions = std::make_shared<const RegionDecomposition>(f.regions());
    auto value = [f, regions, t0, t1, cfg](double x) {
        return integrate_time_at(f.value_fn(), x, t0, t1, *regions, cfg) / (t1 - t0);
    };
    return SpatialField(value, {}, f.regions().x_breaks(), "<f>_" + std::to_string(k));
}

namespace {

// f~(x, t) on slab k from the slab mean of f at x.
double affine_value(const SpaceTimeField& f, double x, double t, double t0, double t1, double mean)
{
    const double f0 = f(x, t0);
    const double f1 = f(x, t1);
    const double s = (t - t0) / (t1 - t0);
    return f0 + (f1 - f0) * s + mean - 0.5 * (f0 + f1);
}

}  // namespace

SpaceTimeField affine_source(const SpaceTimeField& f, const TimePartition& partition, int k,
                             const QuadratureConfig& cfg)
{
    const double t0 = partition.node(k);
    const double t1 = partition.node(k + 1);
    const SpatialField mean = averaged_source(f, partition, k, cfg);
    auto value = [f, mean, t0, t1](double x, double t) {
        return affine_value(f, x, t, t0, t1, mean(x));
    };
    RegionDecomposition regions;
    regions.add_x_breaks(f.regions().x_breaks());
    return SpaceTimeField(value, {}, {}, std::move(regions), "f_affine_" + std::to_string(k));
}

namespace {

std::vector<double> breaks_of(std::initializer_list<const std::vector<double>*> lists)
{
    std::vector<std::vector<double>> all;
    for (const auto* l : lists)
        all.push_back(*l);
    return merged_breaks(all);
}

double sq_norm(const SpatialFn& g, const IntervalDomain& domain, std::span<const double> breaks,
               std::span<const LineFn> levels, const QuadratureConfig& cfg)
{
    return integrate_line(
        [&g](double x) {
            const double v = g(x);
            return v * v;
        },
        domain.a(), domain.b(), levels, breaks, cfg);
}

// Curves of f frozen at the slab ends: f(., t_k) and f(., t_{k+1}) jump there.
void add_endpoint_curves(std::vector<LineFn>& levels, const RegionDecomposition& regions,
                         double t0, double t1)
{
    for (const auto& c : regions.curves())
        for (double t : {t0, t1})
            levels.emplace_back([&level = c.level, t](double x) { return level(x, t); });
}

// ||f - f~||^2_{Q_k}, integrating in t first at each x so that the slab mean
// is computed once per x.
double source_sq(const SpaceTimeField& f, double t0, double t1, const IntervalDomain& domain,
                 bool affine, const QuadratureConfig& cfg)
{
    const auto& regions = f.regions();
    auto inner = [&](double x) {
        const double mean =
            integrate_time_at(f.value_fn(), x, t0, t1, regions, cfg) / (t1 - t0);
        auto gap = [&](double, double t) {
            const double approx = affine ? affine_value(f, x, t, t0, t1, mean) : mean;
            const double d = f(x, t) - approx;
            return d * d;
        };
        return integrate_time_at(gap, x, t0, t1, regions, cfg);
    };
    std::vector<LineFn> levels;
    add_endpoint_curves(levels, regions, t0, t1);
    return integrate_line(inner, domain.a(), domain.b(), levels, regions.x_breaks(), cfg);
}

void finish(IncrementalReport& rep)
{
    double sum = 0.0;
    double src = 0.0;
    for (auto& s : rep.slabs) {
        const double term = s.flux_norm + rep.friedrichs * (s.residual_norm + s.source_norm);
        s.contribution = term * term;
        sum += s.contribution;
        src += s.source_norm * s.source_norm;
    }
    rep.source_sq = src;
    rep.total = rep.initial_sq + rep.alpha * sum;
}

void check_inputs(const IncrementalInputs& in)
{
    check_alpha(in.alpha);
    if (!(in.friedrichs > 0.0))
        throw DomainError("incremental majorant: C_F must be positive");
    if (in.approx.v.size() != in.approx.partition.nodes().size())
        throw DomainError("incremental majorant: snapshot count does not match the partition");
}

double initial_sq(const IncrementalInputs& in, const QuadratureConfig& cfg)
{
    const auto& v0 = in.approx.v.front();
    const auto br = breaks_of({&v0.breaks(), &in.u0.breaks()});
    return sq_norm([&](double x) { return in.u0(x) - v0(x); }, in.domain, br, {}, cfg);
}

}  // namespace

double d1(const SpatialField& vk, const SpatialField& vk1, const IntervalDomain& domain,
          const QuadratureConfig& cfg)
{
    const auto br = breaks_of({&vk.breaks(), &vk1.breaks()});
    return sq_norm([&](double x) { return vk1.grad(x) - vk.grad(x); }, domain, br, {}, cfg) / 12.0;
}

double d2(const SpatialField& vk, const SpatialField& vk1, const SpatialFlux& tau_k,
          const IntervalDomain& domain, const QuadratureConfig& cfg)
{
    const auto br = breaks_of({&vk.breaks(), &vk1.breaks(), &tau_k.breaks()});
    return sq_norm([&](double x) { return 0.5 * (vk.grad(x) + vk1.grad(x)) - tau_k(x); }, domain,
                   br, {}, cfg);
}

IncrementalReport simple_incremental_majorant(const IncrementalInputs& in,
                                              const std::vector<SpatialFlux>& slab_fluxes,
                                              const QuadratureConfig& cfg)
{
    check_inputs(in);
    const auto& p = in.approx.partition;
    if (slab_fluxes.size() != static_cast<std::size_t>(p.slabs()))
        throw DomainError("simple_incremental_majorant: " + std::to_string(slab_fluxes.size()) +
                          " fluxes for " + std::to_string(p.slabs()) + " slabs");

    IncrementalReport rep;
    rep.alpha = in.alpha;
    rep.friedrichs = in.friedrichs;
    rep.initial_sq = initial_sq(in, cfg);

    const double tol = in.classifier.tol();
    for (int k = 0; k < p.slabs(); ++k) {
        const auto& vk = in.approx.v[static_cast<std::size_t>(k)];
        const auto& vk1 = in.approx.v[static_cast<std::size_t>(k) + 1];
        const auto& tau = slab_fluxes[static_cast<std::size_t>(k)];
        const double step = p.step(k);
        const double t0 = p.node(k);
        const double t1 = p.node(k + 1);

        SlabTerms s;
        s.step = step;
        s.d1 = d1(vk, vk1, in.domain, cfg);
        s.d2 = d2(vk, vk1, tau, in.domain, cfg);
        s.flux_norm = std::sqrt(step * (s.d1 + s.d2));

        const auto& regions = in.f.regions();
        auto mean = [&](double x) {
            return integrate_time_at(in.f.value_fn(), x, t0, t1, regions, cfg) / step;
        };
        auto residual = [&](double x) { return mean(x) + tau.div(x) - (vk1(x) - vk(x)) / step; };
        auto contact = [&](double x) {
            return in.classifier.in_contact(vk(x), in.phi(x)) &&
                   in.classifier.in_contact(vk1(x), in.phi(x));
        };
        auto filtered = [&](double x) {
            const double r = residual(x);
            return contact(x) ? positive_part(r) : r;
        };
        std::vector<LineFn> levels = {
            [&](double x) { return vk(x) - in.phi(x) - tol; },
            [&](double x) { return vk1(x) - in.phi(x) - tol; },
        };
        add_endpoint_curves(levels, regions, t0, t1);
        const auto br = breaks_of({&vk.breaks(), &vk1.breaks(), &tau.breaks(),
                                   &in.phi.breaks(), &regions.x_breaks()});
        const double fsq = sq_norm(filtered, in.domain, br, levels, cfg);
        s.residual_norm = std::sqrt(step * fsq);
        s.source_norm = std::sqrt(std::max(0.0, source_sq(in.f, t0, t1, in.domain, false, cfg)));
        rep.slabs.push_back(s);
    }
    finish(rep);
    return rep;
}

double affine_sq_integral(double sum_sq, double diff_sq, double step)
{
    return 0.25 * step * (sum_sq + diff_sq / 3.0);
}

IntervalResiduals interval_residuals(const SpatialField& vk, const SpatialField& vk1,
                                     const SpatialFlux& sigma_k, const SpatialFlux& sigma_k1,
                                     const SpatialFn& f_low, const SpatialFn& f_high, double step,
                                     const SpatialField& phi,
                                     const CoincidenceClassifier& classifier, double tol_omega)
{
    if (!(step > 0.0))
        throw DomainError("interval_residuals: step must be positive");
    auto low = [=](double x) { return f_low(x) + sigma_k.div(x) - (vk1(x) - vk(x)) / step; };
    auto high = [=](double x) { return f_high(x) + sigma_k1.div(x) - (vk1(x) - vk(x)) / step; };
    auto contact = [=](double x) {
        return classifier.in_contact(vk(x), phi(x)) && classifier.in_contact(vk1(x), phi(x));
    };
    auto br = breaks_of({&vk.breaks(), &vk1.breaks(), &sigma_k.breaks(), &sigma_k1.breaks()});

    IntervalResiduals out;
    out.r_low = SpatialField(low, {}, br, "R_low");
    out.r_high = SpatialField(high, {}, br, "R_high");
    out.omega1 = [=](double x) { return contact(x) && low(x) <= tol_omega; };
    out.omega2 = [=](double x) { return contact(x) && high(x) <= tol_omega; };
    out.omega = [=](double x) { return contact(x) && low(x) <= tol_omega && high(x) <= tol_omega; };
    return out;
}

IncrementalReport advanced_incremental_majorant(const IncrementalInputs& in,
                                                const FluxSequence& fluxes,
                                                const QuadratureConfig& cfg, bool filter_omega)
{
    check_inputs(in);
    const auto& p = in.approx.partition;
    if (fluxes.sigma.size() != p.nodes().size())
        throw DomainError("advanced_incremental_majorant: " +
                          std::to_string(fluxes.sigma.size()) + " fluxes for " +
                          std::to_string(p.nodes().size()) + " time nodes");

    IncrementalReport rep;
    rep.alpha = in.alpha;
    rep.friedrichs = in.friedrichs;
    rep.initial_sq = initial_sq(in, cfg);

    const double tol = in.classifier.tol();
    const auto& regions = in.f.regions();
    for (int k = 0; k < p.slabs(); ++k) {
        const auto& vk = in.approx.v[static_cast<std::size_t>(k)];
        const auto& vk1 = in.approx.v[static_cast<std::size_t>(k) + 1];
        const auto& sk = fluxes.sigma[static_cast<std::size_t>(k)];
        const auto& sk1 = fluxes.sigma[static_cast<std::size_t>(k) + 1];
        const double step = p.step(k);
        const double t0 = p.node(k);
        const double t1 = p.node(k + 1);

        SlabTerms s;
        s.step = step;
        const auto br = breaks_of({&vk.breaks(), &vk1.breaks(), &sk.breaks(), &sk1.breaks(),
                                   &in.phi.breaks(), &regions.x_breaks()});

        auto dk = [&](double x) { return sk(x) - vk.grad(x); };
        auto dk1 = [&](double x) { return sk1(x) - vk1.grad(x); };
        const double dd = sq_norm([&](double x) { return dk1(x) - dk(x); }, in.domain, br, {}, cfg);
        const double ds = sq_norm([&](double x) { return dk1(x) + dk(x); }, in.domain, br, {}, cfg);
        s.flux_norm = std::sqrt(std::max(0.0, affine_sq_integral(ds, dd, step)));

        // Residuals of the affine source: endpoint values f_k + zeta_k, f_{k+1} + zeta_k.
        auto zeta = [&](double x) {
            const double mean =
                integrate_time_at(in.f.value_fn(), x, t0, t1, regions, cfg) / step;
            return mean - 0.5 * (in.f(x, t0) + in.f(x, t1));
        };
        auto f_low = [&](double x) { return in.f(x, t0) + zeta(x); };
        auto f_high = [&](double x) { return in.f(x, t1) + zeta(x); };
        const IntervalResiduals res =
            interval_residuals(vk, vk1, sk, sk1, f_low, f_high, step, in.phi, in.classifier);

        // Differences do not involve zeta; evaluate them without the time integral.
        auto diff = [&](double x) {
            return in.f(x, t1) - in.f(x, t0) + sk1.div(x) - sk.div(x);
        };
        auto keep = [&](double x) { return !filter_omega || !res.omega(x); };
        std::vector<LineFn> levels = {
            [&](double x) { return vk(x) - in.phi(x) - tol; },
            [&](double x) { return vk1(x) - in.phi(x) - tol; },
        };
        add_endpoint_curves(levels, regions, t0, t1);
        if (filter_omega) {
            levels.emplace_back([&](double x) { return res.r_low(x) - 1e-10; });
            levels.emplace_back([&](double x) { return res.r_high(x) - 1e-10; });
        }
        const double rd = sq_norm([&](double x) { return keep(x) ? diff(x) : 0.0; }, in.domain,
                                  br, levels, cfg);
        const double rs = sq_norm(
            [&](double x) { return keep(x) ? res.r_low(x) + res.r_high(x) : 0.0; }, in.domain, br,
            levels, cfg);
        s.residual_norm = std::sqrt(std::max(0.0, affine_sq_integral(rs, rd, step)));
        s.source_norm = std::sqrt(std::max(0.0, source_sq(in.f, t0, t1, in.domain, true, cfg)));
        rep.slabs.push_back(s);
    }
    finish(rep);
    return rep;
}

NodalFlux average_gradients(const SpatialGrid& grid, std::span<const double> values)
{
    if (values.size() != static_cast<std::size_t>(grid.size()))
        throw DomainError("average_gradients: value count does not match the grid");
    if (grid.cells() < 2)
        throw DomainError("average_gradients: need at least two cells");
    const auto n = values.size();
    std::vector<double> slope(n - 1);
    for (std::size_t c = 0; c + 1 < n; ++c)
        slope[c] = (values[c + 1] - values[c]) / grid.h();
    std::vector<double> sigma(n);
    sigma.front() = slope.front();
    sigma.back() = slope.back();
    for (std::size_t i = 1; i + 1 < n; ++i)
        sigma[i] = 0.5 * (slope[i - 1] + slope[i]);
    return {grid, std::move(sigma)};
}

NodalFlux midpoint_flux(const NodalFlux& sigma_k, const NodalFlux& sigma_k1)
{
    if (!(sigma_k.grid == sigma_k1.grid) || sigma_k.values.size() != sigma_k1.values.size())
        throw DomainError("midpoint_flux: fluxes live on different grids");
    std::vector<double> out(sigma_k.values.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = 0.5 * (sigma_k.values[i] + sigma_k1.values[i]);
    return {sigma_k.grid, std::move(out)};
}

SpatialFlux midpoint_flux(const SpatialFlux& sigma_k, const SpatialFlux& sigma_k1)
{
    auto br = breaks_of({&sigma_k.breaks(), &sigma_k1.breaks()});
    return SpatialFlux([=](double x) { return 0.5 * (sigma_k(x) + sigma_k1(x)); },
                       [=](double x) { return 0.5 * (sigma_k.div(x) + sigma_k1.div(x)); },
                       std::move(br), "tau_mid");
}

}  // namespace obm
