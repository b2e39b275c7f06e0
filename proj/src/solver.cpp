#include "obm/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "obm/errors.hpp"

namespace obm {

void SolverConfig::validate() const
{
    if (!(relaxation > 0.0 && relaxation < 2.0))
        throw DomainError("SolverConfig: relaxation must lie in (0, 2)");
    if (!(tol > 0.0))
        throw DomainError("SolverConfig: tol must be positive");
    if (max_iterations < 1)
        throw DomainError("SolverConfig: max_iterations must be >= 1");
}

namespace {

void check_sizes(std::size_t n, std::span<const double> a, std::span<const double> b,
                 std::span<const double> c)
{
    if (a.size() != n || b.size() != n || c.size() != n)
        throw DomainError("solver: nodal arrays must match the grid size " + std::to_string(n));
}

}  // namespace

double complementarity_residual(std::span<const double> v, std::span<const double> v_prev,
                                std::span<const double> f_slab, double step,
                                std::span<const double> phi, const SpatialGrid& grid)
{
    const double ih2 = 1.0 / (grid.h() * grid.h());
    const double diag = 1.0 / step + 2.0 * ih2;
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < v.size(); ++i) {
        const double mv = v[i] / step + ih2 * (2.0 * v[i] - v[i - 1] - v[i + 1]);
        const double r = (mv - f_slab[i] - v_prev[i] / step) / diag;
        worst = std::max(worst, std::abs(std::min(r, v[i] - phi[i])));
    }
    return worst;
}

StepResult implicit_euler_step(std::span<const double> v_prev, std::span<const double> f_slab,
                               double step, std::span<const double> phi, const SpatialGrid& grid,
                               const SolverConfig& cfg, double left, double right)
{
    cfg.validate();
    if (!(step > 0.0))
        throw DomainError("implicit_euler_step: step must be positive");
    const auto n = static_cast<std::size_t>(grid.size());
    check_sizes(n, v_prev, f_slab, phi);
    for (std::size_t i = 0; i < n; ++i)
        if (v_prev[i] < phi[i] - 1e-12)
            throw DomainError("implicit_euler_step: previous state below the obstacle at node " +
                              std::to_string(i));

    const double ih2 = 1.0 / (grid.h() * grid.h());
    const double diag = 1.0 / step + 2.0 * ih2;
    std::vector<double> rhs(n);
    for (std::size_t i = 0; i < n; ++i)
        rhs[i] = f_slab[i] + v_prev[i] / step;

    StepResult out;
    out.v.assign(v_prev.begin(), v_prev.end());
    auto& v = out.v;
    v.front() = left;
    v.back() = right;
    const double w = cfg.relaxation;

    for (long it = 1; it <= cfg.max_iterations; ++it) {
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double gs = (rhs[i] + ih2 * (v[i - 1] + v[i + 1])) / diag;
            v[i] = std::max(phi[i], v[i] + w * (gs - v[i]));
        }
        out.residual = complementarity_residual(v, v_prev, f_slab, step, phi, grid);
        out.iterations = it;
        if (out.residual < cfg.tol)
            return out;
    }
    throw SolverError("projected SOR did not converge in " + std::to_string(cfg.max_iterations) +
                          " sweeps (residual " + std::to_string(out.residual) + ")",
                      out.residual);
}

std::vector<SpatialFlux> SolveResult::midpoint_fluxes() const
{
    std::vector<SpatialFlux> out;
    for (std::size_t k = 0; k + 1 < sigma.size(); ++k)
        out.push_back(midpoint_flux(sigma[k], sigma[k + 1]).field());
    return out;
}

SolveResult solve_sequence(const ProblemData& data, const TimePartition& partition, int nodes,
                           const SolverConfig& cfg, const QuadratureConfig& qcfg)
{
    cfg.validate();
    const auto& dom = data.box.domain();
    if (std::abs(partition.horizon() - data.box.horizon()) > 1e-12)
        throw DomainError("solve_sequence: partition does not end at the horizon");
    const SpatialGrid grid(dom, nodes);
    const std::vector<double> phi = sample(grid, [&](double x) { return data.phi(x); });

    std::vector<std::vector<double>> nodal;
    nodal.push_back(sample(grid, [&](double x) { return data.u0(x); }));
    for (std::size_t i = 0; i < phi.size(); ++i)
        if (nodal.front()[i] < phi[i] - 1e-12)
            throw DomainError("solve_sequence: initial datum below the obstacle at node " +
                              std::to_string(i));

    std::vector<long> iterations;
    std::vector<double> residuals;
    const auto& regions = data.f.regions();
    for (int k = 0; k < partition.slabs(); ++k) {
        const double t0 = partition.node(k);
        const double t1 = partition.node(k + 1);
        const std::vector<double> f_slab = sample(grid, [&](double x) {
            return integrate_time_at(data.f.value_fn(), x, t0, t1, regions, qcfg) / (t1 - t0);
        });
        StepResult r = implicit_euler_step(nodal.back(), f_slab, t1 - t0, phi, grid, cfg,
                                           data.boundary.left(t1), data.boundary.right(t1));
        nodal.push_back(std::move(r.v));
        iterations.push_back(r.iterations);
        residuals.push_back(r.residual);
    }

    std::vector<SpatialField> snapshots;
    std::vector<NodalFlux> sigma;
    std::vector<SpatialFlux> sigma_fields;
    for (std::size_t k = 0; k < nodal.size(); ++k) {
        snapshots.push_back(piecewise_linear_field(grid, nodal[k], "v_" + std::to_string(k)));
        sigma.push_back(average_gradients(grid, nodal[k]));
        sigma_fields.push_back(sigma.back().field());
    }
    return SolveResult{grid,
                       partition,
                       std::move(nodal),
                       IncrementalApprox{partition, std::move(snapshots)},
                       std::move(sigma),
                       FluxSequence{partition, std::move(sigma_fields)},
                       std::move(iterations),
                       std::move(residuals)};
}

}  // namespace obm
