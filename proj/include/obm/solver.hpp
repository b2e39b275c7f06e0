#pragma once

#include <span>
#include <vector>

#include "obm/fields.hpp"
#include "obm/incremental.hpp"
#include "obm/majorant.hpp"
#include "obm/quadrature.hpp"

namespace obm {

struct SolverConfig {
    double relaxation = 1.5;
    double tol = 1e-10;
    long max_iterations = 100000;

    void validate() const;
};

struct StepResult {
    std::vector<double> v;
    long iterations = 0;
    double residual = 0.0;
};

/// max over interior nodes of |min(r_i, v_i - phi_i)| with the diagonally
/// scaled residual r = (M v - rhs) / diag(M), M = I/step + A_h.
double complementarity_residual(std::span<const double> v, std::span<const double> v_prev,
                                std::span<const double> f_slab, double step,
                                std::span<const double> phi, const SpatialGrid& grid);

/// One implicit Euler step of the discrete obstacle problem
///   min(M v - f_slab - v_prev/step, v - phi) = 0 at interior nodes,
/// with the boundary nodes set to (left, right). Projected SOR, warm-started
/// from v_prev. Throws SolverError after max_iterations sweeps.
StepResult implicit_euler_step(std::span<const double> v_prev, std::span<const double> f_slab,
                               double step, std::span<const double> phi, const SpatialGrid& grid,
                               const SolverConfig& cfg, double left = 0.0, double right = 0.0);

struct SolveResult {
    SpatialGrid grid;
    TimePartition partition;
    std::vector<std::vector<double>> nodal;
    IncrementalApprox approx;
    std::vector<NodalFlux> sigma;  ///< averaged gradients per node
    FluxSequence fluxes;
    std::vector<long> iterations;
    std::vector<double> residuals;

    /// tau_k = (sigma_k + sigma_{k+1}) / 2 per slab.
    std::vector<SpatialFlux> midpoint_fluxes() const;
};

/// Runs implicit Euler over the partition. The slab source is the time
/// average of f at each node; boundary nodes take the schedule values at
/// t_{k+1}.
SolveResult solve_sequence(const ProblemData& data, const TimePartition& partition, int nodes,
                           const SolverConfig& cfg, const QuadratureConfig& qcfg = {});

}  // namespace obm
