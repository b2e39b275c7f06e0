#pragma once

#include <functional>
#include <span>
#include <vector>

#include "obm/fields.hpp"
#include "obm/majorant.hpp"
#include "obm/quadrature.hpp"

namespace obm {

/// Nodes 0 = t_0 < t_1 < ... < t_N = T.
class TimePartition {
public:
    explicit TimePartition(std::vector<double> nodes);
    static TimePartition uniform(double horizon, int slabs);

    int slabs() const noexcept { return static_cast<int>(nodes_.size()) - 1; }
    double node(int k) const { return nodes_.at(static_cast<std::size_t>(k)); }
    double step(int k) const { return node(k + 1) - node(k); }
    double horizon() const noexcept { return nodes_.back(); }
    double max_step() const noexcept;
    const std::vector<double>& nodes() const noexcept { return nodes_; }

    /// Slab index k with t in [t_k, t_{k+1}]; the last slab owns t = T.
    int slab_of(double t) const noexcept;

private:
    std::vector<double> nodes_;
};

/// Spatial snapshots v_k at the partition nodes.
struct IncrementalApprox {
    TimePartition partition;
    std::vector<SpatialField> v;

    /// Snapshot count must match the partition; each v_k >= phi - tol on a
    /// uniform sample of the domain.
    void validate(const IntervalDomain& domain, const SpatialField& phi, double tol,
                  int samples = 1000) const;
};

/// Flux snapshots sigma_k at the partition nodes.
struct FluxSequence {
    TimePartition partition;
    std::vector<SpatialFlux> sigma;
};

/// Nodal flux values on a spatial grid.
struct NodalFlux {
    SpatialGrid grid;
    std::vector<double> values;

    SpatialFlux field() const { return piecewise_linear_flux(grid, values); }
};

/// v(x, t) = v_k + (v_{k+1} - v_k)(t - t_k)/Delta_k on every slab.
SpaceTimeField interpolate_in_time(const IncrementalApprox& approx);

/// tau(x, t) = sigma_k + (sigma_{k+1} - sigma_k)(t - t_k)/Delta_k.
FluxField interpolate_flux_in_time(const FluxSequence& fluxes);

/// tau(x, t) = tau_k(x) on slab k.
FluxField slab_constant_flux(const TimePartition& partition, const std::vector<SpatialFlux>& taus);

/// Adds c(t) psi(x) at each endpoint, where c is the gap between the
/// boundary schedule and its piecewise-linear interpolant on the partition
/// and psi is a hat of width `layer` anchored at the endpoint. The result
/// matches the schedule exactly on the lateral boundary.
SpaceTimeField boundary_lifted(const SpaceTimeField& v, const TimePartition& partition,
                               const IntervalDomain& domain, const BoundarySchedule& schedule,
                               double layer);

/// <f>_{I_k}(x) = (1/Delta_k) int_{I_k} f(x, t) dt
SpatialField averaged_source(const SpaceTimeField& f, const TimePartition& partition, int k,
                             const QuadratureConfig& cfg);

/// f_k + (f_{k+1} - f_k)(t - t_k)/Delta_k + zeta_k with
/// zeta_k = <f>_{I_k} - (f_k + f_{k+1})/2, defined on slab k.
SpaceTimeField affine_source(const SpaceTimeField& f, const TimePartition& partition, int k,
                             const QuadratureConfig& cfg);

/// (1/12) ||grad(v_{k+1} - v_k)||^2
double d1(const SpatialField& vk, const SpatialField& vk1, const IntervalDomain& domain,
          const QuadratureConfig& cfg);
/// ||(grad v_k + grad v_{k+1})/2 - tau_k||^2
double d2(const SpatialField& vk, const SpatialField& vk1, const SpatialFlux& tau_k,
          const IntervalDomain& domain, const QuadratureConfig& cfg);

struct SlabTerms {
    double step = 0.0;
    double d1 = 0.0;             ///< simple majorant only
    double d2 = 0.0;             ///< simple majorant only
    double flux_norm = 0.0;      ///< ||tau - grad v||_{Q_k}
    double residual_norm = 0.0;  ///< filtered residual norm on Q_k
    double source_norm = 0.0;    ///< ||f - f~||_{Q_k}
    double contribution = 0.0;   ///< (flux + C_F (residual + source))^2
};

struct IncrementalReport {
    double initial_sq = 0.0;  ///< ||u0 - v0||^2
    double source_sq = 0.0;   ///< ||f - f~||^2_{Q_T}
    double alpha = 1.0;
    double friedrichs = 0.0;
    std::vector<SlabTerms> slabs;
    double total = 0.0;
};

struct IncrementalInputs {
    const IncrementalApprox& approx;
    const SpaceTimeField& f;
    const SpatialField& phi;
    const SpatialField& u0;
    const IntervalDomain& domain;
    double alpha = 1.0;
    double friedrichs = 0.0;
    CoincidenceClassifier classifier{};
};

/// Majorant for slab-constant fluxes tau_k and slab-averaged source.
IncrementalReport simple_incremental_majorant(const IncrementalInputs& in,
                                              const std::vector<SpatialFlux>& slab_fluxes,
                                              const QuadratureConfig& cfg);

/// Endpoint residuals of one slab and the sets where both are nonpositive on
/// the common contact set.
struct IntervalResiduals {
    SpatialField r_low;
    SpatialField r_high;
    std::function<bool(double)> omega1;
    std::function<bool(double)> omega2;
    std::function<bool(double)> omega;
};

/// For g affine on a slab of length step with end values g0, g1:
/// int g^2 dt = (step/4) [(g1 + g0)^2 + (g1 - g0)^2 / 3]. Arguments are the
/// squared norms of the sum and of the difference.
double affine_sq_integral(double sum_sq, double diff_sq, double step);

IntervalResiduals interval_residuals(const SpatialField& vk, const SpatialField& vk1,
                                     const SpatialFlux& sigma_k, const SpatialFlux& sigma_k1,
                                     const SpatialFn& f_low, const SpatialFn& f_high, double step,
                                     const SpatialField& phi,
                                     const CoincidenceClassifier& classifier,
                                     double tol_omega = 1e-10);

/// Majorant for time-affine fluxes and time-affine source. With
/// `filter_omega` false the residual term is taken over all of Omega.
IncrementalReport advanced_incremental_majorant(const IncrementalInputs& in,
                                                const FluxSequence& fluxes,
                                                const QuadratureConfig& cfg,
                                                bool filter_omega = true);

/// Nodal flux: mean of the two adjacent cell slopes, one-sided at the ends.
NodalFlux average_gradients(const SpatialGrid& grid, std::span<const double> values);

/// Pointwise mean of two nodal fluxes on the same grid.
NodalFlux midpoint_flux(const NodalFlux& sigma_k, const NodalFlux& sigma_k1);

/// Pointwise mean of two analytic fluxes.
SpatialFlux midpoint_flux(const SpatialFlux& sigma_k, const SpatialFlux& sigma_k1);

}  // namespace obm
