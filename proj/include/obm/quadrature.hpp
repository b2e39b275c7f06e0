#pragma once

#include <functional>
#include <span>
#include <vector>

#include "obm/domain.hpp"
#include "obm/fields.hpp"

namespace obm {

/// Controls the composite Gauss-Legendre rules. Each 1-D integral starts from
/// base_cells cells, multiplies the cell count by `refinement` per level and
/// stops once two successive estimates agree to `tol` (relative) or to
/// `abs_floor` (absolute, for integrals that vanish).
struct QuadratureConfig {
    int base_cells = 64;
    int refinement = 2;
    double tol = 1e-6;
    int max_levels = 12;
    double abs_floor = 1e-20;

    void validate() const;
};

using LineFn = std::function<double(double)>;

/// Integral of fn over [s0, s1]. Cells are split at the fixed `breaks` and at
/// every sign change of the `levels` functions, located by bisection, so that
/// piecewise-smooth integrands are integrated piece by piece.
double integrate_line(const LineFn& fn, double s0, double s1, std::span<const LineFn> levels,
                      std::span<const double> breaks, const QuadratureConfig& cfg);

/// Integral of fn over Omega x (t0, t1): outer rule in t, inner rule in x at
/// each t-node, both breakpoint aware.
double integrate_slab(const SpaceTimeFn& fn, const IntervalDomain& domain, double t0, double t1,
                      const RegionDecomposition& regions, const QuadratureConfig& cfg);

double integrate_qt(const SpaceTimeFn& fn, const SpaceTimeBox& box,
                    const RegionDecomposition& regions, const QuadratureConfig& cfg);

/// Integral over Omega at a fixed time.
double integrate_space_at(const SpaceTimeFn& fn, const IntervalDomain& domain, double t,
                          const RegionDecomposition& regions, const QuadratureConfig& cfg);

/// Integral over (t0, t1) at a fixed point x.
double integrate_time_at(const SpaceTimeFn& fn, double x, double t0, double t1,
                         const RegionDecomposition& regions, const QuadratureConfig& cfg);

/// (int_{Q_T} g^2)^{1/2}
double l2_norm_qt(const SpaceTimeField& g, const SpaceTimeBox& box, const QuadratureConfig& cfg);
double l2_norm_qt(const SpaceTimeFn& g, const SpaceTimeBox& box,
                  const RegionDecomposition& regions, const QuadratureConfig& cfg);

/// (int_Omega g(x, t)^2 dx)^{1/2}
double l2_norm_space_at(const SpaceTimeField& g, const IntervalDomain& domain, double t,
                        const QuadratureConfig& cfg);
double l2_norm_space_at(const SpaceTimeFn& g, const IntervalDomain& domain, double t,
                        const RegionDecomposition& regions, const QuadratureConfig& cfg);

/// L2(Omega) norm of a spatial function.
double l2_norm_space(const SpatialFn& g, const IntervalDomain& domain,
                     std::span<const double> breaks, const QuadratureConfig& cfg);

}  // namespace obm
