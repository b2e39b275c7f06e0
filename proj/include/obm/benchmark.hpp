#pragma once

#include <optional>
#include <string>
#include <vector>

#include "obm/fields.hpp"
#include "obm/incremental.hpp"
#include "obm/majorant.hpp"
#include "obm/quadrature.hpp"

// Model problem on Omega = (-1, 1), T = 1/2, phi = 0 with a free boundary
// moving as 4|x| = 2t + 1. The solution is zero on Lambda = {4|x| <= 2t + 1}
// and (4|x|/(2t+1) - 1)^2 on N.
namespace obm::bench {

inline constexpr double kHorizon = 0.5;

IntervalDomain omega();

/// u(+-1, t) = (9 - 12t + 4t^2) / (2t + 1)^2
double boundary_value(double t);
double boundary_value_dt(double t);
BoundarySchedule boundary_schedule();

SpaceTimeField exact_solution();
SpaceTimeField source();
SpatialField initial_datum();
SpatialField obstacle();
FluxField tau_exact();

/// u(., t) and grad u(., t) as spatial fields.
SpatialField exact_slice(double t);
SpatialFlux exact_flux_slice(double t);

/// Problem data on Omega x (0, horizon) with C_F = 2/pi.
ProblemData problem(double horizon = kHorizon);

/// u plus a bump 100 eps t (1-|x|)(x - sgn x ((2-eps)t+1)/4)^2 on
/// N_eps = {4|x| > (2-eps)t + 1}; eps in [0, 1/2].
SpaceTimeField v_eps(double eps);

/// One-slab interpolation between u(., 0) and u(., delta); delta in (0, 1/2].
IncrementalApprox w_delta_approx(double delta);
SpaceTimeField w_delta(double delta);

/// Three-branch flux with free coefficients xi, eta.
FluxField tau_delta(double delta, double xi, double eta);

/// Two-branch flux with the rational free-boundary curve.
FluxField tau_hat(double delta);

/// Level |x| = r(t) separating the two branches of tau_hat.
double tau_hat_radius(double delta, double t);

struct Evaluation {
    ErrorMeasure lhs;
    MajorantBreakdown rhs;
    double ieff = 0.0;
};

/// Error and majorant of (v, tau) on Omega x (0, horizon).
Evaluation evaluate(const SpaceTimeField& v, const FluxField& tau, double horizon, double alpha,
                    const QuadratureConfig& cfg);

struct OptimResult {
    double xi = 0.0;
    double eta = 0.0;
    double rhs = 0.0;
    bool converged = false;
    int evaluations = 0;
};

/// Minimizes the alpha-majorant of (v, tau_delta(xi, eta)) on Q_delta: grid
/// search on [0, 40]^2 with step 2 under a coarse rule, then Nelder-Mead
/// from the best grid point until the simplex size drops below 1e-4
/// (relative to the coordinates).
OptimResult optimize_xi_eta(double delta, const SpaceTimeField& v, double alpha,
                            const QuadratureConfig& cfg, int max_iterations = 400);

// ---------------------------------------------------------------------------
// Table reproduction.

/// Printed value and the unit of its last printed digit.
struct RefValue {
    double value = 0.0;
    double quantum = 0.0;
};

/// Which rule accepted a recomputed value.
enum class Match { relative, absolute, rounding, none };

inline constexpr double kRelTol = 0.02;
inline constexpr double kAbsTol = 5e-3;
inline constexpr double kAbsRegime = 0.1;

/// Within 2% relative; for printed entries below 0.1 within 5e-3 absolute;
/// otherwise accepted when the value rounds to the printed digits.
Match compare(double value, const RefValue& reference);
const char* to_string(Match m);

struct Cell {
    std::string name;
    double value = 0.0;
    bool referenced = false;            ///< column carries reference values
    std::optional<RefValue> reference;  ///< empty for blank printed cells

    /// (value - reference) / |reference|; NaN without a nonzero reference.
    double deviation() const;
};

struct Row {
    std::string label;  ///< free text, e.g. the block of Table 5
    std::vector<Cell> cells;

    const Cell& cell(const std::string& name) const;
};

struct Table {
    int number = 0;
    std::vector<Row> rows;
};

struct TableOptions {
    QuadratureConfig cfg{};
    bool optimize = true;  ///< Tables 3 and 4: also run optimize_xi_eta
};

Table reproduce_table(int n, const TableOptions& opts = {});

}  // namespace obm::bench
