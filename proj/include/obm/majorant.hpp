#pragma once

#include <functional>
#include <optional>
#include <utility>

#include "obm/domain.hpp"
#include "obm/fields.hpp"
#include "obm/quadrature.hpp"

namespace obm {

/// Dirichlet values on the two endpoints as functions of time, with their
/// time derivatives. Default: homogeneous.
struct BoundarySchedule {
    std::function<double(double)> left = [](double) { return 0.0; };
    std::function<double(double)> right = [](double) { return 0.0; };
    std::function<double(double)> left_dt = [](double) { return 0.0; };
    std::function<double(double)> right_dt = [](double) { return 0.0; };
};

/// One obstacle problem instance: Q_T, source f, initial datum u0,
/// obstacle phi (time independent), Friedrichs constant C_F.
struct ProblemData {
    SpaceTimeBox box;
    SpaceTimeField f;
    SpatialField u0;
    SpatialField phi;
    double friedrichs = 0.0;
    BoundarySchedule boundary{};

    /// Checks C_F > 0, phi <= 0 ... compatible with the boundary data, and
    /// u0 >= phi on a uniform sampling grid. Throws DomainError.
    void validate(int samples = 1000) const;
};

/// Splits points into the non-contact set {v > phi + tol} and the contact
/// set {|v - phi| <= tol}.
class CoincidenceClassifier {
public:
    static constexpr double kAnalyticTol = 1e-12;
    static constexpr double kSolverTol = 1e-8;

    explicit CoincidenceClassifier(double tol = kAnalyticTol);

    double tol() const noexcept { return tol_; }
    bool in_contact(double v, double phi) const noexcept { return v - phi <= tol_; }

private:
    double tol_;
};

/// |[e]|^2_alpha = ||e(T)||^2 + (2 - 1/alpha) ||grad e||^2
struct ErrorMeasure {
    double eT_sq = 0.0;
    double grad_sq = 0.0;
    double alpha = 1.0;
    double combined = 0.0;
};

/// Components of the majorant
///   ||e(0)||^2 + alpha (||tau - grad v|| + C_F ||F_f(v, tau)||)^2.
struct MajorantBreakdown {
    double e0_sq = 0.0;
    double flux_gap = 0.0;
    double residual_norm = 0.0;
    double alpha = 1.0;
    double friedrichs = 0.0;
    double total = 0.0;
};

void check_alpha(double alpha);

ErrorMeasure make_error_measure(double eT_sq, double grad_sq, double alpha);

ErrorMeasure combined_error_norm(const SpaceTimeField& u, const SpaceTimeField& v, double alpha,
                                 const ProblemData& data, const QuadratureConfig& cfg);

/// R_f(v, tau) = f + div tau - v_t
SpaceTimeField residual_Rf(const SpaceTimeField& v, const FluxField& tau, const SpaceTimeField& f);

/// R_f where v is off the obstacle, max(R_f, 0) on the contact set.
SpaceTimeField residual_Ff(const SpaceTimeField& v, const FluxField& tau, const SpaceTimeField& f,
                           const SpatialField& phi, const CoincidenceClassifier& classifier);

MajorantBreakdown make_breakdown(double e0_sq, double flux_gap, double residual_norm, double alpha,
                                 double friedrichs);

/// `skip` is for approximations known to miss the lateral boundary values
/// (e.g. plain time interpolants of exact slices); the bound is then not
/// guaranteed and the caller says so.
enum class BoundaryCheck { enforce, skip };

/// Throws InadmissibleError when v dips below phi - tol, or misses the
/// boundary schedule, at a point of the (n+1)^2 sampling grid.
void check_admissible(const SpaceTimeField& v, const ProblemData& data,
                      const CoincidenceClassifier& classifier, int samples,
                      BoundaryCheck boundary = BoundaryCheck::enforce);

MajorantBreakdown majorant(const SpaceTimeField& v, const FluxField& tau, const ProblemData& data,
                           double alpha, const CoincidenceClassifier& classifier,
                           const QuadratureConfig& cfg,
                           BoundaryCheck boundary = BoundaryCheck::enforce);

/// Reuses a breakdown for another alpha (components do not depend on alpha).
MajorantBreakdown with_alpha(const MajorantBreakdown& b, double alpha);

/// alpha = 1 bound on ||e(T)||^2 + ||grad e||^2 and alpha = 1/2 bound on ||e(T)||^2.
struct SpecializedBounds {
    double energy = 0.0;
    double terminal = 0.0;
};

SpecializedBounds specialized_bounds(const MajorantBreakdown& breakdown);

struct HypercircleReport {
    bool member = false;
    double bound = 0.0;
    double worst_violation = 0.0;
    double worst_x = 0.0;
    double worst_t = 0.0;
};

/// Samples R_f on a uniform grid: membership requires R_f = 0 off the
/// obstacle and R_f <= 0 on it, within residual_tol. The bound is
/// ||e(0)||^2 + alpha^2 ||tau - grad v||^2 and only meaningful for members.
HypercircleReport hypercircle_check(const SpaceTimeField& v, const FluxField& tau,
                                    const ProblemData& data,
                                    const CoincidenceClassifier& classifier, int samples,
                                    double alpha, const QuadratureConfig& cfg,
                                    double residual_tol = 1e-8);

/// sqrt(rhs / lhs); +inf when lhs = 0 < rhs, NaN when both vanish.
double efficiency_index(double lhs, double rhs);

/// True unless rhs < lhs - tol, i.e. the guaranteed bound is falsified.
bool bound_holds(double lhs, double rhs, double tol = 1e-8);

}  // namespace obm
