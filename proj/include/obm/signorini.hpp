#pragma once

#include "obm/fields.hpp"
#include "obm/majorant.hpp"
#include "obm/quadrature.hpp"

namespace obm {

/// Splits the two endpoints into the contact part M and the Dirichlet part
/// S. Outward normals are -1 at a and +1 at b.
struct ContactBoundary {
    bool a_in_M = false;
    bool b_in_M = false;

    /// S must be nonempty for the Friedrichs-type inequality.
    void validate() const;
};

/// Thin obstacle values phi_M at the contact endpoints; homogeneous
/// Dirichlet data on S. C_F is the constant for functions vanishing on S
/// only (2L/pi when S is one endpoint) and must be given explicitly.
struct ThinObstacleData {
    SpaceTimeBox box;
    SpaceTimeField f;
    SpatialField u0;
    double phi_a = 0.0;
    double phi_b = 0.0;
    double friedrichs = 0.0;

    void validate(const ContactBoundary& boundary) const;
};

struct FluxAdmissibility {
    bool admissible = true;
    double worst = 0.0;  ///< most negative tau . n seen on M
    double worst_x = 0.0;
    double worst_t = 0.0;
};

/// tau(x_b, t) n(x_b) >= -tol at samples + 1 uniform times, x_b in M.
FluxAdmissibility signorini_admissible_flux(const FluxField& tau, const SpaceTimeBox& box,
                                            const ContactBoundary& boundary, int samples = 1000,
                                            double tol = 1e-12);

/// Sum over x_b in M of int_0^T (v(x_b, t) - phi_M) tau(x_b, t) n(x_b) dt.
/// Throws InadmissibleError when v < phi_M - tol at a sampled time.
double boundary_term(const SpaceTimeField& v, const FluxField& tau, const ThinObstacleData& data,
                     const ContactBoundary& boundary, const QuadratureConfig& cfg,
                     double tol = 1e-12, int samples = 1000);

struct SignoriniBreakdown {
    double e0_sq = 0.0;
    double flux_gap = 0.0;
    double residual_norm = 0.0;  ///< plain R_f; the obstacle lives on the boundary
    double boundary = 0.0;
    double alpha = 1.0;
    double friedrichs = 0.0;
    double total = 0.0;
};

/// Bound on (1/2)||e(T)||^2 + (1 - 1/(2 alpha))||grad e||^2:
///   (1/2)||e(0)||^2 + (alpha/2)(||grad v - tau|| + C_F ||R_f||)^2 + boundary term.
/// Throws InadmissibleError for tau failing the sign condition on M, for v
/// outside K_S, or for a negative boundary term.
SignoriniBreakdown signorini_majorant(const SpaceTimeField& v, const FluxField& tau,
                                      const ThinObstacleData& data,
                                      const ContactBoundary& boundary, double alpha,
                                      const CoincidenceClassifier& classifier,
                                      const QuadratureConfig& cfg);

/// (1/2)||e(T)||^2 + (1 - 1/(2 alpha))||grad e||^2
struct SignoriniError {
    double eT_sq = 0.0;
    double grad_sq = 0.0;
    double alpha = 1.0;
    double combined = 0.0;
};

SignoriniError signorini_error(const SpaceTimeField& u, const SpaceTimeField& v, double alpha,
                               const SpaceTimeBox& box, const QuadratureConfig& cfg);

/// Constructed solution on (0, L) x (0, T) with M = {0}, S = {L}:
///   u = a(t)(1 - x/L) + b(t)(x/L)(1 - x/L).
/// While t < T/2 the obstacle is active: a = phi, b = a - c1 (T/2 - t)^2,
/// so the normal flux at 0 is positive. Afterwards a = phi + c2 (t - T/2)^2
/// and b = a, so the normal flux vanishes and u(0, t) >= phi.
struct SyntheticSignorini {
    double length = 1.0;
    double horizon = 0.5;
    double phi = 0.5;
    double c1 = 4.0;
    double c2 = 4.0;

    double a(double t) const;
    double a_dt(double t) const;
    double b(double t) const;
    double b_dt(double t) const;

    SpaceTimeField solution() const;
    FluxField flux() const;
    ContactBoundary boundary() const { return {true, false}; }
    ThinObstacleData data() const;
};

}  // namespace obm
