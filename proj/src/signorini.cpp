#include "obm/signorini.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "obm/errors.hpp"

namespace obm {

void ContactBoundary::validate() const
{
    if (a_in_M && b_in_M)
        throw DomainError("ContactBoundary: the Dirichlet part S must be nonempty");
}

void ThinObstacleData::validate(const ContactBoundary& boundary) const
{
    boundary.validate();
    if (!(friedrichs > 0.0))
        throw DomainError("ThinObstacleData: C_F must be given explicitly and be positive");
    const auto& dom = box.domain();
    if (boundary.a_in_M && u0(dom.a()) < phi_a)
        throw DomainError("ThinObstacleData: u0 below the thin obstacle at a");
    if (boundary.b_in_M && u0(dom.b()) < phi_b)
        throw DomainError("ThinObstacleData: u0 below the thin obstacle at b");
}

namespace {

struct Endpoint {
    double x;
    double normal;
    double phi;
};

std::vector<Endpoint> contact_points(const IntervalDomain& dom, const ContactBoundary& b,
                                     double phi_a, double phi_b)
{
    std::vector<Endpoint> out;
    if (b.a_in_M)
        out.push_back({dom.a(), -1.0, phi_a});
    if (b.b_in_M)
        out.push_back({dom.b(), 1.0, phi_b});
    return out;
}

std::vector<double> dirichlet_points(const IntervalDomain& dom, const ContactBoundary& b)
{
    std::vector<double> out;
    if (!b.a_in_M)
        out.push_back(dom.a());
    if (!b.b_in_M)
        out.push_back(dom.b());
    return out;
}

}  // namespace

FluxAdmissibility signorini_admissible_flux(const FluxField& tau, const SpaceTimeBox& box,
                                            const ContactBoundary& boundary, int samples,
                                            double tol)
{
    boundary.validate();
    FluxAdmissibility rep;
    for (const auto& p : contact_points(box.domain(), boundary, 0.0, 0.0))
        for (int j = 0; j <= samples; ++j) {
            const double t = box.horizon() * j / samples;
            const double flux = tau(p.x, t) * p.normal;
            if (flux < rep.worst) {
                rep.worst = flux;
                rep.worst_x = p.x;
                rep.worst_t = t;
            }
        }
    rep.admissible = rep.worst >= -tol;
    return rep;
}

double boundary_term(const SpaceTimeField& v, const FluxField& tau, const ThinObstacleData& data,
                     const ContactBoundary& boundary, const QuadratureConfig& cfg, double tol,
                     int samples)
{
    const auto& dom = data.box.domain();
    const double T = data.box.horizon();
    double total = 0.0;
    for (const auto& p : contact_points(dom, boundary, data.phi_a, data.phi_b)) {
        for (int j = 0; j <= samples; ++j) {
            const double t = T * j / samples;
            if (v(p.x, t) < p.phi - tol)
                throw InadmissibleError("approximation below the thin obstacle at x=" +
                                            std::to_string(p.x) + ", t=" + std::to_string(t),
                                        p.x, t);
        }
        total += integrate_line(
            [&](double t) { return (v(p.x, t) - p.phi) * tau(p.x, t) * p.normal; }, 0.0, T, {},
            v.regions().merged(tau.regions()).t_breaks(), cfg);
    }
    return total;
}

SignoriniBreakdown signorini_majorant(const SpaceTimeField& v, const FluxField& tau,
                                      const ThinObstacleData& data,
                                      const ContactBoundary& boundary, double alpha,
                                      const CoincidenceClassifier& classifier,
                                      const QuadratureConfig& cfg)
{
    check_alpha(alpha);
    data.validate(boundary);
    const double tol = std::max(1e-12, classifier.tol());
    const auto& dom = data.box.domain();
    const double T = data.box.horizon();
    constexpr int kSamples = 1000;

    const FluxAdmissibility adm = signorini_admissible_flux(tau, data.box, boundary, kSamples, tol);
    if (!adm.admissible)
        throw InadmissibleError("flux violates tau.n >= 0 on the contact boundary (tau.n = " +
                                    std::to_string(adm.worst) + ")",
                                adm.worst_x, adm.worst_t);
    for (double xs : dirichlet_points(dom, boundary))
        for (int j = 0; j <= kSamples; ++j) {
            const double t = T * j / kSamples;
            if (std::abs(v(xs, t)) > std::max(1e-10, tol))
                throw InadmissibleError("approximation does not vanish on the Dirichlet part",
                                        xs, t);
        }

    SignoriniBreakdown b;
    b.alpha = alpha;
    b.friedrichs = data.friedrichs;
    b.boundary = boundary_term(v, tau, data, boundary, cfg, tol, kSamples);
    if (b.boundary < -1e-12)
        throw InadmissibleError("negative boundary term " + std::to_string(b.boundary) +
                                    "; the pair is not Signorini-admissible",
                                dom.a(), 0.0);

    const SpaceTimeField u0 = data.u0.as_space_time();
    const double e0 = l2_norm_space_at([&](double x, double t) { return v(x, t) - u0(x, t); }, dom,
                                       0.0, v.regions().merged(u0.regions()), cfg);
    b.e0_sq = e0 * e0;
    b.flux_gap = l2_norm_qt([&](double x, double t) { return tau(x, t) - v.grad_x(x, t); },
                            data.box, v.regions().merged(tau.regions()), cfg);
    b.residual_norm = l2_norm_qt(residual_Rf(v, tau, data.f), data.box, cfg);
    const double s = b.flux_gap + data.friedrichs * b.residual_norm;
    b.total = 0.5 * b.e0_sq + 0.5 * alpha * s * s + std::max(0.0, b.boundary);
    return b;
}

SignoriniError signorini_error(const SpaceTimeField& u, const SpaceTimeField& v, double alpha,
                               const SpaceTimeBox& box, const QuadratureConfig& cfg)
{
    check_alpha(alpha);
    const SpaceTimeField e = v - u;
    const double eT = l2_norm_space_at(e, box.domain(), box.horizon(), cfg);
    const double g = l2_norm_qt([&e](double x, double t) { return e.grad_x(x, t); }, box,
                                e.regions(), cfg);
    SignoriniError out;
    out.eT_sq = eT * eT;
    out.grad_sq = g * g;
    out.alpha = alpha;
    out.combined = 0.5 * out.eT_sq + (1.0 - 1.0 / (2.0 * alpha)) * out.grad_sq;
    return out;
}

double SyntheticSignorini::a(double t) const
{
    const double m = 0.5 * horizon;
    return t < m ? phi : phi + c2 * (t - m) * (t - m);
}

double SyntheticSignorini::a_dt(double t) const
{
    const double m = 0.5 * horizon;
    return t < m ? 0.0 : 2.0 * c2 * (t - m);
}

double SyntheticSignorini::b(double t) const
{
    const double m = 0.5 * horizon;
    return t < m ? a(t) - c1 * (m - t) * (m - t) : a(t);
}

double SyntheticSignorini::b_dt(double t) const
{
    const double m = 0.5 * horizon;
    return t < m ? a_dt(t) + 2.0 * c1 * (m - t) : a_dt(t);
}

SpaceTimeField SyntheticSignorini::solution() const
{
    const SyntheticSignorini s = *this;
    const double L = length;
    auto value = [s, L](double x, double t) {
        const double y = x / L;
        return s.a(t) * (1.0 - y) + s.b(t) * y * (1.0 - y);
    };
    auto grad = [s, L](double x, double t) {
        const double y = x / L;
        return (-s.a(t) + s.b(t) * (1.0 - 2.0 * y)) / L;
    };
    auto dt = [s, L](double x, double t) {
        const double y = x / L;
        return s.a_dt(t) * (1.0 - y) + s.b_dt(t) * y * (1.0 - y);
    };
    RegionDecomposition r;
    r.add_t_break(0.5 * horizon);
    return SpaceTimeField(value, grad, dt, std::move(r), "u_signorini");
}

FluxField SyntheticSignorini::flux() const
{
    const SyntheticSignorini s = *this;
    const double L = length;
    auto value = [s, L](double x, double t) {
        const double y = x / L;
        return (-s.a(t) + s.b(t) * (1.0 - 2.0 * y)) / L;
    };
    auto div = [s, L](double, double t) { return -2.0 * s.b(t) / (L * L); };
    RegionDecomposition r;
    r.add_t_break(0.5 * horizon);
    return FluxField(value, div, std::move(r), "grad u_signorini");
}

ThinObstacleData SyntheticSignorini::data() const
{
    if (!(length > 0.0) || !(horizon > 0.0) || c1 < 0.0 || c2 < 0.0)
        throw DomainError("SyntheticSignorini: need length, horizon > 0 and c1, c2 >= 0");
    const SyntheticSignorini s = *this;
    const double L = length;
    // f = u_t - u_xx
    auto f = [s, L](double x, double t) {
        const double y = x / L;
        return s.a_dt(t) * (1.0 - y) + s.b_dt(t) * y * (1.0 - y) + 2.0 * s.b(t) / (L * L);
    };
    RegionDecomposition r;
    r.add_t_break(0.5 * horizon);
    const SpaceTimeField u = solution();
    SpatialField u0([u](double x) { return u(x, 0.0); }, [u](double x) { return u.grad_x(x, 0.0); },
                    {}, "u0");
    const IntervalDomain dom(0.0, L);
    return ThinObstacleData{SpaceTimeBox(dom, horizon),
                            SpaceTimeField(f, {}, {}, std::move(r), "f_signorini"),
                            std::move(u0),
                            phi,
                            0.0,
                            2.0 * L / std::numbers::pi};
}

}  // namespace obm
