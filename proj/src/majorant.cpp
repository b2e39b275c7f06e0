#include "obm/majorant.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "obm/errors.hpp"

namespace obm {

namespace {

std::string point_str(double x, double t)
{
    std::ostringstream os;
    os << "(x=" << x << ", t=" << t << ")";
    return os.str();
}

RegionDecomposition with_phi(RegionDecomposition r, const SpatialField& phi)
{
    r.add_x_breaks(phi.breaks());
    return r;
}

}  // namespace

void ProblemData::validate(int samples) const
{
    if (!(friedrichs > 0.0))
        throw DomainError("ProblemData: C_F must be positive");
    const auto& dom = box.domain();
    for (int j = 0; j <= samples; ++j) {
        const double t = box.horizon() * j / samples;
        if (phi(dom.a()) > boundary.left(t) || phi(dom.b()) > boundary.right(t))
            throw DomainError("ProblemData: obstacle exceeds the boundary values at t=" +
                              std::to_string(t));
    }
    for (int i = 0; i <= samples; ++i) {
        const double x = dom.a() + dom.length() * i / samples;
        if (u0(x) < phi(x) - 1e-12)
            throw DomainError("ProblemData: initial datum below the obstacle at x=" +
                              std::to_string(x));
    }
}

CoincidenceClassifier::CoincidenceClassifier(double tol) : tol_(tol)
{
    if (!(tol >= 0.0))
        throw DomainError("CoincidenceClassifier: tolerance must be >= 0");
}

void check_alpha(double alpha)
{
    if (!(alpha >= 0.5) || !std::isfinite(alpha))
        throw DomainError("alpha must be >= 1/2, got " + std::to_string(alpha));
}

ErrorMeasure make_error_measure(double eT_sq, double grad_sq, double alpha)
{
    check_alpha(alpha);
    ErrorMeasure m;
    m.eT_sq = eT_sq;
    m.grad_sq = grad_sq;
    m.alpha = alpha;
    m.combined = alpha == 0.5 ? eT_sq : eT_sq + (2.0 - 1.0 / alpha) * grad_sq;
    return m;
}

ErrorMeasure combined_error_norm(const SpaceTimeField& u, const SpaceTimeField& v, double alpha,
                                 const ProblemData& data, const QuadratureConfig& cfg)
{
    check_alpha(alpha);
    const SpaceTimeField e = v - u;
    const auto& dom = data.box.domain();
    const double eT = l2_norm_space_at(e, dom, data.box.horizon(), cfg);
    const double grad = l2_norm_qt([&e](double x, double t) { return e.grad_x(x, t); }, data.box,
                                   e.regions(), cfg);
    return make_error_measure(eT * eT, grad * grad, alpha);
}

SpaceTimeField residual_Rf(const SpaceTimeField& v, const FluxField& tau, const SpaceTimeField& f)
{
    if (!v.has_d_t())
        throw MissingDerivative("residual R_f: approximation '" + v.name() +
                                "' has no time derivative");
    if (!tau.has_div())
        throw MissingDerivative("residual R_f: flux '" + tau.name() + "' has no divergence");
    auto value = [v, tau, f](double x, double t) { return f(x, t) + tau.div(x, t) - v.d_t(x, t); };
    RegionDecomposition regions = v.regions().merged(tau.regions()).merged(f.regions());
    return SpaceTimeField(value, {}, {}, std::move(regions), "R_f");
}

SpaceTimeField residual_Ff(const SpaceTimeField& v, const FluxField& tau, const SpaceTimeField& f,
                           const SpatialField& phi, const CoincidenceClassifier& classifier)
{
    const SpaceTimeField r = residual_Rf(v, tau, f);
    auto value = [r, v, phi, classifier](double x, double t) {
        const double res = r(x, t);
        return classifier.in_contact(v(x, t), phi(x)) ? positive_part(res) : res;
    };
    RegionDecomposition regions = with_phi(r.regions(), phi);
    const double tol = classifier.tol();
    regions.add_curve("contact:" + v.name(),
                      [v, phi, tol](double x, double t) { return v(x, t) - phi(x) - tol; });
    return SpaceTimeField(value, {}, {}, std::move(regions), "F_f");
}

MajorantBreakdown make_breakdown(double e0_sq, double flux_gap, double residual_norm, double alpha,
                                 double friedrichs)
{
    check_alpha(alpha);
    MajorantBreakdown b;
    b.e0_sq = e0_sq;
    b.flux_gap = flux_gap;
    b.residual_norm = residual_norm;
    b.alpha = alpha;
    b.friedrichs = friedrichs;
    const double s = flux_gap + friedrichs * residual_norm;
    b.total = e0_sq + alpha * s * s;
    return b;
}

MajorantBreakdown with_alpha(const MajorantBreakdown& b, double alpha)
{
    return make_breakdown(b.e0_sq, b.flux_gap, b.residual_norm, alpha, b.friedrichs);
}

void check_admissible(const SpaceTimeField& v, const ProblemData& data,
                      const CoincidenceClassifier& classifier, int samples,
                      BoundaryCheck boundary)
{
    const auto& dom = data.box.domain();
    const double T = data.box.horizon();
    const double bc_tol = std::max(1e-10, classifier.tol());
    auto check_end = [&](double x, double g, double t) {
        if (std::abs(v(x, t) - g) > bc_tol * (1.0 + std::abs(g)))
            throw InadmissibleError("approximation misses the boundary value at " +
                                        point_str(x, t),
                                    x, t);
    };
    for (int j = 0; j <= samples; ++j) {
        const double t = T * j / samples;
        if (boundary == BoundaryCheck::enforce) {
            check_end(dom.a(), data.boundary.left(t), t);
            check_end(dom.b(), data.boundary.right(t), t);
        }
        for (int i = 0; i <= samples; ++i) {
            const double x = dom.a() + dom.length() * i / samples;
            if (v(x, t) < data.phi(x) - classifier.tol())
                throw InadmissibleError("approximation violates the obstacle at " +
                                            point_str(x, t),
                                        x, t);
        }
    }
}

MajorantBreakdown majorant(const SpaceTimeField& v, const FluxField& tau, const ProblemData& data,
                           double alpha, const CoincidenceClassifier& classifier,
                           const QuadratureConfig& cfg, BoundaryCheck boundary)
{
    check_alpha(alpha);
    check_admissible(v, data, classifier, 3 * cfg.base_cells, boundary);

    const auto& dom = data.box.domain();
    const SpaceTimeField u0 = data.u0.as_space_time();
    const double e0 = l2_norm_space_at([&](double x, double t) { return v(x, t) - u0(x, t); }, dom,
                                       0.0, v.regions().merged(u0.regions()), cfg);

    const RegionDecomposition gap_regions = v.regions().merged(tau.regions());
    const double gap = l2_norm_qt([&](double x, double t) { return tau(x, t) - v.grad_x(x, t); },
                                  data.box, gap_regions, cfg);

    const SpaceTimeField F = residual_Ff(v, tau, data.f, data.phi, classifier);
    const double res = l2_norm_qt(F, data.box, cfg);

    return make_breakdown(e0 * e0, gap, res, alpha, data.friedrichs);
}

SpecializedBounds specialized_bounds(const MajorantBreakdown& b)
{
    const double s = b.flux_gap + b.friedrichs * b.residual_norm;
    return {b.e0_sq + s * s, b.e0_sq + 0.5 * s * s};
}

HypercircleReport hypercircle_check(const SpaceTimeField& v, const FluxField& tau,
                                    const ProblemData& data,
                                    const CoincidenceClassifier& classifier, int samples,
                                    double alpha, const QuadratureConfig& cfg,
                                    double residual_tol)
{
    check_alpha(alpha);
    const SpaceTimeField r = residual_Rf(v, tau, data.f);
    const auto& dom = data.box.domain();
    const double T = data.box.horizon();

    HypercircleReport rep;
    // Interior samples only: cell midpoints of a uniform grid.
    for (int j = 0; j < samples; ++j) {
        const double t = T * (j + 0.5) / samples;
        for (int i = 0; i < samples; ++i) {
            const double x = dom.a() + dom.length() * (i + 0.5) / samples;
            const double res = r(x, t);
            const double violation = classifier.in_contact(v(x, t), data.phi(x))
                                         ? positive_part(res)
                                         : std::abs(res);
            if (violation > rep.worst_violation) {
                rep.worst_violation = violation;
                rep.worst_x = x;
                rep.worst_t = t;
            }
        }
    }
    rep.member = rep.worst_violation <= residual_tol;

    const SpaceTimeField u0 = data.u0.as_space_time();
    const double e0 = l2_norm_space_at([&](double x, double t) { return v(x, t) - u0(x, t); }, dom,
                                       0.0, v.regions().merged(u0.regions()), cfg);
    const double gap = l2_norm_qt([&](double x, double t) { return tau(x, t) - v.grad_x(x, t); },
                                  data.box, v.regions().merged(tau.regions()), cfg);
    rep.bound = e0 * e0 + alpha * alpha * gap * gap;
    return rep;
}

double efficiency_index(double lhs, double rhs)
{
    if (lhs == 0.0)
        return rhs > 0.0 ? std::numeric_limits<double>::infinity()
                         : std::numeric_limits<double>::quiet_NaN();
    return std::sqrt(rhs / lhs);
}

bool bound_holds(double lhs, double rhs, double tol)
{
    return rhs >= lhs - tol;
}

}  // namespace obm
