#include "obm/modeling_error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "obm/errors.hpp"

namespace obm {

void CoarseningPair::validate(int samples) const
{
    const auto& a = fine.box;
    const auto& b = coarse.box;
    if (a.domain().a() != b.domain().a() || a.domain().b() != b.domain().b() ||
        a.horizon() != b.horizon())
        throw DomainError("CoarseningPair: fine and coarse problems live on different cylinders");
    if (fine.friedrichs != coarse.friedrichs)
        throw DomainError("CoarseningPair: fine and coarse C_F differ");
    const auto& dom = a.domain();
    for (int i = 0; i <= samples; ++i) {
        const double x = dom.a() + dom.length() * i / samples;
        if (fine.phi(x) != coarse.phi(x))
            throw DomainError("CoarseningPair: obstacles differ at x=" + std::to_string(x));
    }
}

namespace {

double initial_gap_sq(const CoarseningPair& pair, const QuadratureConfig& cfg)
{
    std::vector<double> br = pair.fine.u0.breaks();
    br.insert(br.end(), pair.coarse.u0.breaks().begin(), pair.coarse.u0.breaks().end());
    std::sort(br.begin(), br.end());
    const auto& u0 = pair.fine.u0;
    const auto& u0c = pair.coarse.u0;
    const double n = l2_norm_space([&](double x) { return u0(x) - u0c(x); },
                                   pair.fine.box.domain(), br, cfg);
    return n * n;
}

}  // namespace

SpaceTimeField modeling_residual(const CoarseningPair& pair)
{
    if (!pair.coarse_solution)
        throw MissingSolution(
            "the sharp modeling bound needs the simplified solution; use the coarse bound");
    const SpaceTimeField ut = *pair.coarse_solution;
    const SpaceTimeField f = pair.fine.f;
    const SpaceTimeField fc = pair.coarse.f;
    const SpatialField phi = pair.fine.phi;
    const CoincidenceClassifier cls = pair.classifier;
    auto value = [=](double x, double t) {
        const double d = f(x, t) - fc(x, t);
        return cls.in_contact(ut(x, t), phi(x)) ? positive_part(d) : d;
    };
    RegionDecomposition r = f.regions().merged(fc.regions()).merged(ut.regions());
    r.add_x_breaks(phi.breaks());
    const double tol = cls.tol();
    r.add_curve("contact:" + ut.name(),
                [ut, phi, tol](double x, double t) { return ut(x, t) - phi(x) - tol; });
    return SpaceTimeField(value, {}, {}, std::move(r), "g");
}

double coarsening_bound_sharp(const CoarseningPair& pair, double alpha,
                              const QuadratureConfig& cfg)
{
    check_alpha(alpha);
    pair.validate();
    const SpaceTimeField g = modeling_residual(pair);
    const double gn = l2_norm_qt(g, pair.fine.box, cfg);
    const double cf = pair.fine.friedrichs;
    return initial_gap_sq(pair, cfg) + alpha * cf * cf * gn * gn;
}

double coarsening_bound_coarse(const CoarseningPair& pair, double alpha,
                               const QuadratureConfig& cfg)
{
    check_alpha(alpha);
    pair.validate();
    const SpaceTimeField f = pair.fine.f;
    const SpaceTimeField fc = pair.coarse.f;
    const double dn = l2_norm_qt([&](double x, double t) { return f(x, t) - fc(x, t); },
                                 pair.fine.box, f.regions().merged(fc.regions()), cfg);
    const double cf = pair.fine.friedrichs;
    return initial_gap_sq(pair, cfg) + alpha * cf * cf * dn * dn;
}

}  // namespace obm
