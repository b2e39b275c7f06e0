#include "obm/domain.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "obm/errors.hpp"

namespace obm {

IntervalDomain::IntervalDomain(double a, double b) : a_(a), b_(b)
{
    if (!(a < b) || !std::isfinite(a) || !std::isfinite(b))
        throw DomainError("IntervalDomain: need finite a < b, got a=" + std::to_string(a) +
                          " b=" + std::to_string(b));
}

SpaceTimeBox::SpaceTimeBox(IntervalDomain domain, double horizon)
    : domain_(domain), horizon_(horizon)
{
    if (!(horizon > 0.0) || !std::isfinite(horizon))
        throw DomainError("SpaceTimeBox: horizon T must be positive, got " +
                          std::to_string(horizon));
}

double friedrichs_constant(const IntervalDomain& domain)
{
    return domain.length() / std::numbers::pi;
}

}  // namespace obm
