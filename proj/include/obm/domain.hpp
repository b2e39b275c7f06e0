#pragma once

#include <algorithm>

namespace obm {

/// Open interval (a, b) hosting the spatial domain.
class IntervalDomain {
public:
    IntervalDomain(double a, double b);

    double a() const noexcept { return a_; }
    double b() const noexcept { return b_; }
    double length() const noexcept { return b_ - a_; }
    bool contains(double x) const noexcept { return x >= a_ && x <= b_; }

private:
    double a_;
    double b_;
};

/// Space-time cylinder Omega x (0, T).
class SpaceTimeBox {
public:
    SpaceTimeBox(IntervalDomain domain, double horizon);

    const IntervalDomain& domain() const noexcept { return domain_; }
    double horizon() const noexcept { return horizon_; }
    double measure() const noexcept { return domain_.length() * horizon_; }

private:
    IntervalDomain domain_;
    double horizon_;
};

/// Friedrichs constant of H^1_0 on the interval: (b - a) / pi.
double friedrichs_constant(const IntervalDomain& domain);

inline double positive_part(double s) noexcept { return std::max(0.0, s); }

}  // namespace obm
