#pragma once

#include <optional>

#include "obm/fields.hpp"
#include "obm/majorant.hpp"
#include "obm/quadrature.hpp"

namespace obm {

/// Original data (f, u0) and simplified data (f~, u0~) on the same cylinder,
/// obstacle and Friedrichs constant. The simplified solution u~ is needed
/// only by the sharp bound.
struct CoarseningPair {
    ProblemData fine;
    ProblemData coarse;
    std::optional<SpaceTimeField> coarse_solution;
    CoincidenceClassifier classifier{};

    /// Throws DomainError unless box, C_F and phi agree (phi on samples).
    void validate(int samples = 200) const;
};

/// g = f - f~ where u~ is off the obstacle, max(f - f~, 0) where it touches.
SpaceTimeField modeling_residual(const CoarseningPair& pair);

/// ||u0 - u0~||^2 + alpha C_F^2 ||g||^2. Throws MissingSolution without u~.
double coarsening_bound_sharp(const CoarseningPair& pair, double alpha,
                              const QuadratureConfig& cfg);

/// ||u0 - u0~||^2 + alpha C_F^2 ||f - f~||^2
double coarsening_bound_coarse(const CoarseningPair& pair, double alpha,
                               const QuadratureConfig& cfg);

}  // namespace obm
