#pragma once

#include <span>
#include <vector>

#include "lazy_newton/vec3.hpp"

namespace lazy_newton {

struct PotentialSample {
    Vec3 point;
    double potential;
};

/// Apparent displacement of a point source inferred from its potential.
struct ShiftFit {
    Vec3 delta;
    /// Root-mean-square potential residual [J/kg].
    double residual_rms = 0.0;
    std::vector<Vec3> probes;
    bool converged = false;
    int iterations = 0;
};

/// Ten probe points on a sphere of the given radius: the six ±axis points
/// and four tetrahedral diagonals.
std::vector<Vec3> probe_sphere(const Vec3& center, double radius);

/// Least-squares fit of −GM/|r_i − (nominal + δ)| to the samples over δ,
/// Gauss–Newton from δ = 0.
///
/// Needs at least six samples whose directions from `nominal` constrain all
/// three components of δ (PreconditionError otherwise). Stops when the step
/// drops below 1e-15 m, or below the rounding floor of the probe geometry,
/// and flags non-convergence after 50 iterations while still returning the
/// last iterate.
ShiftFit fit_apparent_shift(std::span<const PotentialSample> samples, double mass, const Vec3& nominal);

/// Same fit on potential anomalies φ_i + GM/|r_i − nominal|, with the model
/// difference evaluated free of cancellation.
ShiftFit fit_apparent_shift_anomaly(std::span<const PotentialSample> anomalies, double mass, const Vec3& nominal);

}  // namespace lazy_newton
