#pragma once

namespace lazy_newton {

/// Newtonian constant of gravitation [m³ kg⁻¹ s⁻²] (CODATA 2018).
inline constexpr double kGravitationalConstant = 6.67430e-11;

/// Default nuclear mass density used by the τ_G estimator [kg/m³].
inline constexpr double kDefaultNuclearDensity = 2.3e17;

}  // namespace lazy_newton
