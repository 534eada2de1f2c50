#pragma once

#include <optional>
#include <string>

namespace lw {

// Tolerance tiers keyed to the numerical provenance of a quantity.
enum class Tier { Analytic, Integrated, FiniteDifference, Custom };

inline constexpr double kTolAnalytic = 1e-10;
inline constexpr double kTolIntegrated = 1e-8;
inline constexpr double kTolFiniteDifference = 1e-5;

const char* tier_name(Tier t);
std::optional<Tier> tier_from_name(const std::string& name);

// Tier forced through the LW_TOL_TIER environment variable, if set and valid.
std::optional<Tier> tier_override();

// Applies the override (if any) and returns the tolerance; the FD tier scales
// with 1 + |f|_inf. Custom tiers have no table value and return custom_value.
double tolerance_for(Tier& tier, double f_norm = 0.0, double custom_value = 0.0);

}  // namespace lw
