#include "lw/tolerance.hpp"

#include <cstdlib>

namespace lw {

const char* tier_name(Tier t) {
  switch (t) {
    case Tier::Analytic: return "analytic";
    case Tier::Integrated: return "integrated";
    case Tier::FiniteDifference: return "fd";
    case Tier::Custom: return "custom";
  }
  return "custom";
}

std::optional<Tier> tier_from_name(const std::string& name) {
  if (name == "analytic") return Tier::Analytic;
  if (name == "integrated") return Tier::Integrated;
  if (name == "fd" || name == "finite_difference") return Tier::FiniteDifference;
  return std::nullopt;
}

std::optional<Tier> tier_override() {
  const char* env = std::getenv("LW_TOL_TIER");
  if (!env) return std::nullopt;
  return tier_from_name(env);
}

double tolerance_for(Tier& tier, double f_norm, double custom_value) {
  if (tier != Tier::Custom) {
    if (auto forced = tier_override()) tier = *forced;
  }
  switch (tier) {
    case Tier::Analytic: return kTolAnalytic;
    case Tier::Integrated: return kTolIntegrated;
    case Tier::FiniteDifference: return kTolFiniteDifference * (1.0 + f_norm);
    case Tier::Custom: return custom_value;
  }
  return custom_value;
}

}  // namespace lw
