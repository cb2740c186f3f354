#pragma once

#include <sliderule/scale.hpp>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sliderule {

inline constexpr double kEarthRadiusKm = 6371.0;
inline constexpr double kEarthRadiusMi = 3959.0;
inline constexpr double kKmPerMile = 1.609344;

/// Mean Earth radius used by horizon scales that do not state one. Reads
/// SLIDERULE_R_KM when set, otherwise kEarthRadiusKm.
double default_earth_radius_km();

/// Earth radius expressed in the unit named by `units_label` ("km", "m",
/// "mi", "ft"/"feet"; anything else is taken as km). Without an override,
/// imperial units start from kEarthRadiusMi.
double earth_radius_in(std::string_view units_label, std::optional<double> radius_km_override);

/// A conventional scale and its customary range. Companion scales (G3, G6)
/// share the unit of another entry, scaled by a unit conversion factor.
struct RegistryEntry {
  std::string name;
  ScaleFunction function;
  std::string description;
  std::string units_label;
  double zoom = 1.0;
  double x_min = 0.0;
  double x_max = 1.0;
  std::optional<std::string> companion_of;
  double companion_factor = 1.0;
};

/// Registry in stable order. `radius_km` overrides the Earth radius of the
/// horizon family (nullopt: default_earth_radius_km semantics).
std::vector<RegistryEntry> scale_registry(std::optional<double> radius_km = std::nullopt);

const RegistryEntry* find_entry(const std::vector<RegistryEntry>& registry,
                                std::string_view name);

/// Builds the named registry scale at the given length. Throws InvalidInput
/// for unknown names.
ScaleSpec make_registry_scale(std::string_view name, double length_mm,
                              std::optional<double> radius_km = std::nullopt);

}  // namespace sliderule
