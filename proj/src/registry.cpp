#include <sliderule/registry.hpp>

#include <sliderule/errors.hpp>

#include <fmt/format.h>

#include <cmath>
#include <cstdlib>
#include <numbers>

namespace sliderule {

double default_earth_radius_km() {
  if (const char* env = std::getenv("SLIDERULE_R_KM")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end != env && *end == '\0' && std::isfinite(v) && v > 0) return v;
    throw InvalidInput(fmt::format("SLIDERULE_R_KM must be a positive number, got '{}'", env));
  }
  return kEarthRadiusKm;
}

double earth_radius_in(std::string_view units_label, std::optional<double> radius_km_override) {
  const bool env_set = std::getenv("SLIDERULE_R_KM") != nullptr;
  const std::optional<double> km =
      radius_km_override ? radius_km_override
                         : (env_set ? std::optional<double>(default_earth_radius_km()) : std::nullopt);
  const double r_km = km.value_or(kEarthRadiusKm);
  const double r_mi = km ? *km / kKmPerMile : kEarthRadiusMi;
  if (units_label == "m") return r_km * 1000.0;
  if (units_label == "mi") return r_mi;
  if (units_label == "ft" || units_label == "feet") return r_mi * 5280.0;
  return r_km;
}

std::vector<RegistryEntry> scale_registry(std::optional<double> radius_km) {
  const double e = std::numbers::e;
  const auto horizon = [&](std::string_view units) {
    return ScaleFunction::horizon(earth_radius_in(units, radius_km));
  };
  std::vector<RegistryEntry> r;
  r.push_back({"C", ScaleFunction::log(10), "x scale, distance log10(x)", "", 1.0, 1, 10, std::nullopt, 1.0});
  r.push_back({"D", ScaleFunction::log(10), "x scale on the body, distance log10(x)", "", 1.0, 1, 10, std::nullopt, 1.0});
  r.push_back({"B", ScaleFunction::log(10), "x^2 scale, distance log10(x)/2", "", 0.5, 1, 100, std::nullopt, 1.0});
  r.push_back({"K", ScaleFunction::log(10), "x^3 scale, distance log10(x)/3", "", 1.0 / 3.0, 1, 1000, std::nullopt, 1.0});
  r.push_back({"L", ScaleFunction::equidistant(), "log(x) scale, equidistant distance x", "", 1.0, 0, 1, std::nullopt, 1.0});
  r.push_back({"LL3", ScaleFunction::loglog(e), "e^x scale, distance log10(ln x)", "", 1.0, e, std::exp(10.0), std::nullopt, 1.0});
  r.push_back({"R1", ScaleFunction::power(-1), "1/x scale, reciprocal distance", "", 1.0, 0.6, 10, std::nullopt, 1.0});
  r.push_back({"R2", ScaleFunction::power(-1), "1/x scale, reciprocal distance", "", 1.0, 4, 70, std::nullopt, 1.0});
  r.push_back({"Q1", ScaleFunction::power(2), "x^2 scale, quadratic distance", "", 1.0, 0, 7, std::nullopt, 1.0});
  r.push_back({"Q2", ScaleFunction::power(2), "x^2 scale, quadratic distance", "", 1.0, 0, 50, std::nullopt, 1.0});
  r.push_back({"G1", horizon("ft"), "horizon from height (feet)", "ft", 1.0, 0, 200, std::nullopt, 1.0});
  r.push_back({"G2", horizon("ft"), "horizon from height (feet), extended range", "ft", 1.0, 0, 20000, std::nullopt, 1.0});
  r.push_back({"G3", ScaleFunction::equidistant(), "horizon length (miles), companion of G1", "mi", 1.0, 0, 0, "G1", 5280.0});
  r.push_back({"G4", horizon("m"), "horizon from height (meters)", "m", 1.0, 0, 60, std::nullopt, 1.0});
  r.push_back({"G5", horizon("m"), "horizon from height (meters), extended range", "m", 1.0, 0, 6000, std::nullopt, 1.0});
  r.push_back({"G6", ScaleFunction::equidistant(), "horizon length (km), companion of G4", "km", 1.0, 0, 0, "G4", 1000.0});
  return r;
}

const RegistryEntry* find_entry(const std::vector<RegistryEntry>& registry,
                                std::string_view name) {
  for (const auto& e : registry)
    if (e.name == name) return &e;
  return nullptr;
}

ScaleSpec make_registry_scale(std::string_view name, double length_mm,
                              std::optional<double> radius_km) {
  const auto reg = scale_registry(radius_km);
  const RegistryEntry* entry = find_entry(reg, name);
  if (!entry) throw InvalidInput(fmt::format("unknown registry scale '{}'", name));

  ScaleDefinition def;
  def.name = entry->name;
  def.function = entry->function;
  def.length_mm = length_mm;
  def.zoom = entry->zoom;
  def.units_label = entry->units_label;
  if (entry->companion_of) {
    const ScaleSpec base = make_registry_scale(*entry->companion_of, length_mm, radius_km);
    def.unit = base.unit() * base.zoom() * entry->companion_factor;
    def.x_min = 0.0;
  } else {
    def.x_min = entry->x_min;
    def.x_max = entry->x_max;
  }
  return ScaleSpec::build(def);
}

}  // namespace sliderule
