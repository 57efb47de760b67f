#include "octmc/presets.hpp"

#include <stdexcept>
#include <utility>

#include "octmc/config.hpp"

namespace octmc {

namespace {

struct Preset {
  const char* name;
  const char* yaml;
};

constexpr Preset kPresets[] = {
    {"fig5a", R"(name: fig5a
kind: track
duration_s: 60
motion: {amplitude_um: 100, period_s: 5}
controller: {mode: compare_previous, speed: 800}
)"},
    {"fig5b", R"(name: fig5b
kind: track
duration_s: 60
motion: {amplitude_um: 50, period_s: 5}
controller: {mode: compare_previous, speed: 400}
)"},
    {"fig5c", R"(name: fig5c
kind: track
duration_s: 60
motion: {amplitude_um: 25, period_s: 5}
controller: {mode: compare_previous, speed: 200}
)"},
    {"fig5d", R"(name: fig5d
kind: track
duration_s: 60
motion: {amplitude_um: 25, period_s: 5}
controller: {mode: compare_previous, speed: 300}
)"},
    {"fig6-injection", R"(name: fig6-injection
kind: inject
duration_s: 15
motion: {amplitude_um: 100, period_s: 5}
controller: {mode: compare_previous, speed: 800}
injection:
  target_relative_depth: 0.5
  insertion_speed_um_s: 1000
  volume_ml: 0.1
  rate_ml_per_min: 1
)"},
    {"physio-heartbeat", R"(name: physio-heartbeat
kind: track
duration_s: 20
motion: {amplitude_um: 81, period_s: 1}
controller: {mode: compare_previous, speed: auto}
)"},
};

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& p : kPresets) names.emplace_back(p.name);
  return names;
}

std::optional<std::string> preset_yaml(const std::string& name) {
  for (const auto& p : kPresets) {
    if (name == p.name) return std::string(p.yaml);
  }
  return std::nullopt;
}

ScenarioConfig preset_config(const std::string& name) {
  const auto text = preset_yaml(name);
  if (!text) throw std::invalid_argument("unknown preset '" + name + "'");
  return parse_config(*text, "preset:" + name);
}

}  // namespace octmc
