#pragma once

#include <optional>
#include <string>
#include <vector>

#include "octmc/experiment.hpp"

namespace octmc {

// Bundled scenario files: fig5a..fig5d (tracking at the four amplitude and
// speed pairs), fig6-injection and physio-heartbeat.
std::vector<std::string> preset_names();
std::optional<std::string> preset_yaml(const std::string& name);
// Throws std::invalid_argument for an unknown name.
ScenarioConfig preset_config(const std::string& name);

}  // namespace octmc
