#pragma once

#include <filesystem>
#include <string>

#include "octmc/experiment.hpp"

namespace octmc {

struct PlotOptions {
  int width_px = 900;
  int height_px = 420;
  std::string title;
};

// Needle tip (blue) and stage (orange) Z over time, each zeroed at its first
// sample, with dashed markers at insertion and injection events. Throws
// std::invalid_argument for an empty trace.
std::string render_trace_svg(const Trace& trace, const PlotOptions& options = {});

void write_trace_svg(const std::filesystem::path& path, const Trace& trace, const PlotOptions& options = {});

}  // namespace octmc
