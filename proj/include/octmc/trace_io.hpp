#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "octmc/experiment.hpp"

namespace octmc {

inline constexpr const char* kTraceHeader =
    "t_s,stage_z_um,true_ilm_z_um,true_rpe_z_um,needle_tip_z_um,measured_median_ilm_z_um,commanded_velocity_um_s,"
    "event";

// Times with 9 decimals, lengths and speeds with 4.
void write_trace_csv(std::ostream& out, const Trace& trace);
std::string trace_to_csv(const Trace& trace);

// Throws std::runtime_error naming the line on a malformed file.
Trace read_trace_csv(std::istream& in);
Trace read_trace_file(const std::filesystem::path& path);

// Writes to a sibling temporary file, then renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace octmc
