#pragma once

#include <filesystem>
#include <iosfwd>

#include "octmc/scanner.hpp"

namespace octmc {

// Binary B5-scan dump, all integers and doubles little-endian:
//
//   offset  size  field
//   0       8     magic "OCTB5V01"
//   8       4     n_bscans        (uint32)
//   12      4     n_ascans        (uint32)
//   16      4     n_depth         (uint32)
//   20      4     reserved, 0
//   24      8     volume id       (uint64)
//   32      8     scan_width_mm   (float64)
//   40      8     scan_breadth_mm (float64)
//   48      8     depth_range_mm  (float64)
//   56      8     t_start_s       (float64)
//   64      8     t_end_s         (float64)
//   72      8*n_bscans  per-B-scan timestamps (float64)
//   ...     n_bscans*n_ascans*n_depth label bytes, [b][a][d] row-major
void write_volume(std::ostream& out, const LabeledVolume& volume);
LabeledVolume read_volume(std::istream& in);

void write_volume_file(const std::filesystem::path& path, const LabeledVolume& volume);
LabeledVolume read_volume_file(const std::filesystem::path& path);

}  // namespace octmc
