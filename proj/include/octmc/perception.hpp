#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "octmc/rng.hpp"
#include "octmc/scanner.hpp"
#include "octmc/types.hpp"
#include "octmc/validation.hpp"

namespace octmc {

enum class OffsetKind {
  constant,   // always `a`
  symmetric,  // +a or -a with equal probability
  uniform,    // uniform in [a, b)
  normal,     // mean a, standard deviation b
};

struct OffsetDistribution {
  OffsetKind kind = OffsetKind::symmetric;
  double a = 50.0;
  double b = 0.0;

  double sample(RandomStream& rng) const;
  Issues validate() const;

  friend bool operator==(const OffsetDistribution&, const OffsetDistribution&) = default;
};

// Failure modes of the segmentation stage, re-injected after rendering.
struct SegmentationErrorModel {
  double pixel_flip_rate = 0.0;
  // Probability a whole scan's ILM surface is shifted by one offset draw.
  double scan_corruption_rate = 0.0;
  OffsetDistribution corruption_offset{};
  // Probability a column loses its ILM point.
  double dropout_rate = 0.0;

  bool is_identity() const { return pixel_flip_rate == 0.0 && scan_corruption_rate == 0.0 && dropout_rate == 0.0; }
  Issues validate() const;

  friend bool operator==(const SegmentationErrorModel&, const SegmentationErrorModel&) = default;
};

// Order: whole-scan ILM shift, then per-column dropout, then pixel flips.
void corrupt_in_place(LabeledVolume& volume, const SegmentationErrorModel& model, RandomStream& rng);
LabeledVolume corrupt(LabeledVolume volume, const SegmentationErrorModel& model, RandomStream& rng);

struct SurfacePointCloud {
  std::vector<Vec3> ilm;
  std::vector<Vec3> rpe;
  std::vector<Vec3> needle;
  std::uint64_t source_volume_id = 0;
  double t_effective_s = 0.0;  // acquisition midpoint

  const std::vector<Vec3>& points(Label label) const;
  std::vector<Vec3>& points(Label label);
  bool empty() const { return ilm.empty() && rpe.empty() && needle.empty(); }
};

// Topmost occurrence of each class per column, in world coordinates.
SurfacePointCloud extract_surface_point_cloud(const LabeledVolume& volume);

// Lower median of the Z coordinates of one class; empty when there are no points.
std::optional<double> median_layer_depth(const SurfacePointCloud& cloud, Label label);

// Lower median (element (n-1)/2 in sorted order); empty input gives nothing.
std::optional<double> lower_median(std::vector<double> values);

// CSV rows "class,x,y,z,t" with a header line.
void write_point_cloud_csv(std::ostream& out, const SurfacePointCloud& cloud, bool header = true);

}  // namespace octmc
