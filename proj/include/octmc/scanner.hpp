#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "octmc/phantom.hpp"
#include "octmc/rng.hpp"
#include "octmc/types.hpp"
#include "octmc/validation.hpp"

namespace octmc {

// B5-scan window: n_bscans equally spaced B-scans across the breadth, each
// n_ascans columns across the width, each column n_depth pixels deep.
struct ScanGeometry {
  std::size_t n_bscans = 5;
  std::size_t n_ascans = 1000;
  std::size_t n_depth = 1024;
  double scan_width_mm = 4.0;
  double scan_breadth_mm = 0.1;
  double depth_range_mm = 5.0;

  double depth_pitch_um() const { return depth_range_mm * 1000.0 / static_cast<double>(n_depth); }
  double ascan_pitch_um() const;
  double bscan_pitch_um() const;
  std::size_t column_count() const { return n_bscans * n_ascans; }
  std::size_t voxel_count() const { return column_count() * n_depth; }

  Issues validate() const;
  friend bool operator==(const ScanGeometry&, const ScanGeometry&) = default;
};

enum class JitterKind { none, uniform, normal };

struct TimingModel {
  double nominal_acquisition_s = 0.1;
  JitterKind jitter_kind = JitterKind::uniform;
  // Relative: half-width for uniform, standard deviation for normal.
  double jitter_spread = 0.2;
  double processing_overhead_s = 0.01;
  // false = every B-scan rendered at the acquisition midpoint (snapshot mode).
  bool staggered = true;

  double nominal_interval_s() const { return nominal_acquisition_s + processing_overhead_s; }
  Issues validate() const;

  friend bool operator==(const TimingModel&, const TimingModel&) = default;
};

// Sampled durations never drop below this fraction of nominal.
inline constexpr double kMinDurationFraction = 0.1;

double acquisition_duration(const TimingModel& model, RandomStream& rng);

// Tool geometry: a straight cylinder whose shaft rises toward -X from the tip.
struct NeedleShape {
  double diameter_um = 150.0;
  double angle_deg = 30.0;  // from the horizontal

  friend bool operator==(const NeedleShape&, const NeedleShape&) = default;
};

struct PixelIndex {
  std::size_t b = 0;
  std::size_t a = 0;
  std::size_t d = 0;
  friend bool operator==(const PixelIndex&, const PixelIndex&) = default;
};

// Throws std::out_of_range for indices outside the grid.
Vec3 pixel_to_world(const ScanGeometry& geometry, const PixelIndex& pixel);
// Empty result means the point lies outside the field of view.
std::optional<PixelIndex> world_to_pixel(const ScanGeometry& geometry, const Vec3& point_um);
// Depth index for a world Z, empty outside [0, depth range).
std::optional<std::size_t> depth_index(const ScanGeometry& geometry, double z_um);

struct LabeledVolume {
  ScanGeometry geometry;
  std::vector<std::uint8_t> labels;  // [b][a][d], depth contiguous
  double t_start_s = 0.0;
  double t_end_s = 0.0;
  std::vector<double> bscan_times_s;
  std::uint64_t id = 0;

  LabeledVolume() = default;
  explicit LabeledVolume(const ScanGeometry& g) : geometry(g), labels(g.voxel_count(), 0) {}

  std::size_t offset(std::size_t b, std::size_t a, std::size_t d = 0) const {
    return (b * geometry.n_ascans + a) * geometry.n_depth + d;
  }
  Label at(std::size_t b, std::size_t a, std::size_t d) const { return static_cast<Label>(labels[offset(b, a, d)]); }
  void set(std::size_t b, std::size_t a, std::size_t d, Label l) { labels[offset(b, a, d)] = to_byte(l); }
  std::span<const std::uint8_t> column(std::size_t b, std::size_t a) const {
    return {labels.data() + offset(b, a), geometry.n_depth};
  }
  std::span<std::uint8_t> column(std::size_t b, std::size_t a) { return {labels.data() + offset(b, a), geometry.n_depth}; }

  friend bool operator==(const LabeledVolume&, const LabeledVolume&) = default;
};

struct AcquisitionSchedule {
  double t_start_s = 0.0;
  double t_end_s = 0.0;
  std::vector<double> bscan_times_s;  // render instant for each B-scan
};

using StateSource = std::function<PhantomState(double t_s)>;

class Scanner {
 public:
  Scanner(ScanGeometry geometry, TimingModel timing, NeedleShape needle, PhantomConfig phantom);

  const ScanGeometry& geometry() const { return geometry_; }
  const TimingModel& timing() const { return timing_; }

  // Draws the acquisition duration (one draw per call) and lays out the
  // B-scan instants.
  AcquisitionSchedule schedule(double t_start_s, RandomStream& rng) const;

  // `states[i]` is the phantom at schedule.bscan_times_s[i]. `out` is reused
  // across acquisitions; it is resized if its geometry differs.
  void render(const AcquisitionSchedule& schedule, std::span<const PhantomState> states, LabeledVolume& out) const;

  LabeledVolume acquire(const StateSource& source, double t_start_s, RandomStream& rng) const;

 private:
  void render_bscan(std::size_t b, const PhantomState& state, LabeledVolume& out) const;

  ScanGeometry geometry_;
  TimingModel timing_;
  NeedleShape needle_;
  PhantomConfig phantom_;
};

LabeledVolume acquire_b5scan(const StateSource& source, double t_start_s, const ScanGeometry& geometry,
                             const TimingModel& timing, RandomStream& rng, const PhantomConfig& phantom = {},
                             const NeedleShape& needle = {});

}  // namespace octmc
