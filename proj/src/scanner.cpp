#include "octmc/scanner.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace octmc {

double ScanGeometry::ascan_pitch_um() const {
  return n_ascans > 1 ? scan_width_mm * 1000.0 / static_cast<double>(n_ascans - 1) : 0.0;
}

double ScanGeometry::bscan_pitch_um() const {
  return n_bscans > 1 ? scan_breadth_mm * 1000.0 / static_cast<double>(n_bscans - 1) : 0.0;
}

Issues ScanGeometry::validate() const {
  Issues issues;
  if (n_bscans < 1) issues.push_back({"n_bscans", "must be >= 1"});
  if (n_ascans < 1) issues.push_back({"n_ascans", "must be >= 1"});
  if (n_depth < 1) issues.push_back({"n_depth", "must be >= 1"});
  if (!(scan_width_mm >= 0.0)) issues.push_back({"scan_width_mm", "must be >= 0"});
  if (!(scan_breadth_mm >= 0.0)) issues.push_back({"scan_breadth_mm", "must be >= 0"});
  if (!(depth_range_mm > 0.0)) issues.push_back({"depth_range_mm", "must be > 0"});
  return issues;
}

Issues TimingModel::validate() const {
  Issues issues;
  if (!(nominal_acquisition_s > 0.0)) issues.push_back({"nominal_acquisition_s", "must be > 0"});
  if (!(jitter_spread >= 0.0)) issues.push_back({"jitter_spread", "must be >= 0"});
  if (!(processing_overhead_s >= 0.0)) issues.push_back({"processing_overhead_s", "must be >= 0"});
  return issues;
}

double acquisition_duration(const TimingModel& model, RandomStream& rng) {
  const double nominal = model.nominal_acquisition_s;
  double d = nominal;
  switch (model.jitter_kind) {
    case JitterKind::none:
      break;
    case JitterKind::uniform:
      if (model.jitter_spread > 0.0) d = nominal * (1.0 + model.jitter_spread * rng.uniform(-1.0, 1.0));
      break;
    case JitterKind::normal:
      if (model.jitter_spread > 0.0) d = nominal * (1.0 + model.jitter_spread * rng.normal());
      break;
  }
  return std::max(d, kMinDurationFraction * nominal);
}

Vec3 pixel_to_world(const ScanGeometry& g, const PixelIndex& p) {
  if (p.b >= g.n_bscans || p.a >= g.n_ascans || p.d >= g.n_depth) {
    throw std::out_of_range("pixel_to_world: index outside the scan grid");
  }
  return Vec3{static_cast<double>(p.a) * g.ascan_pitch_um(), static_cast<double>(p.b) * g.bscan_pitch_um(),
              static_cast<double>(p.d) * g.depth_pitch_um()};
}

std::optional<std::size_t> depth_index(const ScanGeometry& g, double z_um) {
  const double pitch = g.depth_pitch_um();
  if (!(z_um >= 0.0) || !(z_um < g.depth_range_mm * 1000.0)) return std::nullopt;
  auto d = static_cast<std::size_t>(std::floor(z_um / pitch));
  // Correct the division's rounding so d*pitch <= z < (d+1)*pitch holds exactly.
  if (d > 0 && static_cast<double>(d) * pitch > z_um) --d;
  if (static_cast<double>(d + 1) * pitch <= z_um) ++d;
  if (d >= g.n_depth) return std::nullopt;
  return d;
}

namespace {

std::optional<std::size_t> lateral_index(double v_um, double pitch_um, std::size_t n, double extent_um) {
  // Relative slack absorbs rounding in index * pitch at the far edge.
  if (!(v_um >= 0.0) || !(v_um <= extent_um * (1.0 + 1e-12))) return std::nullopt;
  if (n == 1 || pitch_um <= 0.0) return std::size_t{0};
  const auto i = static_cast<std::size_t>(std::llround(v_um / pitch_um));
  return std::min(i, n - 1);
}

}  // namespace

std::optional<PixelIndex> world_to_pixel(const ScanGeometry& g, const Vec3& p) {
  const auto a = lateral_index(p.x, g.ascan_pitch_um(), g.n_ascans, g.scan_width_mm * 1000.0);
  const auto b = lateral_index(p.y, g.bscan_pitch_um(), g.n_bscans, g.scan_breadth_mm * 1000.0);
  const auto d = depth_index(g, p.z);
  if (!a || !b || !d) return std::nullopt;
  return PixelIndex{*b, *a, *d};
}

Scanner::Scanner(ScanGeometry geometry, TimingModel timing, NeedleShape needle, PhantomConfig phantom)
    : geometry_(geometry), timing_(timing), needle_(needle), phantom_(phantom) {}

AcquisitionSchedule Scanner::schedule(double t_start_s, RandomStream& rng) const {
  const double duration = acquisition_duration(timing_, rng);
  AcquisitionSchedule s;
  s.t_start_s = t_start_s;
  s.t_end_s = t_start_s + duration;
  s.bscan_times_s.resize(geometry_.n_bscans);
  const auto n = static_cast<double>(geometry_.n_bscans);
  for (std::size_t i = 0; i < geometry_.n_bscans; ++i) {
    s.bscan_times_s[i] =
        timing_.staggered ? t_start_s + static_cast<double>(i) * duration / n : t_start_s + 0.5 * duration;
  }
  return s;
}

void Scanner::render_bscan(std::size_t b, const PhantomState& state, LabeledVolume& out) const {
  const ScanGeometry& g = geometry_;
  const double y = static_cast<double>(b) * g.bscan_pitch_um();
  const double radius = 0.5 * needle_.diameter_um;
  const double angle = needle_.angle_deg * std::numbers::pi / 180.0;
  const double slope = std::tan(angle);
  const double cos_angle = std::cos(angle);
  const Vec3& tip = state.needle_tip_um;
  const double dy = y - tip.y;
  const bool needle_in_plane = radius > 0.0 && std::abs(dy) < radius;
  const double half_chord = needle_in_plane ? std::sqrt(radius * radius - dy * dy) / cos_angle : 0.0;

  for (std::size_t a = 0; a < g.n_ascans; ++a) {
    const double x = static_cast<double>(a) * g.ascan_pitch_um();
    auto column = out.column(b, a);

    std::optional<std::size_t> ilm_index;
    std::optional<double> ilm_z = ilm_depth_at(phantom_, state, x, y);
    if (ilm_z) {
      ilm_index = depth_index(g, *ilm_z);
      if (ilm_index) column[*ilm_index] = to_byte(Label::ilm);
      if (auto rpe_index = depth_index(g, *ilm_z + phantom_.retina_thickness_um)) {
        if (!ilm_index || *rpe_index > *ilm_index) column[*rpe_index] = to_byte(Label::rpe);
      }
    }

    if (needle_in_plane && x <= tip.x) {
      const double axis_z = tip.z - (tip.x - x) * slope;
      const double top_z = axis_z - half_chord;
      const bool above_retina = !ilm_z || top_z < *ilm_z;
      if (above_retina) {
        if (auto idx = depth_index(g, top_z); idx && (!ilm_index || *idx < *ilm_index)) {
          column[*idx] = to_byte(Label::needle);
        }
      }
    }
  }
}

void Scanner::render(const AcquisitionSchedule& schedule, std::span<const PhantomState> states,
                     LabeledVolume& out) const {
  if (states.size() != geometry_.n_bscans || schedule.bscan_times_s.size() != geometry_.n_bscans) {
    throw std::invalid_argument("Scanner::render: need one phantom state per B-scan");
  }
  if (!(out.geometry == geometry_) || out.labels.size() != geometry_.voxel_count()) {
    out.geometry = geometry_;
    out.labels.assign(geometry_.voxel_count(), 0);
  } else {
    std::fill(out.labels.begin(), out.labels.end(), std::uint8_t{0});
  }
  out.t_start_s = schedule.t_start_s;
  out.t_end_s = schedule.t_end_s;
  out.bscan_times_s = schedule.bscan_times_s;
  for (std::size_t b = 0; b < geometry_.n_bscans; ++b) render_bscan(b, states[b], out);
}

LabeledVolume Scanner::acquire(const StateSource& source, double t_start_s, RandomStream& rng) const {
  const AcquisitionSchedule s = schedule(t_start_s, rng);
  std::vector<PhantomState> states;
  states.reserve(s.bscan_times_s.size());
  for (double t : s.bscan_times_s) states.push_back(source(t));
  LabeledVolume volume(geometry_);
  render(s, states, volume);
  return volume;
}

LabeledVolume acquire_b5scan(const StateSource& source, double t_start_s, const ScanGeometry& geometry,
                             const TimingModel& timing, RandomStream& rng, const PhantomConfig& phantom,
                             const NeedleShape& needle) {
  return Scanner(geometry, timing, needle, phantom).acquire(source, t_start_s, rng);
}

}  // namespace octmc
