#include "octmc/perception.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "octmc/format.hpp"
#include "octmc/kernels/kernels.hpp"

namespace octmc {

double OffsetDistribution::sample(RandomStream& rng) const {
  switch (kind) {
    case OffsetKind::constant:
      return a;
    case OffsetKind::symmetric:
      return rng.bernoulli(0.5) ? a : -a;
    case OffsetKind::uniform:
      return rng.uniform(a, b);
    case OffsetKind::normal:
      return a + b * rng.normal();
  }
  return 0.0;
}

Issues OffsetDistribution::validate() const {
  Issues issues;
  if (!std::isfinite(a) || !std::isfinite(b)) issues.push_back({"kind", "offset parameters must be finite"});
  if (kind == OffsetKind::uniform && !(b >= a)) issues.push_back({"high_um", "must be >= low_um"});
  if (kind == OffsetKind::normal && !(b >= 0.0)) issues.push_back({"sd_um", "must be >= 0"});
  return issues;
}

Issues SegmentationErrorModel::validate() const {
  Issues issues;
  auto prob = [&](double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0)) issues.push_back({name, "must be in [0, 1]"});
  };
  prob(pixel_flip_rate, "pixel_flip_rate");
  prob(scan_corruption_rate, "scan_corruption_rate");
  prob(dropout_rate, "dropout_rate");
  append_issues(issues, corruption_offset.validate(), "corruption_offset");
  return issues;
}

void corrupt_in_place(LabeledVolume& volume, const SegmentationErrorModel& model, RandomStream& rng) {
  const ScanGeometry& g = volume.geometry;
  const std::uint8_t ilm = to_byte(Label::ilm);
  const auto n_depth = static_cast<std::ptrdiff_t>(g.n_depth);

  if (model.scan_corruption_rate > 0.0 && rng.bernoulli(model.scan_corruption_rate)) {
    const double offset_um = model.corruption_offset.sample(rng);
    const auto shift = static_cast<std::ptrdiff_t>(std::llround(offset_um / g.depth_pitch_um()));
    if (shift != 0) {
      for (std::size_t b = 0; b < g.n_bscans; ++b) {
        for (std::size_t a = 0; a < g.n_ascans; ++a) {
          auto col = volume.column(b, a);
          const std::size_t idx = kernels::find_first_equal(col, ilm);
          if (idx == col.size()) continue;
          const std::ptrdiff_t moved = std::clamp<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(idx) + shift, 0, n_depth - 1);
          col[idx] = 0;
          col[static_cast<std::size_t>(moved)] = ilm;
        }
      }
    }
  }

  if (model.dropout_rate > 0.0) {
    for (std::size_t b = 0; b < g.n_bscans; ++b) {
      for (std::size_t a = 0; a < g.n_ascans; ++a) {
        auto col = volume.column(b, a);
        const std::size_t idx = kernels::find_first_equal(col, ilm);
        if (idx == col.size()) continue;
        if (rng.bernoulli(model.dropout_rate)) col[idx] = 0;
      }
    }
  }

  if (model.pixel_flip_rate > 0.0) {
    // Skip straight to the next flipped voxel instead of drawing per voxel.
    const std::uint64_t n = volume.labels.size();
    std::uint64_t pos = rng.geometric(model.pixel_flip_rate);
    while (pos < n) {
      auto& v = volume.labels[pos];
      v = static_cast<std::uint8_t>((v % kLabelCount + 1 + rng.below(kLabelCount - 1)) % kLabelCount);
      const std::uint64_t gap = rng.geometric(model.pixel_flip_rate);
      if (gap >= n - pos) break;
      pos += 1 + gap;
    }
  }
}

LabeledVolume corrupt(LabeledVolume volume, const SegmentationErrorModel& model, RandomStream& rng) {
  corrupt_in_place(volume, model, rng);
  return volume;
}

const std::vector<Vec3>& SurfacePointCloud::points(Label label) const {
  switch (label) {
    case Label::rpe:
      return rpe;
    case Label::needle:
      return needle;
    default:
      return ilm;
  }
}

std::vector<Vec3>& SurfacePointCloud::points(Label label) {
  return const_cast<std::vector<Vec3>&>(static_cast<const SurfacePointCloud&>(*this).points(label));
}

SurfacePointCloud extract_surface_point_cloud(const LabeledVolume& volume) {
  const ScanGeometry& g = volume.geometry;
  SurfacePointCloud cloud;
  cloud.source_volume_id = volume.id;
  cloud.t_effective_s = 0.5 * (volume.t_start_s + volume.t_end_s);
  cloud.ilm.reserve(g.column_count());
  cloud.rpe.reserve(g.column_count());

  const double pa = g.ascan_pitch_um();
  const double pb = g.bscan_pitch_um();
  const double pd = g.depth_pitch_um();
  constexpr unsigned kAllFound = 0b1110;

  for (std::size_t b = 0; b < g.n_bscans; ++b) {
    const double y = static_cast<double>(b) * pb;
    for (std::size_t a = 0; a < g.n_ascans; ++a) {
      const double x = static_cast<double>(a) * pa;
      const auto col = volume.column(b, a);
      unsigned found = 0;
      std::size_t pos = 0;
      while (found != kAllFound && pos < col.size()) {
        pos += kernels::find_first_nonzero(col.subspan(pos));
        if (pos >= col.size()) break;
        const std::uint8_t v = col[pos];
        if (v < kLabelCount && (found & (1u << v)) == 0) {
          found |= 1u << v;
          cloud.points(static_cast<Label>(v)).push_back(Vec3{x, y, static_cast<double>(pos) * pd});
        }
        ++pos;
      }
    }
  }
  return cloud;
}

std::optional<double> lower_median(std::vector<double> values) {
  if (values.empty()) return std::nullopt;
  const auto mid = values.begin() + static_cast<std::ptrdiff_t>((values.size() - 1) / 2);
  std::nth_element(values.begin(), mid, values.end());
  return *mid;
}

std::optional<double> median_layer_depth(const SurfacePointCloud& cloud, Label label) {
  const auto& pts = cloud.points(label);
  std::vector<double> z;
  z.reserve(pts.size());
  for (const auto& p : pts) z.push_back(p.z);
  return lower_median(std::move(z));
}

void write_point_cloud_csv(std::ostream& out, const SurfacePointCloud& cloud, bool header) {
  if (header) out << "class,x,y,z,t\n";
  for (Label label : {Label::ilm, Label::rpe, Label::needle}) {
    for (const auto& p : cloud.points(label)) {
      out << label_name(label) << ',' << fmt_fixed(p.x, 4) << ',' << fmt_fixed(p.y, 4) << ',' << fmt_fixed(p.z, 4)
          << ',' << fmt_fixed(cloud.t_effective_s, 9) << '\n';
    }
  }
}

}  // namespace octmc
