#pragma once

// Reference implementations written independently of the library code they
// check: straightforward loops with no shared helpers.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "octmc/experiment.hpp"
#include "octmc/scanner.hpp"

namespace oracle {

struct ColumnHits {
  std::array<std::optional<std::size_t>, 4> first;  // indexed by label byte
};

// Per-column first occurrence of each class by plain voxel iteration.
inline std::vector<ColumnHits> first_hits(const octmc::LabeledVolume& v) {
  const auto& g = v.geometry;
  std::vector<ColumnHits> out(g.n_bscans * g.n_ascans);
  for (std::size_t b = 0; b < g.n_bscans; ++b) {
    for (std::size_t a = 0; a < g.n_ascans; ++a) {
      auto& hits = out[b * g.n_ascans + a];
      for (std::size_t d = 0; d < g.n_depth; ++d) {
        const auto cls = static_cast<std::size_t>(v.at(b, a, d));
        if (cls != 0 && cls < 4 && !hits.first[cls]) hits.first[cls] = d;
      }
    }
  }
  return out;
}

// Expected point list for one class, in extraction order (b outer, a inner).
inline std::vector<octmc::Vec3> brute_force_points(const octmc::LabeledVolume& v, octmc::Label label) {
  const auto& g = v.geometry;
  const double width_um = g.scan_width_mm * 1000.0;
  const double breadth_um = g.scan_breadth_mm * 1000.0;
  const double depth_um = g.depth_range_mm * 1000.0;
  const auto hits = first_hits(v);
  std::vector<octmc::Vec3> pts;
  for (std::size_t b = 0; b < g.n_bscans; ++b) {
    for (std::size_t a = 0; a < g.n_ascans; ++a) {
      const auto& h = hits[b * g.n_ascans + a].first[static_cast<std::size_t>(label)];
      if (!h) continue;
      // World position is index times pitch.
      const double x = g.n_ascans > 1 ? static_cast<double>(a) * (width_um / static_cast<double>(g.n_ascans - 1)) : 0.0;
      const double y = g.n_bscans > 1 ? static_cast<double>(b) * (breadth_um / static_cast<double>(g.n_bscans - 1)) : 0.0;
      const double z = static_cast<double>(*h) * (depth_um / static_cast<double>(g.n_depth));
      pts.push_back({x, y, z});
    }
  }
  return pts;
}

inline std::optional<double> sorted_lower_median(std::vector<double> v) {
  if (v.empty()) return std::nullopt;
  std::sort(v.begin(), v.end());
  return v[(v.size() - 1) / 2];
}

// Random small volume with labels drawn from a skewed distribution so that
// empty columns, repeated classes and all-background volumes all occur.
inline octmc::LabeledVolume random_volume(std::mt19937_64& gen) {
  std::uniform_int_distribution<std::size_t> nb(1, 3), na(1, 9), nd(1, 80);
  octmc::ScanGeometry g;
  g.n_bscans = nb(gen);
  g.n_ascans = na(gen);
  g.n_depth = nd(gen);
  octmc::LabeledVolume v(g);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double density = u(gen) < 0.1 ? 0.0 : u(gen) * 0.2;
  std::uniform_int_distribution<int> cls(1, 3);
  for (auto& byte : v.labels) {
    if (u(gen) < density) byte = static_cast<std::uint8_t>(cls(gen));
  }
  return v;
}

// ILM under a needle held at `anchor_depth` below where it entered: closed
// form of the kinematic tether blend.
inline double tethered_ilm(double gain, double free_ilm, double needle_z, double anchor_depth) {
  return (1.0 - gain) * free_ilm + gain * (needle_z - anchor_depth);
}

// Trace whose needle follows `needle(t)` and stage follows `stage(t)`.
template <typename F, typename G>
octmc::Trace synthetic_trace(double duration_s, double dt_s, F stage, G needle) {
  octmc::Trace tr;
  const auto n = static_cast<std::size_t>(std::llround(duration_s / dt_s));
  for (std::size_t i = 0; i <= n; ++i) {
    const double t = static_cast<double>(i) * dt_s;
    octmc::TraceRow r;
    r.t_s = t;
    r.stage_z_um = stage(t);
    r.true_ilm_z_um = 2500.0 + stage(t);
    r.true_rpe_z_um = r.true_ilm_z_um + 250.0;
    r.needle_tip_z_um = needle(t);
    tr.rows.push_back(r);
  }
  return tr;
}

}  // namespace oracle
