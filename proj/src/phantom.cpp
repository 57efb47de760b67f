#include "octmc/phantom.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace octmc {

MotionProfile MotionProfile::sine(double amplitude_um, double period_s, double phase_rad) {
  return MotionProfile{{SineComponent{amplitude_um, period_s, phase_rad}}};
}

double MotionProfile::amplitude_bound_um() const {
  double sum = 0.0;
  for (const auto& c : components) sum += c.amplitude_um;
  return sum;
}

Issues MotionProfile::validate() const {
  Issues issues;
  if (components.empty()) issues.push_back({"amplitude_um", "motion profile needs at least one component"});
  for (std::size_t i = 0; i < components.size(); ++i) {
    const auto& c = components[i];
    const std::string prefix = i == 0 ? "" : "extra_components[" + std::to_string(i - 1) + "].";
    if (!(c.amplitude_um >= 0.0) || !std::isfinite(c.amplitude_um)) {
      issues.push_back({prefix + "amplitude_um", "must be >= 0"});
    }
    if (!(c.period_s > 0.0) || !std::isfinite(c.period_s)) issues.push_back({prefix + "period_s", "must be > 0"});
    if (!std::isfinite(c.phase_rad)) issues.push_back({prefix + "phase_rad", "must be finite"});
  }
  return issues;
}

MotionProfile heartbeat_profile() { return MotionProfile::sine(81.0, 1.0); }

MotionProfile supine_profile() { return MotionProfile::sine(21.3, 1.0); }

double motion_displacement(const MotionProfile& profile, double t_s) {
  double z = 0.0;
  for (const auto& c : profile.components) {
    z += c.amplitude_um * std::sin(2.0 * std::numbers::pi * t_s / c.period_s + c.phase_rad);
  }
  return z;
}

Issues PhantomConfig::validate() const {
  Issues issues;
  if (!(retina_thickness_um > 0.0)) issues.push_back({"retina_thickness_um", "must be > 0"});
  if (!(lateral_extent_mm > 0.0)) issues.push_back({"lateral_extent_mm", "must be > 0"});
  if (!(tethering_gain >= 0.0 && tethering_gain <= 1.0)) issues.push_back({"tethering_gain", "must be in [0, 1]"});
  if (!(tether_radius_um >= 0.0)) issues.push_back({"tether_radius_um", "must be >= 0"});
  if (!std::isfinite(ilm_rest_depth_um)) issues.push_back({"ilm_rest_depth_um", "must be finite"});
  return issues;
}

bool PhantomConfig::tissue_at(double x_um, double y_um) const {
  const double half = lateral_extent_mm * 500.0;
  return std::abs(x_um - center_x_um) <= half && std::abs(y_um - center_y_um) <= half;
}

PhantomState phantom_state_at(const PhantomConfig& config, const MotionProfile& profile, double t_s,
                              const Vec3& needle_tip_um, const PhantomState* prev, NeedleAction action) {
  if (prev != nullptr && t_s < prev->t_s) {
    throw std::invalid_argument("phantom_state_at: time moved backward within a run");
  }
  PhantomState s;
  s.t_s = t_s;
  s.stage_z_um = motion_displacement(profile, t_s);
  s.free_ilm_z_um = config.ilm_rest_depth_um + s.stage_z_um;
  s.needle_tip_um = needle_tip_um;

  const double needle_z = needle_tip_um.z;
  const bool over_tissue = config.tissue_at(needle_tip_um.x, needle_tip_um.y);
  s.needle_inserted = over_tissue && needle_z >= s.free_ilm_z_um;
  s.ilm_z_um = s.free_ilm_z_um;

  const bool was_held = prev != nullptr && prev->needle_inserted && prev->tether_depth_um.has_value();
  if (over_tissue && (s.needle_inserted || was_held)) {
    if (action == NeedleAction::pierce || !was_held) {
      if (s.needle_inserted) s.tether_depth_um = needle_z - s.free_ilm_z_um;
    } else {
      // Blend between free motion and the depth that keeps the needle's
      // insertion depth constant.
      const double g = config.tethering_gain;
      const double anchor = *prev->tether_depth_um;
      const double held = (1.0 - g) * s.free_ilm_z_um + g * (needle_z - anchor);
      if (needle_z >= held) {
        s.ilm_z_um = held;
        s.needle_inserted = true;
        s.tether_depth_um = anchor;
      } else {
        // Pulled out of the held surface: tissue springs back.
        s.needle_inserted = needle_z >= s.free_ilm_z_um;
        if (s.needle_inserted) s.tether_depth_um = needle_z - s.free_ilm_z_um;
      }
    }
  }
  s.rpe_z_um = s.ilm_z_um + config.retina_thickness_um;
  return s;
}

std::optional<double> ilm_depth_at(const PhantomConfig& config, const PhantomState& state, double x_um,
                                   double y_um) {
  if (!config.tissue_at(x_um, y_um)) return std::nullopt;
  if (state.needle_inserted && std::abs(x_um - state.needle_tip_um.x) <= config.tether_radius_um) {
    return state.ilm_z_um;
  }
  return state.free_ilm_z_um;
}

}  // namespace octmc
