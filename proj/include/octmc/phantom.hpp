#pragma once

#include <optional>
#include <string>
#include <vector>

#include "octmc/types.hpp"
#include "octmc/validation.hpp"

namespace octmc {

struct SineComponent {
  double amplitude_um = 0.0;
  double period_s = 5.0;
  double phase_rad = 0.0;

  friend bool operator==(const SineComponent&, const SineComponent&) = default;
};

// Externally imposed axial motion: a sum of pure sines. The first component
// is the primary (breathing) term; further components compose e.g. a
// heartbeat on top.
struct MotionProfile {
  std::vector<SineComponent> components;

  static MotionProfile sine(double amplitude_um, double period_s, double phase_rad = 0.0);

  const SineComponent& primary() const { return components.front(); }
  double amplitude_bound_um() const;

  Issues validate() const;

  friend bool operator==(const MotionProfile&, const MotionProfile&) = default;
};

// Preset physiological profiles (axial retina motion).
MotionProfile heartbeat_profile();  // 81 um at ~1 Hz
MotionProfile supine_profile();     // 21.3 um at ~1 Hz

double motion_displacement(const MotionProfile& profile, double t_s);

struct PhantomConfig {
  double ilm_rest_depth_um = 2500.0;
  double retina_thickness_um = 250.0;
  // Flat tissue patch centred on (center_x_um, center_y_um).
  double lateral_extent_mm = 10.0;
  double center_x_um = 2000.0;
  double center_y_um = 50.0;
  // 0 = tissue moves freely around an inserted needle, 1 = locked to it.
  double tethering_gain = 0.7;
  // Lateral half-width of the tissue region dragged by the needle.
  double tether_radius_um = 300.0;

  Issues validate() const;
  bool tissue_at(double x_um, double y_um) const;

  friend bool operator==(const PhantomConfig&, const PhantomConfig&) = default;
};

struct PhantomState {
  double t_s = 0.0;
  double stage_z_um = 0.0;
  // ILM depth as the stage alone would put it.
  double free_ilm_z_um = 0.0;
  // Effective ILM depth at the needle's lateral position.
  double ilm_z_um = 0.0;
  double rpe_z_um = 0.0;
  Vec3 needle_tip_um{};
  bool needle_inserted = false;
  // Needle depth below the ILM that tethering tries to hold; set while inserted.
  std::optional<double> tether_depth_um;
};

// What the needle is doing relative to tissue during this step. While the
// needle is being driven in it cuts through the retina and does not drag it;
// otherwise an inserted needle holds the tissue with the configured gain.
enum class NeedleAction { hold, pierce };

// Advances the phantom to time t. `prev` is the previous state of the same
// run (null for the first call); t must not move backward relative to it.
PhantomState phantom_state_at(const PhantomConfig& config, const MotionProfile& profile, double t_s,
                              const Vec3& needle_tip_um, const PhantomState* prev,
                              NeedleAction action = NeedleAction::hold);

// ILM depth seen by an A-scan at (x, y), including the tethered patch around
// an inserted needle. Empty where there is no tissue.
std::optional<double> ilm_depth_at(const PhantomConfig& config, const PhantomState& state, double x_um,
                                   double y_um);

}  // namespace octmc
