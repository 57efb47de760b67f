#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "octmc/control.hpp"
#include "octmc/perception.hpp"
#include "octmc/phantom.hpp"
#include "octmc/scanner.hpp"
#include "octmc/validation.hpp"

namespace octmc {

// Tip speed per unit of robot command implied by the reported command values
// (0.8 command units for an 80 um/s retina).
inline constexpr double kDefaultCommandGain = 0.1;

enum class ScenarioKind { track, inject };

struct NeedleSetup {
  double start_gap_um = 500.0;  // tip height above the free ILM at t = 0
  double x_um = 2000.0;
  double y_um = 50.0;
  NeedleShape shape{};

  friend bool operator==(const NeedleSetup&, const NeedleSetup&) = default;
};

struct InjectionProtocol {
  double target_relative_depth = 0.5;  // 0 = ILM, 1 = RPE
  double insertion_speed_um_s = 1000.0;  // realized tip speed while inserting
  double volume_ml = 0.1;
  double rate_ml_per_min = 1.0;

  double window_s() const { return volume_ml / rate_ml_per_min * 60.0; }

  friend bool operator==(const InjectionProtocol&, const InjectionProtocol&) = default;
};

struct ControllerSettings {
  ControlMode mode = ControlMode::compare_previous;
  // Command magnitude for compare_previous. Empty: the retina's average
  // speed converted to command units through the robot gain.
  std::optional<double> speed;
  bool invert_sign = false;
  PredictorSettings predictor{};

  friend bool operator==(const ControllerSettings&, const ControllerSettings&) = default;
};

struct ScenarioConfig {
  std::string name = "scenario";
  ScenarioKind kind = ScenarioKind::track;
  double duration_s = 60.0;
  std::uint64_t seed = 1;
  MotionProfile motion = MotionProfile::sine(100.0, 5.0);
  PhantomConfig phantom{};
  NeedleSetup needle{};
  ScanGeometry geometry{};
  TimingModel timing{};
  SegmentationErrorModel errors{};
  RobotModel robot{.command_gain = kDefaultCommandGain};
  ControllerSettings controller{.speed = 800.0};
  InjectionProtocol injection{};
  double fine_step_s = 1e-3;
  double trace_step_s = 1e-2;

  Issues validate() const;
  // Resolved command magnitude for compare_previous mode.
  double commanded_speed() const;

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

// Event tags, joined with '|' when several fall on one row.
inline constexpr const char* kEventControl = "control";
inline constexpr const char* kEventInsertDone = "insert_done";
inline constexpr const char* kEventInjectStart = "inject_start";
inline constexpr const char* kEventInjectEnd = "inject_end";

struct TraceRow {
  double t_s = 0.0;
  double stage_z_um = 0.0;
  double true_ilm_z_um = 0.0;
  double true_rpe_z_um = 0.0;
  double needle_tip_z_um = 0.0;
  std::optional<double> measured_median_ilm_z_um;
  double commanded_velocity_um_s = 0.0;
  std::string event;

  bool has_event(const std::string& tag) const;
};

struct Trace {
  std::vector<TraceRow> rows;
};

// Called once per processed scan, before it is discarded.
struct ScanObserver {
  std::function<void(const LabeledVolume&, const SurfacePointCloud&)> on_scan;
};

// Throws std::invalid_argument listing every validation issue before running.
Trace run_scenario(const ScenarioConfig& config, const ScanObserver* observer = nullptr);

std::string format_issues(const Issues& issues);

}  // namespace octmc
