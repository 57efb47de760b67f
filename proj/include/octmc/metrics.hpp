#pragma once

#include <optional>
#include <string>
#include <vector>

#include "octmc/experiment.hpp"

namespace octmc {

enum class InjectionOutcome { bleb, vitreous, rpe_breach, indeterminate };

std::string outcome_name(InjectionOutcome outcome);

struct Metrics {
  double max_deviation_um = 0.0;
  double rms_error_um = 0.0;
  // Same deviation measured against the true ILM at the needle instead of the stage.
  double max_deviation_ilm_um = 0.0;
  double rms_error_ilm_um = 0.0;
  double drift_slope_um_s = 0.0;
  std::optional<double> phase_lag_s;  // positive: needle trails the stage
  std::optional<double> amplitude_ratio;
  std::optional<InjectionOutcome> injection;
};

// Samples every series on a uniform grid by linear interpolation.
struct UniformSeries {
  double t0_s = 0.0;
  double dt_s = 0.0;
  std::vector<double> stage;
  std::vector<double> needle;
  std::vector<double> ilm;
  std::vector<double> rpe;
};

UniformSeries resample(const Trace& trace, double dt_s);

// `period_s` is the motion period used for lag and amplitude estimates; both
// are absent when the trace spans fewer than two periods. Throws
// std::invalid_argument for an empty trace.
Metrics compute_metrics(const Trace& trace, double period_s, double dt_s = 1e-2);

// Lag (s) maximising the Pearson correlation of `lagging` against `reference`
// over [-max_lag, max_lag]; empty if either series has no variance.
std::optional<double> cross_correlation_lag(const std::vector<double>& reference, const std::vector<double>& lagging,
                                            double dt_s, double max_lag_s);

// Fundamental amplitude at 1/period by projection on sin and cos after
// removing the linear trend; uses the longest whole number of periods.
double fundamental_amplitude(const std::vector<double>& series, double dt_s, double period_s);

// Least-squares slope of y against t = t0 + i*dt.
double linear_slope(const std::vector<double>& y, double dt_s);

// Throws std::invalid_argument for a non-inject config. A run whose injection
// window never opened is indeterminate.
InjectionOutcome classify_injection(const Trace& trace, const ScenarioConfig& config);

// Thresholds on the fraction of the injection window.
inline constexpr double kBlebOccupancy = 0.9;
inline constexpr double kVitreousFraction = 0.1;

}  // namespace octmc
