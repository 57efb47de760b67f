#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "octmc/validation.hpp"

namespace octmc {

// Average speed of a sinusoid of the given amplitude: the surface travels four
// amplitudes per period. Throws std::invalid_argument for period <= 0 or a
// negative amplitude.
double retina_velocity_magnitude(double amplitude_um, double period_s);

enum class ControlMode { compare_previous, predictive };

struct ControllerState {
  std::optional<double> previous_median_um;
  double commanded_speed = 0.0;  // magnitude, robot command units
  ControlMode mode = ControlMode::compare_previous;
  double last_update_t_s = 0.0;
  // Flips the emitted direction. Only used to build adversarial scenarios.
  bool inverted = false;
};

// Positive velocity moves the needle downward (deeper), matching +Z.
struct ControlCommand {
  double velocity_z = 0.0;
  double issued_at_s = 0.0;
  std::optional<double> current_median_um;
  std::optional<double> previous_median_um;
  std::optional<double> predicted_z_um;
};

struct CommandResult {
  ControlCommand command;
  ControllerState state;
};

// Compare-to-previous bang-bang law: move at the fixed speed in the direction
// the median ILM depth moved since the last valid scan; zero on a tie or when
// either median is missing. A missing median leaves the stored one untouched.
CommandResult compensation_command(const ControllerState& state, std::optional<double> current_median_um,
                                   double t_s);

// Z-axis actuation. Commands below `min_effective_speed` produce no motion,
// larger ones are clamped to `max_speed`; both limits are in command units.
// The tip then moves at command_gain * effective command.
struct RobotModel {
  double min_effective_speed = 250.0;
  double max_speed = 5000.0;
  double command_gain = 1.0;
  // 0 = instantaneous response, otherwise first-order velocity lag.
  double time_constant_s = 0.0;

  Issues validate() const;

  friend bool operator==(const RobotModel&, const RobotModel&) = default;
};

// Realized tip velocity (um/s) for a commanded velocity.
double realized_velocity(double commanded_velocity, const RobotModel& model);

// Instantaneous-response step; dt must be > 0.
double robot_step(double z_um, const ControlCommand& command, const RobotModel& model, double dt_s);

// Stateful axis; honours the optional first-order lag. The lag is integrated
// in closed form, so two half steps equal one full step.
class RobotAxis {
 public:
  RobotAxis(RobotModel model, double z_um) : model_(model), z_(z_um) {}

  void step(double commanded_velocity, double dt_s);
  double z() const { return z_; }
  double velocity() const { return velocity_; }
  const RobotModel& model() const { return model_; }

 private:
  RobotModel model_;
  double z_ = 0.0;
  double velocity_ = 0.0;
};

// Constant-velocity Kalman filter on the median ILM depth.
struct PredictorState {
  Eigen::Vector2d x = Eigen::Vector2d::Zero();  // position (um), velocity (um/s)
  Eigen::Matrix2d covariance = Eigen::Matrix2d::Zero();
  double process_noise = 2.0e4;       // white-acceleration density, um^2/s^3
  double measurement_noise = 4.0;     // um^2
  double initial_velocity_variance = 1.0e4;
  bool initialized = false;
};

// First call initialises from the measurement (dt ignored); later calls run
// predict(dt) then update. Throws std::invalid_argument for a non-finite
// measurement or dt <= 0 on an initialised filter.
PredictorState predictor_update(const PredictorState& p, double measurement_um, double dt_s);

// Position extrapolated `horizon_s` ahead of the last update.
double predictor_forecast(const PredictorState& p, double horizon_s);

struct PredictorSettings {
  double process_noise = 2.0e4;
  double measurement_noise = 4.0;
  double initial_velocity_variance = 1.0e4;

  friend bool operator==(const PredictorSettings&, const PredictorSettings&) = default;
};

// Predictive compensation: filters the median ILM depth, forecasts it to the
// end of the coming control interval and commands the velocity that brings
// the needle to the same offset from the retina it had when tracking began.
class PredictiveController {
 public:
  PredictiveController(PredictorSettings settings, RobotModel robot);

  // `t_measured_s` is the effective time of the scan (its midpoint);
  // `interval_s` the expected time until the next command.
  ControlCommand update(std::optional<double> median_um, double t_measured_s, double t_now_s, double needle_z_um,
                        double interval_s);

  const PredictorState& filter() const { return filter_; }

 private:
  PredictorState filter_;
  RobotModel robot_;
  double last_measured_t_s_ = 0.0;
  double ilm_ref_um_ = 0.0;
  double needle_ref_um_ = 0.0;
};

}  // namespace octmc
