#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "octmc/control.hpp"

namespace octmc {

double retina_velocity_magnitude(double amplitude_um, double period_s) {
  if (!(period_s > 0.0)) throw std::invalid_argument("retina_velocity_magnitude: period must be > 0");
  if (!(amplitude_um >= 0.0)) throw std::invalid_argument("retina_velocity_magnitude: amplitude must be >= 0");
  return 4.0 * amplitude_um / period_s;
}

CommandResult compensation_command(const ControllerState& state, std::optional<double> current_median_um,
                                   double t_s) {
  if (t_s < state.last_update_t_s) throw std::invalid_argument("compensation_command: time moved backward");
  CommandResult r{ControlCommand{}, state};
  r.command.issued_at_s = t_s;
  r.command.current_median_um = current_median_um;
  r.command.previous_median_um = state.previous_median_um;
  r.state.last_update_t_s = t_s;

  if (current_median_um && state.previous_median_um) {
    const double cur = *current_median_um;
    const double prev = *state.previous_median_um;
    double direction = cur > prev ? 1.0 : (cur < prev ? -1.0 : 0.0);
    if (state.inverted) direction = -direction;
    r.command.velocity_z = direction * state.commanded_speed;
  }
  if (current_median_um) r.state.previous_median_um = current_median_um;
  return r;
}

Issues RobotModel::validate() const {
  Issues issues;
  if (!(min_effective_speed >= 0.0)) issues.push_back({"min_effective_speed_um_s", "must be >= 0"});
  if (!(max_speed >= min_effective_speed)) issues.push_back({"max_speed_um_s", "must be >= min_effective_speed_um_s"});
  if (!(command_gain > 0.0)) issues.push_back({"command_gain", "must be > 0"});
  if (!(time_constant_s >= 0.0)) issues.push_back({"time_constant_s", "must be >= 0"});
  return issues;
}

double realized_velocity(double commanded_velocity, const RobotModel& model) {
  const double magnitude = std::abs(commanded_velocity);
  if (magnitude == 0.0 || magnitude < model.min_effective_speed) return 0.0;
  return std::copysign(std::min(magnitude, model.max_speed), commanded_velocity) * model.command_gain;
}

double robot_step(double z_um, const ControlCommand& command, const RobotModel& model, double dt_s) {
  if (!(dt_s > 0.0)) throw std::invalid_argument("robot_step: dt must be > 0");
  return z_um + realized_velocity(command.velocity_z, model) * dt_s;
}

void RobotAxis::step(double commanded_velocity, double dt_s) {
  if (!(dt_s > 0.0)) throw std::invalid_argument("RobotAxis::step: dt must be > 0");
  const double target = realized_velocity(commanded_velocity, model_);
  if (model_.time_constant_s <= 0.0) {
    velocity_ = target;
    z_ += target * dt_s;
    return;
  }
  const double tau = model_.time_constant_s;
  const double decay = std::exp(-dt_s / tau);
  z_ += target * dt_s + (velocity_ - target) * tau * (1.0 - decay);
  velocity_ = target + (velocity_ - target) * decay;
}

PredictorState predictor_update(const PredictorState& p, double measurement_um, double dt_s) {
  if (!std::isfinite(measurement_um)) throw std::invalid_argument("predictor_update: non-finite measurement");
  PredictorState n = p;
  if (!p.initialized) {
    n.x = Eigen::Vector2d(measurement_um, 0.0);
    n.covariance = Eigen::Matrix2d::Zero();
    n.covariance(0, 0) = p.measurement_noise;
    n.covariance(1, 1) = p.initial_velocity_variance;
    n.initialized = true;
    return n;
  }
  if (!(dt_s > 0.0)) throw std::invalid_argument("predictor_update: dt must be > 0");

  Eigen::Matrix2d F;
  F << 1.0, dt_s, 0.0, 1.0;
  const double q = p.process_noise;
  Eigen::Matrix2d Q;
  Q << q * dt_s * dt_s * dt_s / 3.0, q * dt_s * dt_s / 2.0, q * dt_s * dt_s / 2.0, q * dt_s;

  const Eigen::Vector2d x_pred = F * p.x;
  const Eigen::Matrix2d P_pred = F * p.covariance * F.transpose() + Q;

  const double s = P_pred(0, 0) + p.measurement_noise;
  const Eigen::Vector2d k = s > 0.0 ? Eigen::Vector2d(P_pred.col(0) / s) : Eigen::Vector2d::Zero();
  n.x = x_pred + k * (measurement_um - x_pred(0));

  // Joseph form keeps the covariance symmetric PSD.
  Eigen::Matrix2d I_KH = Eigen::Matrix2d::Identity();
  I_KH(0, 0) -= k(0);
  I_KH(1, 0) -= k(1);
  Eigen::Matrix2d P = I_KH * P_pred * I_KH.transpose() + p.measurement_noise * k * k.transpose();
  n.covariance = 0.5 * (P + P.transpose());
  return n;
}

double predictor_forecast(const PredictorState& p, double horizon_s) {
  if (!(horizon_s >= 0.0)) throw std::invalid_argument("predictor_forecast: horizon must be >= 0");
  return p.x(0) + p.x(1) * horizon_s;
}

PredictiveController::PredictiveController(PredictorSettings settings, RobotModel robot) : robot_(robot) {
  filter_.process_noise = settings.process_noise;
  filter_.measurement_noise = settings.measurement_noise;
  filter_.initial_velocity_variance = settings.initial_velocity_variance;
}

ControlCommand PredictiveController::update(std::optional<double> median_um, double t_measured_s, double t_now_s,
                                            double needle_z_um, double interval_s) {
  ControlCommand cmd;
  cmd.issued_at_s = t_now_s;
  cmd.current_median_um = median_um;

  if (median_um) {
    if (!filter_.initialized) {
      filter_ = predictor_update(filter_, *median_um, 0.0);
      ilm_ref_um_ = *median_um;
      needle_ref_um_ = needle_z_um;
      last_measured_t_s_ = t_measured_s;
    } else if (t_measured_s > last_measured_t_s_) {
      filter_ = predictor_update(filter_, *median_um, t_measured_s - last_measured_t_s_);
      last_measured_t_s_ = t_measured_s;
    }
  }
  if (!filter_.initialized || !(interval_s > 0.0)) return cmd;

  const double horizon = std::max(0.0, t_now_s + interval_s - last_measured_t_s_);
  const double retina = predictor_forecast(filter_, horizon);
  cmd.predicted_z_um = retina;
  const double target = needle_ref_um_ + (retina - ilm_ref_um_);
  const double tip_velocity = (target - needle_z_um) / interval_s;
  const double command = tip_velocity / robot_.command_gain;
  cmd.velocity_z = std::clamp(command, -robot_.max_speed, robot_.max_speed);
  return cmd;
}

}  // namespace octmc
