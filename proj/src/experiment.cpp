#include "octmc/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace octmc {

namespace {

constexpr std::uint64_t kTimingStream = 1;
constexpr std::uint64_t kSegmentationStream = 2;
constexpr double kTimeEps = 1e-9;

enum class Phase { tracking, awaiting_target, inserting, holding };

void add_event(std::string& into, const char* tag) {
  if (!into.empty()) into += '|';
  into += tag;
}

}  // namespace

bool TraceRow::has_event(const std::string& tag) const {
  std::size_t pos = 0;
  while (pos <= event.size()) {
    const std::size_t end = std::min(event.find('|', pos), event.size());
    if (event.compare(pos, end - pos, tag) == 0) return true;
    pos = end + 1;
  }
  return false;
}

std::string format_issues(const Issues& issues) {
  std::string out;
  for (const auto& i : issues) {
    if (!out.empty()) out += "; ";
    out += i.field + ": " + i.message;
  }
  return out;
}

double ScenarioConfig::commanded_speed() const {
  if (controller.speed) return *controller.speed;
  const auto& p = motion.primary();
  return retina_velocity_magnitude(p.amplitude_um, p.period_s) / robot.command_gain;
}

Issues ScenarioConfig::validate() const {
  Issues issues;
  if (!(duration_s > 0.0) || !std::isfinite(duration_s)) issues.push_back({"duration_s", "must be > 0"});
  if (!(fine_step_s > 0.0)) issues.push_back({"fine_step_s", "must be > 0"});
  if (!(trace_step_s >= fine_step_s)) issues.push_back({"trace_step_s", "must be >= fine_step_s"});
  append_issues(issues, motion.validate(), "motion");
  append_issues(issues, phantom.validate(), "phantom");
  append_issues(issues, geometry.validate(), "scan");
  append_issues(issues, timing.validate(), "timing");
  append_issues(issues, errors.validate(), "segmentation");
  append_issues(issues, robot.validate(), "robot");
  if (geometry.depth_range_mm > 0.0 && geometry.n_depth > 0 &&
      !(phantom.retina_thickness_um > geometry.depth_pitch_um())) {
    issues.push_back({"phantom.retina_thickness_um", "must exceed one depth pixel"});
  }
  if (!(needle.shape.diameter_um >= 0.0)) issues.push_back({"needle.diameter_um", "must be >= 0"});
  if (!(needle.shape.angle_deg >= 0.0 && needle.shape.angle_deg < 90.0)) {
    issues.push_back({"needle.angle_deg", "must be in [0, 90)"});
  }
  if (controller.speed && !(*controller.speed >= 0.0)) issues.push_back({"controller.speed", "must be >= 0"});
  const auto& pp = controller.predictor;
  if (!(pp.process_noise > 0.0)) issues.push_back({"controller.predictor.process_noise", "must be > 0"});
  if (!(pp.measurement_noise > 0.0)) issues.push_back({"controller.predictor.measurement_noise", "must be > 0"});
  if (!(pp.initial_velocity_variance > 0.0)) {
    issues.push_back({"controller.predictor.initial_velocity_variance", "must be > 0"});
  }
  if (kind == ScenarioKind::inject) {
    const auto& inj = injection;
    if (!(inj.target_relative_depth > 0.0 && inj.target_relative_depth < 1.0)) {
      issues.push_back({"injection.target_relative_depth", "must be strictly inside (0, 1)"});
    }
    if (!(inj.insertion_speed_um_s > 0.0)) issues.push_back({"injection.insertion_speed_um_s", "must be > 0"});
    if (!(inj.volume_ml > 0.0)) issues.push_back({"injection.volume_ml", "must be > 0"});
    if (!(inj.rate_ml_per_min > 0.0)) issues.push_back({"injection.rate_ml_per_min", "must be > 0"});
  }
  return issues;
}

namespace {

class Simulation {
 public:
  Simulation(const ScenarioConfig& cfg, const ScanObserver* observer)
      : cfg_(cfg),
        observer_(observer),
        scanner_(cfg.geometry, cfg.timing, cfg.needle.shape, cfg.phantom),
        timing_rng_(cfg.seed, kTimingStream),
        seg_rng_(cfg.seed, kSegmentationStream),
        axis_(cfg.robot, 0.0),
        predictive_(cfg.controller.predictor, cfg.robot) {
    controller_.commanded_speed = cfg.commanded_speed();
    controller_.mode = cfg.controller.mode;
    controller_.inverted = cfg.controller.invert_sign;
    phase_ = cfg.kind == ScenarioKind::inject ? Phase::awaiting_target : Phase::tracking;
    trace_stride_ = std::max<std::int64_t>(1, std::llround(cfg.trace_step_s / cfg.fine_step_s));
  }

  Trace run() {
    const double z0 = cfg_.phantom.ilm_rest_depth_um + motion_displacement(cfg_.motion, 0.0) - cfg_.needle.start_gap_um;
    axis_ = RobotAxis(cfg_.robot, z0);
    state_ = phantom_state_at(cfg_.phantom, cfg_.motion, 0.0, tip(), nullptr, action());
    t_ = 0.0;
    start_acquisition();
    emit_row();

    while (t_ < cfg_.duration_s - kTimeEps) {
      const double t_next = next_event_time();
      advance_to(t_next);
      std::string events;
      bool due_row = false;
      if (std::abs(t_ - static_cast<double>(next_tick_) * cfg_.fine_step_s) <= kTimeEps) {
        due_row = next_tick_ % trace_stride_ == 0;
        ++next_tick_;
      }
      if (phase_ == Phase::inserting && axis_.z() >= insert_target_ - kTimeEps) finish_insertion(events);
      if (inject_end_ && t_ >= *inject_end_ - kTimeEps) {
        add_event(events, kEventInjectEnd);
        inject_end_.reset();
      }
      std::optional<double> measured;
      if (t_ >= command_time_ - kTimeEps) {
        measured = process_scan();
        add_event(events, kEventControl);
        start_acquisition();
      }
      sample_pending_bscans();
      if (due_row || !events.empty() || t_ >= cfg_.duration_s - kTimeEps) emit_row(measured, std::move(events));
    }
    return std::move(trace_);
  }

 private:
  Vec3 tip() const { return Vec3{cfg_.needle.x_um, cfg_.needle.y_um, axis_.z()}; }

  NeedleAction action() const { return phase_ == Phase::inserting ? NeedleAction::pierce : NeedleAction::hold; }

  double next_event_time() const {
    double t = std::min(cfg_.duration_s, static_cast<double>(next_tick_) * cfg_.fine_step_s);
    if (next_bscan_ < schedule_.bscan_times_s.size()) t = std::min(t, schedule_.bscan_times_s[next_bscan_]);
    t = std::min(t, command_time_);
    if (inject_end_) t = std::min(t, *inject_end_);
    if (phase_ == Phase::inserting) {
      const double remaining = insert_target_ - axis_.z();
      t = std::min(t, t_ + std::max(0.0, remaining) / cfg_.injection.insertion_speed_um_s);
    }
    return std::max(t, t_);
  }

  void advance_to(double t_next) {
    const double dt = t_next - t_;
    if (dt > 0.0) {
      if (phase_ == Phase::inserting) {
        const double z = std::min(insert_target_, axis_.z() + cfg_.injection.insertion_speed_um_s * dt);
        axis_ = RobotAxis(cfg_.robot, z);
      } else {
        axis_.step(command_, dt);
      }
    }
    t_ = t_next;
    state_ = phantom_state_at(cfg_.phantom, cfg_.motion, t_, tip(), &state_, action());
  }

  void start_acquisition() {
    schedule_ = scanner_.schedule(t_, timing_rng_);
    command_time_ = schedule_.t_end_s + cfg_.timing.processing_overhead_s;
    next_bscan_ = 0;
    bscan_states_.clear();
    sample_pending_bscans();
  }

  void sample_pending_bscans() {
    while (next_bscan_ < schedule_.bscan_times_s.size() && schedule_.bscan_times_s[next_bscan_] <= t_ + kTimeEps) {
      bscan_states_.push_back(state_);
      ++next_bscan_;
    }
  }

  std::optional<double> process_scan() {
    scanner_.render(schedule_, bscan_states_, volume_);
    volume_.id = scan_count_++;
    corrupt_in_place(volume_, cfg_.errors, seg_rng_);
    const SurfacePointCloud cloud = extract_surface_point_cloud(volume_);
    if (observer_ != nullptr && observer_->on_scan) observer_->on_scan(volume_, cloud);
    const std::optional<double> ilm = median_layer_depth(cloud, Label::ilm);
    const double interval = cfg_.timing.nominal_interval_s();

    switch (phase_) {
      case Phase::awaiting_target:
      case Phase::inserting: {
        const std::optional<double> rpe = median_layer_depth(cloud, Label::rpe);
        if (ilm && rpe && *rpe > *ilm) {
          insert_target_ = *ilm + cfg_.injection.target_relative_depth * (*rpe - *ilm);
          phase_ = Phase::inserting;
        }
        if (ilm) last_median_ = ilm;
        command_ = 0.0;
        break;
      }
      case Phase::tracking:
      case Phase::holding:
        if (controller_.mode == ControlMode::predictive) {
          ControlCommand cmd = predictive_.update(ilm, cloud.t_effective_s, t_, axis_.z(), interval);
          command_ = cfg_.controller.invert_sign ? -cmd.velocity_z : cmd.velocity_z;
        } else {
          const CommandResult r = compensation_command(controller_, ilm, t_);
          controller_ = r.state;
          command_ = r.command.velocity_z;
        }
        break;
    }
    return ilm;
  }

  void finish_insertion(std::string& events) {
    phase_ = Phase::holding;
    axis_ = RobotAxis(cfg_.robot, insert_target_);
    state_ = phantom_state_at(cfg_.phantom, cfg_.motion, t_, tip(), &state_, action());
    controller_.previous_median_um = last_median_;
    controller_.last_update_t_s = t_;
    predictive_ = PredictiveController(cfg_.controller.predictor, cfg_.robot);
    command_ = 0.0;
    add_event(events, kEventInsertDone);
    add_event(events, kEventInjectStart);
    inject_end_ = t_ + cfg_.injection.window_s();
  }

  void emit_row(std::optional<double> measured = std::nullopt, std::string events = {}) {
    TraceRow row;
    row.t_s = t_;
    row.stage_z_um = state_.stage_z_um;
    row.true_ilm_z_um = state_.ilm_z_um;
    row.true_rpe_z_um = state_.rpe_z_um;
    row.needle_tip_z_um = axis_.z();
    row.measured_median_ilm_z_um = measured;
    row.commanded_velocity_um_s = command_;
    row.event = std::move(events);
    trace_.rows.push_back(std::move(row));
  }

  const ScenarioConfig& cfg_;
  const ScanObserver* observer_;
  Scanner scanner_;
  RandomStream timing_rng_;
  RandomStream seg_rng_;
  RobotAxis axis_;
  ControllerState controller_;
  PredictiveController predictive_;
  Phase phase_ = Phase::tracking;

  double t_ = 0.0;
  std::int64_t next_tick_ = 1;
  std::int64_t trace_stride_ = 10;
  PhantomState state_;
  AcquisitionSchedule schedule_;
  std::size_t next_bscan_ = 0;
  std::vector<PhantomState> bscan_states_;
  double command_time_ = 0.0;
  double command_ = 0.0;
  LabeledVolume volume_;
  std::uint64_t scan_count_ = 0;

  double insert_target_ = 0.0;
  std::optional<double> last_median_;
  std::optional<double> inject_end_;

  Trace trace_;
};

}  // namespace

Trace run_scenario(const ScenarioConfig& config, const ScanObserver* observer) {
  const Issues issues = config.validate();
  if (!issues.empty()) throw std::invalid_argument("invalid scenario: " + format_issues(issues));
  return Simulation(config, observer).run();
}

}  // namespace octmc
