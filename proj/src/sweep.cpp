#include "octmc/sweep.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "octmc/config.hpp"
#include "octmc/format.hpp"

namespace octmc {

Metrics evaluate(const ScenarioConfig& config, const Trace& trace) {
  Metrics m = compute_metrics(trace, config.motion.primary().period_s);
  if (config.kind == ScenarioKind::inject) m.injection = classify_injection(trace, config);
  return m;
}

std::vector<SweepRow> run_sweep(const std::vector<ScenarioConfig>& configs, std::size_t threads,
                                const TraceSink& on_trace) {
  std::string problems;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    const Issues issues = configs[i].validate();
    if (!issues.empty()) problems += "config " + std::to_string(i) + " (" + configs[i].name + "): " + format_issues(issues) + "\n";
  }
  if (!problems.empty()) throw std::invalid_argument(problems);

  std::vector<SweepRow> rows(configs.size());
  if (configs.empty()) return rows;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, configs.size());

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= configs.size()) return;
      try {
        const Trace trace = run_scenario(configs[i]);
        rows[i] = SweepRow{config_hash_hex(configs[i]), configs[i], evaluate(configs[i], trace)};
        if (on_trace) on_trace(i, trace);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return rows;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + '"';
}

}  // namespace

void write_metrics_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "config_hash,name,kind,seed,amplitude_um,period_s,mode,commanded_speed,max_deviation_um,rms_error_um,"
         "max_deviation_ilm_um,rms_error_ilm_um,phase_lag_s,drift_slope_um_s,amplitude_ratio,injection_outcome\n";
  for (const auto& r : rows) {
    const auto& c = r.config;
    const auto& m = r.metrics;
    out << r.config_hash << ',' << csv_field(c.name) << ',' << (c.kind == ScenarioKind::inject ? "inject" : "track") << ','
        << c.seed << ',' << fmt_fixed(c.motion.primary().amplitude_um, 4) << ','
        << fmt_fixed(c.motion.primary().period_s, 4) << ','
        << (c.controller.mode == ControlMode::predictive ? "predictive" : "compare_previous") << ','
        << fmt_fixed(c.commanded_speed(), 4) << ',' << fmt_fixed(m.max_deviation_um, 4) << ','
        << fmt_fixed(m.rms_error_um, 4) << ',' << fmt_fixed(m.max_deviation_ilm_um, 4) << ','
        << fmt_fixed(m.rms_error_ilm_um, 4) << ',' << fmt_optional(m.phase_lag_s, 4) << ','
        << fmt_fixed(m.drift_slope_um_s, 6) << ',' << fmt_optional(m.amplitude_ratio, 6) << ','
        << (m.injection ? outcome_name(*m.injection) : std::string("n/a")) << '\n';
  }
}

std::string metrics_to_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream ss;
  write_metrics_csv(ss, rows);
  return ss.str();
}

}  // namespace octmc
