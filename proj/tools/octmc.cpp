// Batch front-end: run scenarios and sweeps, recompute metrics from traces.

#include <CLI11.hpp>

#include <cctype>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "octmc/config.hpp"
#include "octmc/experiment.hpp"
#include "octmc/format.hpp"
#include "octmc/metrics.hpp"
#include "octmc/plot.hpp"
#include "octmc/presets.hpp"
#include "octmc/sweep.hpp"
#include "octmc/trace_io.hpp"
#include "octmc/volume_io.hpp"

namespace fs = std::filesystem;
using namespace octmc;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Output files planned for one command; checked up front so nothing is
// written when any target already exists and --force was not given.
class OutputPlan {
 public:
  OutputPlan(fs::path dir, bool force) : dir_(std::move(dir)), force_(force) {}

  fs::path add(const std::string& name) {
    fs::path p = dir_ / name;
    paths_.push_back(p);
    return p;
  }

  void prepare() const {
    if (!force_) {
      for (const auto& p : paths_) {
        if (fs::exists(p)) throw UsageError(p.string() + " exists; pass --force to overwrite");
      }
    }
    fs::create_directories(dir_);
  }

 private:
  fs::path dir_;
  bool force_;
  std::vector<fs::path> paths_;
};

ScenarioConfig resolve_scenario(const std::string& config_path, const std::string& preset) {
  if (!config_path.empty() && !preset.empty()) throw UsageError("use either --config or --preset, not both");
  if (!preset.empty()) {
    if (!preset_yaml(preset)) throw UsageError("unknown preset '" + preset + "'");
    return preset_config(preset);
  }
  if (config_path.empty()) throw UsageError("--config or --preset is required");
  return load_config_file(config_path);
}

std::string metrics_summary(const Metrics& m) {
  std::ostringstream o;
  o << "max_deviation_um=" << fmt_fixed(m.max_deviation_um, 2) << " rms_error_um=" << fmt_fixed(m.rms_error_um, 2)
    << " phase_lag_s=" << (m.phase_lag_s ? fmt_fixed(*m.phase_lag_s, 3) : "n/a")
    << " drift_slope_um_s=" << fmt_fixed(m.drift_slope_um_s, 3)
    << " amplitude_ratio=" << (m.amplitude_ratio ? fmt_fixed(*m.amplitude_ratio, 3) : "n/a");
  if (m.injection) o << " injection=" << outcome_name(*m.injection);
  return o.str();
}

std::string scan_file_name(const char* prefix, std::uint64_t id, const char* ext) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_%05llu.%s", prefix, static_cast<unsigned long long>(id), ext);
  return buf;
}

struct SimulateArgs {
  std::string config;
  std::string preset;
  std::string out = "out";
  std::optional<std::uint64_t> seed;
  bool force = false;
  bool no_plot = false;
  std::size_t dump_scans = 0;
};

int cmd_simulate(const SimulateArgs& a) {
  ScenarioConfig cfg = resolve_scenario(a.config, a.preset);
  if (a.seed) cfg.seed = *a.seed;

  OutputPlan plan(a.out, a.force);
  const fs::path trace_path = plan.add("trace.csv");
  const fs::path metrics_path = plan.add("metrics.csv");
  const fs::path config_path = plan.add("config.yaml");
  const fs::path plot_path = a.no_plot ? fs::path{} : plan.add("plot.svg");
  for (std::size_t i = 0; i < a.dump_scans; ++i) {
    plan.add(scan_file_name("scan", i, "b5v"));
    plan.add(scan_file_name("cloud", i, "csv"));
  }
  plan.prepare();

  ScanObserver observer;
  if (a.dump_scans > 0) {
    observer.on_scan = [&](const LabeledVolume& v, const SurfacePointCloud& cloud) {
      if (v.id >= a.dump_scans) return;
      std::ostringstream vol;
      write_volume(vol, v);
      write_file_atomic(fs::path(a.out) / scan_file_name("scan", v.id, "b5v"), vol.str());
      std::ostringstream pts;
      write_point_cloud_csv(pts, cloud);
      write_file_atomic(fs::path(a.out) / scan_file_name("cloud", v.id, "csv"), pts.str());
    };
  }
  const std::string trace_csv = trace_to_csv(run_scenario(cfg, &observer));
  // Metrics come from the trace as written so `report` reproduces them exactly.
  std::istringstream written(trace_csv);
  const Trace trace = read_trace_csv(written);
  const SweepRow row{config_hash_hex(cfg), cfg, evaluate(cfg, trace)};

  write_file_atomic(trace_path, trace_csv);
  write_file_atomic(metrics_path, metrics_to_csv({row}));
  write_file_atomic(config_path, serialize_config(cfg));
  if (!a.no_plot) write_trace_svg(plot_path, trace, PlotOptions{.title = cfg.name});
  std::cout << cfg.name << " seed=" << cfg.seed << ' ' << metrics_summary(row.metrics) << '\n';
  return 0;
}

struct SweepArgs {
  std::string config;
  std::string out = "out";
  std::optional<std::uint64_t> seed;
  bool force = false;
  bool no_plot = false;
  bool traces = false;
  std::size_t threads = 0;
};

int cmd_sweep(const SweepArgs& a) {
  if (a.config.empty()) throw UsageError("--config is required");
  SweepSpec spec = load_sweep_file(a.config);
  if (a.seed) {
    for (auto& c : spec.configs) c.seed = *a.seed;
  }

  OutputPlan plan(a.out, a.force);
  const fs::path metrics_path = plan.add("metrics.csv");
  auto stem = [&](std::size_t i) {
    std::string name = spec.configs[i].name;
    for (char& ch : name) {
      if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '-' && ch != '_') ch = '_';
    }
    return std::to_string(i) + "_" + name + "_" + config_hash_hex(spec.configs[i]);
  };
  if (a.traces) {
    for (std::size_t i = 0; i < spec.configs.size(); ++i) {
      plan.add(stem(i) + ".csv");
      if (!a.no_plot) plan.add(stem(i) + ".svg");
    }
  }
  plan.prepare();

  TraceSink sink;
  if (a.traces) {
    sink = [&](std::size_t i, const Trace& trace) {
      write_file_atomic(fs::path(a.out) / (stem(i) + ".csv"), trace_to_csv(trace));
      if (!a.no_plot) {
        write_trace_svg(fs::path(a.out) / (stem(i) + ".svg"), trace, PlotOptions{.title = spec.configs[i].name});
      }
    };
  }
  const auto rows = run_sweep(spec.configs, a.threads, sink);
  write_file_atomic(metrics_path, metrics_to_csv(rows));
  std::cout << rows.size() << " scenarios -> " << metrics_path.string() << '\n';
  return 0;
}

struct ReportArgs {
  std::string trace;
  std::string config;
  std::string preset;
  std::optional<double> period;
  std::string out = "out";
  bool force = false;
  bool no_plot = false;
};

int cmd_report(const ReportArgs& a) {
  if (a.trace.empty()) throw UsageError("--trace is required");
  ScenarioConfig cfg;
  if (!a.config.empty() || !a.preset.empty()) cfg = resolve_scenario(a.config, a.preset);
  if (a.period) cfg.motion.components.front().period_s = *a.period;

  OutputPlan plan(a.out, a.force);
  const fs::path metrics_path = plan.add("metrics.csv");
  const fs::path plot_path = a.no_plot ? fs::path{} : plan.add("plot.svg");
  plan.prepare();

  const Trace trace = read_trace_file(a.trace);
  if (trace.rows.empty()) throw std::runtime_error(a.trace + ": no rows");
  const SweepRow row{config_hash_hex(cfg), cfg, evaluate(cfg, trace)};
  write_file_atomic(metrics_path, metrics_to_csv({row}));
  if (!a.no_plot) write_trace_svg(plot_path, trace, PlotOptions{.title = cfg.name});
  std::cout << metrics_summary(row.metrics) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"OCT-guided motion compensation simulator"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Run one scenario and write its trace, metrics and plot");
  simulate->add_option("--config", sim.config, "Scenario YAML file");
  simulate->add_option("--preset", sim.preset, "Bundled scenario name");
  simulate->add_option("--out", sim.out, "Output directory")->capture_default_str();
  simulate->add_option("--seed", sim.seed, "Override the scenario seed");
  simulate->add_flag("--force", sim.force, "Overwrite existing outputs");
  simulate->add_flag("--no-plot", sim.no_plot, "Skip the SVG plot");
  simulate->add_option("--dump-scans", sim.dump_scans, "Also write the first N labeled volumes and point clouds");

  SweepArgs sw;
  auto* sweep = app.add_subcommand("sweep", "Run every scenario of a sweep file and write one metrics table");
  sweep->add_option("--config", sw.config, "Sweep YAML file");
  sweep->add_option("--out", sw.out, "Output directory")->capture_default_str();
  sweep->add_option("--seed", sw.seed, "Force one seed for every scenario");
  sweep->add_flag("--force", sw.force, "Overwrite existing outputs");
  sweep->add_flag("--no-plot", sw.no_plot, "Skip per-scenario plots");
  sweep->add_flag("--traces", sw.traces, "Write each scenario's trace (and plot)");
  sweep->add_option("--threads", sw.threads, "Worker threads, 0 = all cores")->capture_default_str();

  ReportArgs rep;
  auto* report = app.add_subcommand("report", "Recompute metrics and plot from an existing trace CSV");
  report->add_option("--trace", rep.trace, "Trace CSV");
  report->add_option("--config", rep.config, "Scenario YAML the trace came from");
  report->add_option("--preset", rep.preset, "Bundled scenario the trace came from");
  report->add_option("--period", rep.period, "Motion period in seconds, overrides the config");
  report->add_option("--out", rep.out, "Output directory")->capture_default_str();
  report->add_flag("--force", rep.force, "Overwrite existing outputs");
  report->add_flag("--no-plot", rep.no_plot, "Skip the SVG plot");

  std::string preset_name;
  bool list = false;
  auto* preset = app.add_subcommand("preset", "Print a bundled scenario as YAML");
  preset->add_option("name", preset_name, "Preset name");
  preset->add_flag("--list", list, "List preset names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitUsage;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(sim);
    if (sweep->parsed()) return cmd_sweep(sw);
    if (report->parsed()) return cmd_report(rep);
    if (preset->parsed()) {
      if (list || preset_name.empty()) {
        for (const auto& n : preset_names()) std::cout << n << '\n';
        return 0;
      }
      const auto text = preset_yaml(preset_name);
      if (!text) throw UsageError("unknown preset '" + preset_name + "'");
      std::cout << serialize_config(preset_config(preset_name));
      return 0;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConfigParseError& e) {
    std::cerr << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}
