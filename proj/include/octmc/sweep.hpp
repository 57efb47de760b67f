#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "octmc/experiment.hpp"
#include "octmc/metrics.hpp"

namespace octmc {

struct SweepRow {
  std::string config_hash;
  ScenarioConfig config;
  Metrics metrics;
};

// Runs every config, in parallel on `threads` workers (0 = hardware
// concurrency). Rows come back in input order regardless of scheduling.
// Every config is validated first; any issue aborts with
// std::invalid_argument before anything runs. `on_trace`, if set, sees each
// finished trace; it may be called from several threads at once.
using TraceSink = std::function<void(std::size_t index, const Trace& trace)>;
std::vector<SweepRow> run_sweep(const std::vector<ScenarioConfig>& configs, std::size_t threads = 0,
                                const TraceSink& on_trace = {});

Metrics evaluate(const ScenarioConfig& config, const Trace& trace);

void write_metrics_csv(std::ostream& out, const std::vector<SweepRow>& rows);
std::string metrics_to_csv(const std::vector<SweepRow>& rows);

}  // namespace octmc
