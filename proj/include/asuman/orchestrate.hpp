#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "asuman/metrics.hpp"
#include "asuman/scenario.hpp"

namespace asuman {

struct EnsembleResult {
    std::vector<RunStatistics> runs;
    EnsembleStatistics stats;
};

// Runs `replications` independent simulations across up to `jobs` threads.
// Seeds derive from (base_seed, sweep_index, replication); results are
// identical for any job count.
EnsembleResult run_ensemble(const Scenario& scenario, std::uint64_t sweep_index, int jobs);

// ASUMAN_SIM_JOBS env var, else hardware concurrency, else 1.
int default_jobs();

struct SweepSpec {
    std::string param;
    std::vector<double> values;
};

// "n=50,100,200" style; throws std::invalid_argument on malformed input.
SweepSpec parse_sweep_spec(const std::string& text);

struct SweepPoint {
    std::string param;
    double value = 0.0;
    Scenario scenario;
    EnsembleStatistics stats;
};

std::vector<SweepPoint> run_sweep(const ScenarioDesc& base, const SweepSpec& sweep, int jobs);

// Output rendering. CSV columns: n,policy,node_id,mean_age,stderr,replications,seed
// with one aggregate "network" row per block; gnuplot_header comments the header.
std::string render_ensemble_csv(const Scenario& scenario, const EnsembleStatistics& stats,
                                bool gnuplot_header);
std::string render_sweep_csv(const std::vector<SweepPoint>& points, bool gnuplot_header);
std::string render_ensemble_json(const Scenario& scenario, const EnsembleStatistics& stats);
std::string render_sweep_json(const std::vector<SweepPoint>& points);
std::string render_ensemble_text(const Scenario& scenario, const EnsembleStatistics& stats);
std::string render_sweep_text(const std::vector<SweepPoint>& points);

// Writes to a file, or stdout when path is "-"; IoError on failure.
void write_output(const std::string& path, const std::string& content);

} // namespace asuman
