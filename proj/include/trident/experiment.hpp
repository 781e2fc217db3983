#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "trident/config.hpp"
#include "trident/matrix_analysis.hpp"
#include "trident/metrics.hpp"
#include "trident/rate_matrix.hpp"

namespace trident {

struct SimulationOptions {
    bool record_occupancy = false;      // total resident cells per arrival slot
    bool record_cb_occupancy = false;   // crosspoint-buffer cells per arrival slot
    std::ostream* trace = nullptr;      // departure trace, one JSON line per cell
};

struct SimulationOutput {
    RunMetrics metrics;
    Slot drain_slots = 0;
    bool drained = true; // every window cell left before the drain cap
    std::size_t max_cb_occ_first_half = 0; // largest crosspoint buffer seen by the midpoint
    std::vector<double> occupancy;
    std::vector<double> cb_occupancy;
};

// One run of `config` (sweep ignored) with the traffic seeded by `seed`.
// After the arrival slots the switch drains with no new arrivals until all
// window cells have departed or 10*N slots have passed.
SimulationOutput simulate(const ExperimentConfig& config, std::uint64_t seed, const SimulationOptions& options = {});

struct RunRow {
    std::size_t run_id = 0;
    SwitchKind switch_kind = SwitchKind::Trident;
    std::uint32_t ports = 0;
    TrafficModel model = TrafficModel::UniformBernoulli;
    double load = 0.0;
    double omega = 0.0;
    double burst_len = 0.0;
    std::optional<std::size_t> cb_capacity;
    std::uint64_t seed = 0;
    RunMetrics metrics;
    bool admissible = true;
};

// One row per (sweep point, seed), ordered by sweep index then seed.
std::vector<RunRow> run_experiment(const ExperimentConfig& config, unsigned workers = 0);

// Runs the configured traffic at crosspoint capacities k^2, N^2 and unbounded.
// Rows are ordered by capacity, then sweep index, then seed.
std::vector<RunRow> compare_cb_capacities(const ExperimentConfig& config, unsigned workers = 0);

const std::vector<std::string>& csv_columns();
void write_csv(std::ostream& os, const std::vector<RunRow>& rows);

struct AnalysisReport {
    SwitchDims dims;
    Admissibility admissibility;
    ThroughputIdentityReport identity;
    RateBounds bounds;

    std::string to_text() const;
};

AnalysisReport run_analysis(const ExperimentConfig& config);
AnalysisReport run_analysis(const RateMatrix& r1, const SwitchDims& dims);

} // namespace trident
