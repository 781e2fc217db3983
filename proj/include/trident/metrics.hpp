#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "trident/cell.hpp"

namespace trident {

// Cells whose arrival slot falls in [warmup, warmup + measure) are measured.
struct MeasurementWindow {
    Slot warmup = 0;
    Slot measure = 0;

    bool contains(Slot s) const { return s >= warmup && s < warmup + measure; }
    Slot end() const { return warmup + measure; }
};

struct RunMetrics {
    std::uint64_t offered_cells = 0;
    std::uint64_t delivered_cells = 0;
    std::optional<double> throughput; // empty when nothing was offered in the window
    std::optional<double> mean_delay; // slots; empty when nothing was delivered
    std::optional<double> p99_delay;
    std::optional<double> max_delay;
    std::size_t max_vimoq_occ = 0;
    std::size_t max_cb_occ = 0;
    std::uint64_t violations = 0;
};

// Accumulates per-departure delay and in-order checks for one run.
//
// A violation is a departure whose tag is not larger than the previous
// departure's tag of the same flow, so the count equals the number of adjacent
// inversions in each flow's departure order. Violations are counted over the
// whole run; delay and throughput only over the window.
class MetricsCollector {
public:
    // Throws std::invalid_argument for an empty window.
    MetricsCollector(std::uint32_t ports, MeasurementWindow window);

    const MeasurementWindow& window() const { return window_; }

    void record_arrival(Slot arrival_slot);
    // Throws std::invalid_argument if slot < cell.arrival_slot.
    void record_departure(const Cell& cell, Slot slot);
    void set_occupancy(std::size_t max_vimoq, std::size_t max_cb);

    std::uint64_t violations() const { return violations_; }
    std::uint64_t offered() const { return offered_; }
    std::uint64_t delivered() const { return delivered_; }
    std::uint64_t outstanding() const { return offered_ - delivered_; }

    RunMetrics finalize() const;

private:
    std::uint32_t ports_;
    MeasurementWindow window_;
    std::vector<SeqTag> last_seq_; // per (src, dst)
    std::vector<std::uint64_t> delay_histogram_;
    std::uint64_t offered_ = 0;
    std::uint64_t delivered_ = 0;
    std::uint64_t violations_ = 0;
    long double delay_sum_ = 0.0;
    std::size_t max_vimoq_ = 0;
    std::size_t max_cb_ = 0;
};

} // namespace trident
