#include "trident/metrics.hpp"

#include <stdexcept>

namespace trident {

MetricsCollector::MetricsCollector(std::uint32_t ports, MeasurementWindow window)
    : ports_(ports), window_(window), last_seq_(std::size_t(ports) * ports, 0)
{
    if (window.measure <= 0 || window.warmup < 0)
        throw std::invalid_argument("measurement window is empty");
}

void MetricsCollector::record_arrival(Slot arrival_slot)
{
    if (window_.contains(arrival_slot))
        ++offered_;
}

void MetricsCollector::record_departure(const Cell& cell, Slot slot)
{
    if (slot < cell.arrival_slot)
        throw std::invalid_argument("departure precedes arrival");
    auto& last = last_seq_[std::size_t(cell.src) * ports_ + cell.dst];
    if (cell.seq <= last)
        ++violations_;
    last = cell.seq;

    if (!window_.contains(cell.arrival_slot))
        return;
    const auto delay = static_cast<std::size_t>(slot - cell.arrival_slot);
    if (delay >= delay_histogram_.size())
        delay_histogram_.resize(delay + 1, 0);
    ++delay_histogram_[delay];
    delay_sum_ += delay;
    ++delivered_;
}

void MetricsCollector::set_occupancy(std::size_t max_vimoq, std::size_t max_cb)
{
    max_vimoq_ = max_vimoq;
    max_cb_ = max_cb;
}

RunMetrics MetricsCollector::finalize() const
{
    RunMetrics m;
    m.offered_cells = offered_;
    m.delivered_cells = delivered_;
    m.violations = violations_;
    m.max_vimoq_occ = max_vimoq_;
    m.max_cb_occ = max_cb_;
    if (offered_ > 0)
        m.throughput = double(delivered_) / double(offered_);
    if (delivered_ == 0)
        return m;

    m.mean_delay = static_cast<double>(delay_sum_ / delivered_);
    // Exact order statistic: smallest delay whose cumulative count reaches
    // ceil(0.99 * delivered).
    const std::uint64_t rank = (99 * delivered_ + 99) / 100;
    std::uint64_t cumulative = 0;
    for (std::size_t d = 0; d < delay_histogram_.size(); ++d) {
        cumulative += delay_histogram_[d];
        if (!m.p99_delay && cumulative >= rank)
            m.p99_delay = double(d);
        if (delay_histogram_[d] > 0)
            m.max_delay = double(d);
    }
    return m;
}

} // namespace trident
