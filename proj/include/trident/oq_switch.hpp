#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "trident/cell.hpp"
#include "trident/dims.hpp"
#include "trident/ring_queue.hpp"

namespace trident {

// Ideal output-queued reference switch: every arrival reaches its output FIFO
// in the slot it arrives (speedup N); each output sends one cell per slot.
// A cell can leave no earlier than the slot after its arrival, the same
// store-and-forward convention the crosspoint stage uses.
class OqSwitch {
public:
    explicit OqSwitch(SwitchDims dims);

    const SwitchDims& dims() const { return dims_; }
    Slot slot() const { return slot_; }

    // Same-slot arrivals to one output are queued in ascending input order.
    std::vector<Cell> step(std::span<const Arrival> arrivals);

    std::size_t queue_length(FlatPort op) const { return queues_[op].size(); }
    std::uint64_t resident() const { return resident_; }
    std::uint64_t injected() const { return injected_; }
    std::uint64_t departed() const { return departed_; }
    std::size_t max_queue_length() const { return max_len_; }

private:
    SwitchDims dims_;
    Slot slot_ = 0;
    std::vector<RingQueue<Cell>> queues_;
    std::vector<SeqTag> seq_;
    std::uint64_t resident_ = 0;
    std::uint64_t injected_ = 0;
    std::uint64_t departed_ = 0;
    std::size_t max_len_ = 0;
};

} // namespace trident
