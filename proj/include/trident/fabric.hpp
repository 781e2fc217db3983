#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "trident/cell.hpp"
#include "trident/dims.hpp"
#include "trident/ring_queue.hpp"

namespace trident {

// A cell plus the slot it entered its current queue. A cell becomes eligible
// to leave a queue from the slot after it entered.
struct QueuedCell {
    Cell cell;
    Slot entered = 0;
};

using CellQueue = RingQueue<QueuedCell>;

// VIMOQ(r,i,j,d): at input i of CM(r), cells from IM(i) destined to OP(j,d).
struct VimoqId {
    std::uint32_t cm = 0;
    std::uint32_t im = 0;
    std::uint32_t om = 0;
    std::uint32_t out_port = 0;

    bool operator==(const VimoqId&) const = default;
};

struct FabricOptions {
    // Per crosspoint buffer limit in cells; nullopt means unbounded.
    std::optional<std::size_t> cb_capacity;
};

class FabricObserver {
public:
    virtual ~FabricObserver() = default;
    virtual void on_vimoq_service(const VimoqId& /*queue*/, const Cell& /*cell*/, Slot /*slot*/) {}
    virtual void on_output_departure(const Cell& /*cell*/, std::uint32_t /*cm*/, Slot /*slot*/) {}
};

// Slot-level model of the three-stage fabric: bufferless IMs and CMs driven by
// the periodic schedule, VIMOQs between IM and CM stages, and buffered OMs with
// one crosspoint buffer per (OP, source IP, CM).
//
// One slot is inject -> im_phase -> cm_phase -> output_phase -> finish_slot.
// step() runs all of them.
class Fabric {
public:
    explicit Fabric(SwitchDims dims, FabricOptions options = {});

    const SwitchDims& dims() const { return dims_; }
    const FabricOptions& options() const { return options_; }
    Slot slot() const { return slot_; }

    // Tags and stages one cell per arrival. Throws std::invalid_argument on two
    // arrivals at the same input or out-of-range ports; the state is unchanged then.
    void inject(std::span<const Arrival> arrivals);
    void im_phase();
    void cm_phase();
    std::vector<Cell> output_phase();
    void finish_slot() { ++slot_; }

    std::vector<Cell> step(std::span<const Arrival> arrivals);

    void set_observer(FabricObserver* observer) { observer_ = observer; }

    // Inspection.
    const CellQueue& vimoq(const VimoqId& id) const { return vimoqs_[vimoq_index(id)]; }
    const CellQueue& crosspoint(FlatPort op, FlatPort src, std::uint32_t cm) const
    {
        return crosspoints_[cb_index(op, src, cm)];
    }
    const std::optional<Cell>& staged(FlatPort input) const { return staged_[input]; }
    SeqTag expected_seq(FlatPort op, FlatPort src) const { return expected_seq_[flow_index(op, src)]; }
    FlatPort rr_pointer(FlatPort op) const { return rr_pointer_[op]; }
    std::uint32_t vimoq_pointer(std::uint32_t cm, std::uint32_t cm_input, std::uint32_t om) const
    {
        return vimoq_rr_[(std::size_t(cm) * dims_.k() + cm_input) * dims_.k() + om];
    }

    std::uint64_t injected() const { return injected_; }
    std::uint64_t departed() const { return departed_; }
    std::uint64_t staged_cells() const { return staged_count_; }
    std::uint64_t vimoq_cells() const { return vimoq_cells_; }
    std::uint64_t crosspoint_cells() const { return cb_cells_; }
    std::uint64_t resident() const { return staged_count_ + vimoq_cells_ + cb_cells_; }

    // Largest single-queue occupancy seen since construction.
    std::size_t max_vimoq_occupancy() const { return max_vimoq_occ_; }
    std::size_t max_crosspoint_occupancy() const { return max_cb_occ_; }

private:
    std::size_t vimoq_index(const VimoqId& id) const
    {
        const std::size_t k = dims_.k();
        return ((std::size_t(id.cm) * k + id.im) * k + id.om) * dims_.n() + id.out_port;
    }
    std::size_t cb_index(FlatPort op, FlatPort src, std::uint32_t cm) const
    {
        return (std::size_t(op) * dims_.ports() + src) * dims_.m() + cm;
    }
    std::size_t flow_index(FlatPort op, FlatPort src) const { return std::size_t(op) * dims_.ports() + src; }

    void refresh_ready(FlatPort op, FlatPort src);
    void set_ready(FlatPort op, FlatPort src, bool ready);
    std::optional<std::uint32_t> eligible_cm(FlatPort op, FlatPort src) const;
    bool cb_has_room(FlatPort op, FlatPort src, std::uint32_t cm) const;

    SwitchDims dims_;
    FabricOptions options_;
    Slot slot_ = 0;
    FabricObserver* observer_ = nullptr;

    std::vector<std::optional<Cell>> staged_;
    std::vector<SeqTag> input_seq_;       // per (src, dst): last tag issued
    std::vector<CellQueue> vimoqs_;
    std::vector<std::uint32_t> vimoq_rr_; // per (cm, cm input, om): next out_port
    std::vector<CellQueue> crosspoints_;
    std::vector<SeqTag> expected_seq_;    // per (op, src)
    std::vector<FlatPort> rr_pointer_;    // per op
    std::size_t ready_words_;
    std::vector<std::uint64_t> ready_;    // per op bitset over src: some CB head carries expected tag

    std::uint64_t injected_ = 0;
    std::uint64_t departed_ = 0;
    std::uint64_t staged_count_ = 0;
    std::uint64_t vimoq_cells_ = 0;
    std::uint64_t cb_cells_ = 0;
    std::size_t max_vimoq_occ_ = 0;
    std::size_t max_cb_occ_ = 0;
};

} // namespace trident
