#include "trident/fabric.hpp"

#include <bit>
#include <stdexcept>
#include <string>

#include "trident/schedule.hpp"

namespace trident {

Fabric::Fabric(SwitchDims dims, FabricOptions options)
    : dims_(dims), options_(options), ready_words_((dims.ports() + 63) / 64)
{
    if (options_.cb_capacity && *options_.cb_capacity == 0)
        throw std::invalid_argument("crosspoint buffer capacity must be >= 1");
    const std::size_t N = dims_.ports();
    const std::size_t k = dims_.k();
    staged_.resize(N);
    input_seq_.assign(N * N, 0);
    vimoqs_.resize(dims_.m() * k * k * dims_.n());
    vimoq_rr_.assign(dims_.m() * k * k, 0);
    crosspoints_.resize(N * N * dims_.m());
    expected_seq_.assign(N * N, 1);
    rr_pointer_.assign(N, 0);
    ready_.assign(N * ready_words_, 0);
}

void Fabric::inject(std::span<const Arrival> arrivals)
{
    const auto N = dims_.ports();
    std::vector<bool> seen(N, false);
    for (const auto& a : arrivals) {
        if (a.src >= N || a.dst >= N)
            throw std::invalid_argument("arrival port out of range");
        if (seen[a.src] || staged_[a.src])
            throw std::invalid_argument("more than one arrival at input " + std::to_string(a.src) + " in slot " +
                                        std::to_string(slot_));
        seen[a.src] = true;
    }
    for (const auto& a : arrivals) {
        Cell c;
        c.src = a.src;
        c.dst = a.dst;
        c.seq = ++input_seq_[std::size_t(a.src) * N + a.dst];
        c.arrival_slot = slot_;
        staged_[a.src] = c;
        ++staged_count_;
        ++injected_;
    }
}

void Fabric::im_phase()
{
    if (staged_count_ == 0)
        return;
    for (FlatPort u = 0; u < dims_.ports(); ++u) {
        auto& staged = staged_[u];
        if (!staged)
            continue;
        const auto src = address_of(dims_, u);
        const auto dst = address_of(dims_, staged->dst);
        const VimoqId id{im_link(src.local, slot_, dims_), src.module, dst.module, dst.local};
        auto& q = vimoqs_[vimoq_index(id)];
        q.push(QueuedCell{*staged, slot_});
        if (q.size() > max_vimoq_occ_)
            max_vimoq_occ_ = q.size();
        staged.reset();
        --staged_count_;
        ++vimoq_cells_;
    }
}

bool Fabric::cb_has_room(FlatPort op, FlatPort src, std::uint32_t cm) const
{
    return !options_.cb_capacity || crosspoints_[cb_index(op, src, cm)].size() < *options_.cb_capacity;
}

void Fabric::cm_phase()
{
    if (vimoq_cells_ == 0)
        return;
    const auto n = dims_.n();
    for (std::uint32_t r = 0; r < dims_.m(); ++r) {
        for (std::uint32_t p = 0; p < dims_.k(); ++p) {
            const auto j = cm_link(p, r, slot_, dims_);
            auto& ptr = vimoq_rr_[(std::size_t(r) * dims_.k() + p) * dims_.k() + j];
            const auto base = vimoq_index(VimoqId{r, p, j, 0});
            for (std::uint32_t off = 0, d = ptr; off < n; ++off, d = d + 1 == n ? 0 : d + 1) {
                auto& q = vimoqs_[base + d];
                if (q.empty() || q.front().entered >= slot_)
                    continue;
                const auto op = flat(dims_, PortAddress{j, d});
                const auto src = q.front().cell.src;
                if (!cb_has_room(op, src, r))
                    continue;
                const Cell cell = q.pop().cell;
                --vimoq_cells_;
                if (observer_)
                    observer_->on_vimoq_service(VimoqId{r, p, j, d}, cell, slot_);
                auto& cb = crosspoints_[cb_index(op, src, r)];
                const bool new_head = cb.empty();
                cb.push(QueuedCell{cell, slot_});
                ++cb_cells_;
                if (cb.size() > max_cb_occ_)
                    max_cb_occ_ = cb.size();
                // Only a new head can change the flow's readiness.
                if (new_head && cell.seq == expected_seq_[flow_index(op, src)])
                    set_ready(op, src, true);
                ptr = d + 1 == n ? 0 : d + 1;
                break;
            }
        }
    }
}

void Fabric::refresh_ready(FlatPort op, FlatPort src)
{
    const auto expected = expected_seq_[flow_index(op, src)];
    bool ready = false;
    for (std::uint32_t r = 0; r < dims_.m() && !ready; ++r) {
        const auto& q = crosspoints_[cb_index(op, src, r)];
        ready = !q.empty() && q.front().cell.seq == expected;
    }
    set_ready(op, src, ready);
}

void Fabric::set_ready(FlatPort op, FlatPort src, bool ready)
{
    auto& word = ready_[op * ready_words_ + src / 64];
    const std::uint64_t bit = std::uint64_t{1} << (src % 64);
    word = ready ? (word | bit) : (word & ~bit);
}

std::optional<std::uint32_t> Fabric::eligible_cm(FlatPort op, FlatPort src) const
{
    const auto expected = expected_seq_[flow_index(op, src)];
    for (std::uint32_t r = 0; r < dims_.m(); ++r) {
        const auto& q = crosspoints_[cb_index(op, src, r)];
        if (!q.empty() && q.front().cell.seq == expected && q.front().entered < slot_)
            return r;
    }
    return std::nullopt;
}

namespace {

// First set bit in [from, limit), if any.
std::optional<std::uint32_t> next_set_bit(const std::uint64_t* words, std::uint32_t from, std::uint32_t limit)
{
    std::uint32_t pos = from;
    while (pos < limit) {
        const std::size_t w = pos / 64;
        const std::uint64_t bits = words[w] >> (pos % 64);
        if (bits != 0) {
            const auto hit = pos + static_cast<std::uint32_t>(std::countr_zero(bits));
            return hit < limit ? std::optional<std::uint32_t>(hit) : std::nullopt;
        }
        pos = static_cast<std::uint32_t>((w + 1) * 64);
    }
    return std::nullopt;
}

} // namespace

std::vector<Cell> Fabric::output_phase()
{
    std::vector<Cell> departures;
    if (cb_cells_ == 0)
        return departures;
    const auto N = dims_.ports();
    for (FlatPort op = 0; op < N; ++op) {
        const std::uint64_t* ready = &ready_[op * ready_words_];
        const auto start = rr_pointer_[op];
        // Two passes: [start, N) then [0, start).
        for (int pass = 0; pass < 2; ++pass) {
            std::uint32_t from = pass == 0 ? start : 0;
            const std::uint32_t limit = pass == 0 ? N : start;
            bool served = false;
            while (auto src = next_set_bit(ready, from, limit)) {
                const auto cm = eligible_cm(op, *src);
                if (!cm) {
                    from = *src + 1;
                    continue;
                }
                auto& cb = crosspoints_[cb_index(op, *src, *cm)];
                const Cell cell = cb.pop().cell;
                --cb_cells_;
                ++departed_;
                ++expected_seq_[flow_index(op, *src)];
                refresh_ready(op, *src);
                rr_pointer_[op] = (*src + 1) % N;
                if (observer_)
                    observer_->on_output_departure(cell, *cm, slot_);
                departures.push_back(cell);
                served = true;
                break;
            }
            if (served)
                break;
        }
    }
    return departures;
}

std::vector<Cell> Fabric::step(std::span<const Arrival> arrivals)
{
    inject(arrivals);
    im_phase();
    cm_phase();
    auto departures = output_phase();
    finish_slot();
    return departures;
}

} // namespace trident
