#include "trident/oq_switch.hpp"

#include <algorithm>
#include <stdexcept>

namespace trident {

OqSwitch::OqSwitch(SwitchDims dims) : dims_(dims), queues_(dims.ports()), seq_(std::size_t(dims.ports()) * dims.ports(), 0)
{
}

std::vector<Cell> OqSwitch::step(std::span<const Arrival> arrivals)
{
    const auto N = dims_.ports();
    std::vector<Arrival> sorted(arrivals.begin(), arrivals.end());
    std::sort(sorted.begin(), sorted.end(), [](const Arrival& a, const Arrival& b) { return a.src < b.src; });
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const auto& a = sorted[i];
        if (a.src >= N || a.dst >= N)
            throw std::invalid_argument("arrival port out of range");
        if (i > 0 && sorted[i - 1].src == a.src)
            throw std::invalid_argument("more than one arrival at one input in a slot");
    }

    std::vector<Cell> departures;
    for (FlatPort op = 0; op < N; ++op) {
        auto& q = queues_[op];
        if (q.empty())
            continue;
        departures.push_back(q.pop());
        --resident_;
        ++departed_;
    }
    for (const auto& a : sorted) {
        Cell c{a.src, a.dst, ++seq_[std::size_t(a.src) * N + a.dst], slot_};
        auto& q = queues_[a.dst];
        q.push(c);
        max_len_ = std::max(max_len_, q.size());
        ++resident_;
        ++injected_;
    }
    ++slot_;
    return departures;
}

} // namespace trident
