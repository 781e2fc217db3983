#pragma once

#include <cstdint>

#include "trident/dims.hpp"

namespace trident {

using Slot = std::int64_t;
using SeqTag = std::uint64_t;

// A fixed-size switching unit. seq is the 1-based arrival order within its
// (src, dst) flow, assigned at the input port.
struct Cell {
    FlatPort src = 0;
    FlatPort dst = 0;
    SeqTag seq = 0;
    Slot arrival_slot = 0;

    bool operator==(const Cell&) const = default;
};

struct Arrival {
    FlatPort src = 0;
    FlatPort dst = 0;

    bool operator==(const Arrival&) const = default;
};

} // namespace trident
