#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "trident/cell.hpp"
#include "trident/dims.hpp"

namespace trident {

// One departure, written as a single JSON object per line:
//   {"slot":12,"src":[0,1],"dst":[1,0],"seq":3,"arrival_slot":8}
// src/dst are [module, local port].
struct TraceRecord {
    Slot slot = 0;
    PortAddress src;
    PortAddress dst;
    SeqTag seq = 0;
    Slot arrival_slot = 0;

    bool operator==(const TraceRecord&) const = default;
};

TraceRecord make_trace_record(const SwitchDims& dims, const Cell& cell, Slot slot);
Cell to_cell(const SwitchDims& dims, const TraceRecord& rec);

std::string format_trace_line(const TraceRecord& rec);
// Throws std::invalid_argument on malformed lines.
TraceRecord parse_trace_line(const std::string& line);

void write_trace(std::ostream& os, const std::vector<TraceRecord>& records);
std::vector<TraceRecord> read_trace(std::istream& is);

} // namespace trident
