#include "trident/trace.hpp"

#include <istream>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

namespace trident {

TraceRecord make_trace_record(const SwitchDims& dims, const Cell& cell, Slot slot)
{
    return TraceRecord{slot, address_of(dims, cell.src), address_of(dims, cell.dst), cell.seq, cell.arrival_slot};
}

Cell to_cell(const SwitchDims& dims, const TraceRecord& rec)
{
    return Cell{flat(dims, rec.src), flat(dims, rec.dst), rec.seq, rec.arrival_slot};
}

std::string format_trace_line(const TraceRecord& rec)
{
    nlohmann::ordered_json j;
    j["slot"] = rec.slot;
    j["src"] = {rec.src.module, rec.src.local};
    j["dst"] = {rec.dst.module, rec.dst.local};
    j["seq"] = rec.seq;
    j["arrival_slot"] = rec.arrival_slot;
    return j.dump();
}

TraceRecord parse_trace_line(const std::string& line)
{
    try {
        const auto j = nlohmann::json::parse(line);
        TraceRecord rec;
        rec.slot = j.at("slot").get<Slot>();
        rec.src = PortAddress{j.at("src").at(0).get<std::uint32_t>(), j.at("src").at(1).get<std::uint32_t>()};
        rec.dst = PortAddress{j.at("dst").at(0).get<std::uint32_t>(), j.at("dst").at(1).get<std::uint32_t>()};
        rec.seq = j.at("seq").get<SeqTag>();
        rec.arrival_slot = j.at("arrival_slot").get<Slot>();
        return rec;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("malformed trace line: ") + e.what());
    }
}

void write_trace(std::ostream& os, const std::vector<TraceRecord>& records)
{
    for (const auto& r : records)
        os << format_trace_line(r) << '\n';
}

std::vector<TraceRecord> read_trace(std::istream& is)
{
    std::vector<TraceRecord> out;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty())
            continue;
        out.push_back(parse_trace_line(line));
    }
    return out;
}

} // namespace trident
