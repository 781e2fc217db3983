#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "trident/cell.hpp"
#include "trident/dims.hpp"
#include "trident/rate_matrix.hpp"

namespace trident {

enum class TrafficModel { UniformBernoulli, BurstyOnOff, Unbalanced, HotspotPerPort };

// Which output each input favours under the hotspot model.
//  staggered: IP(i,s) -> OP((i+s) mod k, i), spreads every IM's hotspots over all OMs.
//  diagonal:  IP(i,s) -> OP(i,s), i.e. input u -> output u.
enum class HotspotPairing { Staggered, Diagonal };

std::string_view to_string(TrafficModel model);
std::optional<TrafficModel> parse_traffic_model(std::string_view name);
std::string_view to_string(HotspotPairing pairing);
std::optional<HotspotPairing> parse_hotspot_pairing(std::string_view name);

struct TrafficSpec {
    TrafficModel model = TrafficModel::UniformBernoulli;
    double load = 0.0;        // rho, per input
    double omega = 0.0;       // unbalanced / hotspot parameter
    double burst_len = 10.0;  // mean ON length in cells (bursty)
    HotspotPairing hotspot_pairing = HotspotPairing::Staggered;
    std::uint64_t seed = 1;

    // Throws std::invalid_argument naming the offending field.
    void validate() const;
};

FlatPort hotspot_output(FlatPort input, const SwitchDims& dims, HotspotPairing pairing);

// Long-run lambda(u,v) implied by the spec.
RateMatrix rate_matrix(const TrafficSpec& spec, const SwitchDims& dims);

// Per-slot arrival generator. Each input draws from its own stream seeded
// from (seed, input), so streams are independent and reproducible.
class TrafficGenerator {
public:
    TrafficGenerator(TrafficSpec spec, SwitchDims dims);

    const TrafficSpec& spec() const { return spec_; }

    // At most one arrival per input, ascending by input port.
    std::vector<Arrival> next_arrivals(Slot slot);
    void next_arrivals(Slot slot, std::vector<Arrival>& out);

private:
    struct InputState {
        std::mt19937_64 rng;
        bool on = false;
        std::uint64_t remaining = 0; // cells left in the current burst, or idle slots left
        FlatPort burst_dst = 0;
    };

    std::optional<FlatPort> draw_bursty(InputState& in);
    FlatPort draw_uniform(InputState& in);
    void start_burst(InputState& in);
    void start_idle(InputState& in);

    TrafficSpec spec_;
    SwitchDims dims_;
    std::vector<InputState> inputs_;
    double off_mean_ = 0.0;
};

} // namespace trident
