#include "trident/traffic.hpp"

#include <cmath>
#include <stdexcept>

namespace trident {

std::string_view to_string(TrafficModel model)
{
    switch (model) {
    case TrafficModel::UniformBernoulli: return "uniform_bernoulli";
    case TrafficModel::BurstyOnOff: return "bursty_onoff";
    case TrafficModel::Unbalanced: return "unbalanced";
    case TrafficModel::HotspotPerPort: return "hotspot_per_port";
    }
    return "unknown";
}

std::optional<TrafficModel> parse_traffic_model(std::string_view name)
{
    for (auto m : {TrafficModel::UniformBernoulli, TrafficModel::BurstyOnOff, TrafficModel::Unbalanced,
                   TrafficModel::HotspotPerPort})
        if (to_string(m) == name)
            return m;
    return std::nullopt;
}

std::string_view to_string(HotspotPairing pairing)
{
    return pairing == HotspotPairing::Staggered ? "staggered" : "diagonal";
}

std::optional<HotspotPairing> parse_hotspot_pairing(std::string_view name)
{
    if (name == "staggered")
        return HotspotPairing::Staggered;
    if (name == "diagonal")
        return HotspotPairing::Diagonal;
    return std::nullopt;
}

void TrafficSpec::validate() const
{
    if (!(load >= 0.0 && load <= 1.0))
        throw std::invalid_argument("traffic.load must be in [0,1]");
    if (!(omega >= 0.0 && omega <= 1.0))
        throw std::invalid_argument("traffic.omega must be in [0,1]");
    if (!(burst_len >= 1.0))
        throw std::invalid_argument("traffic.burst_len must be >= 1");
}

FlatPort hotspot_output(FlatPort input, const SwitchDims& dims, HotspotPairing pairing)
{
    if (pairing == HotspotPairing::Diagonal)
        return input;
    const auto a = address_of(dims, input);
    return flat(dims, PortAddress{(a.module + a.local) % dims.k(), a.module});
}

RateMatrix rate_matrix(const TrafficSpec& spec, const SwitchDims& dims)
{
    spec.validate();
    const auto N = dims.ports();
    const double uniform = spec.load / N;
    switch (spec.model) {
    case TrafficModel::UniformBernoulli:
    case TrafficModel::BurstyOnOff:
        return RateMatrix(N, uniform);
    case TrafficModel::Unbalanced: {
        RateMatrix m(N, spec.load * (1.0 - spec.omega) / N);
        for (FlatPort u = 0; u < N; ++u)
            m(u, u) = spec.load * (spec.omega + (1.0 - spec.omega) / N);
        return m;
    }
    case TrafficModel::HotspotPerPort: {
        RateMatrix m(N, spec.load * (1.0 - spec.omega) / N);
        for (FlatPort u = 0; u < N; ++u)
            m(u, hotspot_output(u, dims, spec.hotspot_pairing)) += spec.load * spec.omega;
        return m;
    }
    }
    throw std::logic_error("unhandled traffic model");
}

TrafficGenerator::TrafficGenerator(TrafficSpec spec, SwitchDims dims) : spec_(spec), dims_(dims)
{
    spec_.validate();
    inputs_.reserve(dims_.ports());
    for (FlatPort u = 0; u < dims_.ports(); ++u) {
        std::seed_seq seq{static_cast<std::uint32_t>(spec_.seed), static_cast<std::uint32_t>(spec_.seed >> 32),
                          static_cast<std::uint32_t>(u), 0x7d1eu};
        inputs_.push_back(InputState{std::mt19937_64(seq)});
    }
    if (spec_.model == TrafficModel::BurstyOnOff && spec_.load > 0.0) {
        off_mean_ = spec_.burst_len * (1.0 - spec_.load) / spec_.load;
        for (auto& in : inputs_) {
            if (std::bernoulli_distribution(spec_.load)(in.rng))
                start_burst(in);
            else
                start_idle(in);
        }
    }
}

FlatPort TrafficGenerator::draw_uniform(InputState& in)
{
    return std::uniform_int_distribution<FlatPort>(0, dims_.ports() - 1)(in.rng);
}

void TrafficGenerator::start_burst(InputState& in)
{
    // ON length is geometric on {1,2,...} with mean burst_len.
    in.on = true;
    in.burst_dst = draw_uniform(in);
    in.remaining = 1 + std::geometric_distribution<std::uint64_t>(1.0 / spec_.burst_len)(in.rng);
}

void TrafficGenerator::start_idle(InputState& in)
{
    // OFF length is geometric on {0,1,...} with mean burst_len * (1 - rho) / rho.
    in.on = false;
    in.remaining = std::geometric_distribution<std::uint64_t>(1.0 / (1.0 + off_mean_))(in.rng);
}

std::optional<FlatPort> TrafficGenerator::draw_bursty(InputState& in)
{
    while (!in.on && in.remaining == 0)
        start_burst(in);
    if (!in.on) {
        --in.remaining;
        if (in.remaining == 0)
            start_burst(in);
        return std::nullopt;
    }
    const FlatPort dst = in.burst_dst;
    if (--in.remaining == 0)
        start_idle(in);
    return dst;
}

std::vector<Arrival> TrafficGenerator::next_arrivals(Slot slot)
{
    std::vector<Arrival> out;
    next_arrivals(slot, out);
    return out;
}

void TrafficGenerator::next_arrivals(Slot /*slot*/, std::vector<Arrival>& out)
{
    out.clear();
    if (spec_.load <= 0.0)
        return;
    const auto N = dims_.ports();
    for (FlatPort u = 0; u < N; ++u) {
        auto& in = inputs_[u];
        if (spec_.model == TrafficModel::BurstyOnOff) {
            if (auto dst = draw_bursty(in))
                out.push_back(Arrival{u, *dst});
            continue;
        }
        if (!std::bernoulli_distribution(spec_.load)(in.rng))
            continue;
        FlatPort dst = 0;
        switch (spec_.model) {
        case TrafficModel::UniformBernoulli:
            dst = draw_uniform(in);
            break;
        case TrafficModel::Unbalanced:
            dst = std::bernoulli_distribution(spec_.omega)(in.rng) ? u : draw_uniform(in);
            break;
        case TrafficModel::HotspotPerPort:
            dst = std::bernoulli_distribution(spec_.omega)(in.rng) ? hotspot_output(u, dims_, spec_.hotspot_pairing)
                                                                  : draw_uniform(in);
            break;
        case TrafficModel::BurstyOnOff:
            break;
        }
        out.push_back(Arrival{u, dst});
    }
}

} // namespace trident
