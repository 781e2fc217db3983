#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "trident/cell.hpp"
#include "trident/dims.hpp"
#include "trident/traffic.hpp"

namespace trident {

enum class SwitchKind { Trident, Oq };

std::string_view to_string(SwitchKind kind);

// Invalid configuration; field() is the dotted key at fault.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& message)
        : std::runtime_error(field + ": " + message), field_(std::move(field)) {}

    const std::string& field() const { return field_; }

private:
    std::string field_;
};

struct SweepSpec {
    std::string parameter;           // load | omega | burst_len | n | cb_capacity
    std::vector<std::string> values; // applied through the same setter as the file
};

struct ExperimentConfig {
    std::uint32_t n = 4; // n = k = m
    SwitchKind switch_kind = SwitchKind::Trident;
    TrafficSpec traffic;
    Slot slots = 100'000;        // arrival slots per run, warm-up included
    std::optional<Slot> warmup;  // default: 10% of slots
    std::optional<std::size_t> cb_capacity; // unbounded when empty
    std::optional<SweepSpec> sweep;
    std::vector<std::uint64_t> seeds{1};
    std::string output_path;

    SwitchDims dims() const { return SwitchDims::symmetric(n); }
    Slot warmup_slots() const { return warmup ? *warmup : slots / 10; }
};

// Sets one dotted key, e.g. "traffic.load". Throws ConfigError.
void set_field(ExperimentConfig& config, const std::string& key, const std::string& value);

// Cross-field checks. Throws ConfigError.
void validate(const ExperimentConfig& config);

// Parses the key/value format and validates the result. Throws ConfigError.
ExperimentConfig parse_config(std::istream& is);
ExperimentConfig load_config(const std::string& path);

// The config with sweep value `index` applied (or the config itself when no sweep).
ExperimentConfig apply_sweep_point(const ExperimentConfig& config, std::size_t index);
std::size_t sweep_points(const ExperimentConfig& config);

std::string format_capacity(const std::optional<std::size_t>& capacity);

} // namespace trident
