#include "trident/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>

namespace trident {

std::string_view to_string(SwitchKind kind) { return kind == SwitchKind::Trident ? "trident" : "oq"; }

namespace {

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& value)
{
    std::vector<std::string> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty())
            out.push_back(item);
    }
    return out;
}

double to_double(const std::string& key, const std::string& value)
{
    std::size_t used = 0;
    double x = 0.0;
    try {
        x = std::stod(value, &used);
    } catch (const std::exception&) {
        throw ConfigError(key, "expected a number, got '" + value + "'");
    }
    if (used != value.size())
        throw ConfigError(key, "expected a number, got '" + value + "'");
    return x;
}

template <typename Int>
Int to_integer(const std::string& key, const std::string& value)
{
    Int x{};
    const auto* end = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(value.data(), end, x);
    if (ec != std::errc() || ptr != end)
        throw ConfigError(key, "expected an integer, got '" + value + "'");
    return x;
}

const std::vector<std::pair<std::string, std::string>>& sweep_keys()
{
    static const std::vector<std::pair<std::string, std::string>> keys{
        {"load", "traffic.load"},
        {"omega", "traffic.omega"},
        {"burst_len", "traffic.burst_len"},
        {"n", "dims.n"},
        {"cb_capacity", "run.cb_capacity"},
    };
    return keys;
}

std::optional<std::string> sweep_key(const std::string& parameter)
{
    for (const auto& [name, key] : sweep_keys())
        if (name == parameter)
            return key;
    return std::nullopt;
}

} // namespace

std::string format_capacity(const std::optional<std::size_t>& capacity)
{
    return capacity ? std::to_string(*capacity) : "unbounded";
}

void set_field(ExperimentConfig& c, const std::string& key, const std::string& value)
{
    if (key == "switch") {
        if (value == "trident")
            c.switch_kind = SwitchKind::Trident;
        else if (value == "oq")
            c.switch_kind = SwitchKind::Oq;
        else
            throw ConfigError(key, "expected 'trident' or 'oq', got '" + value + "'");
    } else if (key == "dims.n") {
        c.n = to_integer<std::uint32_t>(key, value);
        if (c.n == 0)
            throw ConfigError(key, "must be >= 1");
    } else if (key == "dims.k" || key == "dims.m") {
        if (to_integer<std::uint32_t>(key, value) != c.n)
            throw ConfigError(key, "only n = k = m is supported; set dims.n first");
    } else if (key == "traffic.model") {
        const auto m = parse_traffic_model(value);
        if (!m)
            throw ConfigError(key, "unknown traffic model '" + value + "'");
        c.traffic.model = *m;
    } else if (key == "traffic.load") {
        c.traffic.load = to_double(key, value);
    } else if (key == "traffic.omega") {
        c.traffic.omega = to_double(key, value);
    } else if (key == "traffic.burst_len") {
        c.traffic.burst_len = to_double(key, value);
    } else if (key == "traffic.hotspot_pairing") {
        const auto p = parse_hotspot_pairing(value);
        if (!p)
            throw ConfigError(key, "expected 'staggered' or 'diagonal', got '" + value + "'");
        c.traffic.hotspot_pairing = *p;
    } else if (key == "run.slots") {
        c.slots = to_integer<Slot>(key, value);
    } else if (key == "run.warmup") {
        c.warmup = to_integer<Slot>(key, value);
    } else if (key == "run.cb_capacity") {
        if (value == "unbounded" || value == "inf")
            c.cb_capacity.reset();
        else
            c.cb_capacity = to_integer<std::size_t>(key, value);
    } else if (key == "run.seeds") {
        c.seeds.clear();
        for (const auto& s : split_list(value))
            c.seeds.push_back(to_integer<std::uint64_t>(key, s));
    } else if (key == "sweep.parameter") {
        if (!sweep_key(value))
            throw ConfigError(key, "cannot sweep '" + value + "'");
        if (!c.sweep)
            c.sweep.emplace();
        c.sweep->parameter = value;
    } else if (key == "sweep.values") {
        if (!c.sweep)
            c.sweep.emplace();
        c.sweep->values = split_list(value);
    } else if (key == "output.path") {
        c.output_path = value;
    } else {
        throw ConfigError(key, "unknown key");
    }
}

void validate(const ExperimentConfig& c)
{
    if (c.n == 0)
        throw ConfigError("dims.n", "must be >= 1");
    try {
        c.traffic.validate();
    } catch (const std::invalid_argument& e) {
        const std::string msg = e.what();
        throw ConfigError(msg.substr(0, msg.find(' ')), msg);
    }
    if (c.slots <= 0)
        throw ConfigError("run.slots", "must be positive");
    if (c.warmup && (*c.warmup < 0 || *c.warmup >= c.slots))
        throw ConfigError("run.warmup", "must be in [0, run.slots)");
    if (c.warmup_slots() >= c.slots)
        throw ConfigError("run.slots", "too short to leave a measurement window");
    if (c.cb_capacity && *c.cb_capacity == 0)
        throw ConfigError("run.cb_capacity", "must be >= 1 or 'unbounded'");
    if (c.seeds.empty())
        throw ConfigError("run.seeds", "at least one seed is required");
    if (c.sweep) {
        if (c.sweep->parameter.empty())
            throw ConfigError("sweep.parameter", "missing");
        if (c.sweep->values.empty())
            throw ConfigError("sweep.values", "missing");
        // Each point must itself be valid.
        for (std::size_t i = 0; i < c.sweep->values.size(); ++i) {
            auto point = apply_sweep_point(c, i);
            point.sweep.reset();
            try {
                validate(point);
            } catch (const ConfigError& e) {
                throw ConfigError("sweep.values", "point " + std::to_string(i) + " invalid: " + e.what());
            }
        }
    }
}

ExperimentConfig apply_sweep_point(const ExperimentConfig& config, std::size_t index)
{
    ExperimentConfig out = config;
    if (!config.sweep)
        return out;
    const auto key = sweep_key(config.sweep->parameter);
    if (!key)
        throw ConfigError("sweep.parameter", "cannot sweep '" + config.sweep->parameter + "'");
    if (index >= config.sweep->values.size())
        throw std::out_of_range("sweep index out of range");
    set_field(out, *key, config.sweep->values[index]);
    return out;
}

std::size_t sweep_points(const ExperimentConfig& config)
{
    return config.sweep ? config.sweep->values.size() : 1;
}

ExperimentConfig parse_config(std::istream& is)
{
    ExperimentConfig c;
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(lineno), "unterminated section header");
            section = trim(std::string_view(line).substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno), "expected 'key = value'");
        auto key = trim(std::string_view(line).substr(0, eq));
        const auto value = trim(std::string_view(line).substr(eq + 1));
        if (key.empty())
            throw ConfigError("line " + std::to_string(lineno), "empty key");
        if (!section.empty())
            key = section + "." + key;
        set_field(c, key, value);
    }
    validate(c);
    return c;
}

ExperimentConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("config", "cannot open '" + path + "'");
    return parse_config(in);
}

} // namespace trident
