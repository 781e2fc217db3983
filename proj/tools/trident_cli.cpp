// Command-line front end: run, analyze, cbsweep, trace.
//
// Exit codes: 0 success, 1 configuration error, 2 in-order violation in a
// trident run.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "trident/config.hpp"
#include "trident/experiment.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitViolation = 2;

struct Common {
    std::string config_path;
    std::string output_path;
    std::optional<std::uint64_t> seed;
    int verbosity = 0;
    unsigned workers = 0;
};

trident::ExperimentConfig load(const Common& c)
{
    auto cfg = trident::load_config(c.config_path);
    if (c.seed)
        cfg.seeds = {*c.seed};
    if (!c.output_path.empty())
        cfg.output_path = c.output_path;
    return cfg;
}

// Writes to the configured output path, or stdout when none is set.
template <typename Fn>
void with_output(const trident::ExperimentConfig& cfg, Fn fn)
{
    if (cfg.output_path.empty() || cfg.output_path == "-") {
        fn(std::cout);
        return;
    }
    std::ofstream out(cfg.output_path);
    if (!out)
        throw trident::ConfigError("output.path", "cannot open '" + cfg.output_path + "' for writing");
    fn(out);
}

int rows_exit_code(const std::vector<trident::RunRow>& rows, int verbosity)
{
    int code = kExitOk;
    for (const auto& r : rows) {
        if (r.switch_kind == trident::SwitchKind::Trident && r.metrics.violations > 0) {
            std::cerr << "in-order violation: run " << r.run_id << " seed " << r.seed << " had "
                      << r.metrics.violations << " out-of-order departures\n";
            code = kExitViolation;
        }
    }
    if (verbosity > 0)
        std::cerr << rows.size() << " run(s) complete\n";
    return code;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Three-stage load-balancing Clos switch simulator"};
    app.require_subcommand(1);

    Common common;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("-c,--config", common.config_path, "Experiment configuration file")->required();
        sub->add_option("-o,--output", common.output_path, "Output path (overrides output.path; '-' for stdout)");
        sub->add_option("-s,--seed", common.seed, "Run a single seed instead of run.seeds");
        sub->add_flag("-v,--verbose", common.verbosity, "More progress output on stderr");
        sub->add_option("-j,--jobs", common.workers, "Worker threads (default: hardware concurrency)");
    };

    auto* run = app.add_subcommand("run", "Run a single simulation or a parameter sweep, write CSV");
    auto* analyze = app.add_subcommand("analyze", "Rate-matrix pipeline and throughput identity check");
    auto* cbsweep = app.add_subcommand("cbsweep", "Compare crosspoint capacities k^2, N^2 and unbounded");
    auto* trace = app.add_subcommand("trace", "Emit the departure trace of one run");
    for (auto* sub : {run, analyze, cbsweep, trace})
        add_common(sub);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        const auto cfg = load(common);
        if (common.verbosity > 0)
            std::cerr << "config: " << cfg.dims().describe() << " switch=" << trident::to_string(cfg.switch_kind)
                      << " model=" << trident::to_string(cfg.traffic.model) << '\n';

        if (*run) {
            const auto rows = trident::run_experiment(cfg, common.workers);
            with_output(cfg, [&](std::ostream& os) { trident::write_csv(os, rows); });
            return rows_exit_code(rows, common.verbosity);
        }
        if (*cbsweep) {
            const auto rows = trident::compare_cb_capacities(cfg, common.workers);
            with_output(cfg, [&](std::ostream& os) { trident::write_csv(os, rows); });
            return rows_exit_code(rows, common.verbosity);
        }
        if (*analyze) {
            // One report per sweep point, separated by a header line when sweeping.
            with_output(cfg, [&](std::ostream& os) {
                for (std::size_t p = 0; p < trident::sweep_points(cfg); ++p) {
                    auto point = trident::apply_sweep_point(cfg, p);
                    if (cfg.sweep)
                        os << "[" << cfg.sweep->parameter << "=" << cfg.sweep->values[p] << "]\n";
                    point.sweep.reset();
                    os << trident::run_analysis(point).to_text();
                }
            });
            return kExitOk;
        }
        if (*trace) {
            auto single = trident::apply_sweep_point(cfg, 0);
            single.sweep.reset();
            trident::SimulationOutput result;
            with_output(cfg, [&](std::ostream& os) {
                trident::SimulationOptions opt;
                opt.trace = &os;
                result = trident::simulate(single, single.seeds.front(), opt);
            });
            if (single.switch_kind == trident::SwitchKind::Trident && result.metrics.violations > 0) {
                std::cerr << "in-order violation: " << result.metrics.violations << " out-of-order departures\n";
                return kExitViolation;
            }
            return kExitOk;
        }
    } catch (const trident::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    }
    return kExitOk;
}
