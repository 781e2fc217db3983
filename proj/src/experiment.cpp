#include "trident/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

#include "trident/fabric.hpp"
#include "trident/oq_switch.hpp"
#include "trident/trace.hpp"
#include "trident/traffic.hpp"

namespace trident {

namespace {

template <typename Switch>
struct Runner;

template <>
struct Runner<Fabric> {
    static Fabric make(const ExperimentConfig& c) { return Fabric(c.dims(), FabricOptions{c.cb_capacity}); }
    static std::size_t max_vimoq(const Fabric& f) { return f.max_vimoq_occupancy(); }
    static std::size_t max_cb(const Fabric& f) { return f.max_crosspoint_occupancy(); }
    static std::uint64_t cb_cells(const Fabric& f) { return f.crosspoint_cells(); }
};

// The OQ reference has no VIMOQs; its output FIFO stands in for the crosspoint stage.
template <>
struct Runner<OqSwitch> {
    static OqSwitch make(const ExperimentConfig& c) { return OqSwitch(c.dims()); }
    static std::size_t max_vimoq(const OqSwitch&) { return 0; }
    static std::size_t max_cb(const OqSwitch& s) { return s.max_queue_length(); }
    static std::uint64_t cb_cells(const OqSwitch& s) { return s.resident(); }
};

template <typename Switch>
SimulationOutput simulate_with(const ExperimentConfig& config, std::uint64_t seed, const SimulationOptions& opt)
{
    using R = Runner<Switch>;
    const auto dims = config.dims();
    TrafficSpec spec = config.traffic;
    spec.seed = seed;
    TrafficGenerator gen(spec, dims);
    Switch sw = R::make(config);
    const Slot warmup = config.warmup_slots();
    MetricsCollector metrics(dims.ports(), MeasurementWindow{warmup, config.slots - warmup});

    SimulationOutput out;
    if (opt.record_occupancy)
        out.occupancy.reserve(config.slots);
    if (opt.record_cb_occupancy)
        out.cb_occupancy.reserve(config.slots);

    auto emit = [&](const std::vector<Cell>& departures, Slot slot) {
        for (const auto& c : departures) {
            metrics.record_departure(c, slot);
            if (opt.trace)
                *opt.trace << format_trace_line(make_trace_record(dims, c, slot)) << '\n';
        }
    };

    std::vector<Arrival> arrivals;
    const Slot midpoint = config.slots / 2;
    for (Slot t = 0; t < config.slots; ++t) {
        if (t == midpoint)
            out.max_cb_occ_first_half = R::max_cb(sw);
        gen.next_arrivals(t, arrivals);
        for (std::size_t i = 0; i < arrivals.size(); ++i)
            metrics.record_arrival(t);
        emit(sw.step(arrivals), t);
        if (opt.record_occupancy)
            out.occupancy.push_back(double(sw.resident()));
        if (opt.record_cb_occupancy)
            out.cb_occupancy.push_back(double(R::cb_cells(sw)));
    }

    const Slot cap = Slot(10) * dims.ports();
    arrivals.clear();
    Slot t = config.slots;
    while (metrics.outstanding() > 0 && out.drain_slots < cap) {
        emit(sw.step(arrivals), t);
        ++t;
        ++out.drain_slots;
    }
    out.drained = metrics.outstanding() == 0;
    metrics.set_occupancy(R::max_vimoq(sw), R::max_cb(sw));
    out.metrics = metrics.finalize();
    return out;
}

struct Job {
    ExperimentConfig config;
    std::uint64_t seed = 0;
};

RunRow execute(const Job& job, std::size_t run_id)
{
    const auto& c = job.config;
    RunRow row;
    row.run_id = run_id;
    row.switch_kind = c.switch_kind;
    row.ports = c.dims().ports();
    row.model = c.traffic.model;
    row.load = c.traffic.load;
    row.omega = c.traffic.omega;
    row.burst_len = c.traffic.burst_len;
    row.cb_capacity = c.cb_capacity;
    row.seed = job.seed;
    row.admissible = check_admissible(rate_matrix(c.traffic, c.dims())).admissible;
    row.metrics = simulate(c, job.seed).metrics;
    return row;
}

std::vector<RunRow> run_jobs(const std::vector<Job>& jobs, unsigned workers)
{
    std::vector<RunRow> rows(jobs.size());
    if (workers == 0)
        workers = std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, static_cast<unsigned>(jobs.size()));

    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(jobs.size());
    auto work = [&] {
        for (std::size_t i = next++; i < jobs.size(); i = next++) {
            try {
                rows[i] = execute(jobs[i], i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back(work);
    }
    for (const auto& e : errors)
        if (e)
            std::rethrow_exception(e);
    return rows;
}

void append_jobs(const ExperimentConfig& config, std::vector<Job>& jobs)
{
    for (std::size_t p = 0; p < sweep_points(config); ++p) {
        auto point = apply_sweep_point(config, p);
        point.sweep.reset();
        for (auto seed : config.seeds)
            jobs.push_back(Job{point, seed});
    }
}

std::string fmt(double x)
{
    std::ostringstream os;
    os << std::setprecision(10) << x;
    return os.str();
}

std::string fmt(const std::optional<double>& x) { return x ? fmt(*x) : std::string(); }

} // namespace

SimulationOutput simulate(const ExperimentConfig& config, std::uint64_t seed, const SimulationOptions& options)
{
    if (config.switch_kind == SwitchKind::Oq)
        return simulate_with<OqSwitch>(config, seed, options);
    return simulate_with<Fabric>(config, seed, options);
}

std::vector<RunRow> run_experiment(const ExperimentConfig& config, unsigned workers)
{
    validate(config);
    std::vector<Job> jobs;
    append_jobs(config, jobs);
    return run_jobs(jobs, workers);
}

std::vector<RunRow> compare_cb_capacities(const ExperimentConfig& config, unsigned workers)
{
    validate(config);
    if (config.sweep && config.sweep->parameter == "cb_capacity")
        throw ConfigError("sweep.parameter", "cb_capacity is fixed by the capacity comparison");
    if (config.switch_kind != SwitchKind::Trident)
        throw ConfigError("switch", "capacity comparison needs the trident switch");
    const auto dims = config.dims();
    const std::size_t k = dims.k();
    const std::size_t N = dims.ports();
    std::vector<Job> jobs;
    for (const std::optional<std::size_t> cap : {std::optional<std::size_t>(k * k), std::optional<std::size_t>(N * N),
                                                 std::optional<std::size_t>()}) {
        auto c = config;
        c.cb_capacity = cap;
        append_jobs(c, jobs);
    }
    return run_jobs(jobs, workers);
}

const std::vector<std::string>& csv_columns()
{
    static const std::vector<std::string> cols{"run_id",      "switch",     "N",          "model",
                                               "load",        "omega",      "burst_len",  "cb_capacity",
                                               "seed",        "throughput", "mean_delay", "p99_delay",
                                               "max_cb_occ",  "violations", "flags"};
    return cols;
}

void write_csv(std::ostream& os, const std::vector<RunRow>& rows)
{
    const auto& cols = csv_columns();
    for (std::size_t i = 0; i < cols.size(); ++i)
        os << (i ? "," : "") << cols[i];
    os << '\n';
    for (const auto& r : rows) {
        std::string flags;
        auto flag = [&](const char* f) { flags += flags.empty() ? f : std::string(";") + f; };
        if (!r.admissible)
            flag("inadmissible");
        if (!r.metrics.throughput)
            flag("no_traffic");
        os << r.run_id << ',' << to_string(r.switch_kind) << ',' << r.ports << ',' << to_string(r.model) << ','
           << fmt(r.load) << ',' << fmt(r.omega) << ',' << fmt(r.burst_len) << ',' << format_capacity(r.cb_capacity)
           << ',' << r.seed << ',' << fmt(r.metrics.throughput) << ',' << fmt(r.metrics.mean_delay) << ','
           << fmt(r.metrics.p99_delay) << ',' << r.metrics.max_cb_occ << ',' << r.metrics.violations << ',' << flags
           << '\n';
    }
}

AnalysisReport run_analysis(const RateMatrix& r1, const SwitchDims& dims)
{
    AnalysisReport rep{dims, check_admissible(r1), {}, rate_bounds(dims)};
    if (rep.admissibility.admissible)
        rep.identity = verify_throughput_identity(r1, dims);
    return rep;
}

AnalysisReport run_analysis(const ExperimentConfig& config)
{
    validate(config);
    return run_analysis(rate_matrix(config.traffic, config.dims()), config.dims());
}

std::string AnalysisReport::to_text() const
{
    std::ostringstream os;
    os << std::setprecision(10);
    os << "dims.n=" << dims.n() << '\n'
       << "dims.N=" << dims.ports() << '\n'
       << "rates.admissible=" << (admissibility.admissible ? "true" : "false") << '\n'
       << "rates.max_row_sum=" << admissibility.max_row_sum << '\n'
       << "rates.max_column_sum=" << admissibility.max_column_sum << '\n';
    if (admissibility.admissible)
        os << identity.to_text();
    os << bounds.to_text();
    return os.str();
}

} // namespace trident
