#include <doctest.h>

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "trident/fabric.hpp"
#include "trident/schedule.hpp"
#include "trident/traffic.hpp"

using namespace trident;

namespace {

Arrival arrival(const SwitchDims& d, PortAddress src, PortAddress dst) { return Arrival{flat(d, src), flat(d, dst)}; }

struct ServiceLog : FabricObserver {
    struct Entry {
        VimoqId queue;
        Cell cell;
        Slot slot;
    };
    std::vector<Entry> services;
    void on_vimoq_service(const VimoqId& q, const Cell& c, Slot s) override { services.push_back({q, c, s}); }
};

// Brute-force single-cell latency: the cell enters VIMOQ(r,...) at t0 and leaves on
// the first later slot where CM(r) input i faces OM j; it then departs the OP one
// slot after reaching its crosspoint buffer.
Slot single_cell_sojourn(const SwitchDims& d, PortAddress src, PortAddress dst, Slot t0)
{
    const auto r = (src.local + t0) % d.m();
    for (Slot t = t0 + 1;; ++t) {
        const auto j = ((std::int64_t(src.module) - t + std::int64_t(r)) % d.k() + d.k()) % d.k();
        if (std::uint32_t(j) == dst.module)
            return t + 1 - t0;
    }
}

} // namespace

TEST_CASE("inject tags consecutive cells of one flow 1, 2, ...")
{
    const auto d = SwitchDims::symmetric(2);
    Fabric f(d);
    const std::vector<Arrival> a{arrival(d, {0, 0}, {1, 1})};
    f.inject(a);
    CHECK(f.staged(0)->seq == 1);
    CHECK(f.staged(0)->arrival_slot == 0);
    f.im_phase();
    f.cm_phase();
    f.output_phase();
    f.finish_slot();
    f.inject(a);
    CHECK(f.staged(0)->seq == 2);
    CHECK(f.staged(0)->arrival_slot == 1);
}

TEST_CASE("inject edge cases")
{
    const auto d = SwitchDims::symmetric(3);
    Fabric f(d);
    f.inject({});
    CHECK(f.staged_cells() == 0);
    CHECK(f.injected() == 0);

    SUBCASE("one arrival per port stages N cells")
    {
        std::vector<Arrival> all;
        for (FlatPort u = 0; u < d.ports(); ++u)
            all.push_back(Arrival{u, (u + 4) % d.ports()});
        f.inject(all);
        CHECK(f.staged_cells() == d.ports());
    }
    SUBCASE("two arrivals at one input are rejected without side effects")
    {
        const std::vector<Arrival> dup{Arrival{1, 2}, Arrival{3, 3}, Arrival{1, 5}};
        CHECK_THROWS_AS(f.inject(dup), std::invalid_argument);
        CHECK(f.staged_cells() == 0);
        CHECK(f.injected() == 0);
    }
    SUBCASE("out of range ports are rejected")
    {
        const std::vector<Arrival> bad{Arrival{0, 9}};
        CHECK_THROWS_AS(f.inject(bad), std::invalid_argument);
    }
}

TEST_CASE("im_phase places the cell in the VIMOQ chosen by the IM configuration")
{
    const auto d = SwitchDims::symmetric(3);
    Fabric f(d);
    f.im_phase();
    CHECK(f.vimoq_cells() == 0);

    const std::vector<Arrival> a{arrival(d, {0, 0}, {1, 1})};
    f.inject(a);
    f.im_phase();
    CHECK(f.vimoq(VimoqId{0, 0, 1, 1}).size() == 1);
    CHECK(f.staged_cells() == 0);

    // Next slot: same input reaches the next CM.
    f.finish_slot();
    f.inject(a);
    f.im_phase();
    CHECK(f.vimoq(VimoqId{1, 0, 1, 1}).size() == 1);
}

TEST_CASE("cm_phase moves an eligible head cell only when the link faces its OM")
{
    const auto d = SwitchDims::symmetric(3);
    Fabric f(d);
    // IP(0,0) at t=0 -> CM 0. CM(0) input 0 faces OM j = -t mod 3: t=0 -> 0, t=1 -> 2, t=2 -> 1.
    const std::vector<Arrival> a{arrival(d, {0, 0}, {1, 2})};
    f.inject(a);
    f.im_phase();
    f.cm_phase(); // entered this slot: not eligible
    CHECK(f.vimoq(VimoqId{0, 0, 1, 2}).size() == 1);
    f.finish_slot();
    f.cm_phase(); // t=1 faces OM 2
    CHECK(f.vimoq(VimoqId{0, 0, 1, 2}).size() == 1);
    f.finish_slot();
    f.cm_phase(); // t=2 faces OM 1
    CHECK(f.vimoq(VimoqId{0, 0, 1, 2}).empty());
    CHECK(f.crosspoint(flat(d, {1, 2}), flat(d, {0, 0}), 0).size() == 1);
    CHECK(f.vimoq_pointer(0, 0, 1) == 0); // served d=2, pointer wraps to 0
}

TEST_CASE("single cell latency matches the brute-force schedule oracle")
{
    for (std::uint32_t n : {2u, 3u}) {
        const auto d = SwitchDims::symmetric(n);
        Slot min_sojourn = 1'000'000;
        for (FlatPort u = 0; u < d.ports(); ++u)
            for (FlatPort v = 0; v < d.ports(); ++v)
                for (Slot t0 = 0; t0 < Slot(n); ++t0) {
                    Fabric f(d);
                    for (Slot t = 0; t < t0; ++t)
                        f.step({});
                    const std::vector<Arrival> a{Arrival{u, v}};
                    std::optional<Slot> departed;
                    auto deps = f.step(a);
                    CHECK(deps.empty()); // never in the arrival slot
                    for (Slot t = t0 + 1; t < t0 + 4 * Slot(n) && !departed; ++t) {
                        deps = f.step({});
                        if (!deps.empty())
                            departed = t;
                    }
                    REQUIRE(departed);
                    const Slot expected = single_cell_sojourn(d, address_of(d, u), address_of(d, v), t0);
                    CHECK(*departed - t0 == expected);
                    min_sojourn = std::min(min_sojourn, *departed - t0);
                    CHECK(f.resident() == 0);
                }
        CHECK(min_sojourn == 2);
    }
}

TEST_CASE("worked example: younger cell overtakes in the VIMOQ stage but leaves the OP after the older one")
{
    // n=k=m=3. Flow 1: IP(0,1) -> OP(1,0). Flow 2: IP(0,0) -> OP(1,0).
    // c11 arrives at t=0 into VIMOQ(1,0,1,0); c21 at t=1 lands behind it;
    // c22 at t=2 goes to the empty VIMOQ(2,0,1,0).
    const auto d = SwitchDims::symmetric(3);
    Fabric f(d);
    ServiceLog log;
    f.set_observer(&log);
    const PortAddress ip1{0, 1}, ip2{0, 0}, op{1, 0};

    std::map<std::pair<FlatPort, SeqTag>, Slot> vimoq_departure, op_departure, arrival_slot;
    for (Slot t = 0; t < 12; ++t) {
        std::vector<Arrival> a;
        if (t == 0)
            a.push_back(arrival(d, ip1, op));
        if (t == 1 || t == 2)
            a.push_back(arrival(d, ip2, op));
        const auto before = log.services.size();
        for (const auto& c : f.step(a))
            op_departure[{c.src, c.seq}] = t;
        for (auto i = before; i < log.services.size(); ++i)
            vimoq_departure[{log.services[i].cell.src, log.services[i].cell.seq}] = log.services[i].slot;
        if (t == 5) {
            // c22 is parked at its crosspoint buffer while flow 2 still expects tag 1.
            CHECK(f.crosspoint(flat(d, op), flat(d, ip2), 2).size() == 1);
            CHECK(f.expected_seq(flat(d, op), flat(d, ip2)) == 1);
        }
    }
    const auto c11 = std::make_pair(flat(d, ip1), SeqTag{1});
    const auto c21 = std::make_pair(flat(d, ip2), SeqTag{1});
    const auto c22 = std::make_pair(flat(d, ip2), SeqTag{2});

    CHECK(vimoq_departure.at(c11) == 3);
    CHECK(vimoq_departure.at(c22) == 4);
    CHECK(vimoq_departure.at(c21) == 6);
    CHECK(op_departure.at(c11) == 4);
    CHECK(op_departure.at(c21) == 7);
    CHECK(op_departure.at(c22) == 8);
    // Delays from arrival: 4, 6, 6.
    CHECK(op_departure.at(c11) - 0 == 4);
    CHECK(op_departure.at(c21) - 1 == 6);
    CHECK(op_departure.at(c22) - 2 == 6);
}

TEST_CASE("empty switch stays empty")
{
    Fabric f(SwitchDims::symmetric(4));
    for (int t = 0; t < 100; ++t)
        CHECK(f.step({}).empty());
    CHECK(f.resident() == 0);
    CHECK(f.slot() == 100);
}

TEST_CASE("rr pointer moves past the served flow")
{
    const auto d = SwitchDims::symmetric(2);
    Fabric f(d);
    const std::vector<Arrival> a{Arrival{2, 1}};
    std::vector<Cell> deps;
    for (int t = 0; t < 6 && deps.empty(); ++t)
        deps = f.step(t == 0 ? std::span<const Arrival>(a) : std::span<const Arrival>());
    REQUIRE(deps.size() == 1);
    CHECK(f.rr_pointer(1) == 3);
    CHECK(f.expected_seq(1, 2) == 2);
}

namespace {

// Runs `slots` of generated traffic phase by phase and checks the fabric's
// structural invariants every slot.
void run_with_invariant_checks(const SwitchDims& d, const TrafficSpec& spec, Slot slots, FabricOptions opt = {})
{
    Fabric f(d, opt);
    ServiceLog log;
    f.set_observer(&log);
    TrafficGenerator gen(spec, d);
    const auto N = d.ports();
    std::vector<SeqTag> last_departed(N * N, 0);
    std::vector<std::uint64_t> departed_per_flow(N * N, 0);
    std::vector<std::uint64_t> wait(std::size_t(d.m()) * d.k() * d.k() * d.n(), 0);
    std::uint64_t max_wait = 0;
    auto vimoq_slot = [&](const VimoqId& q) {
        return ((std::size_t(q.cm) * d.k() + q.im) * d.k() + q.om) * d.n() + q.out_port;
    };

    for (Slot t = 0; t < slots; ++t) {
        f.inject(gen.next_arrivals(t));
        f.im_phase();

        // VIMOQs holding an eligible head before the CM phase.
        std::vector<VimoqId> eligible;
        for (std::uint32_t r = 0; r < d.m(); ++r)
            for (std::uint32_t i = 0; i < d.k(); ++i)
                for (std::uint32_t j = 0; j < d.k(); ++j)
                    for (std::uint32_t dd = 0; dd < d.n(); ++dd) {
                        const VimoqId q{r, i, j, dd};
                        const auto& vq = f.vimoq(q);
                        if (!vq.empty() && vq.front().entered < t)
                            eligible.push_back(q);
                    }
        const auto before = log.services.size();
        f.cm_phase();
        std::set<std::pair<std::uint32_t, std::uint32_t>> cm_inputs, cm_outputs;
        std::set<std::size_t> served;
        for (auto i = before; i < log.services.size(); ++i) {
            const auto& s = log.services[i];
            CHECK(cm_inputs.insert({s.queue.cm, s.queue.im}).second);
            CHECK(cm_outputs.insert({s.queue.cm, s.queue.om}).second);
            CHECK(s.queue.om == cm_link(s.queue.im, s.queue.cm, t, d));
            served.insert(vimoq_slot(s.queue));
        }
        for (const auto& q : eligible) {
            auto& w = wait[vimoq_slot(q)];
            w = served.count(vimoq_slot(q)) ? 0 : w + 1;
            max_wait = std::max(max_wait, w);
        }

        // Independent scan: which OPs hold an in-order, eligible head cell?
        std::vector<bool> op_has_candidate(N, false);
        for (FlatPort op = 0; op < N; ++op)
            for (FlatPort src = 0; src < N; ++src)
                for (std::uint32_t r = 0; r < d.m(); ++r) {
                    const auto& q = f.crosspoint(op, src, r);
                    if (!q.empty() && q.front().entered < t && q.front().cell.seq == f.expected_seq(op, src))
                        op_has_candidate[op] = true;
                }

        const auto deps = f.output_phase();
        std::vector<int> per_op(N, 0);
        for (const auto& c : deps) {
            ++per_op[c.dst];
            auto& last = last_departed[std::size_t(c.src) * N + c.dst];
            CHECK(c.seq == last + 1);
            last = c.seq;
            ++departed_per_flow[std::size_t(c.src) * N + c.dst];
        }
        for (FlatPort op = 0; op < N; ++op)
            CHECK(per_op[op] == (op_has_candidate[op] ? 1 : 0));
        f.finish_slot();

        // Queue contents: FIFO order by tag inside each crosspoint buffer, flow identity, capacity.
        for (FlatPort op = 0; op < N; ++op)
            for (FlatPort src = 0; src < N; ++src) {
                CHECK(f.expected_seq(op, src) == 1 + departed_per_flow[std::size_t(src) * N + op]);
                for (std::uint32_t r = 0; r < d.m(); ++r) {
                    const auto& q = f.crosspoint(op, src, r);
                    if (opt.cb_capacity)
                        CHECK(q.size() <= *opt.cb_capacity);
                    for (std::size_t x = 0; x < q.size(); ++x) {
                        CHECK(q[x].cell.src == src);
                        CHECK(q[x].cell.dst == op);
                        if (x > 0)
                            CHECK(q[x - 1].cell.seq < q[x].cell.seq);
                    }
                }
            }
        for (std::uint32_t r = 0; r < d.m(); ++r)
            for (std::uint32_t i = 0; i < d.k(); ++i)
                for (std::uint32_t j = 0; j < d.k(); ++j)
                    for (std::uint32_t dd = 0; dd < d.n(); ++dd) {
                        const auto& q = f.vimoq(VimoqId{r, i, j, dd});
                        for (std::size_t x = 0; x < q.size(); ++x) {
                            CHECK(address_of(d, q[x].cell.src).module == i);
                            CHECK(q[x].cell.dst == flat(d, PortAddress{j, dd}));
                        }
                    }
        CHECK(f.injected() - f.departed() == f.resident());
    }
    // A backlogged VIMOQ is served at least once every N slots unless credits block it.
    if (!opt.cb_capacity)
        CHECK(max_wait <= N);
}

} // namespace

TEST_CASE("invariants hold slot by slot under random traffic")
{
    TrafficSpec spec;
    SUBCASE("uniform, heavy load")
    {
        spec.model = TrafficModel::UniformBernoulli;
        spec.load = 0.95;
        for (std::uint64_t seed : {1u, 2u}) {
            spec.seed = seed;
            run_with_invariant_checks(SwitchDims::symmetric(3), spec, 3000);
        }
    }
    SUBCASE("bursty")
    {
        spec.model = TrafficModel::BurstyOnOff;
        spec.load = 0.9;
        spec.burst_len = 10;
        spec.seed = 7;
        run_with_invariant_checks(SwitchDims::symmetric(4), spec, 2000);
    }
    SUBCASE("unbalanced with finite crosspoint buffers")
    {
        spec.model = TrafficModel::Unbalanced;
        spec.load = 0.9;
        spec.omega = 0.5;
        spec.seed = 3;
        run_with_invariant_checks(SwitchDims::symmetric(3), spec, 3000, FabricOptions{std::size_t{1}});
    }
}

TEST_CASE("saturated VIMOQs are served at least once every N slots")
{
    // Full load keeps most VIMOQs backlogged for long stretches.
    const auto d = SwitchDims::symmetric(3);
    TrafficSpec spec;
    spec.model = TrafficModel::UniformBernoulli;
    spec.load = 1.0;
    spec.seed = 11;
    run_with_invariant_checks(d, spec, 2000);
}

TEST_CASE("identical inputs give identical departure traces")
{
    const auto d = SwitchDims::symmetric(4);
    TrafficSpec spec;
    spec.model = TrafficModel::BurstyOnOff;
    spec.load = 0.8;
    spec.seed = 99;
    auto run = [&] {
        Fabric f(d);
        TrafficGenerator gen(spec, d);
        std::vector<std::pair<Slot, Cell>> trace;
        for (Slot t = 0; t < 5000; ++t)
            for (const auto& c : f.step(gen.next_arrivals(t)))
                trace.emplace_back(t, c);
        return trace;
    };
    CHECK(run() == run());
}

TEST_CASE("zero crosspoint capacity is rejected")
{
    CHECK_THROWS_AS(Fabric(SwitchDims::symmetric(2), FabricOptions{std::size_t{0}}), std::invalid_argument);
}
