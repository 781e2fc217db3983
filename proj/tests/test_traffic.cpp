#include <doctest.h>

#include <cmath>
#include <set>
#include <stdexcept>
#include <vector>

#include "trident/traffic.hpp"

using namespace trident;

namespace {

TrafficSpec spec_of(TrafficModel model, double load, double omega = 0.0, std::uint64_t seed = 1)
{
    TrafficSpec s;
    s.model = model;
    s.load = load;
    s.omega = omega;
    s.seed = seed;
    return s;
}

} // namespace

TEST_CASE("model names round-trip")
{
    for (auto m : {TrafficModel::UniformBernoulli, TrafficModel::BurstyOnOff, TrafficModel::Unbalanced,
                   TrafficModel::HotspotPerPort})
        CHECK(parse_traffic_model(to_string(m)) == m);
    for (auto p : {HotspotPairing::Staggered, HotspotPairing::Diagonal})
        CHECK(parse_hotspot_pairing(to_string(p)) == p);
    CHECK_FALSE(parse_traffic_model("poisson"));
}

TEST_CASE("spec validation names the field")
{
    auto expect_field = [](TrafficSpec s, const char* field) {
        try {
            s.validate();
            FAIL("accepted");
        } catch (const std::invalid_argument& e) {
            CHECK(std::string(e.what()).rfind(field, 0) == 0);
        }
    };
    expect_field(spec_of(TrafficModel::UniformBernoulli, 1.5), "traffic.load");
    expect_field(spec_of(TrafficModel::UniformBernoulli, -0.1), "traffic.load");
    expect_field(spec_of(TrafficModel::Unbalanced, 0.5, 1.2), "traffic.omega");
    auto b = spec_of(TrafficModel::BurstyOnOff, 0.5);
    b.burst_len = 0.5;
    expect_field(b, "traffic.burst_len");
    CHECK_NOTHROW(spec_of(TrafficModel::Unbalanced, 1.0, 1.0).validate());
}

TEST_CASE("unbalanced rate matrix at N=4")
{
    const auto d = SwitchDims::symmetric(2);
    SUBCASE("omega 0 is uniform")
    {
        const auto r = rate_matrix(spec_of(TrafficModel::Unbalanced, 1.0, 0.0), d);
        for (FlatPort u = 0; u < 4; ++u)
            for (FlatPort v = 0; v < 4; ++v)
                CHECK(r(u, v) == doctest::Approx(0.25));
    }
    SUBCASE("omega 1 is the identity")
    {
        const auto r = rate_matrix(spec_of(TrafficModel::Unbalanced, 1.0, 1.0), d);
        for (FlatPort u = 0; u < 4; ++u)
            for (FlatPort v = 0; v < 4; ++v)
                CHECK(r(u, v) == doctest::Approx(u == v ? 1.0 : 0.0));
    }
    SUBCASE("omega 0.6")
    {
        const auto r = rate_matrix(spec_of(TrafficModel::Unbalanced, 1.0, 0.6), d);
        for (FlatPort u = 0; u < 4; ++u)
            for (FlatPort v = 0; v < 4; ++v)
                CHECK(r(u, v) == doctest::Approx(u == v ? 0.7 : 0.1));
    }
}

TEST_CASE("every model's rate matrix is admissible and rows sum to the load")
{
    const auto d = SwitchDims::symmetric(4);
    for (auto m : {TrafficModel::UniformBernoulli, TrafficModel::BurstyOnOff, TrafficModel::Unbalanced,
                   TrafficModel::HotspotPerPort})
        for (double load : {0.0, 0.3, 1.0})
            for (double omega : {0.0, 0.5, 1.0}) {
                const auto r = rate_matrix(spec_of(m, load, omega), d);
                CHECK(check_admissible(r).admissible);
                for (std::size_t u = 0; u < d.ports(); ++u)
                    CHECK(r.row_sum(u) == doctest::Approx(load));
            }
}

TEST_CASE("hotspot outputs form a bijection")
{
    for (std::uint32_t n : {2u, 3u, 4u, 8u})
        for (auto p : {HotspotPairing::Staggered, HotspotPairing::Diagonal}) {
            const auto d = SwitchDims::symmetric(n);
            std::set<FlatPort> seen;
            for (FlatPort u = 0; u < d.ports(); ++u)
                seen.insert(hotspot_output(u, d, p));
            CHECK(seen.size() == d.ports());
        }
    const auto d = SwitchDims::symmetric(3);
    CHECK(hotspot_output(flat(d, {2, 2}), d, HotspotPairing::Staggered) == flat(d, {1, 2}));
    CHECK(hotspot_output(5, d, HotspotPairing::Diagonal) == 5);
}

TEST_CASE("staggered hotspots load every IM-OM pair equally")
{
    const auto d = SwitchDims::symmetric(4);
    auto s = spec_of(TrafficModel::HotspotPerPort, 1.0, 1.0);
    const auto r = rate_matrix(s, d);
    for (std::uint32_t i = 0; i < d.k(); ++i)
        for (std::uint32_t j = 0; j < d.k(); ++j) {
            double pair = 0.0;
            for (std::uint32_t a = 0; a < d.n(); ++a)
                for (std::uint32_t b = 0; b < d.n(); ++b)
                    pair += r(flat(d, {i, a}), flat(d, {j, b}));
            CHECK(pair == doctest::Approx(1.0));
        }
}

TEST_CASE("zero load generates nothing")
{
    const auto d = SwitchDims::symmetric(4);
    for (auto m : {TrafficModel::UniformBernoulli, TrafficModel::BurstyOnOff, TrafficModel::Unbalanced,
                   TrafficModel::HotspotPerPort}) {
        TrafficGenerator g(spec_of(m, 0.0, 0.5), d);
        for (Slot t = 0; t < 2000; ++t)
            CHECK(g.next_arrivals(t).empty());
    }
}

TEST_CASE("at most one arrival per input, ascending, in range")
{
    const auto d = SwitchDims::symmetric(3);
    for (auto m : {TrafficModel::UniformBernoulli, TrafficModel::BurstyOnOff, TrafficModel::Unbalanced,
                   TrafficModel::HotspotPerPort}) {
        TrafficGenerator g(spec_of(m, 1.0, 0.4), d);
        for (Slot t = 0; t < 1000; ++t) {
            const auto a = g.next_arrivals(t);
            for (std::size_t x = 0; x < a.size(); ++x) {
                CHECK(a[x].dst < d.ports());
                if (x > 0)
                    CHECK(a[x - 1].src < a[x].src);
            }
        }
    }
}

TEST_CASE("same seed reproduces, different seeds differ")
{
    const auto d = SwitchDims::symmetric(4);
    auto draw = [&](std::uint64_t seed) {
        TrafficGenerator g(spec_of(TrafficModel::BurstyOnOff, 0.7, 0.0, seed), d);
        std::vector<std::pair<FlatPort, FlatPort>> out;
        for (Slot t = 0; t < 3000; ++t)
            for (const auto& a : g.next_arrivals(t))
                out.emplace_back(a.src, a.dst);
        return out;
    };
    CHECK(draw(5) == draw(5));
    CHECK(draw(5) != draw(6));
}

TEST_CASE("empirical rates converge to the rate matrix")
{
    const auto d = SwitchDims::symmetric(4);
    const Slot slots = 1'000'000;
    for (auto s : {spec_of(TrafficModel::UniformBernoulli, 0.8, 0.0, 3), spec_of(TrafficModel::Unbalanced, 0.8, 0.5, 4)}) {
        const auto expected = rate_matrix(s, d);
        TrafficGenerator g(s, d);
        std::vector<std::uint64_t> counts(d.ports() * d.ports(), 0);
        std::vector<Arrival> buf;
        for (Slot t = 0; t < slots; ++t) {
            g.next_arrivals(t, buf);
            for (const auto& a : buf)
                ++counts[a.src * d.ports() + a.dst];
        }
        for (FlatPort u = 0; u < d.ports(); ++u)
            for (FlatPort v = 0; v < d.ports(); ++v) {
                const double p = expected(u, v);
                const double sigma = std::sqrt(p * (1 - p) / slots);
                const double observed = double(counts[u * d.ports() + v]) / slots;
                CHECK(std::abs(observed - p) <= 4 * sigma + 1e-12);
            }
    }
}

TEST_CASE("bursty source: load and burst length")
{
    const auto d = SwitchDims::symmetric(4);
    const Slot slots = 400'000;
    for (double l : {5.0, 20.0})
        for (double load : {0.3, 0.8}) {
            auto s = spec_of(TrafficModel::BurstyOnOff, load, 0.0, 17);
            s.burst_len = l;
            TrafficGenerator g(s, d);
            // Track one input: busy fraction and mean length of back-to-back runs
            // to one destination.
            std::uint64_t busy = 0, runs = 0, run_cells = 0;
            std::optional<FlatPort> prev;
            std::vector<Arrival> buf;
            for (Slot t = 0; t < slots; ++t) {
                g.next_arrivals(t, buf);
                std::optional<FlatPort> now;
                for (const auto& a : buf)
                    if (a.src == 0)
                        now = a.dst;
                if (now) {
                    ++busy;
                    ++run_cells;
                    if (!prev || *prev != *now)
                        ++runs;
                }
                prev = now;
            }
            CHECK(double(busy) / slots == doctest::Approx(load).epsilon(0.05));
            // Bursts to the same destination merge when no idle slot separates
            // them: P(zero idle slots) = 1/(1 + mean_off), P(same dst) = 1/N.
            const double mean_off = l * (1 - load) / load;
            const double p_off_zero = 1.0 / (1.0 + mean_off);
            const double merged = l / (1.0 - p_off_zero / d.ports());
            CHECK(double(run_cells) / runs == doctest::Approx(merged).epsilon(0.05));
        }
}
