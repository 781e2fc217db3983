#include "trident/matrix_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace trident {

namespace {

void require_shape(const RateMatrix& r1, const CompoundPermutation& p, const SwitchDims& dims)
{
    if (r1.size() != dims.ports() || p.size() != dims.ports())
        throw std::invalid_argument("matrix size does not match switch dimensions");
}

void require_admissible(const RateMatrix& r1)
{
    const auto a = check_admissible(r1);
    if (!a.admissible) {
        std::ostringstream os;
        os << "inadmissible rate matrix: worst row sum " << a.max_row_sum << ", worst column sum "
           << a.max_column_sum;
        throw std::domain_error(os.str());
    }
}

} // namespace

RateMatrix r2_from_r1(const RateMatrix& r1, const CompoundPermutation& p1, const SwitchDims& dims)
{
    require_shape(r1, p1, dims);
    require_admissible(r1);
    const auto N = dims.ports();
    RateMatrix r2(N);
    for (std::uint32_t u = 0; u < N; ++u) {
        const double share = r1.row_sum(u) / dims.k();
        for (std::uint32_t col = 0; col < N; ++col)
            if (p1.at(u, col))
                r2(u, col) = share;
    }
    return r2;
}

RateMatrix r2_decompose(const RateMatrix& r1, const CompoundPermutation& p1, const SwitchDims& dims,
                        std::uint32_t j, std::uint32_t d)
{
    require_shape(r1, p1, dims);
    if (j >= dims.k() || d >= dims.n())
        throw std::out_of_range("output port (j,d) out of range");
    require_admissible(r1);
    const auto N = dims.ports();
    const auto v = flat(dims, PortAddress{j, d});
    RateMatrix slice(N);
    for (std::uint32_t u = 0; u < N; ++u) {
        const double share = r1(u, v) / dims.k();
        for (std::uint32_t col = 0; col < N; ++col)
            if (p1.at(u, col))
                slice(u, col) = share;
    }
    return slice;
}

RateMatrix r3(const RateMatrix& r2_slice, const CompoundPermutation& p2)
{
    if (r2_slice.size() != p2.size())
        throw std::invalid_argument("R2 slice and P2 sizes differ");
    RateMatrix out(r2_slice.size());
    for (std::uint32_t u = 0; u < out.size(); ++u)
        for (std::uint32_t col = 0; col < out.size(); ++col)
            out(u, col) = p2.at(u, col) ? r2_slice(u, col) : 0.0;
    return out;
}

RateVector r4(const RateMatrix& r3_slice)
{
    RateVector v(r3_slice.size());
    for (std::uint32_t u = 0; u < r3_slice.size(); ++u)
        v[u] = r3_slice.row_sum(u);
    return v;
}

double r5(const RateVector& r4_vector)
{
    double s = 0.0;
    for (double x : r4_vector)
        s += x;
    return s;
}

ThroughputIdentityReport verify_throughput_identity(const RateMatrix& r1, const SwitchDims& dims)
{
    const auto p1 = compound_p1(dims);
    const auto p2 = compound_p2(dims);
    const auto r2 = r2_from_r1(r1, p1, dims);
    RateMatrix partition(dims.ports());

    ThroughputIdentityReport rep;
    for (std::uint32_t j = 0; j < dims.k(); ++j) {
        for (std::uint32_t d = 0; d < dims.n(); ++d) {
            const auto v = flat(dims, PortAddress{j, d});
            const auto slice = r2_decompose(r1, p1, dims, j, d);
            partition += slice;
            const auto vec = r4(r3(slice, p2));
            for (std::uint32_t u = 0; u < dims.ports(); ++u) {
                const double res = std::abs(vec[u] - r1(u, v));
                if (res > rep.max_r4_residual) {
                    rep.max_r4_residual = res;
                    rep.worst_output = v;
                }
            }
            rep.max_r5_residual = std::max(rep.max_r5_residual, std::abs(r5(vec) - r1.column_sum(v)));
        }
    }
    rep.max_r2_partition_residual = partition.max_abs_difference(r2);
    rep.holds = rep.max_r4_residual < kIdentityTolerance && rep.max_r5_residual < kIdentityTolerance &&
                rep.max_r2_partition_residual < kIdentityTolerance;
    return rep;
}

std::string ThroughputIdentityReport::to_text() const
{
    std::ostringstream os;
    os << "identity.holds=" << (holds ? "true" : "false") << '\n'
       << "identity.max_r4_residual=" << max_r4_residual << '\n'
       << "identity.max_r5_residual=" << max_r5_residual << '\n'
       << "identity.max_r2_partition_residual=" << max_r2_partition_residual << '\n'
       << "identity.worst_output=" << worst_output << '\n';
    return os.str();
}

RateBounds rate_bounds(const SwitchDims& dims)
{
    RateBounds b;
    const double N = dims.ports();
    b.lambda_max = 1.0 / N;
    b.vimoq = dims.n() * b.lambda_max / dims.m();
    b.cm = dims.k() * b.vimoq;
    b.crosspoint = b.cm / N;
    return b;
}

std::string RateBounds::to_text() const
{
    std::ostringstream os;
    os << "bounds.lambda_max=" << lambda_max << '\n'
       << "bounds.vimoq=" << vimoq << '\n'
       << "bounds.cm=" << cm << '\n'
       << "bounds.crosspoint=" << crosspoint << '\n';
    return os.str();
}

namespace {

struct Fit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual_ss = 0.0;
    double sxx = 0.0;
};

template <typename X, typename Y>
Fit least_squares(std::size_t count, X x_at, Y y_at)
{
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        mx += x_at(i);
        my += y_at(i);
    }
    mx /= count;
    my /= count;
    Fit f;
    double sxy = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        const double dx = x_at(i) - mx;
        f.sxx += dx * dx;
        sxy += dx * (y_at(i) - my);
    }
    f.slope = f.sxx > 0.0 ? sxy / f.sxx : 0.0;
    f.intercept = my - f.slope * mx;
    for (std::size_t i = 0; i < count; ++i) {
        const double r = y_at(i) - (f.intercept + f.slope * x_at(i));
        f.residual_ss += r * r;
    }
    return f;
}

} // namespace

DriftEstimate stability_drift(std::span<const double> occupancy, double arrival_rate, double service_rate_floor)
{
    if (occupancy.size() < kMinDriftSamples)
        throw std::invalid_argument("occupancy series too short for a drift estimate (need >= " +
                                    std::to_string(kMinDriftSamples) + " slots)");
    const auto half = occupancy.subspan(occupancy.size() / 2);
    const std::size_t L = half.size();

    DriftEstimate est;
    est.rate_admissible = arrival_rate <= service_rate_floor + kAdmissibilityEpsilon;
    const auto raw = least_squares(L, [](std::size_t i) { return double(i); }, [&](std::size_t i) { return half[i]; });
    est.slope = raw.slope;
    est.mean_occupancy = raw.intercept + raw.slope * (L - 1) / 2.0;

    constexpr std::size_t batches = 20;
    const std::size_t blen = L / batches;
    std::vector<double> bx(batches), by(batches);
    for (std::size_t b = 0; b < batches; ++b) {
        double s = 0.0;
        for (std::size_t i = b * blen; i < (b + 1) * blen; ++i)
            s += half[i];
        by[b] = s / blen;
        bx[b] = (b + 0.5) * blen;
    }
    const auto batched = least_squares(batches, [&](std::size_t b) { return bx[b]; }, [&](std::size_t b) { return by[b]; });
    est.slope_stderr = batched.sxx > 0.0 ? std::sqrt(batched.residual_ss / (batches - 2) / batched.sxx) : 0.0;

    const bool within_noise = std::abs(est.slope) <= 3.0 * est.slope_stderr;
    const bool negligible = std::abs(est.slope) * L < 1.0;
    est.stable = within_noise || negligible;
    return est;
}

std::string DriftEstimate::to_text() const
{
    std::ostringstream os;
    os << "drift.slope=" << slope << '\n'
       << "drift.slope_stderr=" << slope_stderr << '\n'
       << "drift.mean_occupancy=" << mean_occupancy << '\n'
       << "drift.rate_admissible=" << (rate_admissible ? "true" : "false") << '\n'
       << "drift.stable=" << (stable ? "true" : "false") << '\n';
    return os.str();
}

} // namespace trident
