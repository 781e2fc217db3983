#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "trident/dims.hpp"
#include "trident/rate_matrix.hpp"
#include "trident/schedule.hpp"

namespace trident {

// Rate pipeline from the input rate matrix R1 through the IM stage (R2),
// the per-output slices of the CM stage (R3), the crosspoint buffers (R4)
// and the output port (R5).

// R2 = (1/k) ((R1 * ones) o P1). Throws std::domain_error on inadmissible R1.
RateMatrix r2_from_r1(const RateMatrix& r1, const CompoundPermutation& p1, const SwitchDims& dims);

// Slice of R2 carried by VIMOQs destined to OP(j,d): lambda(u, v)/k on P1's support.
RateMatrix r2_decompose(const RateMatrix& r1, const CompoundPermutation& p1, const SwitchDims& dims,
                        std::uint32_t j, std::uint32_t d);

// R3(j,d) = R2(j,d) o P2.
RateMatrix r3(const RateMatrix& r2_slice, const CompoundPermutation& p2);

// R4(v): row sums of R3(j,d).
RateVector r4(const RateMatrix& r3_slice);

// R5(v): total of R4(v).
double r5(const RateVector& r4_vector);

inline constexpr double kIdentityTolerance = 1e-12;

struct ThroughputIdentityReport {
    bool holds = false;
    double max_r4_residual = 0.0; // max |R4(v)[u] - lambda(u,v)|
    double max_r5_residual = 0.0; // max |R5(v) - column sum v|
    double max_r2_partition_residual = 0.0; // |sum_{j,d} R2(j,d) - R2|
    std::uint32_t worst_output = 0;

    std::string to_text() const;
};

// Runs the full pipeline and checks that R4(v) reproduces column v of R1 and
// R5(v) its column sum, for every output v.
ThroughputIdentityReport verify_throughput_identity(const RateMatrix& r1, const SwitchDims& dims);

// Rates seen when every input sends only to one output at the largest
// admissible rate.
struct RateBounds {
    double lambda_max = 0.0; // per input
    double vimoq = 0.0;      // R_V, into one VIMOQ
    double cm = 0.0;         // R_CM, through one CM for the output
    double crosspoint = 0.0; // R_C, into one crosspoint buffer

    std::string to_text() const;
};

RateBounds rate_bounds(const SwitchDims& dims);

// Worst-case service rate floors: a VIMOQ with backlog is served at least
// once every N slots, a crosspoint buffer at least once every N*k slots.
inline double vimoq_service_floor(const SwitchDims& dims) { return 1.0 / dims.ports(); }
inline double crosspoint_service_floor(const SwitchDims& dims) { return 1.0 / (double(dims.ports()) * dims.k()); }

inline constexpr std::size_t kMinDriftSamples = 10'000;

struct DriftEstimate {
    double slope = 0.0;          // cells per slot over the second half
    double slope_stderr = 0.0;   // from batch means, robust to autocorrelation
    double mean_occupancy = 0.0; // over the second half
    bool rate_admissible = true; // arrival_rate <= service_floor (+eps)
    bool stable = false;

    std::string to_text() const;
};

// Least-squares occupancy trend over the second half of the series. The trend
// is judged stable when it is within three batch-means standard errors of zero
// or too small to move the mean occupancy by one cell over the window.
// Throws std::invalid_argument for fewer than kMinDriftSamples samples.
DriftEstimate stability_drift(std::span<const double> occupancy, double arrival_rate, double service_rate_floor);

} // namespace trident
