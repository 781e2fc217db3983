#pragma once

#include <cstdint>
#include <vector>

namespace trident {

// N x N matrix of per-flow arrival rates lambda(u,v) in cells/slot.
class RateMatrix {
public:
    RateMatrix() = default;
    explicit RateMatrix(std::uint32_t size, double fill = 0.0);

    static RateMatrix from_rows(const std::vector<std::vector<double>>& rows);

    std::uint32_t size() const { return size_; }
    double operator()(std::uint32_t u, std::uint32_t v) const { return data_[std::size_t(u) * size_ + v]; }
    double& operator()(std::uint32_t u, std::uint32_t v) { return data_[std::size_t(u) * size_ + v]; }

    double row_sum(std::uint32_t u) const;
    double column_sum(std::uint32_t v) const;
    double total() const;

    RateMatrix& operator+=(const RateMatrix& other);
    RateMatrix& operator*=(double alpha);

    double max_abs_difference(const RateMatrix& other) const;

private:
    std::uint32_t size_ = 0;
    std::vector<double> data_;
};

using RateVector = std::vector<double>;

struct Admissibility {
    bool admissible = true;
    double max_row_sum = 0.0;
    double max_column_sum = 0.0;
    std::uint32_t worst_row = 0;
    std::uint32_t worst_column = 0;

    double worst_sum() const { return max_row_sum > max_column_sum ? max_row_sum : max_column_sum; }
};

inline constexpr double kAdmissibilityEpsilon = 1e-9;

// Every row and column sum <= 1 + epsilon. Throws on negative entries.
Admissibility check_admissible(const RateMatrix& rates);

} // namespace trident
