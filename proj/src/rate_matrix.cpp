#include "trident/rate_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace trident {

RateMatrix::RateMatrix(std::uint32_t size, double fill) : size_(size), data_(std::size_t(size) * size, fill) {}

RateMatrix RateMatrix::from_rows(const std::vector<std::vector<double>>& rows)
{
    RateMatrix m(static_cast<std::uint32_t>(rows.size()));
    for (std::uint32_t u = 0; u < m.size(); ++u) {
        if (rows[u].size() != m.size())
            throw std::invalid_argument("rate matrix must be square");
        for (std::uint32_t v = 0; v < m.size(); ++v)
            m(u, v) = rows[u][v];
    }
    return m;
}

double RateMatrix::row_sum(std::uint32_t u) const
{
    double s = 0.0;
    for (std::uint32_t v = 0; v < size_; ++v)
        s += (*this)(u, v);
    return s;
}

double RateMatrix::column_sum(std::uint32_t v) const
{
    double s = 0.0;
    for (std::uint32_t u = 0; u < size_; ++u)
        s += (*this)(u, v);
    return s;
}

double RateMatrix::total() const
{
    double s = 0.0;
    for (double x : data_)
        s += x;
    return s;
}

RateMatrix& RateMatrix::operator+=(const RateMatrix& other)
{
    if (other.size_ != size_)
        throw std::invalid_argument("rate matrix size mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i)
        data_[i] += other.data_[i];
    return *this;
}

RateMatrix& RateMatrix::operator*=(double alpha)
{
    for (double& x : data_)
        x *= alpha;
    return *this;
}

double RateMatrix::max_abs_difference(const RateMatrix& other) const
{
    if (other.size_ != size_)
        throw std::invalid_argument("rate matrix size mismatch");
    double worst = 0.0;
    for (std::size_t i = 0; i < data_.size(); ++i)
        worst = std::max(worst, std::abs(data_[i] - other.data_[i]));
    return worst;
}

Admissibility check_admissible(const RateMatrix& rates)
{
    Admissibility a;
    for (std::uint32_t u = 0; u < rates.size(); ++u) {
        for (std::uint32_t v = 0; v < rates.size(); ++v)
            if (rates(u, v) < 0.0 || std::isnan(rates(u, v)))
                throw std::invalid_argument("rate matrix entries must be nonnegative");
        const double rs = rates.row_sum(u);
        if (u == 0 || rs > a.max_row_sum) {
            a.max_row_sum = rs;
            a.worst_row = u;
        }
        const double cs = rates.column_sum(u);
        if (u == 0 || cs > a.max_column_sum) {
            a.max_column_sum = cs;
            a.worst_column = u;
        }
    }
    a.admissible = a.max_row_sum <= 1.0 + kAdmissibilityEpsilon && a.max_column_sum <= 1.0 + kAdmissibilityEpsilon;
    return a;
}

} // namespace trident
