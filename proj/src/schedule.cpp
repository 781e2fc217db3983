#include "trident/schedule.hpp"

#include <stdexcept>
#include <string>

namespace trident {

namespace {

std::uint32_t floor_mod(std::int64_t a, std::uint32_t b)
{
    std::int64_t r = a % static_cast<std::int64_t>(b);
    if (r < 0)
        r += b;
    return static_cast<std::uint32_t>(r);
}

} // namespace

std::uint32_t im_link(std::uint32_t s, std::int64_t t, const SwitchDims& dims)
{
    return floor_mod(static_cast<std::int64_t>(s) + t, dims.m());
}

std::uint32_t cm_link(std::uint32_t p, std::uint32_t r, std::int64_t t, const SwitchDims& dims)
{
    return floor_mod(static_cast<std::int64_t>(p) - t + static_cast<std::int64_t>(r), dims.k());
}

PermutationMatrix::PermutationMatrix(std::vector<std::uint32_t> mapping) : mapping_(std::move(mapping))
{
    std::vector<bool> seen(mapping_.size(), false);
    for (auto col : mapping_) {
        if (col >= mapping_.size() || seen[col])
            throw std::invalid_argument("mapping is not a permutation");
        seen[col] = true;
    }
}

CompoundPermutation CompoundPermutation::sum_of(std::span<const PermutationMatrix> perms)
{
    if (perms.empty())
        throw std::invalid_argument("compound permutation needs at least one permutation");
    const auto size = perms.front().size();
    std::vector<std::uint8_t> entries(std::size_t(size) * size, 0);
    for (std::size_t idx = 0; idx < perms.size(); ++idx) {
        const auto& p = perms[idx];
        if (p.size() != size)
            throw std::invalid_argument("permutation sizes differ");
        for (std::uint32_t row = 0; row < size; ++row) {
            auto& cell = entries[std::size_t(row) * size + p.column_of(row)];
            if (cell != 0)
                throw std::domain_error("permutation " + std::to_string(idx) + " overlaps an earlier one at row " +
                                        std::to_string(row));
            cell = 1;
        }
    }
    return CompoundPermutation(size, std::move(entries));
}

std::uint32_t CompoundPermutation::row_count(std::uint32_t row) const
{
    std::uint32_t c = 0;
    for (std::uint32_t col = 0; col < size_; ++col)
        c += at(row, col);
    return c;
}

std::uint32_t CompoundPermutation::column_count(std::uint32_t col) const
{
    std::uint32_t c = 0;
    for (std::uint32_t row = 0; row < size_; ++row)
        c += at(row, col);
    return c;
}

std::vector<std::vector<int>> CompoundPermutation::to_rows() const
{
    std::vector<std::vector<int>> rows(size_, std::vector<int>(size_, 0));
    for (std::uint32_t r = 0; r < size_; ++r)
        for (std::uint32_t c = 0; c < size_; ++c)
            rows[r][c] = at(r, c);
    return rows;
}

PermutationMatrix im_permutation(std::int64_t t, const SwitchDims& dims)
{
    const auto k = dims.k();
    std::vector<std::uint32_t> mapping(dims.ports());
    for (std::uint32_t i = 0; i < k; ++i)
        for (std::uint32_t s = 0; s < dims.n(); ++s)
            mapping[i * k + s] = im_link(s, t, dims) * k + i;
    return PermutationMatrix(std::move(mapping));
}

PermutationMatrix cm_permutation(std::int64_t t, const SwitchDims& dims)
{
    const auto k = dims.k();
    std::vector<std::uint32_t> mapping(dims.ports());
    for (std::uint32_t r = 0; r < dims.m(); ++r)
        for (std::uint32_t p = 0; p < k; ++p)
            mapping[r * k + p] = cm_link(p, r, t, dims) * k + r;
    return PermutationMatrix(std::move(mapping));
}

namespace {

template <typename Fn>
CompoundPermutation compound(const SwitchDims& dims, Fn per_slot)
{
    std::vector<PermutationMatrix> perms;
    perms.reserve(dims.k());
    for (std::uint32_t t = 0; t < dims.k(); ++t)
        perms.push_back(per_slot(t, dims));
    return CompoundPermutation::sum_of(perms);
}

} // namespace

CompoundPermutation compound_p1(const SwitchDims& dims) { return compound(dims, im_permutation); }

CompoundPermutation compound_p2(const SwitchDims& dims) { return compound(dims, cm_permutation); }

} // namespace trident
