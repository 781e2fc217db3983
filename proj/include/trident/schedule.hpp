#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "trident/dims.hpp"

namespace trident {

// IM(i) connects IP(i,s) to output link L_I(i,r) with r = (s + t) mod m.
std::uint32_t im_link(std::uint32_t s, std::int64_t t, const SwitchDims& dims);

// CM(r) connects input I_C(r,p) to output link L_C(r,j) with j = (p - t + r) mod k,
// normalized to [0,k). Input p of CM(r) is fed by output r of IM(p).
std::uint32_t cm_link(std::uint32_t p, std::uint32_t r, std::int64_t t, const SwitchDims& dims);

// N x N permutation stored as the column index of the single 1 in each row.
class PermutationMatrix {
public:
    explicit PermutationMatrix(std::vector<std::uint32_t> mapping);

    std::uint32_t size() const { return static_cast<std::uint32_t>(mapping_.size()); }
    std::uint32_t column_of(std::uint32_t row) const { return mapping_[row]; }
    bool at(std::uint32_t row, std::uint32_t col) const { return mapping_[row] == col; }
    const std::vector<std::uint32_t>& mapping() const { return mapping_; }

    bool operator==(const PermutationMatrix&) const = default;

private:
    std::vector<std::uint32_t> mapping_;
};

// 0/1 matrix equal to a sum of pairwise-disjoint permutation matrices.
class CompoundPermutation {
public:
    // Throws std::domain_error if two of the permutations share a nonzero position.
    static CompoundPermutation sum_of(std::span<const PermutationMatrix> perms);

    std::uint32_t size() const { return size_; }
    std::uint8_t at(std::uint32_t row, std::uint32_t col) const { return entries_[std::size_t(row) * size_ + col]; }
    std::uint32_t row_count(std::uint32_t row) const;
    std::uint32_t column_count(std::uint32_t col) const;

    std::vector<std::vector<int>> to_rows() const;

private:
    CompoundPermutation(std::uint32_t size, std::vector<std::uint8_t> entries)
        : size_(size), entries_(std::move(entries)) {}

    std::uint32_t size_;
    std::vector<std::uint8_t> entries_;
};

// Pi(t): row u = i*k + s maps to column r*k + i.
PermutationMatrix im_permutation(std::int64_t t, const SwitchDims& dims);

// Phi(t): row u = r*k + p maps to column j*k + r.
PermutationMatrix cm_permutation(std::int64_t t, const SwitchDims& dims);

CompoundPermutation compound_p1(const SwitchDims& dims);
CompoundPermutation compound_p2(const SwitchDims& dims);

} // namespace trident
