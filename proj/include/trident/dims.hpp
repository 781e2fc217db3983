#pragma once

#include <cstdint>
#include <string>

namespace trident {

// Geometry of an n x k x m three-stage Clos network with N = n * k ports.
// Only the symmetric regime n == k == m is accepted.
class SwitchDims {
public:
    SwitchDims(std::uint32_t n, std::uint32_t k, std::uint32_t m);

    static SwitchDims symmetric(std::uint32_t n) { return SwitchDims(n, n, n); }

    std::uint32_t n() const { return n_; }
    std::uint32_t k() const { return k_; }
    std::uint32_t m() const { return m_; }
    std::uint32_t ports() const { return n_ * k_; }

    bool operator==(const SwitchDims&) const = default;

    std::string describe() const;

private:
    std::uint32_t n_;
    std::uint32_t k_;
    std::uint32_t m_;
};

// IP(i,s) / OP(j,d): module index in [0,k), local port in [0,n).
struct PortAddress {
    std::uint32_t module = 0;
    std::uint32_t local = 0;

    bool operator==(const PortAddress&) const = default;
};

using FlatPort = std::uint32_t;

// u = i*k + s (equivalently i*n + s under n == k).
inline FlatPort flat(const SwitchDims& dims, PortAddress a) { return a.module * dims.n() + a.local; }

inline PortAddress address_of(const SwitchDims& dims, FlatPort u)
{
    return PortAddress{u / dims.n(), u % dims.n()};
}

bool valid(const SwitchDims& dims, PortAddress a);

} // namespace trident
