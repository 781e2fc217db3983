#include "trident/dims.hpp"

#include <stdexcept>

namespace trident {

SwitchDims::SwitchDims(std::uint32_t n, std::uint32_t k, std::uint32_t m) : n_(n), k_(k), m_(m)
{
    if (n == 0 || k == 0 || m == 0)
        throw std::invalid_argument("switch dimensions must be >= 1");
    if (n != k || k != m)
        throw std::invalid_argument("only symmetric geometry n == k == m is supported, got " + describe());
}

std::string SwitchDims::describe() const
{
    return "n=" + std::to_string(n_) + " k=" + std::to_string(k_) + " m=" + std::to_string(m_) +
           " N=" + std::to_string(ports());
}

bool valid(const SwitchDims& dims, PortAddress a)
{
    return a.module < dims.k() && a.local < dims.n();
}

} // namespace trident
