#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace coag {

// Geometric grid, n points from lo to hi inclusive. Built in log space so the
// spacing ratio is exactly uniform up to rounding.
inline std::vector<double> geometric_grid(double lo, double hi, std::size_t n)
{
    if (!(lo > 0.0) || !(hi > lo) || n < 2)
        throw std::invalid_argument("geometric_grid: need 0 < lo < hi and n >= 2");
    std::vector<double> g(n);
    const double a = std::log(lo), b = std::log(hi);
    for (std::size_t i = 0; i < n; ++i)
        g[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
    g.front() = lo;
    g.back() = hi;
    return g;
}

inline bool strictly_increasing(const std::vector<double>& v)
{
    for (std::size_t i = 1; i < v.size(); ++i)
        if (!(v[i] > v[i - 1])) return false;
    return true;
}

} // namespace coag
