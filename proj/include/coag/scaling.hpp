#pragma once

#include <functional>
#include <limits>

#include "coag/density.hpp"

namespace coag {

// Time change t(tau) and mass scale s(t) for each kernel, normalized so that
// s(t(tau)) = e^tau. Gelation time is finite only for the multiplicative kernel.
struct ScalingMap {
    KernelKind kernel;
    std::function<double(double)> t_of_tau;
    std::function<double(double)> s_of_t;
    double gelation_time;
};

ScalingMap make_scaling(KernelKind k);

// g(z) = e^{2 tau} n(e^tau z), resampled onto n's own grid; the analytic
// extension transforms as c -> c e^{(2-p) tau}, rate -> rate e^tau.
GriddedDensity to_selfsimilar(const GriddedDensity& n, double tau, const ScalingMap& map);

// Exact inverse: n(x) = e^{-2 tau} g(e^{-tau} x).
GriddedDensity from_selfsimilar(const GriddedDensity& g, double tau, const ScalingMap& map);

} // namespace coag
