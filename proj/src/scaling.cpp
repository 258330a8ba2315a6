#include "coag/scaling.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>

#include "coag/interp.hpp"

namespace coag {

ScalingMap make_scaling(KernelKind k)
{
    switch (k) {
    case KernelKind::Constant:
        return {k, [](double tau) { return std::exp(tau) - 1.0; },
                [](double t) { return 1.0 + t; },
                std::numeric_limits<double>::infinity()};
    case KernelKind::Additive:
        return {k, [](double tau) { return 0.5 * tau; },
                [](double t) { return std::exp(2.0 * t); },
                std::numeric_limits<double>::infinity()};
    case KernelKind::Multiplicative:
        return {k, [](double tau) { return -std::expm1(-tau); },
                [](double t) { return 1.0 / (1.0 - t); }, 1.0};
    }
    throw std::logic_error("make_scaling: bad kernel");
}

namespace {

// sample h(scale * x) on the grid of f using a log-log monotone interpolant,
// falling back to the analytic extension (or zero) outside the sampled range,
// then multiply by amp. Shared by both scaling directions.
GriddedDensity rescale(const GriddedDensity& f, double amp, double scale)
{
    GriddedDensity g;
    g.x = f.x;
    g.v.resize(f.v.size());
    g.signed_values = f.signed_values;

    if (scale == 1.0) {
        for (std::size_t i = 0; i < f.v.size(); ++i) g.v[i] = amp * f.v[i];
    } else if (f.signed_values) {
        // signed data cannot go through log-log; interpolate raw values in log x
        std::vector<double> lt(f.x.size());
        for (std::size_t i = 0; i < f.x.size(); ++i) lt[i] = std::log(f.x[i]);
        const double lo = lt.front(), hi = lt.back();
        auto sp = CubicSpline::pchip(std::move(lt), f.v);
        for (std::size_t i = 0; i < f.x.size(); ++i) {
            const double lx = std::log(scale * f.x[i]);
            g.v[i] = (lx >= lo && lx <= hi) ? amp * sp.eval(lx) : 0.0;
        }
    } else {
        std::vector<double> lt, lv;
        lt.reserve(f.x.size());
        for (std::size_t i = 0; i < f.x.size(); ++i)
            if (f.v[i] > 0.0) {
                lt.push_back(std::log(f.x[i]));
                lv.push_back(std::log(f.v[i]));
            }
        const bool have_interp = lt.size() >= 2;
        double lo = 0.0, hi = 0.0;
        std::optional<CubicSpline> sp;
        if (have_interp) {
            lo = lt.front();
            hi = lt.back();
            sp.emplace(CubicSpline::pchip(std::move(lt), std::move(lv)));
        }
        for (std::size_t i = 0; i < f.x.size(); ++i) {
            const double xs = scale * f.x[i];
            const double lx = std::log(xs);
            double val = 0.0;
            if (have_interp && lx >= lo && lx <= hi)
                val = std::exp(sp->eval(lx));
            else if (f.ext)
                val = f.ext->c * std::pow(xs, -f.ext->p) * std::exp(-f.ext->rate * xs);
            g.v[i] = amp * val;
        }
    }
    if (f.ext) {
        Extension e = *f.ext;
        e.c = amp * e.c * std::pow(scale, -e.p);
        e.rate = e.rate * scale;
        g.ext = e;
    }
    return g;
}

} // namespace

GriddedDensity to_selfsimilar(const GriddedDensity& n, double tau, const ScalingMap&)
{
    if (tau < 0.0)
        throw std::domain_error("to_selfsimilar: tau must be >= 0");
    n.validate();
    const double s = std::exp(tau);
    return rescale(n, s * s, s);
}

GriddedDensity from_selfsimilar(const GriddedDensity& g, double tau, const ScalingMap&)
{
    if (tau < 0.0)
        throw std::domain_error("from_selfsimilar: tau must be >= 0");
    g.validate();
    const double s = std::exp(-tau);
    return rescale(g, s * s, s);
}

} // namespace coag
