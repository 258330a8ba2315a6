#pragma once

#include <vector>

namespace coag {

// Cubic Hermite interpolant on strictly increasing knots. Slopes either
// supplied (hermite) or derived by the Fritsch-Carlson monotone rule (pchip).
// Out-of-range evaluation throws unless linear extrapolation was requested;
// the flow evaluators that own these splines guard their own ranges.
class CubicSpline {
public:
    static CubicSpline pchip(std::vector<double> t, std::vector<double> y);
    static CubicSpline hermite(std::vector<double> t, std::vector<double> y,
                               std::vector<double> slopes);

    double operator()(double tq) const { return eval(tq); }
    double eval(double tq) const;
    double deriv(double tq) const;

    void allow_extrapolation(bool on) { extrapolate_ = on; }
    double t_min() const { return t_.front(); }
    double t_max() const { return t_.back(); }

private:
    CubicSpline(std::vector<double> t, std::vector<double> y, std::vector<double> d);
    std::size_t segment(double tq) const;

    std::vector<double> t_, y_, d_;
    bool extrapolate_ = false;
};

} // namespace coag
