#include "coag/special.hpp"

#include <cmath>
#include <stdexcept>

#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace coag {

double upper_gamma(double a, double x)
{
    if (!(x > 0.0))
        throw std::domain_error("upper_gamma: x must be positive");
    if (a > 1e-12)
        return boost::math::tgamma(a, x);
    if (std::abs(a) <= 1e-12)
        return boost::math::expint(1, x);
    // Gamma(a,x) = (Gamma(a+1,x) - x^a e^{-x}) / a, iterated upward out of a <= 0
    return (upper_gamma(a + 1.0, x) - std::pow(x, a) * std::exp(-x)) / a;
}

double lower_gamma_cont(double a, double x)
{
    return boost::math::tgamma(a) - upper_gamma(a, x);
}

double head_integral(double b, double s, double x1)
{
    if (s <= 0.0) {
        if (b > -1.0)
            return std::pow(x1, b + 1.0) / (b + 1.0);
        throw std::domain_error("head_integral: divergent for s <= 0, b <= -1");
    }
    return std::pow(s, -(b + 1.0)) * lower_gamma_cont(b + 1.0, s * x1);
}

double tail_integral(double b, double s, double xM)
{
    if (s <= 0.0)
        throw std::domain_error("tail_integral: divergent for s <= 0");
    return std::pow(s, -(b + 1.0)) * upper_gamma(b + 1.0, s * xM);
}

} // namespace coag
