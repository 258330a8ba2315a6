#include "coag/interp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace coag {

namespace {

int sgn(double v) { return (v > 0.0) - (v < 0.0); }

// One-sided three-point endpoint slope with the usual monotonicity clamps.
double edge_slope(double h0, double h1, double d0, double d1)
{
    double d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (sgn(d) != sgn(d0))
        d = 0.0;
    else if (sgn(d0) != sgn(d1) && std::abs(d) > 3.0 * std::abs(d0))
        d = 3.0 * d0;
    return d;
}

} // namespace

CubicSpline::CubicSpline(std::vector<double> t, std::vector<double> y, std::vector<double> d)
    : t_(std::move(t)), y_(std::move(y)), d_(std::move(d))
{
    if (t_.size() < 2 || t_.size() != y_.size() || t_.size() != d_.size())
        throw std::invalid_argument("CubicSpline: bad sizes");
    for (std::size_t i = 1; i < t_.size(); ++i)
        if (!(t_[i] > t_[i - 1]))
            throw std::invalid_argument("CubicSpline: knots not increasing");
}

CubicSpline CubicSpline::hermite(std::vector<double> t, std::vector<double> y,
                                 std::vector<double> slopes)
{
    return CubicSpline(std::move(t), std::move(y), std::move(slopes));
}

CubicSpline CubicSpline::pchip(std::vector<double> t, std::vector<double> y)
{
    const std::size_t n = t.size();
    if (n < 2 || y.size() != n)
        throw std::invalid_argument("CubicSpline::pchip: bad sizes");
    std::vector<double> d(n);
    if (n == 2) {
        d[0] = d[1] = (y[1] - y[0]) / (t[1] - t[0]);
        return CubicSpline(std::move(t), std::move(y), std::move(d));
    }
    std::vector<double> h(n - 1), del(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        h[i] = t[i + 1] - t[i];
        del[i] = (y[i + 1] - y[i]) / h[i];
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (del[i - 1] == 0.0 || del[i] == 0.0 || sgn(del[i - 1]) != sgn(del[i])) {
            d[i] = 0.0;
        } else {
            const double w1 = 2.0 * h[i] + h[i - 1];
            const double w2 = h[i] + 2.0 * h[i - 1];
            d[i] = (w1 + w2) / (w1 / del[i - 1] + w2 / del[i]);
        }
    }
    d[0] = edge_slope(h[0], h[1], del[0], del[1]);
    d[n - 1] = edge_slope(h[n - 2], h[n - 3], del[n - 2], del[n - 3]);
    return CubicSpline(std::move(t), std::move(y), std::move(d));
}

std::size_t CubicSpline::segment(double tq) const
{
    // rightmost i with t_[i] <= tq, clamped to a valid segment start
    auto it = std::upper_bound(t_.begin(), t_.end(), tq);
    std::size_t i = static_cast<std::size_t>(it - t_.begin());
    if (i == 0) return 0;
    if (i >= t_.size()) return t_.size() - 2;
    return i - 1;
}

double CubicSpline::eval(double tq) const
{
    if (tq < t_.front() || tq > t_.back()) {
        if (!extrapolate_)
            throw std::out_of_range("CubicSpline: query outside knot range");
        if (tq < t_.front()) return y_.front() + d_.front() * (tq - t_.front());
        return y_.back() + d_.back() * (tq - t_.back());
    }
    const std::size_t i = segment(tq);
    const double h = t_[i + 1] - t_[i];
    const double s = (tq - t_[i]) / h;
    const double s2 = s * s, s3 = s2 * s;
    const double h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
    const double h10 = s3 - 2.0 * s2 + s;
    const double h01 = -2.0 * s3 + 3.0 * s2;
    const double h11 = s3 - s2;
    return h00 * y_[i] + h10 * h * d_[i] + h01 * y_[i + 1] + h11 * h * d_[i + 1];
}

double CubicSpline::deriv(double tq) const
{
    if (tq < t_.front() || tq > t_.back()) {
        if (!extrapolate_)
            throw std::out_of_range("CubicSpline: query outside knot range");
        return tq < t_.front() ? d_.front() : d_.back();
    }
    const std::size_t i = segment(tq);
    const double h = t_[i + 1] - t_[i];
    const double s = (tq - t_[i]) / h;
    const double s2 = s * s;
    const double g00 = (6.0 * s2 - 6.0 * s) / h;
    const double g10 = 3.0 * s2 - 4.0 * s + 1.0;
    const double g01 = (-6.0 * s2 + 6.0 * s) / h;
    const double g11 = 3.0 * s2 - 2.0 * s;
    return g00 * y_[i] + g10 * d_[i] + g01 * y_[i + 1] + g11 * d_[i + 1];
}

} // namespace coag
