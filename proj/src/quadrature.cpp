#include "coag/quadrature.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace coag {

namespace {

// Quadratic-through-three-points rule on [s0, s2], spacings h1 = s1-s0, h2 = s2-s1.
double simpson_pair(double h1, double h2, double g0, double g1, double g2)
{
    const double H = h1 + h2;
    return H / 6.0 * ((2.0 - h2 / h1) * g0 + (H * H / (h1 * h2)) * g1 + (2.0 - h1 / h2) * g2);
}

// Cubic-through-four-points rule on [s0, s3]. Weights from the moment system,
// coordinates centred for conditioning. Reduces to 3/8 on uniform spacing.
std::array<double, 4> cotes4_weights(const std::array<double, 4>& s)
{
    const double c = 0.5 * (s[0] + s[3]);
    std::array<double, 4> t{s[0] - c, s[1] - c, s[2] - c, s[3] - c};
    double A[4][5];
    for (int m = 0; m < 4; ++m) {
        for (int k = 0; k < 4; ++k) A[m][k] = std::pow(t[k], m);
        A[m][4] = (std::pow(t[3], m + 1) - std::pow(t[0], m + 1)) / (m + 1);
    }
    for (int col = 0; col < 4; ++col) {          // partial-pivot elimination
        int piv = col;
        for (int r = col + 1; r < 4; ++r)
            if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
        for (int k = 0; k < 5; ++k) std::swap(A[col][k], A[piv][k]);
        for (int r = 0; r < 4; ++r) {
            if (r == col) continue;
            const double f = A[r][col] / A[col][col];
            for (int k = col; k < 5; ++k) A[r][k] -= f * A[col][k];
        }
    }
    return {A[0][4] / A[0][0], A[1][4] / A[1][1], A[2][4] / A[2][2], A[3][4] / A[3][3]};
}

} // namespace

double integrate_log_grid(const std::vector<double>& x, const std::vector<double>& F)
{
    const std::size_t n = x.size();
    if (F.size() != n)
        throw std::invalid_argument("integrate_log_grid: size mismatch");
    if (n < 2) return 0.0;

    std::vector<double> s(n), g(n);
    for (std::size_t i = 0; i < n; ++i) {
        s[i] = std::log(x[i]);
        g[i] = F[i] * x[i];                      // dx = x ds
    }

    std::size_t m = n - 1;                       // intervals left
    std::size_t i = 0;
    double total = 0.0;
    while (m >= 2 && m != 3) {
        total += simpson_pair(s[i + 1] - s[i], s[i + 2] - s[i + 1], g[i], g[i + 1], g[i + 2]);
        i += 2;
        m -= 2;
    }
    if (m == 3) {
        const auto w = cotes4_weights({s[i], s[i + 1], s[i + 2], s[i + 3]});
        total += w[0] * g[i] + w[1] * g[i + 1] + w[2] * g[i + 2] + w[3] * g[i + 3];
    } else if (m == 1) {
        total += 0.5 * (s[i + 1] - s[i]) * (g[i] + g[i + 1]);
    }
    return total;
}

double integrate_log_grid(const std::vector<double>& x,
                          const std::function<double(double)>& f)
{
    std::vector<double> F(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) F[i] = f(x[i]);
    return integrate_log_grid(x, F);
}

double simpson(const std::function<double(double)>& f, double a, double b, std::size_t n)
{
    if (n == 0) n = 2;
    if (n % 2) ++n;
    const double h = (b - a) / static_cast<double>(n);
    double acc = f(a) + f(b);
    for (std::size_t i = 1; i < n; ++i)
        acc += f(a + h * static_cast<double>(i)) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

} // namespace coag
