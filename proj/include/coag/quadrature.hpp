#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace coag {

// Integral of F over [x_1, x_M] where F is sampled on a geometric grid.
// Composite Simpson in s = log x with the Jacobian folded in; a leftover odd
// interval block is closed with the 3/8 rule (or one trapezoid if only a
// single interval remains). Grids need not be exactly uniform in log; the
// pairwise rule uses the actual spacings.
double integrate_log_grid(const std::vector<double>& x, const std::vector<double>& F);

// Same, with the integrand given as a callable evaluated at the grid points.
double integrate_log_grid(const std::vector<double>& x,
                          const std::function<double(double)>& f);

// Composite Simpson over [a,b] with n uniform intervals (n rounded up to even).
double simpson(const std::function<double(double)>& f, double a, double b, std::size_t n);

} // namespace coag
