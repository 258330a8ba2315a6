#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "coag/density.hpp"
#include "coag/transforms.hpp"

namespace coag {

struct SupResult {
    double value;
    double eta;     // where the refined maximum sits
};

// sup over eta > 0 of |G(eta)| / eta^kappa: discrete argmax over the grid,
// then golden-section refinement between the argmax neighbors to relative
// tolerance 1e-6 in eta. A ratio still climbing into either grid end raises
// "sup-not-bracketed"; a converged plateau at the end (the kappa = 2
// constant-kernel limit M2-difference/2) is accepted.
SupResult weighted_sup(const TransformCurve& curve, double kappa);

// entrywise difference of curves sharing one grid; magnitudes under the noise
// floor 16 * (abs1 + rel1 |v1| + abs2 + rel2 |v2|) are masked to zero so
// producer cancellation noise is never read as signal.
TransformCurve curve_difference(const TransformCurve& a, const TransformCurve& b);

// composite distance between two normalized densities: transform both with
// the kernel's transform (Laplace / Bernstein / Bernstein-of-xg), subtract,
// take the kappa-weighted sup. The two conserved moments of the kernel class
// must agree to 1e-6 ("moment-mismatch" otherwise: the difference would not
// vanish fast enough at 0 and the norm would be infinite in the theorem
// kappa range).
double distance(const GriddedDensity& g1, const GriddedDensity& g2,
                KernelKind kernel, double kappa);

struct FitResult {
    double rate = 0.0;            // negative slope of log d over tau
    double intercept = 0.0;       // log d extrapolated to tau = 0
    std::size_t points_used = 0;
    bool window_shrunk = false;   // floored points dropped or window widened
};

// least-squares line through (tau, log d) over the window (default [1, 5],
// skipping the initial transient); distances at or below 1e-13 * d(0) count
// as numerical floor and are excluded. Needs at least 5 checkpoints above
// 10 eps d(0) overall.
FitResult fit_rate(const std::vector<double>& taus, const std::vector<double>& distances,
                   double window_lo = 1.0, double window_hi = 5.0);

// the exponential rate each theorem asserts for the kernel at this kappa
double theorem_rate(KernelKind kernel, double kappa);

struct KappaSeries {
    double kappa = 0.0;
    std::vector<double> distances;
    double fitted_rate = 0.0;
    double theorem_rate = 0.0;
    double rate_error = 0.0;      // (fitted - theorem) / theorem
    bool fit_window_shrunk = false;
    bool fit_skipped = false;     // identical inputs: all distances zero
};

struct ContractionReport {
    KernelKind kernel = KernelKind::Constant;
    std::vector<double> taus;
    std::vector<KappaSeries> series;
    bool inequality_ok = true;    // d(tau) <= e^{-theorem_rate tau} d(0) * 1.01 everywhere
};

std::string report_to_json(const ContractionReport& r);
void write_report_json(const ContractionReport& r, const std::string& path);
// flat plotting table: tau,kappa,distance rows, sorted by tau then kappa
void write_report_csv(const ContractionReport& r, const std::string& path);

} // namespace coag
