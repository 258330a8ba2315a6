#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "coag/density.hpp"

namespace coag {

enum class TransformKind { Laplace, Bernstein };

// Transform values on a log-spaced eta grid. noise_abs/noise_rel carry the
// producer's error estimate; metrics uses them to floor differences so that
// cancellation noise is never mistaken for signal.
struct TransformCurve {
    std::vector<double> etas;
    std::vector<double> values;
    TransformKind kind = TransformKind::Laplace;
    bool signed_values = false;
    std::vector<double> slopes;  // dU/deta at the grid points; empty if unknown
    double noise_abs = 0.0;
    double noise_rel = 0.0;

    void validate() const;
};

// Default eta grid: 400 points, geometric on [1e-6, 1e6].
std::vector<double> default_eta_grid();

// L[f](eta) = int e^{-eta x} f(x) dx, bulk Simpson plus extension integrals.
TransformCurve laplace(const GriddedDensity& f, const std::vector<double>& etas);

// B[f](eta) = int (1 - e^{-eta x}) f(x) dx; the integrand uses expm1 so small
// eta*x does not cancel, and fat heads enter through continued-gamma
// differences which stay finite for p < 2.
TransformCurve bernstein(const GriddedDensity& f, const std::vector<double>& etas);

// B[x f(x)]: the transform the multiplicative norm weighs.
TransformCurve mult_bernstein(const GriddedDensity& f, const std::vector<double>& etas);

// Analytic catalog entry: exact values and slopes, used as quadrature oracle
// and as the exact initial data of the transform flows.
struct ClosedFormTransform {
    TransformKind kind;
    std::function<double(double)> value;
    std::function<double(double)> slope;
};

// Accepted names: const_profile_laplace | exp | exp_bernstein | G_add_bernstein
// | gamma(shape,rate) [laplace|bernstein suffix after a space].
ClosedFormTransform closed_form_lookup(const std::string& name);
TransformCurve closed_form(const std::string& name, const std::vector<double>& etas);

// CSV: '# kind <laplace|bernstein>' then eta,value rows.
void write_curve_csv(const TransformCurve& c, const std::string& path);
TransformCurve read_curve_csv(const std::string& path);

} // namespace coag
