#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "coag/transforms.hpp"

namespace coag {

// Evaluates a transform curve (and its eta-slope) at arbitrary eta > 0.
// Backed either by a closed form from the catalog or by a monotone cubic in
// log eta over a sampled curve, extended linearly past the knot range (the
// transforms are asymptotically affine at both ends of a log grid wide enough
// to contain the action).
class CurveFn {
public:
    static CurveFn closed(const std::string& catalog_name);
    static CurveFn closed(const ClosedFormTransform& cf);
    static CurveFn sampled(const TransformCurve& c);

    double value(double eta) const { return value_(eta); }
    double slope(double eta) const { return slope_(eta); }
    TransformKind kind() const { return kind_; }

    double noise_abs = 0.0;
    double noise_rel = 0.0;

    // default state is unset; evaluating it throws std::bad_function_call
    CurveFn() = default;

private:
    std::function<double(double)> value_, slope_;
    TransformKind kind_ = TransformKind::Laplace;
};

// ---- constant kernel: Laplace flow ----
// Along eta(tau) = eta0 e^tau the reciprocal V = 1/U obeys V' = V - 1, so
// U(tau,eta) = u0 / (u0 + (1-u0) e^tau) with u0 = U0(eta e^{-tau}).
double evolve_const_value(const CurveFn& U0, double tau, double eta);
TransformCurve evolve_const(const CurveFn& U0, double tau, const std::vector<double>& etas);
TransformCurve evolve_const(const TransformCurve& U0, double tau);

// ---- additive kernel: Bernstein flow by forward characteristics ----
// U(s) = U0(eta0) e^{s/2}, eta(s) = eta0 e^s + U0(eta0)(e^{s/2} - e^s).
TransformCurve evolve_add(const CurveFn& U0, double tau, const std::vector<double>& etas);
TransformCurve evolve_add(const TransformCurve& U0, double tau);

// multiplicative flow: identical Bernstein dynamics on B[x g]; delegates.
TransformCurve evolve_mult(const CurveFn& U0, double tau, const std::vector<double>& etas);
TransformCurve evolve_mult(const TransformCurve& U0, double tau);

// forward characteristic image and its inverse (backward foot X(0; tau, eta))
double add_forward_image(double eta0, double u0, double tau);
double characteristic_foot(double eta, double tau, const CurveFn& U0);

// evolved additive state evaluated pointwise through the foot (no launch grid)
double evolve_add_value(const CurveFn& U0, double tau, double eta);
double evolve_add_slope(const CurveFn& U0, double tau, double eta);

// ---- difference of two constant-kernel flows, cancellation-safe ----
// u(tau,eta) = e^tau u0(lam) / (D1 D2), lam = eta e^{-tau},
// D_i = U0i(lam) + (1 - U0i(lam)) e^tau. u0 must be supplied in a form exact
// at small lam; below lam_switch the matched-moment expansion
// u0 = lam^2 dM2/2 - lam^3 dM3/6 + lam^4 dM4/24 takes over.
class ConstPair {
public:
    ConstPair(CurveFn U01, CurveFn U02, double dM2, double dM3, double dM4,
              std::function<double(double)> u0_exact = nullptr);

    double u0(double lam) const;
    double value(double tau, double eta) const;   // u(tau, eta)
    TransformCurve difference(double tau, const std::vector<double>& etas) const;

    const CurveFn& first() const { return U01_; }
    const CurveFn& second() const { return U02_; }

    static constexpr double lam_switch = 1e-3;

private:
    CurveFn U01_, U02_;
    double dM2_, dM3_, dM4_;
    std::function<double(double)> u0_exact_;
};

// residual of the mild (Duhamel) form of the difference equation, evaluated
// with an n-node Simpson rule in s; a correctness certificate for the
// constant-kernel closed form. T_tau v(eta) = e^{-tau} v(eta e^{-tau}).
TransformCurve duhamel_residual_const(const ConstPair& pair, double tau,
                                      const std::vector<double>& etas,
                                      std::size_t nodes = 200);

// the free semigroup itself, on the shifted grid so no interpolation enters
TransformCurve linear_semigroup_const(const TransformCurve& v, double tau);

// ---- brute-force ODE fallback (guards the closed forms) ----
TransformCurve evolve_const_ode(const CurveFn& U0, double tau,
                                const std::vector<double>& etas, double tol = 1e-10);
TransformCurve evolve_add_ode(const CurveFn& U0, double tau,
                              const std::vector<double>& etas, double tol = 1e-10);

// small-eta expansion coefficients of an evolved curve: (M0, M1) read off a
// Laplace curve, (M1, M2) off a Bernstein curve, by Richardson stencils at
// eta = h, 2h. Used to check conservation through the flows.
std::pair<double, double> expansion_coefficients(const std::function<double(double)>& U,
                                                 TransformKind kind, double h = 1e-7);

} // namespace coag
