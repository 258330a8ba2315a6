#pragma once

namespace coag {

// Upper incomplete gamma Gamma(a,x), x > 0, continued to all real a except the
// poles at 0, -1, -2, ... which are reached through the a == 0 exponential
// integral branch of the recursion.
double upper_gamma(double a, double x);

// Analytic continuation of the lower incomplete gamma via Gamma(a) - Gamma(a,x).
// For a in (-1,0) this is the finite part that appears in fat-head integrals.
double lower_gamma_cont(double a, double x);

// int_0^{x1} x^b e^{-s x} dx. For s == 0 requires b > -1. For b <= -1 the
// returned value is the analytic continuation (used only in differences that
// restore integrability).
double head_integral(double b, double s, double x1);

// int_{xM}^inf x^b e^{-s x} dx, s > 0.
double tail_integral(double b, double s, double xM);

} // namespace coag
