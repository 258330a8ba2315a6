#include <doctest.h>

#include <cmath>
#include <vector>

#include "coag/flow.hpp"
#include "coag/grid.hpp"
#include "coag/metrics.hpp"
#include "coag/transforms.hpp"

using namespace coag;

namespace {

const std::vector<double>& etas() {
    static const std::vector<double> g = default_eta_grid();
    return g;
}

std::vector<double> sparse_etas() {
    std::vector<double> out;
    const auto& g = etas();
    for (std::size_t i = 0; i < g.size(); i += 8) out.push_back(g[i]);
    return out;
}

double exact_pair_u0(double lam) {
    // 1/(1+lam) - (2/(2+lam))^2 put over the common denominator
    return lam * lam / ((1.0 + lam) * (2.0 + lam) * (2.0 + lam));
}

} // namespace

TEST_CASE("constant flow leaves the exponential profile fixed") {
    const CurveFn G = CurveFn::closed("exp");
    for (double tau : {0.5, 5.0, 10.0}) {
        const TransformCurve c = evolve_const(G, tau, etas());
        double worst = 0.0;
        for (std::size_t i = 0; i < c.etas.size(); ++i)
            worst = std::max(worst,
                             std::abs(c.values[i] - 1.0 / (1.0 + c.etas[i])));
        CHECK(worst <= 1e-10);
    }
}

TEST_CASE("both flows are the identity at tau = 0") {
    const CurveFn L = CurveFn::closed("gamma(2,2) laplace");
    const TransformCurve c = evolve_const(L, 0.0, etas());
    for (std::size_t i = 0; i < c.etas.size(); i += 17)
        CHECK(c.values[i] == doctest::Approx(L.value(c.etas[i])).epsilon(1e-14));

    const CurveFn B = CurveFn::closed("gamma(2,2) bernstein");
    const TransformCurve a = evolve_add(B, 0.0, etas());
    for (std::size_t i = 0; i < a.etas.size(); i += 17)
        CHECK(a.values[i] == doctest::Approx(B.value(a.etas[i])).epsilon(1e-12));
}

TEST_CASE("constant flow rejects a datum outside the admissible range") {
    TransformCurve bad;
    bad.kind = TransformKind::Laplace;
    bad.etas = geometric_grid(1e-2, 1e2, 40);
    bad.values.assign(40, 1.5);   // a Laplace transform of a density cannot exceed M0
    const CurveFn fn = CurveFn::sampled(bad);
    CHECK_THROWS_WITH_AS(evolve_const_value(fn, 1.0, 1.0),
                         doctest::Contains("non-admissible"), std::domain_error);
}

TEST_CASE("pair difference: expansion and subtraction meet the exact rational") {
    const ConstPair pair(CurveFn::closed("exp"), CurveFn::closed("gamma(2,2) laplace"),
                         0.5, 3.0, 16.5);
    for (double lam : {1e-6, 1e-4, 9.9e-4, 1.1e-3, 1e-2, 0.1, 1.0, 10.0}) {
        const double exact = exact_pair_u0(lam);
        CHECK(pair.u0(lam) == doctest::Approx(exact).epsilon(1e-8));
    }
}

TEST_CASE("pair difference: production route matches the exact-u0 route") {
    const ConstPair prod(CurveFn::closed("exp"), CurveFn::closed("gamma(2,2) laplace"),
                         0.5, 3.0, 16.5);
    const ConstPair gold(CurveFn::closed("exp"), CurveFn::closed("gamma(2,2) laplace"),
                         0.5, 3.0, 16.5, exact_pair_u0);
    for (double tau : {0.5, 2.0, 5.0}) {
        const TransformCurve a = prod.difference(tau, etas());
        const TransformCurve b = gold.difference(tau, etas());
        for (std::size_t i = 0; i < a.etas.size(); i += 11) {
            if (b.values[i] != 0.0)
                CHECK(a.values[i] == doctest::Approx(b.values[i]).epsilon(1e-7));
        }
    }
}

TEST_CASE("pair value agrees with the assembled difference curve") {
    const ConstPair pair(CurveFn::closed("exp"), CurveFn::closed("gamma(2,2) laplace"),
                         0.5, 3.0, 16.5);
    const TransformCurve d = pair.difference(1.3, etas());
    for (std::size_t i = 100; i < 300; i += 13)
        CHECK(pair.value(1.3, d.etas[i]) == doctest::Approx(d.values[i]).epsilon(1e-12));
}

TEST_CASE("mild-form residual of the constant-kernel difference is tiny") {
    const ConstPair pair(CurveFn::closed("exp"), CurveFn::closed("gamma(2,2) laplace"),
                         0.5, 3.0, 16.5, exact_pair_u0);
    for (double tau : {0.1, 1.0}) {
        const TransformCurve r = duhamel_residual_const(pair, tau, sparse_etas(), 200);
        double worst = 0.0;
        for (double v : r.values) worst = std::max(worst, std::abs(v));
        CHECK(worst <= 1e-4);   // measured ~1e-13; the bound is the acceptance one
    }
}

TEST_CASE("mild-form residual vanishes identically for equal inputs") {
    const ConstPair pair(CurveFn::closed("exp"), CurveFn::closed("exp"), 0.0, 0.0, 0.0);
    const TransformCurve r = duhamel_residual_const(pair, 1.0, sparse_etas(), 100);
    for (double v : r.values) CHECK(v == 0.0);
}

TEST_CASE("free semigroup scales the weighted norm by e^{-(1+kappa) tau}") {
    const TransformCurve v = curve_difference(
        closed_form("exp", etas()), closed_form("gamma(2,2) laplace", etas()));
    const double kappa = 1.5, tau = 0.7;
    const double before = weighted_sup(v, kappa).value;
    const TransformCurve moved = linear_semigroup_const(v, tau);
    const double after = weighted_sup(moved, kappa).value;
    CHECK(after == doctest::Approx(before * std::exp(-(1.0 + kappa) * tau))
                       .epsilon(1e-12));
}

TEST_CASE("additive flow leaves the square-root profile fixed") {
    const CurveFn W = CurveFn::closed("G_add_bernstein");
    const TransformCurve c = evolve_add(W, 10.0, etas());
    double worst = 0.0;
    for (std::size_t i = 0; i < c.etas.size(); ++i) {
        const double exact = std::sqrt(1.0 + 2.0 * c.etas[i]) - 1.0;
        worst = std::max(worst, std::abs(c.values[i] - exact) / std::max(1.0, exact));
    }
    CHECK(worst <= 1e-6);
}

TEST_CASE("additive flow composes as a semigroup") {
    const CurveFn B = CurveFn::closed("gamma(2,2) bernstein");
    const TransformCurve two_steps =
        evolve_add(CurveFn::sampled(evolve_add(B, 0.6, etas())), 0.7, etas());
    const TransformCurve direct = evolve_add(B, 1.3, etas());
    double worst = 0.0;
    for (std::size_t i = 0; i < direct.etas.size(); ++i)
        worst = std::max(worst, std::abs(two_steps.values[i] - direct.values[i]) /
                                    std::max(1.0, std::abs(direct.values[i])));
    CHECK(worst <= 1e-6);
}

TEST_CASE("backward foot sits inside its bracket and inverts the forward map") {
    const CurveFn B = CurveFn::closed("gamma(2,2) bernstein");
    const double tau = 1.8;
    for (double eta : {1e-5, 1e-2, 1.0, 50.0, 1e5}) {
        const double foot = characteristic_foot(eta, tau, B);
        CHECK(foot >= eta * std::exp(-tau) * (1.0 - 1e-10));
        CHECK(foot <= eta * std::exp(-0.5 * tau) * (1.0 + 1e-10));
        const double img = add_forward_image(foot, B.value(foot), tau);
        CHECK(img == doctest::Approx(eta).epsilon(1e-8));
    }
}

TEST_CASE("pointwise additive evaluation matches the assembled curve") {
    const CurveFn B = CurveFn::closed("gamma(2,2) bernstein");
    const TransformCurve c = evolve_add(B, 1.1, etas());
    // the assembled curve interpolates between launch feet (measured 1.5e-8)
    for (std::size_t i = 40; i < 360; i += 29) {
        CHECK(evolve_add_value(B, 1.1, c.etas[i]) ==
              doctest::Approx(c.values[i]).epsilon(1e-7));
        CHECK(evolve_add_slope(B, 1.1, c.etas[i]) ==
              doctest::Approx(c.slopes[i]).epsilon(1e-6));
    }
}

TEST_CASE("multiplicative flow delegates to the additive one") {
    const CurveFn B = CurveFn::closed("1.5*gamma(2,3) bernstein");
    const TransformCurve a = evolve_add(B, 0.9, etas());
    const TransformCurve m = evolve_mult(B, 0.9, etas());
    REQUIRE(a.values.size() == m.values.size());
    for (std::size_t i = 0; i < a.values.size(); ++i)
        CHECK(a.values[i] == m.values[i]);
}

TEST_CASE("a too-steep Bernstein datum crosses characteristics and is refused") {
    TransformCurve steep;
    steep.kind = TransformKind::Bernstein;
    steep.etas = geometric_grid(1e-2, 1e2, 60);
    steep.values.resize(60);
    steep.slopes.resize(60);
    for (std::size_t i = 0; i < 60; ++i) {
        steep.values[i] = 2.0 * steep.etas[i];   // slope 2 > 1/(1 - e^{-tau/2})
        steep.slopes[i] = 2.0;
    }
    CHECK_THROWS_WITH_AS(evolve_add(CurveFn::sampled(steep), 2.0, steep.etas),
                         doctest::Contains("characteristic-crossing"),
                         std::runtime_error);
}

TEST_CASE("brute-force ODE route shadows the constant closed form") {
    const CurveFn L = CurveFn::closed("gamma(2,2) laplace");
    for (double tau : {0.5, 1.0, 2.0}) {
        const TransformCurve closed = evolve_const(L, tau, sparse_etas());
        const TransformCurve ode = evolve_const_ode(L, tau, sparse_etas());
        double worst = 0.0;
        for (std::size_t i = 0; i < closed.values.size(); ++i)
            worst = std::max(worst, std::abs(closed.values[i] - ode.values[i]));
        CHECK(worst <= 1e-8);
    }
}

TEST_CASE("brute-force ODE route shadows the additive closed form") {
    // compare at the exact pointwise evaluations so neither route interpolates
    const CurveFn B = CurveFn::closed("gamma(2,2) bernstein");
    for (double tau : {0.5, 1.0, 2.0}) {
        const auto etas = sparse_etas();
        const TransformCurve ode = evolve_add_ode(B, tau, etas);
        double worst = 0.0;
        for (std::size_t i = 0; i < etas.size(); ++i) {
            const double exact = evolve_add_value(B, tau, etas[i]);
            worst = std::max(worst, std::abs(ode.values[i] - exact) /
                                        std::max(1.0, std::abs(exact)));
        }
        CHECK(worst <= 1e-8);   // measured ~2e-10
    }
}

TEST_CASE("small-eta stencils read off the conserved coefficients") {
    const auto L = closed_form_lookup("gamma(2,2) laplace");
    const auto [m0, m1] = expansion_coefficients(L.value, TransformKind::Laplace);
    CHECK(m0 == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(m1 == doctest::Approx(1.0).epsilon(1e-6));

    const auto B = closed_form_lookup("1.5*gamma(2,3) bernstein");
    const auto [b1, b2] = expansion_coefficients(B.value, TransformKind::Bernstein);
    CHECK(b1 == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(b2 == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("sampled curves extend linearly past the knot range") {
    const TransformCurve base = closed_form("exp", geometric_grid(1e-2, 1e2, 120));
    const CurveFn fn = CurveFn::sampled(base);
    const double e0 = base.etas.back();
    const double v0 = fn.value(e0), s0 = fn.slope(e0);
    const double probe = 1.5 * e0;
    CHECK(fn.value(probe) == doctest::Approx(v0 + s0 * (probe - e0)).epsilon(1e-9));
    const double lo = base.etas.front();
    const double vl = fn.value(lo), sl = fn.slope(lo);
    CHECK(fn.value(0.5 * lo) ==
          doctest::Approx(vl + sl * (0.5 * lo - lo)).epsilon(1e-9));
}
