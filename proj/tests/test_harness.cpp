#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <stdexcept>

#include "coag/density.hpp"
#include "coag/harness.hpp"
#include "coag/metrics.hpp"

using namespace coag;

TEST_CASE("catalog names resolve to normalized transform labels") {
    CHECK(resolve_source("exp", KernelKind::Constant).label == "gamma(1,1) laplace");
    CHECK(resolve_source("profile", KernelKind::Constant).label == "gamma(1,1) laplace");
    CHECK(resolve_source("gamma(2,2)", KernelKind::Additive).label ==
          "1.5*gamma(2,3) bernstein");
    // the x-weighted twin: same class representative, so the same label
    CHECK(resolve_source("4.5*gamma(1,3)", KernelKind::Multiplicative).label ==
          "1.5*gamma(2,3) bernstein");
}

TEST_CASE("resolved data carry the normalized moments with divergence marked") {
    const Source s = resolve_source("profile", KernelKind::Additive);
    CHECK(std::isinf(s.moments[0]));
    CHECK(s.moments[1] == doctest::Approx(1.0));
    CHECK(s.moments[2] == doctest::Approx(1.0));
    CHECK(s.moments[3] == doctest::Approx(3.0));
    CHECK(s.moments[4] == doctest::Approx(15.0));

    const Source m = resolve_source("profile", KernelKind::Multiplicative);
    CHECK(std::isinf(m.moments[0]));
    CHECK(std::isinf(m.moments[1]));
    CHECK(m.moments[2] == doctest::Approx(1.0));
    CHECK(m.moments[3] == doctest::Approx(1.0));
    CHECK(m.moments[4] == doctest::Approx(3.0));
}

TEST_CASE("presets fill kernel, data, and ladders") {
    ExperimentConfig cfg;
    apply_preset(cfg, "thm1");
    CHECK(cfg.kernel == KernelKind::Constant);
    CHECK(cfg.g1 == "exp");
    CHECK(cfg.g2 == "gamma(2,2)");
    CHECK(cfg.kappas == std::vector<double>{1.25, 1.5, 1.75, 2.0});
    REQUIRE(cfg.taus.size() == 21);
    CHECK(cfg.taus.front() == 0.0);
    CHECK(cfg.taus.back() == doctest::Approx(5.0));

    ExperimentConfig c3;
    apply_preset(c3, "thm3");
    CHECK(c3.kernel == KernelKind::Multiplicative);
    CHECK(c3.g1 == "profile");
    CHECK(c3.g2 == "4.5*gamma(1,3)");
    CHECK(c3.kappas == std::vector<double>{2.25, 2.5, 2.75});

    CHECK_THROWS_AS(apply_preset(cfg, "thm4"), std::invalid_argument);
}

TEST_CASE("solver names, long and short") {
    CHECK(solver_from_name("closed") == SolverChoice::TransformClosedForm);
    CHECK(solver_from_name("transform_closed_form") == SolverChoice::TransformClosedForm);
    CHECK(solver_from_name("ode") == SolverChoice::TransformOdeFallback);
    CHECK(solver_from_name("fv") == SolverChoice::Physical);
    CHECK(solver_from_name("physical") == SolverChoice::Physical);
    CHECK_THROWS_AS(solver_from_name("magic"), std::invalid_argument);
}

TEST_CASE("weights outside the contraction range need the override flag") {
    ExperimentConfig cfg;
    apply_preset(cfg, "thm1");
    cfg.kappas = {2.5};
    CHECK_THROWS_WITH_AS(run_contraction(cfg), doctest::Contains("--allow-out-of-range"),
                         std::invalid_argument);
    cfg.kappas = {1.0};   // boundary weight, rate 0: decay not asserted
    cfg.allow_out_of_range = true;
    const ContractionReport rep = run_contraction(cfg);
    REQUIRE(rep.series.size() == 1);
    CHECK(rep.series[0].theorem_rate == 0.0);
    CHECK(rep.inequality_ok);
}

TEST_CASE("identical data short-circuit to exact zeros") {
    ExperimentConfig cfg;
    cfg.kernel = KernelKind::Constant;
    cfg.g1 = "gamma(2,2)";
    cfg.g2 = "gamma(2,2)";
    const ContractionReport rep = run_contraction(cfg);
    CHECK(rep.inequality_ok);
    for (const auto& s : rep.series) {
        CHECK(s.fit_skipped);
        for (double d : s.distances) CHECK(d == 0.0);
    }
    // two spellings of the same normalized datum also match by label
    cfg.g2 = "profile";
    cfg.g1 = "exp";
    CHECK(run_contraction(cfg).series[0].fit_skipped);
}

TEST_CASE("the two delegated flows produce identical distance tables") {
    ExperimentConfig c2, c3;
    apply_preset(c2, "thm2");
    apply_preset(c3, "thm3");
    const ContractionReport r2 = run_contraction(c2), r3 = run_contraction(c3);
    REQUIRE(r2.series.size() == r3.series.size());
    for (std::size_t k = 0; k < r2.series.size(); ++k) {
        REQUIRE(r2.series[k].distances.size() == r3.series[k].distances.size());
        for (std::size_t j = 0; j < r2.series[k].distances.size(); ++j)
            CHECK(r2.series[k].distances[j] == r3.series[k].distances[j]);
    }
    // both kernels assert the same envelope rate (kappa - 2)/2
    CHECK(r2.series[0].theorem_rate == r3.series[0].theorem_rate);
}

TEST_CASE("repeated runs serialize byte-identically") {
    ExperimentConfig cfg;
    apply_preset(cfg, "thm1");
    const std::string a = report_to_json(run_contraction(cfg));
    const std::string b = report_to_json(run_contraction(cfg));
    CHECK(a == b);
}

TEST_CASE("constant-kernel contraction from a file datum matches the catalog") {
    namespace fs = std::filesystem;
    const std::string path = (fs::temp_directory_path() / "coag_g2.csv").string();
    // unnormalized spelling of the gamma(2,2) class datum: 8 x e^{-2x}
    GriddedDensity g;
    g.x = default_size_grid();
    g.v.resize(g.x.size());
    for (std::size_t i = 0; i < g.x.size(); ++i)
        g.v[i] = 8.0 * g.x[i] * std::exp(-2.0 * g.x[i]);
    g.ext = Extension{-1.0, 8.0, 2.0};
    write_density_csv(g, path);

    ExperimentConfig cfg;
    cfg.kernel = KernelKind::Constant;
    cfg.g1 = "exp";
    cfg.g2 = path;
    cfg.kappas = {1.25};
    const ContractionReport rep = run_contraction(cfg);
    REQUIRE(rep.series.size() == 1);
    CHECK(rep.series[0].distances.front() ==
          doctest::Approx(6.344054689931e-02).epsilon(2e-4));
    CHECK(rep.inequality_ok);
    fs::remove(path);
}

TEST_CASE("transform cross-check against the physical march, short horizon") {
    ExperimentConfig cfg;
    cfg.kernel = KernelKind::Constant;
    cfg.taus = {0.0, 0.5};
    const CrossvalReport rep = run_crossval(cfg);
    CHECK(rep.ok);
    CHECK(rep.worst <= 1e-3);
    CHECK(rep.mass_lost <= 1e-6);
    CHECK(rep.max_rel.size() == 2);

    ExperimentConfig bad;
    bad.kernel = KernelKind::Multiplicative;
    CHECK_THROWS_WITH_AS(run_crossval(bad), doctest::Contains("gel"),
                         std::invalid_argument);
}

TEST_CASE("second-moment blowup trend on a coarse grid") {
    ExperimentConfig cfg;
    cfg.kernel = KernelKind::Multiplicative;
    cfg.grid_cells = 400;
    cfg.dt = 5e-4;
    cfg.taus = {0.25, 0.5};
    const GelReport rep = run_gel_trend(cfg);
    CHECK(rep.ok);
    CHECK(rep.worst_rel <= 0.05);
    REQUIRE(rep.m2.size() == 2);
    CHECK(rep.m2[1] == doctest::Approx(2.0).epsilon(0.02));

    cfg.taus = {1.2};
    CHECK_THROWS_AS(run_gel_trend(cfg), std::invalid_argument);
    cfg.taus.clear();
    cfg.kernel = KernelKind::Additive;
    CHECK_THROWS_AS(run_gel_trend(cfg), std::invalid_argument);
}

TEST_CASE("original-time rate readout for the multiplicative flow") {
    ExperimentConfig cfg;
    cfg.kernel = KernelKind::Multiplicative;
    const OriginalTimeReport rep = run_original_time_rate(cfg);
    REQUIRE(rep.kappas == std::vector<double>{2.25, 2.5, 2.75});
    REQUIRE(rep.ts.size() == rep.taus.size());
    for (std::size_t j = 0; j < rep.taus.size(); ++j)
        CHECK(rep.ts[j] == doctest::Approx(1.0 - std::exp(-rep.taus[j])).epsilon(1e-12));
    CHECK(rep.exponent_composed[1] == doctest::Approx(0.25));
    CHECK(rep.exponent_stated[1] == doctest::Approx(0.5));
    // measured decay of the transform gap, frozen from the default ladder
    CHECK(rep.fitted_power[0] == doctest::Approx(0.5203).epsilon(2e-3));
    CHECK(rep.fitted_power[2] == doctest::Approx(0.5076).epsilon(2e-3));

    cfg.kernel = KernelKind::Constant;
    CHECK_THROWS_AS(run_original_time_rate(cfg), std::invalid_argument);
}
