#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "coag/density.hpp"
#include "coag/fv.hpp"
#include "coag/harness.hpp"
#include "coag/scaling.hpp"
#include "coag/transforms.hpp"

namespace {

// flags shared by the experiment-style subcommands, applied over a preset
struct ExperimentFlags {
    std::string preset, kernel, g1, g2, solver, limiter, out;
    std::vector<double> kappas, checkpoints;
    double tau_max = 5.0, tolerance = 0.0, grid_lo = 0.0, grid_hi = 0.0, dt = 0.0;
    int cells = 0;
    bool allow_out_of_range = false;
};

void add_experiment_flags(CLI::App* cmd, ExperimentFlags& f, bool with_preset,
                          bool with_kappa) {
    cmd->set_config("--config", "", "flat key=value file; explicit flags win");
    if (with_preset)
        cmd->add_option("--preset", f.preset, "thm1, thm2, or thm3")
            ->check(CLI::IsMember({"thm1", "thm2", "thm3"}));
    cmd->add_option("--kernel", f.kernel, "constant, additive, or multiplicative");
    cmd->add_option("--g1", f.g1, "first datum: catalog name, 'profile', or CSV path");
    cmd->add_option("--g2", f.g2, "second datum");
    if (with_kappa)
        cmd->add_option("--kappa", f.kappas, "norm index, repeatable")
            ->delimiter(',');
    cmd->add_option("--tau-max", f.tau_max, "horizon in the rescaled time");
    cmd->add_option("--checkpoints", f.checkpoints,
                    "rescaled-time checkpoints (default 0, 0.25, ..., tau-max)")
        ->delimiter(',');
    cmd->add_option("--solver", f.solver,
                    "transform_closed_form, transform_ode_fallback, or physical");
    cmd->add_option("--out", f.out, "directory for JSON/CSV reports");
    cmd->add_flag("--allow-out-of-range", f.allow_out_of_range,
                  "run kappa values outside the proven contraction range");
    cmd->add_option("--tolerance", f.tolerance, "override the mode's pass tolerance");
    cmd->add_option("--grid-lo", f.grid_lo, "physical grid lower edge");
    cmd->add_option("--grid-hi", f.grid_hi, "physical grid upper edge");
    cmd->add_option("--cells", f.cells, "physical grid cell count");
    cmd->add_option("--dt", f.dt, "physical solver base step");
    cmd->add_option("--limiter", f.limiter, "flux limiter: minmod or none")
        ->check(CLI::IsMember({"minmod", "none"}));
}

coag::ExperimentConfig build_config(const CLI::App* cmd, const ExperimentFlags& f) {
    coag::ExperimentConfig cfg;
    if (!f.preset.empty()) coag::apply_preset(cfg, f.preset);
    const auto given = [cmd](const std::string& name) {
        const CLI::Option* o = cmd->get_option_no_throw(name);
        return o != nullptr && o->count() > 0;
    };
    if (given("--kernel")) cfg.kernel = coag::kernel_from_name(f.kernel);
    if (given("--g1")) cfg.g1 = f.g1;
    if (given("--g2")) cfg.g2 = f.g2;
    if (given("--kappa")) cfg.kappas = f.kappas;
    if (given("--tau-max")) { cfg.tau_max = f.tau_max; cfg.taus.clear(); }
    if (given("--checkpoints")) cfg.taus = f.checkpoints;
    if (given("--solver")) cfg.solver = coag::solver_from_name(f.solver);
    if (!f.out.empty()) cfg.out_dir = f.out;
    cfg.allow_out_of_range = f.allow_out_of_range;
    if (given("--tolerance")) cfg.tolerance = f.tolerance;
    if (given("--grid-lo")) cfg.grid_lo = f.grid_lo;
    if (given("--grid-hi")) cfg.grid_hi = f.grid_hi;
    if (given("--cells")) cfg.grid_cells = f.cells;
    if (given("--dt")) cfg.dt = f.dt;
    if (given("--limiter")) cfg.minmod = f.limiter == "minmod";
    return cfg;
}

int run_contract(const CLI::App* cmd, const ExperimentFlags& f) {
    const coag::ExperimentConfig cfg = build_config(cmd, f);
    const coag::ContractionReport rep = coag::run_contraction(cfg);
    std::printf("kernel %s, %zu checkpoints to tau = %g\n", coag::kernel_name(rep.kernel),
                rep.taus.size(), rep.taus.back());
    for (const auto& s : rep.series) {
        if (s.fit_skipped)
            std::printf("kappa %-5g d(0) = 0 (identical inputs), theorem rate %g\n",
                        s.kappa, s.theorem_rate);
        else
            std::printf("kappa %-5g d(0) = %.6e  d(end) = %.6e  fitted rate %.4f  "
                        "theorem rate %.4f  (error %+.1f%%)\n",
                        s.kappa, s.distances.front(), s.distances.back(), s.fitted_rate,
                        s.theorem_rate, 100.0 * s.rate_error);
    }
    std::printf("contraction inequality (1%% slack): %s\n",
                rep.inequality_ok ? "ok" : "VIOLATED");
    return coag::contraction_passes(rep) ? 0 : 1;
}

int run_crossval_cmd(const CLI::App* cmd, const ExperimentFlags& f) {
    const coag::ExperimentConfig cfg = build_config(cmd, f);
    const coag::CrossvalReport rep = coag::run_crossval(cfg);
    for (std::size_t j = 0; j < rep.taus.size(); ++j)
        std::printf("tau %-5g max rel. discrepancy %.3e at eta = %.4g\n", rep.taus[j],
                    rep.max_rel[j], rep.argmax_eta[j]);
    std::printf("worst %.3e at (tau, eta) = (%g, %.4g); mass lost %.3e; tolerance %g: %s\n",
                rep.worst, rep.worst_tau, rep.worst_eta, rep.mass_lost, rep.tolerance,
                rep.ok ? "ok" : "FAIL");
    return rep.ok ? 0 : 1;
}

int run_gel_rate(const CLI::App* cmd, const ExperimentFlags& f,
                 const std::vector<double>& t_checkpoints) {
    coag::ExperimentConfig cfg = build_config(cmd, f);
    cfg.kernel = coag::KernelKind::Multiplicative;

    coag::ExperimentConfig gel_cfg = cfg;
    gel_cfg.taus = t_checkpoints;   // original-time checkpoints for the moment trend
    const coag::GelReport gel = coag::run_gel_trend(gel_cfg);
    for (std::size_t j = 0; j < gel.ts.size(); ++j)
        std::printf("t %-5g M2 = %.6f  predicted %.6f  rel %.3e\n", gel.ts[j], gel.m2[j],
                    gel.predicted[j], std::abs(gel.m2[j] - gel.predicted[j]) /
                                          gel.predicted[j]);
    std::printf("second-moment blowup trend: worst rel %.3e, tolerance %g: %s\n",
                gel.worst_rel, gel.tolerance, gel.ok ? "ok" : "FAIL");

    const coag::OriginalTimeReport rate = coag::run_original_time_rate(cfg);
    for (std::size_t i = 0; i < rate.kappas.size(); ++i)
        std::printf("kappa %-5g fitted power %.4f of (1 - t); composed exponent %.3f, "
                    "stated exponent %.3f\n",
                    rate.kappas[i], rate.fitted_power[i], rate.exponent_composed[i],
                    rate.exponent_stated[i]);

    if (cfg.out_dir) {
        std::filesystem::create_directories(*cfg.out_dir);
        std::ofstream os(*cfg.out_dir + "/gel.json");
        os << coag::gel_to_json(gel, rate);
    }
    return gel.ok ? 0 : 1;
}

int run_profile(const std::string& kernel, const std::string& out) {
    const coag::KernelKind k = coag::kernel_from_name(kernel);
    coag::write_density_csv(coag::exact_profile(k), out);
    std::printf("wrote %s profile to %s\n", coag::kernel_name(k), out.c_str());
    return 0;
}

int run_transform(const std::string& in, const std::string& kind, const std::string& out) {
    const coag::GriddedDensity f = coag::read_density_csv(in);
    const auto etas = coag::default_eta_grid();
    coag::TransformCurve c;
    if (kind == "laplace") c = coag::laplace(f, etas);
    else if (kind == "bernstein") c = coag::bernstein(f, etas);
    else c = coag::mult_bernstein(f, etas);
    std::FILE* os = std::fopen(out.c_str(), "w");
    if (!os) throw std::runtime_error("cannot open " + out);
    for (std::size_t i = 0; i < c.etas.size(); ++i)
        std::fprintf(os, "%.17g,%.17g\n", c.etas[i], c.values[i]);
    std::fclose(os);
    std::printf("wrote %zu-point %s transform to %s\n", c.etas.size(), kind.c_str(),
                out.c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"coagulation contraction laboratory"};
    app.require_subcommand(1);

    ExperimentFlags contract_f, crossval_f, gel_f;

    CLI::App* contract = app.add_subcommand(
        "contract", "evolve two data and track weighted transform distances");
    add_experiment_flags(contract, contract_f, true, true);

    CLI::App* crossval = app.add_subcommand(
        "crossval", "compare the physical solver against the closed transform flow");
    add_experiment_flags(crossval, crossval_f, false, false);

    CLI::App* gel = app.add_subcommand(
        "gel-rate", "multiplicative second-moment trend and original-time decay power");
    add_experiment_flags(gel, gel_f, false, true);
    std::vector<double> t_checkpoints{0.25, 0.5, 0.75, 0.9};
    const CLI::Validator unit_interval(
        [](std::string& s) {
            try {
                const double v = std::stod(s);
                if (v > 0.0 && v < 1.0) return std::string();
            } catch (...) {
            }
            return "checkpoint must lie strictly inside (0, 1), got " + s;
        },
        "IN_(0,1)");
    gel->add_option("--t-checkpoints", t_checkpoints,
                    "original-time checkpoints for the moment trend, each < 1")
        ->delimiter(',')
        ->check(unit_interval);

    CLI::App* profile = app.add_subcommand("profile", "write an exact profile as CSV");
    std::string profile_kernel = "constant", profile_out = "profile.csv";
    profile->add_option("--kernel", profile_kernel, "constant, additive, or multiplicative");
    profile->add_option("--out", profile_out, "output CSV path")->required();

    CLI::App* transform = app.add_subcommand("transform",
                                             "transform a density CSV onto the eta grid");
    std::string tr_in, tr_kind = "laplace", tr_out;
    transform->add_option("--in", tr_in, "density CSV")->required();
    transform->add_option("--kind", tr_kind, "laplace, bernstein, or mult-bernstein")
        ->check(CLI::IsMember({"laplace", "bernstein", "mult-bernstein"}));
    transform->add_option("--out", tr_out, "output CSV path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (contract->parsed()) return run_contract(contract, contract_f);
        if (crossval->parsed()) return run_crossval_cmd(crossval, crossval_f);
        if (gel->parsed()) return run_gel_rate(gel, gel_f, t_checkpoints);
        if (profile->parsed()) return run_profile(profile_kernel, profile_out);
        if (transform->parsed()) return run_transform(tr_in, tr_kind, tr_out);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 2;
}
