#pragma once

#include <optional>
#include <string>
#include <vector>

#include "coag/density.hpp"
#include "coag/flow.hpp"
#include "coag/metrics.hpp"

namespace coag {

enum class SolverChoice { TransformClosedForm, TransformOdeFallback, Physical };

SolverChoice solver_from_name(const std::string& s);

struct ExperimentConfig {
    KernelKind kernel = KernelKind::Constant;
    std::string g1, g2;                 // catalog name, CSV path, or "profile"
    std::vector<double> kappas;         // empty: kernel default set
    std::vector<double> taus;           // empty: 0, 0.25, ..., tau_max
    double tau_max = 5.0;
    SolverChoice solver = SolverChoice::TransformClosedForm;
    bool allow_out_of_range = false;
    double tolerance = 0.0;             // 0: per-mode default
    std::optional<std::string> out_dir;

    // physical-solver overrides (empty: per-mode defaults)
    std::optional<double> grid_lo, grid_hi;
    std::optional<int> grid_cells;
    std::optional<double> dt;
    bool minmod = true;

    unsigned seed = 0;                  // reserved; all shipped paths are deterministic
};

// kernel default kappa sets: {1.25, 1.5, 1.75, 2.0} constant, {2.25, 2.5, 2.75}
// additive/multiplicative
std::vector<double> default_kappas(KernelKind k);
std::vector<double> default_taus(double tau_max);

// presets: thm1 (constant, e^{-x} vs 4xe^{-2x}), thm2 (additive, profile vs
// class-normalized gamma), thm3 (multiplicative twin of thm2: the datum whose
// x-weighted density equals thm2's, so the delegated flow sees identical input)
void apply_preset(ExperimentConfig& cfg, const std::string& preset);

// a resolved initial datum: evolvable transform curve plus density-side info
struct Source {
    CurveFn fn;                                  // normalized, kernel-appropriate kind
    std::string label;                           // resolved catalog form or file path
    double moments[5] = {0, 0, 0, 0, 0};         // normalized density moments, +inf if divergent
    std::function<double(double)> density_fn;    // pointwise density when closed-form
    GriddedDensity density;                      // sampled density (CSV inputs)
    bool has_density_grid = false;
};

Source resolve_source(const std::string& name, KernelKind kernel);

ContractionReport run_contraction(const ExperimentConfig& cfg);
bool contraction_passes(const ContractionReport& r);

struct CrossvalReport {
    KernelKind kernel = KernelKind::Constant;
    std::vector<double> taus;
    std::vector<double> max_rel;        // per tau
    std::vector<double> argmax_eta;     // per tau
    double worst = 0.0;
    double worst_tau = 0.0;
    double worst_eta = 0.0;
    double mass_lost = 0.0;
    double tolerance = 0.0;
    bool ok = false;
};

CrossvalReport run_crossval(const ExperimentConfig& cfg);

struct GelReport {
    std::vector<double> ts;
    std::vector<double> m2;             // discrete second moments of the FV run
    std::vector<double> predicted;      // M2(0)/(1 - M2(0) t), the moment-ODE solution
    double worst_rel = 0.0;
    double tolerance = 0.05;
    bool ok = false;
};

GelReport run_gel_trend(const ExperimentConfig& cfg);

struct OriginalTimeReport {
    std::vector<double> taus;
    std::vector<double> ts;             // t = 1 - e^{-tau}
    std::vector<double> kappas;
    std::vector<std::vector<double>> distances;      // [kappa][checkpoint]
    std::vector<double> fitted_power;                // d ~ (1 - t)^power
    std::vector<double> exponent_composed;           // (kappa - 2)/2
    std::vector<double> exponent_stated;             // kappa - 2
};

OriginalTimeReport run_original_time_rate(const ExperimentConfig& cfg);

std::string crossval_to_json(const CrossvalReport& r);
std::string gel_to_json(const GelReport& g, const OriginalTimeReport& o);

} // namespace coag
