#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "coag/density.hpp"

namespace coag {

enum class FluxLimiter { None, Minmod };

struct SolverConfig {
    KernelKind kernel = KernelKind::Constant;
    std::vector<double> edges;            // cell edges, strictly increasing, > 0
    double dt = 1e-4;                     // base step in original time t
    double t_end = 1.0;
    FluxLimiter flux_limiter = FluxLimiter::Minmod;
    // when set, the step scales with the inverse of the current explicit
    // rate bound (useful for the constant kernel whose rate decays as 1/(1+t))
    bool dt_tracks_rate = false;
};

// Conservative finite-volume scheme for the coagulation equation in flux form:
// d(x n)/dt = -dJ/dx with J(x) = int_0^x v n(v) int_{x-v}^inf K(v,w) n(w) dw dv,
// explicit Euler in time on a geometric cell grid. Mass leaves only through
// the top edge and is accumulated in mass_lost().
class FVSolver {
public:
    explicit FVSolver(SolverConfig cfg);

    const SolverConfig& config() const { return cfg_; }
    const std::vector<double>& centers() const { return x_; }
    const std::vector<double>& widths() const { return w_; }

    // n may be sampled on the solver's centers or on any other positive grid
    // (resampled monotonically in log-log coordinates)
    void set_state(const GriddedDensity& n, double t = 0.0);
    void set_state(std::vector<double> n, double t = 0.0);

    double time() const { return t_; }
    const std::vector<double>& state() const { return n_; }
    double mass_lost() const { return lost_; }

    double moment(int ell) const;        // discrete sum x^ell n w
    double max_rate() const;             // kernel-dependent explicit rate bound
    double current_dt() const;
    void step();                         // one step of size current_dt()
    void run_until(double t_end);        // lands on t_end exactly

    GriddedDensity density() const;      // centers + state, no tail descriptor

private:
    void build_tables();
    void compute_flux();                 // fills edge_flux_ from n_
    void step_by(double h);

    SolverConfig cfg_;
    std::vector<double> x_, w_;          // cell centers and widths
    std::vector<double> n_;
    double t_ = 0.0;
    double lost_ = 0.0;
    double rate0_ = 0.0;                 // rate bound at set_state time

    // per-pair precomputed geometry, row-major over (edge i, source j <= i)
    struct PairTab {
        double pw;                       // width of the partial cell
        double c1, c2, c3;               // slope/value weights of the partial integrals
        std::int32_t alpha;              // cell holding the lower limit, -1 if below grid
        std::int32_t from;               // first fully covered cell
    };
    std::vector<PairTab> pairs_;
    std::vector<double> edge_flux_;      // size M+1, edge_flux_[0] = 0
    std::vector<double> S0_, S1_, slope_, xnw_;
};

// repeated stepping with checkpoint capture at the requested original times
// (each must be reachable; the step lands on every checkpoint exactly).
// When out_dir is given, each checkpoint is also written as n_t<value>.csv.
std::vector<GriddedDensity> solve(const GriddedDensity& n0, const SolverConfig& cfg,
                                  const std::vector<double>& checkpoints,
                                  const std::optional<std::string>& out_dir = std::nullopt);

} // namespace coag
