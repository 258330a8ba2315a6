#include "coag/fv.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <stdexcept>
#include <string>

#include "coag/grid.hpp"
#include "coag/interp.hpp"
#include "coag/parallel.hpp"

namespace coag {

FVSolver::FVSolver(SolverConfig cfg) : cfg_(std::move(cfg)) {
    if (cfg_.edges.size() < 3)
        throw std::invalid_argument("FVSolver: need at least two cells");
    if (cfg_.edges.front() <= 0.0 || !strictly_increasing(cfg_.edges))
        throw std::invalid_argument("FVSolver: edges must be positive and increasing");
    if (cfg_.dt <= 0.0)
        throw std::invalid_argument("FVSolver: dt must be positive");
    build_tables();
}

void FVSolver::build_tables() {
    const auto& E = cfg_.edges;
    const std::size_t M = E.size() - 1;
    x_.resize(M);
    w_.resize(M);
    for (std::size_t k = 0; k < M; ++k) {
        x_[k] = 0.5 * (E[k] + E[k + 1]);
        w_[k] = E[k + 1] - E[k];
    }
    n_.assign(M, 0.0);
    edge_flux_.assign(M + 1, 0.0);
    S0_.assign(M + 1, 0.0);
    S1_.assign(M + 1, 0.0);
    slope_.assign(M, 0.0);
    xnw_.assign(M, 0.0);

    // flux at edge E[i+1] needs, per source cell j <= i, the integral of the
    // kernel against n over [E[i+1] - x_j, top); split into the partial cell
    // holding the lower limit plus full cells beyond it
    pairs_.resize(M * (M + 1) / 2);
    std::size_t idx = 0;
    for (std::size_t i = 0; i < M; ++i) {
        for (std::size_t j = 0; j <= i; ++j, ++idx) {
            const double theta = E[i + 1] - x_[j];
            const auto it = std::lower_bound(E.begin(), E.end(), theta);
            const long a = static_cast<long>(it - E.begin()) - 1;
            PairTab p{};
            p.alpha = (a >= 0 && a < static_cast<long>(M)) ? static_cast<std::int32_t>(a) : -1;
            p.from = static_cast<std::int32_t>(std::clamp<long>(a + 1, 0, static_cast<long>(M)));
            if (p.alpha >= 0) {
                const double Eu = E[a + 1], th = theta, xa = x_[a];
                p.pw = Eu - th;
                p.c1 = 0.5 * ((Eu - xa) * (Eu - xa) - (th - xa) * (th - xa));
                p.c2 = 0.5 * (Eu * Eu - th * th);
                p.c3 = (Eu * Eu * Eu - th * th * th) / 3.0 - xa * p.c2;
            }
            pairs_[idx] = p;
        }
    }
}

void FVSolver::set_state(std::vector<double> n, double t) {
    if (n.size() != x_.size())
        throw std::invalid_argument("FVSolver::set_state: size mismatch");
    for (double v : n)
        if (!(v >= 0.0))
            throw std::invalid_argument("FVSolver::set_state: negative or NaN value");
    n_ = std::move(n);
    t_ = t;
    lost_ = 0.0;
    rate0_ = max_rate();
}

void FVSolver::set_state(const GriddedDensity& n, double t) {
    n.validate();
    bool matches = n.x.size() == x_.size();
    if (matches)
        for (std::size_t k = 0; k < x_.size(); ++k)
            if (std::abs(n.x[k] - x_[k]) > 1e-9 * x_[k]) { matches = false; break; }
    if (matches) {
        set_state(n.v, t);
        return;
    }
    // resample onto the cell centers; log-log when positive, zero outside
    std::vector<double> lt(n.x.size()), lv(n.x.size());
    bool positive = true;
    for (double v : n.v) positive = positive && v > 0.0;
    for (std::size_t k = 0; k < n.x.size(); ++k) lt[k] = std::log(n.x[k]);
    std::vector<double> vals(x_.size(), 0.0);
    if (positive) {
        for (std::size_t k = 0; k < n.v.size(); ++k) lv[k] = std::log(n.v[k]);
        const CubicSpline sp = CubicSpline::pchip(lt, lv);
        for (std::size_t k = 0; k < x_.size(); ++k)
            if (x_[k] >= n.x.front() && x_[k] <= n.x.back())
                vals[k] = std::exp(sp.eval(std::log(x_[k])));
    } else {
        const CubicSpline sp = CubicSpline::pchip(lt, n.v);
        for (std::size_t k = 0; k < x_.size(); ++k)
            if (x_[k] >= n.x.front() && x_[k] <= n.x.back())
                vals[k] = std::max(0.0, sp.eval(std::log(x_[k])));
    }
    set_state(std::move(vals), t);
}

double FVSolver::moment(int ell) const {
    double acc = 0.0;
    switch (ell) {
    case 0: for (std::size_t k = 0; k < n_.size(); ++k) acc += n_[k] * w_[k]; break;
    case 1: for (std::size_t k = 0; k < n_.size(); ++k) acc += x_[k] * n_[k] * w_[k]; break;
    default:
        for (std::size_t k = 0; k < n_.size(); ++k)
            acc += std::pow(x_[k], ell) * n_[k] * w_[k];
    }
    return acc;
}

double FVSolver::max_rate() const {
    const double top = cfg_.edges.back();
    switch (cfg_.kernel) {
    case KernelKind::Constant: return 2.0 * moment(0);
    case KernelKind::Additive: return top * moment(0) + moment(1);
    case KernelKind::Multiplicative: return top * moment(1);
    }
    throw std::logic_error("FVSolver: bad kernel");
}

double FVSolver::current_dt() const {
    if (!cfg_.dt_tracks_rate) return cfg_.dt;
    const double r = max_rate();
    return (r > 0.0 && rate0_ > 0.0) ? cfg_.dt * (rate0_ / r) : cfg_.dt;
}

void FVSolver::compute_flux() {
    const std::size_t M = n_.size();
    S0_[M] = S1_[M] = 0.0;
    for (std::size_t k = M; k-- > 0;) {
        S0_[k] = S0_[k + 1] + n_[k] * w_[k];
        S1_[k] = S1_[k + 1] + x_[k] * n_[k] * w_[k];
        xnw_[k] = x_[k] * n_[k] * w_[k];
    }
    if (cfg_.flux_limiter == FluxLimiter::Minmod && M >= 3) {
        slope_[0] = slope_[M - 1] = 0.0;
        for (std::size_t k = 1; k + 1 < M; ++k) {
            const double dl = (n_[k] - n_[k - 1]) / (x_[k] - x_[k - 1]);
            const double dr = (n_[k + 1] - n_[k]) / (x_[k + 1] - x_[k]);
            slope_[k] = (dl > 0.0 && dr > 0.0)   ? std::min(dl, dr)
                        : (dl < 0.0 && dr < 0.0) ? std::max(dl, dr)
                                                 : 0.0;
        }
    } else {
        std::fill(slope_.begin(), slope_.end(), 0.0);
    }

    edge_flux_[0] = 0.0;
    const KernelKind kernel = cfg_.kernel;
    parallel_blocks(M, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            const PairTab* row = &pairs_[i * (i + 1) / 2];
            double acc = 0.0;
            for (std::size_t j = 0; j <= i; ++j) {
                const PairTab& p = row[j];
                double P0 = 0.0, P1 = 0.0;
                if (p.alpha >= 0) {
                    const double na = n_[p.alpha], sa = slope_[p.alpha];
                    P0 = na * p.pw + sa * p.c1;
                    P1 = na * p.c2 + sa * p.c3;
                }
                double A;
                switch (kernel) {
                case KernelKind::Constant:
                    A = 2.0 * (S0_[p.from] + P0);
                    break;
                case KernelKind::Additive:
                    A = x_[j] * (S0_[p.from] + P0) + (S1_[p.from] + P1);
                    break;
                default:
                    A = x_[j] * (S1_[p.from] + P1);
                }
                acc += xnw_[j] * A;
            }
            edge_flux_[i + 1] = acc;
        }
    });
}

void FVSolver::step_by(double h) {
    const double rate = max_rate();
    if (h * rate > 0.5 * (1.0 + 1e-9)) {
        char msg[160];
        std::snprintf(msg, sizeof msg,
                      "dt-too-large: dt * max rate = %.3g exceeds the stability bound 0.5",
                      h * rate);
        throw std::runtime_error(msg);
    }
    compute_flux();
    const std::size_t M = n_.size();
    for (std::size_t k = 0; k < M; ++k)
        n_[k] -= h * (edge_flux_[k + 1] - edge_flux_[k]) / (w_[k] * x_[k]);
    lost_ += h * edge_flux_[M];
    t_ += h;
    for (std::size_t k = 0; k < M; ++k) {
        if (n_[k] < -1e-14) {
            char msg[160];
            std::snprintf(msg, sizeof msg, "positivity-loss: n(%.6g) = %.3g at t = %.6g",
                          x_[k], n_[k], t_);
            throw std::runtime_error(msg);
        }
        if (n_[k] < 0.0) n_[k] = 0.0;
    }
}

void FVSolver::step() { step_by(current_dt()); }

void FVSolver::run_until(double t_end) {
    if (t_end < t_ - 1e-12)
        throw std::invalid_argument("FVSolver::run_until: target lies in the past");
    while (t_end - t_ > 1e-12 * std::max(1.0, t_end))
        step_by(std::min(current_dt(), t_end - t_));
    t_ = t_end;
}

GriddedDensity FVSolver::density() const {
    GriddedDensity f;
    f.x = x_;
    f.v = n_;
    return f;
}

std::vector<GriddedDensity> solve(const GriddedDensity& n0, const SolverConfig& cfg,
                                  const std::vector<double>& checkpoints,
                                  const std::optional<std::string>& out_dir) {
    if (!std::is_sorted(checkpoints.begin(), checkpoints.end()))
        throw std::invalid_argument("solve: checkpoints must be increasing");
    if (!checkpoints.empty() && checkpoints.front() < 0.0)
        throw std::invalid_argument("solve: checkpoints must be nonnegative");
    if (cfg.kernel == KernelKind::Multiplicative && !checkpoints.empty() &&
        checkpoints.back() > 0.95)
        throw std::invalid_argument(
            "solve: multiplicative runs stop at t <= 0.95, before the gelation time");

    if (out_dir) std::filesystem::create_directories(*out_dir);
    FVSolver s(cfg);
    s.set_state(n0, 0.0);
    std::vector<GriddedDensity> out;
    out.reserve(checkpoints.size());
    for (double tc : checkpoints) {
        s.run_until(tc);
        out.push_back(s.density());
        if (out_dir) {
            char name[64];
            std::snprintf(name, sizeof name, "/n_t%g.csv", tc);
            write_density_csv(out.back(), *out_dir + name);
        }
    }
    return out;
}

} // namespace coag
