#include "coag/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "coag/interp.hpp"

namespace coag {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// how much larger the end value must be than its neighbor before the sup is
// declared unbracketed; converging plateaus sit well under this
constexpr double kFlatTol = 1e-4;

double ratio_at(double value, double eta, double kappa) {
    return std::abs(value) / std::pow(eta, kappa);
}

} // namespace

SupResult weighted_sup(const TransformCurve& curve, double kappa) {
    curve.validate();
    const auto& etas = curve.etas;
    const auto& vals = curve.values;
    const std::size_t n = etas.size();
    if (n < 3)
        throw std::invalid_argument("weighted_sup: need at least three grid points");

    std::size_t m = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = ratio_at(vals[i], etas[i], kappa);
        if (r > best) { best = r; m = i; }
    }
    if (best == 0.0) return {0.0, etas[m]};

    if (m == 0 || m == n - 1) {
        const double neighbor = ratio_at(vals[m == 0 ? 1 : n - 2],
                                         etas[m == 0 ? 1 : n - 2], kappa);
        if (best > neighbor * (1.0 + kFlatTol)) {
            std::ostringstream os;
            os << "sup-not-bracketed: weighted ratio still increasing at the "
               << (m == 0 ? "lower" : "upper") << " grid end (eta = " << etas[m]
               << ", kappa = " << kappa << "); extend the eta grid";
            throw std::runtime_error(os.str());
        }
        return {best, etas[m]};
    }

    // smooth the curve through the argmax neighborhood and polish the max
    std::vector<double> t(n), dlog;
    for (std::size_t i = 0; i < n; ++i) t[i] = std::log(etas[i]);
    CubicSpline sp = [&] {
        if (!curve.slopes.empty()) {
            dlog.resize(n);
            for (std::size_t i = 0; i < n; ++i) dlog[i] = curve.slopes[i] * etas[i];
            return CubicSpline::hermite(t, vals, dlog);
        }
        return CubicSpline::pchip(t, vals);
    }();
    auto phi = [&](double s) { return std::abs(sp.eval(s)) * std::exp(-kappa * s); };

    double a = t[m - 1], b = t[m + 1];
    const double invphi = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - invphi * (b - a), x2 = a + invphi * (b - a);
    double f1 = phi(x1), f2 = phi(x2);
    while (b - a > 1e-6) {
        if (f1 < f2) {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + invphi * (b - a); f2 = phi(x2);
        } else {
            b = x2; x2 = x1; f2 = f1;
            x1 = b - invphi * (b - a); f1 = phi(x1);
        }
    }
    const double s_star = 0.5 * (a + b);
    const double refined = phi(s_star);
    if (refined > best) return {refined, std::exp(s_star)};
    return {best, etas[m]};
}

TransformCurve curve_difference(const TransformCurve& a, const TransformCurve& b) {
    a.validate();
    b.validate();
    if (a.kind != b.kind)
        throw std::invalid_argument("curve_difference: transform kinds differ");
    if (a.etas.size() != b.etas.size())
        throw std::invalid_argument("curve_difference: grids differ in size");
    for (std::size_t i = 0; i < a.etas.size(); ++i)
        if (std::abs(a.etas[i] - b.etas[i]) > 1e-12 * a.etas[i])
            throw std::invalid_argument("curve_difference: grids differ");

    TransformCurve d;
    d.kind = a.kind;
    d.etas = a.etas;
    d.signed_values = true;
    d.values.resize(a.etas.size());
    const bool both_slopes = !a.slopes.empty() && !b.slopes.empty();
    if (both_slopes) d.slopes.resize(a.etas.size());
    for (std::size_t i = 0; i < a.etas.size(); ++i) {
        const double floor = 16.0 * (a.noise_abs + a.noise_rel * std::abs(a.values[i]) +
                                     b.noise_abs + b.noise_rel * std::abs(b.values[i]));
        const double diff = a.values[i] - b.values[i];
        d.values[i] = std::abs(diff) <= floor ? 0.0 : diff;
        if (both_slopes) d.slopes[i] = a.slopes[i] - b.slopes[i];
    }
    d.noise_abs = a.noise_abs + b.noise_abs;
    d.noise_rel = a.noise_rel + b.noise_rel;
    return d;
}

double distance(const GriddedDensity& g1, const GriddedDensity& g2,
                KernelKind kernel, double kappa) {
    const AdmissibleClass cls = admissible_class(kernel);
    const MomentVector m1 = compute_moments(g1), m2 = compute_moments(g2);
    for (int ell : {cls.moment_lo, cls.moment_hi}) {
        const double d = std::abs(m1.at(ell) - m2.at(ell));
        if (d > 1e-6 * std::max(1.0, std::abs(m1.at(ell)))) {
            std::ostringstream os;
            os << "moment-mismatch: M_" << ell << " differs by " << d
               << "; inputs do not share the kernel class normalization";
            throw std::runtime_error(os.str());
        }
    }
    const auto etas = default_eta_grid();
    TransformCurve c1, c2;
    switch (kernel) {
    case KernelKind::Constant:
        c1 = laplace(g1, etas); c2 = laplace(g2, etas); break;
    case KernelKind::Additive:
        c1 = bernstein(g1, etas); c2 = bernstein(g2, etas); break;
    case KernelKind::Multiplicative:
        c1 = mult_bernstein(g1, etas); c2 = mult_bernstein(g2, etas); break;
    }
    return weighted_sup(curve_difference(c1, c2), kappa).value;
}

FitResult fit_rate(const std::vector<double>& taus, const std::vector<double>& distances,
                   double window_lo, double window_hi) {
    if (taus.size() != distances.size() || taus.empty())
        throw std::invalid_argument("fit_rate: taus and distances must match");
    const double d0 = distances.front();
    std::size_t usable = 0;
    for (double d : distances)
        if (d > 10.0 * kEps * d0) ++usable;
    if (usable < 5)
        throw std::invalid_argument("fit_rate: need at least 5 checkpoints above noise");

    const double floor = 1e-13 * d0;
    std::vector<std::size_t> idx;
    bool floored_in_window = false;
    for (std::size_t i = 0; i < taus.size(); ++i) {
        if (taus[i] < window_lo - 1e-12 || taus[i] > window_hi + 1e-12) continue;
        if (distances[i] > floor) idx.push_back(i);
        else floored_in_window = true;
    }
    FitResult out;
    out.window_shrunk = floored_in_window;
    if (idx.size() < 2) {
        // window starved; fall back to every usable positive-tau point
        idx.clear();
        for (std::size_t i = 0; i < taus.size(); ++i)
            if (taus[i] > 0.0 && distances[i] > floor) idx.push_back(i);
        out.window_shrunk = true;
        if (idx.size() < 2)
            throw std::runtime_error("fit_rate: fewer than two points above the floor");
    }
    double st = 0, sy = 0, stt = 0, sty = 0;
    for (std::size_t i : idx) {
        const double y = std::log(distances[i]);
        st += taus[i]; sy += y; stt += taus[i] * taus[i]; sty += taus[i] * y;
    }
    const double n = static_cast<double>(idx.size());
    const double slope = (n * sty - st * sy) / (n * stt - st * st);
    out.rate = -slope;
    out.intercept = (sy - slope * st) / n;
    out.points_used = idx.size();
    return out;
}

double theorem_rate(KernelKind kernel, double kappa) {
    switch (kernel) {
    case KernelKind::Constant: return kappa - 1.0;
    case KernelKind::Additive:
    case KernelKind::Multiplicative: return 0.5 * (kappa - 2.0);
    }
    throw std::logic_error("theorem_rate: bad kernel");
}

std::string report_to_json(const ContractionReport& r) {
    nlohmann::ordered_json j;
    j["kernel"] = kernel_name(r.kernel);
    j["taus"] = r.taus;
    j["series"] = nlohmann::ordered_json::array();
    for (const auto& s : r.series) {
        nlohmann::ordered_json e;
        e["kappa"] = s.kappa;
        e["distances"] = s.distances;
        if (s.fit_skipped) {
            e["fitted_rate"] = nullptr;
            e["theorem_rate"] = s.theorem_rate;
            e["rate_error"] = nullptr;
        } else {
            e["fitted_rate"] = s.fitted_rate;
            e["theorem_rate"] = s.theorem_rate;
            e["rate_error"] = s.rate_error;
        }
        e["fit_window_shrunk"] = s.fit_window_shrunk;
        j["series"].push_back(std::move(e));
    }
    j["inequality_ok"] = r.inequality_ok;
    return j.dump(2) + "\n";
}

void write_report_json(const ContractionReport& r, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for write: " + path);
    os << report_to_json(r);
}

void write_report_csv(const ContractionReport& r, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for write: " + path);
    os << "tau,kappa,distance\n";
    char buf[128];
    for (std::size_t ti = 0; ti < r.taus.size(); ++ti) {
        for (const auto& s : r.series) {
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", r.taus[ti], s.kappa,
                          ti < s.distances.size() ? s.distances[ti] : 0.0);
            os << buf;
        }
    }
}

} // namespace coag
