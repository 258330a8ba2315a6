#include "coag/transforms.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "coag/grid.hpp"
#include "coag/quadrature.hpp"
#include "coag/special.hpp"

namespace coag {

namespace {

constexpr double kQuadratureRel = 1e-9;   // validated transform accuracy budget

void require_positive_etas(const std::vector<double>& etas)
{
    if (etas.empty())
        throw std::invalid_argument("transform: empty eta grid");
    for (double e : etas)
        if (!(e > 0.0))
            throw std::domain_error("transform: eta must be positive");
}

double max_abs(const std::vector<double>& v)
{
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

// shared quadrature core; weight(x, eta) is the transform kernel against f
TransformCurve transform_quad(const GriddedDensity& f, const std::vector<double>& etas,
                              TransformKind kind, double xpow)
{
    f.validate();
    require_positive_etas(etas);
    TransformCurve out;
    out.etas = etas;
    out.kind = kind;
    out.signed_values = f.signed_values;
    out.values.resize(etas.size());

    const std::size_t n = f.x.size();
    std::vector<double> F(n), Fd(n);
    const bool has_ext = f.ext && f.ext->c != 0.0;
    // extension of x^xpow * f is c x^{xpow - p} e^{-rate x}
    const double b = has_ext ? xpow - f.ext->p : 0.0;
    out.slopes.resize(etas.size());

    for (std::size_t k = 0; k < etas.size(); ++k) {
        const double eta = etas[k];
        double val = 0.0, slope = 0.0;
        if (kind == TransformKind::Laplace) {
            for (std::size_t i = 0; i < n; ++i) {
                F[i] = std::exp(-eta * f.x[i]) * std::pow(f.x[i], xpow) * f.v[i];
                Fd[i] = f.x[i] * F[i];
            }
            val = integrate_log_grid(f.x, F);
            slope = -integrate_log_grid(f.x, Fd);
            if (has_ext) {
                val += f.ext->c * head_integral(b, f.ext->rate + eta, f.x.front());
                val += f.ext->c * tail_integral(b, f.ext->rate + eta, f.x.back());
                slope -= f.ext->c * head_integral(b + 1.0, f.ext->rate + eta, f.x.front());
                slope -= f.ext->c * tail_integral(b + 1.0, f.ext->rate + eta, f.x.back());
            }
        } else {
            for (std::size_t i = 0; i < n; ++i) {
                const double w = std::pow(f.x[i], xpow) * f.v[i];
                F[i] = -std::expm1(-eta * f.x[i]) * w;
                Fd[i] = f.x[i] * std::exp(-eta * f.x[i]) * w;
            }
            val = integrate_log_grid(f.x, F);
            slope = integrate_log_grid(f.x, Fd);
            if (has_ext) {
                val += f.ext->c * (head_integral(b, f.ext->rate, f.x.front()) -
                                   head_integral(b, f.ext->rate + eta, f.x.front()));
                val += f.ext->c * (tail_integral(b, f.ext->rate, f.x.back()) -
                                   tail_integral(b, f.ext->rate + eta, f.x.back()));
                slope += f.ext->c * head_integral(b + 1.0, f.ext->rate + eta, f.x.front());
                slope += f.ext->c * tail_integral(b + 1.0, f.ext->rate + eta, f.x.back());
            }
        }
        out.values[k] = val;
        out.slopes[k] = slope;
    }
    out.noise_rel = kQuadratureRel;
    out.noise_abs = 1e-13 * max_abs(out.values);
    return out;
}

} // namespace

void TransformCurve::validate() const
{
    if (etas.size() != values.size() || etas.empty())
        throw std::invalid_argument("TransformCurve: sizes");
    if (!(etas.front() > 0.0) || !strictly_increasing(etas))
        throw std::invalid_argument("TransformCurve: eta grid must be positive increasing");
    if (!slopes.empty() && slopes.size() != etas.size())
        throw std::invalid_argument("TransformCurve: slope size mismatch");
}

std::vector<double> default_eta_grid()
{
    return geometric_grid(1e-6, 1e6, 400);
}

TransformCurve laplace(const GriddedDensity& f, const std::vector<double>& etas)
{
    return transform_quad(f, etas, TransformKind::Laplace, 0.0);
}

TransformCurve bernstein(const GriddedDensity& f, const std::vector<double>& etas)
{
    if (f.ext && f.ext->c != 0.0 && f.ext->p >= 2.0)
        throw std::runtime_error("moment-divergence at order 1: Bernstein undefined");
    return transform_quad(f, etas, TransformKind::Bernstein, 0.0);
}

TransformCurve mult_bernstein(const GriddedDensity& f, const std::vector<double>& etas)
{
    if (f.ext && f.ext->c != 0.0 && f.ext->p >= 3.0)
        throw std::runtime_error("moment-divergence at order 2: Bernstein of xg undefined");
    return transform_quad(f, etas, TransformKind::Bernstein, 1.0);
}

ClosedFormTransform closed_form_lookup(const std::string& name)
{
    if (name == "const_profile_laplace" || name == "exp") {
        return {TransformKind::Laplace, [](double e) { return 1.0 / (1.0 + e); },
                [](double e) { return -1.0 / ((1.0 + e) * (1.0 + e)); }};
    }
    if (name == "exp_bernstein") {
        return {TransformKind::Bernstein, [](double e) { return e / (1.0 + e); },
                [](double e) { return 1.0 / ((1.0 + e) * (1.0 + e)); }};
    }
    if (name == "G_add_bernstein") {
        return {TransformKind::Bernstein,
                [](double e) { return std::sqrt(1.0 + 2.0 * e) - 1.0; },
                [](double e) { return 1.0 / std::sqrt(1.0 + 2.0 * e); }};
    }
    // optional amplitude prefix: "A*gamma(s,r)" is the transform of A times
    // the gamma(s,r) probability density
    double amp = 1.0;
    std::string base = name;
    if (const auto star = name.find('*'); star != std::string::npos) {
        amp = std::stod(name.substr(0, star));
        base = name.substr(star + 1);
    }
    if (base.rfind("gamma(", 0) == 0) {
        const auto close = base.find(')');
        if (close == std::string::npos)
            throw std::invalid_argument("closed_form: bad gamma spec: " + name);
        const std::string args = base.substr(6, close - 6);
        const auto comma = args.find(',');
        if (comma == std::string::npos)
            throw std::invalid_argument("closed_form: bad gamma spec: " + name);
        const double shape = std::stod(args.substr(0, comma));
        const double rate = std::stod(args.substr(comma + 1));
        std::string suffix = base.substr(close + 1);
        if (!suffix.empty() && suffix.front() == ' ') suffix.erase(0, 1);
        // L[gamma pdf] = (rate/(rate+eta))^shape; B = mass - L
        auto lap = [shape, rate, amp](double e) {
            return amp * std::pow(rate / (rate + e), shape);
        };
        auto dlap = [shape, rate, amp](double e) {
            return -amp * shape / rate * std::pow(rate / (rate + e), shape + 1.0);
        };
        if (suffix.empty() || suffix == "laplace")
            return {TransformKind::Laplace, lap, dlap};
        if (suffix == "bernstein")
            return {TransformKind::Bernstein,
                    [lap, amp](double e) { return amp - lap(e); },
                    [dlap](double e) { return -dlap(e); }};
        throw std::invalid_argument("closed_form: unknown suffix in " + name);
    }
    throw std::invalid_argument("closed_form: unknown name: " + name);
}

TransformCurve closed_form(const std::string& name, const std::vector<double>& etas)
{
    require_positive_etas(etas);
    const ClosedFormTransform cf = closed_form_lookup(name);
    TransformCurve out;
    out.etas = etas;
    out.kind = cf.kind;
    out.values.resize(etas.size());
    out.slopes.resize(etas.size());
    for (std::size_t i = 0; i < etas.size(); ++i) {
        out.values[i] = cf.value(etas[i]);
        out.slopes[i] = cf.slope(etas[i]);
    }
    const double eps = 2.220446049250313e-16;
    out.noise_abs = 4.0 * eps;
    out.noise_rel = 4.0 * eps;
    return out;
}

void write_curve_csv(const TransformCurve& c, const std::string& path)
{
    std::ofstream os(path);
    if (!os)
        throw std::runtime_error("cannot open for write: " + path);
    os << "# kind " << (c.kind == TransformKind::Laplace ? "laplace" : "bernstein") << "\n";
    if (c.signed_values)
        os << "# signed\n";
    char buf[128];
    for (std::size_t i = 0; i < c.etas.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", c.etas[i], c.values[i]);
        os << buf;
    }
}

TransformCurve read_curve_csv(const std::string& path)
{
    std::ifstream is(path);
    if (!is)
        throw std::runtime_error("cannot open: " + path);
    TransformCurve c;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream ls(line.substr(1));
            std::string tag;
            ls >> tag;
            if (tag == "kind") {
                std::string k;
                ls >> k;
                if (k == "laplace") c.kind = TransformKind::Laplace;
                else if (k == "bernstein") c.kind = TransformKind::Bernstein;
                else throw std::runtime_error("bad curve kind: " + k);
            } else if (tag == "signed") {
                c.signed_values = true;
            }
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error("bad curve CSV line: " + line);
        // strtod, not stod: subnormal tail values must survive a round trip
        auto field = [&](const std::string& s) {
            const char* p = s.c_str();
            char* end = nullptr;
            const double v = std::strtod(p, &end);
            if (end == p)
                throw std::runtime_error("bad curve CSV line: " + line);
            return v;
        };
        c.etas.push_back(field(line.substr(0, comma)));
        c.values.push_back(field(line.substr(comma + 1)));
    }
    c.validate();
    return c;
}

} // namespace coag
