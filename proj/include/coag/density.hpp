#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace coag {

enum class KernelKind { Constant, Additive, Multiplicative };

const char* kernel_name(KernelKind k);
KernelKind kernel_from_name(const std::string& s);

// Homogeneity degree of the kernel and the time-change constant k.
int kernel_gamma(KernelKind k);      // 0, 1, 2
int kernel_k_constant(KernelKind k); // 1, 2, 1

// Which two moments are pinned to 1 and which higher moment must be finite.
struct AdmissibleClass {
    KernelKind kernel;
    int moment_lo;       // (0,1) constant, (1,2) additive, (2,3) multiplicative
    int moment_hi;
    int finiteness_moment; // 2, 3, 4
};
AdmissibleClass admissible_class(KernelKind k);

// Analytic extension c * x^{-p} * e^{-rate x} used below x_1 and above x_M.
// G_add carries p = 3/2, rate = 1/2; exponential-type data usually need none.
struct Extension {
    double p = 0.0;
    double c = 0.0;
    double rate = 0.5;
};

struct GriddedDensity {
    std::vector<double> x;      // strictly increasing, positive
    std::vector<double> v;      // density values, >= 0 unless signed_values
    std::optional<Extension> ext;
    bool signed_values = false;

    void validate() const;      // throws std::invalid_argument on bad shape
};

// Moments M_0..M_4. Orders whose head extension integral diverges are marked;
// reading them through at() raises the moment-divergence error.
struct MomentVector {
    std::array<double, 5> m{};
    std::array<bool, 5> divergent{};

    double at(int ell) const;   // throws std::runtime_error("moment-divergence ...")
};

MomentVector compute_moments(const GriddedDensity& f, int max_order = 4);

// x -> a f(b x) with the two class moments scaled to one. Closed-form solve:
// b = M_{p+1}/M_p, a = b^{p+1}/M_p for class indices (p, p+1).
GriddedDensity normalize_to_class(const GriddedDensity& f, const AdmissibleClass& cls);

// Self-similar profiles sampled on the default grid with their extensions.
GriddedDensity exact_profile(KernelKind k);
GriddedDensity exact_profile(KernelKind k, const std::vector<double>& grid);

// Default size grid: 600 points, geometric on [1e-4, 1e3].
std::vector<double> default_size_grid();

// Two-column CSV (x,value); metadata lines '# tail p c [rate]' and '# signed'.
void write_density_csv(const GriddedDensity& f, const std::string& path);
GriddedDensity read_density_csv(const std::string& path);

} // namespace coag
