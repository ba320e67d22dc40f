#pragma once

// Savanna tree-grass model with periodic fires: raw parameters, the
// rainfall-dependent functional forms, normalization to dimensionless
// variables and the closed-form thresholds in raw units.

#include <array>
#include <string>
#include <string_view>
#include <vector>

namespace irds {

/// Raw ecological parameters.
///
/// `d_G_shape`/`d_T_shape` are the sigmoid inflection controls of the carrying
/// capacities, distinct from the diffusion coefficients `diff_G` and `diff_T`.
struct SavannaParams {
    double c_G = 0, c_T = 0;              // max carrying capacities [t/ha]
    double b_G = 0, b_T = 0;              // half-saturation rainfall [mm/yr]
    double a_G = 0, a_T = 0;              // sigmoid steepness [yr/mm]
    double d_G_shape = 0, d_T_shape = 0;  // sigmoid inflection controls [-]
    double gamma_G = 0, gamma_T = 0;      // max growth rates [1/yr]
    double delta_G = 0, delta_T = 0;      // loss rates [1/yr]
    double eta = 0;                       // grass fire loss fraction [-]
    double lambda_fT_min = 0;             // min fire-induced tree mortality [-]
    double lambda_fT_max = 0;             // max fire-induced tree mortality [-]
    double p_T = 0;                       // mortality shape [ha/t]
    double alpha_G = 0;                   // half-intensity grass biomass [t/ha]
    double eta_TG = 0;                    // tree-on-grass suppression [ha/(t yr)]
    double diff_T = 0, diff_G = 0;        // diffusion coefficients [space^2/yr]
    double W = 0;                         // rainfall [mm/yr]
    double tau_tilde = 0;                 // fire period [yr]

    /// Throws ConfigError naming the first violated invariant.
    void validate() const;
};

/// Dimensionless parameters of the normalized system.
struct NormalizedParams {
    double lambda = 0;  // relative grass growth
    double gamma = 0;   // competition
    double tau = 0;     // fire period
    double eta = 0;
    double alpha = 0;  // half-intensity grass level
    double p = 0;      // mortality shape
    double a_min = 0, a_max = 0;
    double d_u = 0, d_v = 0;

    void validate() const;

    double R0() const;
    double R1() const;
    /// (1 - a_max w_V(1 - vbar)) e^tau; meaningful when R0 > 1.
    double R2() const;
    /// Grass deficit at the grassland equilibrium, eta / ((1-eta)(e^{lambda tau} - 1)).
    double vbar() const;

    /// Fire intensity as a function of normalized grass V.
    double fire_intensity(double V) const;
    /// Fire-induced tree mortality as a function of normalized trees U.
    double fire_mortality(double U) const;
};

/// Scale factors linking the raw and normalized systems.
struct Scales {
    double K_T_prime = 0;  // tree biomass unit [t/ha]
    double K_G_prime = 0;  // grass biomass unit [t/ha]
    double rate = 0;       // delta_T (R_T - 1) [1/yr]; t_norm = rate * t_raw

    /// Normalized distance per raw distance (sqrt(rate)).
    double space() const;
};

double growth_rate(double gamma_max, double b, double W);
double carrying_capacity(double c, double d_shape, double a, double W);
/// w_G(G) = G^2 / (G^2 + alpha_G^2).
double fire_intensity(double G, double alpha_G);
/// psi(T) = lambda_min + (lambda_max - lambda_min) exp(-p_T T).
double fire_mortality(double T, const SavannaParams& params);

NormalizedParams normalize(const SavannaParams& params);
Scales scales(const SavannaParams& params);

enum class Verdict { las, unstable, nonhyperbolic, absent };
std::string_view to_string(Verdict v);

struct EquilibriumReport {
    std::string label;            // "E0" (bare), "E_T" (forest), "E_G" (grassland)
    double trees = 0, grass = 0;  // raw (t/ha) or normalized (U, V) values
    bool exists = true;
    std::array<double, 2> eigenvalues{};
    Verdict verdict = Verdict::absent;
};

struct ThresholdReport {
    bool raw_units = false;
    double R0 = 0, R1 = 0, R2 = 0;
    double vbar = 0;                            // normalized grass deficit at E_G
    double Gbar = 0;                            // grassland equilibrium grass level in the report's units
    std::vector<EquilibriumReport> equilibria;  // E0, E_T, E_G in that order

    const EquilibriumReport& at(std::string_view label) const;
};

/// Thresholds, equilibria and stability evaluated directly from raw parameters.
ThresholdReport thresholds_raw(const SavannaParams& params);

/// Converts a normalized report (U, V units) to raw biomass units.
ThresholdReport to_raw_units(ThresholdReport report, const Scales& scales);

/// Verdict from one-step eigenvalues; nonhyperbolic when any |ev| is within 1e-9 of 1.
Verdict classify_eigenvalues(const std::array<double, 2>& eigenvalues);

}  // namespace irds
