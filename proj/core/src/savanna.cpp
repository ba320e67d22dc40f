#include "irds/savanna.hpp"

#include <cmath>

#include <fmt/format.h>

#include "irds/errors.hpp"

namespace irds {

namespace {

constexpr double kUnitMargin = 1e-12;
constexpr double kHyperbolicMargin = 1e-9;

void require(bool ok, std::string_view what) {
    if (!ok) throw ConfigError(std::string(what));
}

void require_finite_nonnegative(double v, std::string_view name) {
    if (!std::isfinite(v) || v < 0.0)
        throw ConfigError(fmt::format("{} must be finite and nonnegative (got {})", name, v));
}

struct RawRatios {
    double gT, gG;  // rainfall-dependent growth rates
    double KT, KG;  // rainfall-dependent carrying capacities
    double RT, RG;
    double KTp, KGp;
};

RawRatios ratios(const SavannaParams& p) {
    p.validate();
    RawRatios r{};
    r.gT = growth_rate(p.gamma_T, p.b_T, p.W);
    r.gG = growth_rate(p.gamma_G, p.b_G, p.W);
    r.KT = carrying_capacity(p.c_T, p.d_T_shape, p.a_T, p.W);
    r.KG = carrying_capacity(p.c_G, p.d_G_shape, p.a_G, p.W);
    if (!(p.delta_T > 0.0) || !(r.gT / p.delta_T > 1.0 + kUnitMargin))
        throw ConfigError(
            fmt::format("tree persistence requires R_T = gamma_T(W)/delta_T > 1 (gamma_T(W)={:.12g}, delta_T={:.12g})",
                        r.gT, p.delta_T));
    if (!(p.delta_G > 0.0) || !(r.gG / p.delta_G > 1.0 + kUnitMargin))
        throw ConfigError(
            fmt::format("grass persistence requires R_G = gamma_G(W)/delta_G > 1 (gamma_G(W)={:.12g}, delta_G={:.12g})",
                        r.gG, p.delta_G));
    r.RT = r.gT / p.delta_T;
    r.RG = r.gG / p.delta_G;
    r.KTp = r.KT * (1.0 - 1.0 / r.RT);
    r.KGp = r.KG * (1.0 - 1.0 / r.RG);
    return r;
}

}  // namespace

void SavannaParams::validate() const {
    const std::pair<double, std::string_view> fields[] = {
        {c_G, "c_G"},
        {c_T, "c_T"},
        {b_G, "b_G"},
        {b_T, "b_T"},
        {a_G, "a_G"},
        {a_T, "a_T"},
        {d_G_shape, "d_G_shape"},
        {d_T_shape, "d_T_shape"},
        {gamma_G, "gamma_G"},
        {gamma_T, "gamma_T"},
        {delta_G, "delta_G"},
        {delta_T, "delta_T"},
        {eta, "eta"},
        {lambda_fT_min, "lambda_fT_min"},
        {lambda_fT_max, "lambda_fT_max"},
        {p_T, "p_T"},
        {alpha_G, "alpha_G"},
        {eta_TG, "eta_TG"},
        {diff_T, "d_T_diff"},
        {diff_G, "d_G_diff"},
        {W, "W"},
        {tau_tilde, "tau_tilde"},
    };
    for (const auto& [v, name] : fields) require_finite_nonnegative(v, name);
    require(eta < 1.0, "eta must satisfy 0 <= eta < 1");
    require(lambda_fT_min <= lambda_fT_max && lambda_fT_max <= 1.0,
            "fire mortality bounds must satisfy 0 <= lambda_fT_min <= lambda_fT_max <= 1");
    require(W > 0.0, "W must be positive");
    require(tau_tilde > 0.0, "tau_tilde must be positive");
}

void NormalizedParams::validate() const {
    const double all[] = {lambda, gamma, tau, eta, alpha, p, a_min, a_max, d_u, d_v};
    for (double v : all)
        if (!std::isfinite(v)) throw ConfigError("normalized parameters must be finite");
    require(lambda > 0.0, "lambda must be positive");
    require(tau > 0.0, "tau must be positive");
    require(gamma >= 0.0, "gamma must be nonnegative");
    require(eta >= 0.0 && eta < 1.0, "eta must satisfy 0 <= eta < 1");
    require(alpha > 0.0, "alpha must be positive");
    require(p >= 0.0, "p must be nonnegative");
    require(a_min > 0.0 && a_min <= a_max && a_max <= 1.0, "psi bounds must satisfy 0 < a_min <= a_max <= 1");
    require(d_u >= 0.0 && d_v >= 0.0, "diffusion coefficients must be nonnegative");
}

double NormalizedParams::R0() const { return (1.0 - eta) * std::exp(lambda * tau); }

double NormalizedParams::R1() const { return (1.0 - eta) * std::exp(lambda * tau * (1.0 - gamma)); }

double NormalizedParams::vbar() const { return eta / ((1.0 - eta) * std::expm1(lambda * tau)); }

double NormalizedParams::R2() const { return (1.0 - a_max * fire_intensity(1.0 - vbar())) * std::exp(tau); }

double NormalizedParams::fire_intensity(double V) const {
    const double V2 = V * V;
    return V2 / (V2 + alpha * alpha);
}

double NormalizedParams::fire_mortality(double U) const { return a_min + (a_max - a_min) * std::exp(-p * U); }

double Scales::space() const { return std::sqrt(rate); }

double growth_rate(double gamma_max, double b, double W) {
    if (!(W > 0.0)) throw ConfigError(fmt::format("rainfall W must be positive (got {})", W));
    if (!(b >= 0.0)) throw ConfigError(fmt::format("half-saturation b must be nonnegative (got {})", b));
    return gamma_max * W / (b + W);
}

double carrying_capacity(double c, double d_shape, double a, double W) {
    if (!(c > 0.0)) throw ConfigError(fmt::format("carrying capacity c must be positive (got {})", c));
    if (!(d_shape >= 0.0)) throw ConfigError(fmt::format("shape d must be nonnegative (got {})", d_shape));
    return c / (1.0 + d_shape * std::exp(-a * W));
}

double fire_intensity(double G, double alpha_G) {
    if (!(G >= 0.0)) throw ConfigError(fmt::format("grass biomass must be nonnegative (got {})", G));
    if (!(alpha_G > 0.0)) throw ConfigError(fmt::format("alpha_G must be positive (got {})", alpha_G));
    const double G2 = G * G;
    return G2 / (G2 + alpha_G * alpha_G);
}

double fire_mortality(double T, const SavannaParams& params) {
    if (!(T >= 0.0)) throw ConfigError(fmt::format("tree biomass must be nonnegative (got {})", T));
    return params.lambda_fT_min + (params.lambda_fT_max - params.lambda_fT_min) * std::exp(-params.p_T * T);
}

NormalizedParams normalize(const SavannaParams& params) {
    const RawRatios r = ratios(params);
    const double k = params.delta_T * (r.RT - 1.0);
    NormalizedParams n;
    n.tau = k * params.tau_tilde;
    n.lambda = params.delta_G * (r.RG - 1.0) / k;
    n.gamma = params.eta_TG * r.KTp / (params.delta_G * (r.RG - 1.0));
    n.eta = params.eta;
    n.alpha = params.alpha_G / r.KGp;
    n.p = params.p_T * r.KTp;
    n.a_min = params.lambda_fT_min;
    n.a_max = params.lambda_fT_max;
    n.d_u = params.diff_T;
    n.d_v = params.diff_G;
    n.validate();
    return n;
}

Scales scales(const SavannaParams& params) {
    const RawRatios r = ratios(params);
    return Scales{r.KTp, r.KGp, params.delta_T * (r.RT - 1.0)};
}

std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::las: return "LAS";
        case Verdict::unstable: return "unstable";
        case Verdict::nonhyperbolic: return "nonhyperbolic";
        case Verdict::absent: return "absent";
    }
    return "absent";
}

Verdict classify_eigenvalues(const std::array<double, 2>& eigenvalues) {
    bool unstable = false;
    for (double ev : eigenvalues) {
        const double m = std::abs(ev);
        if (std::abs(m - 1.0) <= kHyperbolicMargin) return Verdict::nonhyperbolic;
        if (m > 1.0) unstable = true;
    }
    return unstable ? Verdict::unstable : Verdict::las;
}

const EquilibriumReport& ThresholdReport::at(std::string_view label) const {
    for (const auto& e : equilibria)
        if (e.label == label) return e;
    throw Error(fmt::format("no equilibrium labelled {}", label));
}

ThresholdReport thresholds_raw(const SavannaParams& params) {
    const RawRatios r = ratios(params);
    const double grass_exp = (r.gG - params.delta_G) * params.tau_tilde;
    const double tree_exp = (r.gT - params.delta_T) * params.tau_tilde;

    ThresholdReport rep;
    rep.raw_units = true;
    rep.R0 = (1.0 - params.eta) * std::exp(grass_exp);
    rep.R1 = (1.0 - params.eta) * std::exp(grass_exp - params.eta_TG * r.KTp * params.tau_tilde);
    rep.vbar = params.eta / ((1.0 - params.eta) * std::expm1(grass_exp));
    const bool grassland = rep.R0 > 1.0;
    rep.Gbar = grassland ? (1.0 - rep.vbar) * r.KGp : 0.0;
    rep.R2 =
        grassland ? (1.0 - params.lambda_fT_max * fire_intensity(rep.Gbar, params.alpha_G)) * std::exp(tree_exp) : 0.0;

    EquilibriumReport e0{"E0", 0.0, 0.0, true, {std::exp(tree_exp), rep.R0}, Verdict::absent};
    e0.verdict = classify_eigenvalues(e0.eigenvalues);
    EquilibriumReport eT{"E_T", r.KTp, 0.0, true, {std::exp(-tree_exp), rep.R1}, Verdict::absent};
    eT.verdict = classify_eigenvalues(eT.eigenvalues);
    EquilibriumReport eG{"E_G", 0.0, rep.Gbar, grassland, {0.0, 0.0}, Verdict::absent};
    if (grassland) {
        eG.eigenvalues = {rep.R2, 1.0 / rep.R0};
        eG.verdict = classify_eigenvalues(eG.eigenvalues);
    }
    rep.equilibria = {e0, eT, eG};
    return rep;
}

ThresholdReport to_raw_units(ThresholdReport report, const Scales& s) {
    if (report.raw_units) return report;
    report.raw_units = true;
    report.Gbar *= s.K_G_prime;
    for (auto& e : report.equilibria) {
        e.trees *= s.K_T_prime;
        e.grass *= s.K_G_prime;
    }
    return report;
}

}  // namespace irds
