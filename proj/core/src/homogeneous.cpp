#include "irds/homogeneous.hpp"

#include <cmath>

#include <fmt/format.h>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "irds/errors.hpp"

namespace irds {

namespace {

constexpr double kUnitSlack = 1e-12;

void require_unit(double x, std::string_view name) {
    if (!(x >= -kUnitSlack && x <= 1.0 + kUnitSlack))
        throw ConfigError(fmt::format("{} must lie in [0, 1] (got {:.12g})", name, x));
}

void require_time(double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw ConfigError(fmt::format("time must be nonnegative (got {})", t));
}

double offset_for(Frame frame, const NormalizedParams& p) {
    return frame == Frame::shifted ? frame_offset(Frame::shifted, p) : 0.0;
}

Pair cooperative_flow(Pair uv, double t, const NormalizedParams& p) {
    return {logistic_exact(uv.first, t), v_exact(uv.second, uv.first, t, p.lambda, p.gamma)};
}

}  // namespace

double logistic_exact(double u0, double t) {
    require_unit(u0, "u0");
    require_time(t);
    return u0 / (u0 + (1.0 - u0) * std::exp(-t));
}

double log_mass_Iu(double u0, double t) {
    require_unit(u0, "u0");
    require_time(t);
    return 1.0 + u0 * std::expm1(t);
}

double v_integral(double u0, double t, double lambda, double gamma) {
    require_unit(u0, "u0");
    require_time(t);
    if (t == 0.0) return 0.0;
    const double lg = lambda * gamma;
    auto f = [&](double s) { return std::exp(lambda * s - lg * std::log1p(u0 * std::expm1(s))); };
    double err = 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, 0.0, t, 20, 1e-13, &err);
}

double v_exact(double v0, double u0, double t, double lambda, double gamma) {
    require_unit(v0, "v0");
    const double w0 = 1.0 - v0;
    if (w0 == 0.0) return 1.0;
    const double growth = std::exp(lambda * t - lambda * gamma * std::log(log_mass_Iu(u0, t)));
    return 1.0 - w0 * growth / (1.0 + lambda * w0 * v_integral(u0, t, lambda, gamma));
}

Pair flow_exact(Frame frame, Pair value, double t, const NormalizedParams& params) {
    const double vbar = offset_for(frame, params);
    const Pair coop = to_cooperative(frame, value, vbar);
    return from_cooperative(frame, cooperative_flow(coop, t, params), vbar);
}

Pair season_map(Frame frame, Pair value, const NormalizedParams& p) {
    const double eta = p.eta;
    if (frame == Frame::cooperative) {
        const auto [u, v] = value;
        const double u_plus = (1.0 - p.fire_intensity(1.0 - v) * p.fire_mortality(u)) * u;
        const double v_plus = (1.0 - eta) * v + eta;
        return {logistic_exact(u_plus, p.tau), v_exact(v_plus, u_plus, p.tau, p.lambda, p.gamma)};
    }
    if (frame == Frame::shifted) {
        const double vbar = frame_offset(Frame::shifted, p);
        const auto [u, q] = value;
        const double u_plus = (1.0 - p.fire_intensity(1.0 - vbar - q) * p.fire_mortality(u)) * u;
        const double q_plus = (1.0 - eta) * q + eta * (1.0 - vbar);
        return {logistic_exact(u_plus, p.tau), v_exact(q_plus + vbar, u_plus, p.tau, p.lambda, p.gamma) - vbar};
    }
    const Pair coop = to_cooperative(frame, value, 0.0);
    return from_cooperative(frame, season_map(Frame::cooperative, coop, p), 0.0);
}

std::vector<Equilibrium> fixed_points(const NormalizedParams& params, Frame frame) {
    const bool grassland = params.R0() > 1.0;
    const double vbar = grassland ? params.vbar() : 0.0;
    if (frame == Frame::shifted) (void)frame_offset(Frame::shifted, params);
    std::vector<Equilibrium> out;
    out.push_back({"e0", from_cooperative(frame, {0.0, 1.0}, vbar)});
    out.push_back({"e_u", from_cooperative(frame, {1.0, 1.0}, vbar)});
    if (grassland) out.push_back({"e_v", from_cooperative(frame, {0.0, vbar}, vbar)});
    return out;
}

Jacobian jacobian_fd(Frame frame, Pair point, const NormalizedParams& params, double h) {
    const auto [b1, b2] =
        frame == Frame::shifted ? generation_bounds(frame, frame_offset(frame, params)) : flow_bounds(frame, 0.0);
    // Second-order one-sided stencils where the point sits on the edge of the map's domain.
    auto partial = [&](int comp) {
        const Bounds b = comp == 0 ? b1 : b2;
        const double x = comp == 0 ? point.first : point.second;
        auto at = [&](double offset) {
            Pair q = point;
            (comp == 0 ? q.first : q.second) = x + offset;
            return season_map(frame, q, params);
        };
        auto combine = [](Pair fa, double ca, Pair fb, double cb, Pair fc, double cc, double scale) {
            return Pair{(ca * fa.first + cb * fb.first + cc * fc.first) / scale,
                        (ca * fa.second + cb * fb.second + cc * fc.second) / scale};
        };
        if (x - h < b.lo) return combine(at(0.0), -3.0, at(h), 4.0, at(2.0 * h), -1.0, 2.0 * h);
        if (x + h > b.hi) return combine(at(0.0), 3.0, at(-h), -4.0, at(-2.0 * h), 1.0, 2.0 * h);
        return combine(at(-h), -1.0, at(h), 1.0, at(0.0), 0.0, 2.0 * h);
    };
    const Pair d0 = partial(0), d1 = partial(1);
    Jacobian j;
    j.J = {{{d0.first, d1.first}, {d0.second, d1.second}}};
    j.j21_numeric = true;
    const double tr = j.J[0][0] + j.J[1][1];
    const double det = j.J[0][0] * j.J[1][1] - j.J[0][1] * j.J[1][0];
    const double disc = std::sqrt(std::max(0.0, 0.25 * tr * tr - det));
    j.eigenvalues = {0.5 * tr + disc, 0.5 * tr - disc};
    return j;
}

Jacobian jacobian_at(std::string_view label, const NormalizedParams& p) {
    Jacobian j;
    if (label == "e0") {
        j.J = {{{std::exp(p.tau), 0.0}, {0.0, p.R0()}}};
    } else if (label == "e_u") {
        j.J = {{{std::exp(-p.tau), 0.0}, {0.0, p.R1()}}};
    } else if (label == "e_v") {
        if (!(p.R0() > 1.0)) throw ConfigError("e_v exists only when R0 > 1");
        const double R2 = p.R2();
        const Jacobian fd = jacobian_fd(Frame::shifted, {0.0, 0.0}, p);
        j.J = {{{R2, 0.0}, {fd.J[1][0], 1.0 / p.R0()}}};
        j.j21_numeric = true;
    } else {
        throw ConfigError(fmt::format("unknown equilibrium label '{}'", label));
    }
    j.eigenvalues = {j.J[0][0], j.J[1][1]};
    return j;
}

ThresholdReport classify(const NormalizedParams& p) {
    p.validate();
    ThresholdReport rep;
    rep.raw_units = false;
    rep.R0 = p.R0();
    rep.R1 = p.R1();
    const bool grassland = rep.R0 > 1.0;
    rep.vbar = grassland ? p.vbar() : 0.0;
    rep.Gbar = grassland ? 1.0 - rep.vbar : 0.0;
    rep.R2 = grassland ? p.R2() : 0.0;

    auto make = [&](std::string label, std::string_view key, Pair raw) {
        EquilibriumReport e{std::move(label), raw.first, raw.second, true, {}, Verdict::absent};
        e.eigenvalues = jacobian_at(key, p).eigenvalues;
        e.verdict = classify_eigenvalues(e.eigenvalues);
        return e;
    };
    rep.equilibria.push_back(make("E0", "e0", {0.0, 0.0}));
    rep.equilibria.push_back(make("E_T", "e_u", {1.0, 0.0}));
    if (grassland) {
        rep.equilibria.push_back(make("E_G", "e_v", {0.0, rep.Gbar}));
    } else {
        rep.equilibria.push_back({"E_G", 0.0, 0.0, false, {}, Verdict::absent});
    }
    return rep;
}

}  // namespace irds
