#include "irds/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "irds/errors.hpp"

namespace irds {

namespace {

constexpr double kPeriodTolerance = 1e-12;
constexpr double kKernelCutoff = 1e-18;

}  // namespace

DiffusionScheme parse_diffusion_scheme(std::string_view name) {
    if (name == "crank_nicolson_neumann" || name == "cn") return DiffusionScheme::crank_nicolson_neumann;
    if (name == "gaussian_convolution_periodic" || name == "gaussian")
        return DiffusionScheme::gaussian_convolution_periodic;
    throw ConfigError(fmt::format("unknown diffusion scheme '{}'", name));
}

std::string_view to_string(DiffusionScheme scheme) {
    return scheme == DiffusionScheme::crank_nicolson_neumann ? "crank_nicolson_neumann"
                                                             : "gaussian_convolution_periodic";
}

std::size_t steps_per_season(const SolverConfig& solver, double tau) {
    if (!(solver.dt > 0.0) || !std::isfinite(solver.dt))
        throw ConfigError(fmt::format("dt must be positive (got {})", solver.dt));
    const double ratio = tau / solver.dt;
    const double steps = std::round(ratio);
    if (steps < 1.0 || std::abs(steps * solver.dt - tau) > kPeriodTolerance * std::max(1.0, tau))
        throw ConfigError(fmt::format("dt = {:.12g} does not divide tau = {:.12g}", solver.dt, tau));
    return static_cast<std::size_t>(steps);
}

double fit_dt_to_period(double requested, double tau) {
    if (!(requested > 0.0)) throw ConfigError(fmt::format("dt must be positive (got {})", requested));
    const double steps = std::ceil(tau / requested - 1e-9);
    return tau / std::max(1.0, steps);
}

Pair reaction_rhs(Frame frame, Pair value, const NormalizedParams& p, double vbar) {
    const auto [a, b] = value;
    const double lam = p.lambda, lg = p.lambda * p.gamma;
    switch (frame) {
        case Frame::raw: return {a * (1.0 - a), lam * b * (1.0 - b - p.gamma * a)};
        case Frame::cooperative: return {a * (1.0 - a), -lam * b * (1.0 - b) + lg * a * (1.0 - b)};
        case Frame::shifted: {
            const double v = b + vbar;
            return {a * (1.0 - a), -lam * v * (1.0 - v) + lg * a * (1.0 - v)};
        }
        case Frame::increasing: return {-a * (1.0 - a), lam * b * (1.0 - b) - lg * b * (1.0 - a)};
    }
    return {0.0, 0.0};
}

Diffuser::Diffuser(std::size_t n, double dx, double d, double dt, DiffusionScheme scheme) : scheme_(scheme), n_(n) {
    if (n < 3) throw ConfigError("diffusion requires at least 3 nodes");
    if (!(d >= 0.0) || !(dt > 0.0) || !(dx > 0.0))
        throw ConfigError(fmt::format("diffusion requires d >= 0, dt > 0, dx > 0 (got {}, {}, {})", d, dt, dx));
    if (d == 0.0) {
        identity_ = true;
        return;
    }
    if (scheme == DiffusionScheme::crank_nicolson_neumann) {
        const double r_total = d * dt / (dx * dx);
        substeps_ = static_cast<std::size_t>(std::max(1.0, std::ceil(r_total)));
        r_ = r_total / static_cast<double>(substeps_);
        // Implicit matrix I - (r/2) L with reflecting ends.
        c_prime_.resize(n);
        inv_denom_.resize(n);
        const double diag = 1.0 + r_, off = -0.5 * r_;
        double prev_c = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double sub = i == 0 ? 0.0 : (i == n - 1 ? -r_ : off);
            const double sup = i == 0 ? -r_ : (i == n - 1 ? 0.0 : off);
            const double denom = diag - sub * prev_c;
            inv_denom_[i] = 1.0 / denom;
            c_prime_[i] = sup / denom;
            prev_c = c_prime_[i];
        }
        scratch_.resize(n);
        return;
    }
    const double sigma = std::sqrt(2.0 * d * dt);
    if (sigma < dx)
        throw ConfigError(fmt::format(
            "gaussian diffusion needs kernel width sqrt(2 d dt) = {:.6g} >= dx = {:.6g}; refine dx or raise dt", sigma,
            dx));
    const double period = static_cast<double>(n) * dx;
    std::vector<double> w(n, 0.0);
    const int images = static_cast<int>(std::ceil(12.0 * sigma / period)) + 1;
    for (std::size_t k = 0; k < n; ++k) {
        double s = 0.0;
        for (int m = -images; m <= images; ++m) {
            const double x = static_cast<double>(k) * dx + m * period;
            s += std::exp(-x * x / (2.0 * sigma * sigma));
        }
        w[k] = s;
    }
    double total = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        if (w[k] <= kKernelCutoff * w[0]) continue;
        residues_.push_back(k);
        kernel_.push_back(w[k]);
        total += w[k];
    }
    for (double& v : kernel_) v /= total;
    scratch_.resize(n);
}

void Diffuser::apply(std::span<double> u) const {
    if (identity_) return;
    if (u.size() != n_) throw ConfigError("diffusion operator applied to a field of the wrong size");
    const std::size_t n = n_;
    if (scheme_ == DiffusionScheme::crank_nicolson_neumann) {
        auto& rhs = scratch_;
        const double half = 0.5 * r_;
        for (std::size_t s = 0; s < substeps_; ++s) {
            rhs[0] = (1.0 - r_) * u[0] + r_ * u[1];
            for (std::size_t i = 1; i + 1 < n; ++i) rhs[i] = (1.0 - r_) * u[i] + half * (u[i - 1] + u[i + 1]);
            rhs[n - 1] = (1.0 - r_) * u[n - 1] + r_ * u[n - 2];
            // Forward sweep then back substitution.
            u[0] = rhs[0] * inv_denom_[0];
            for (std::size_t i = 1; i < n; ++i) {
                const double sub = i == n - 1 ? -r_ : -half;
                u[i] = (rhs[i] - sub * u[i - 1]) * inv_denom_[i];
            }
            for (std::size_t i = n - 1; i-- > 0;) u[i] -= c_prime_[i] * u[i + 1];
        }
        return;
    }
    auto& out = scratch_;
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < kernel_.size(); ++j) s += kernel_[j] * u[(i + n - residues_[j]) % n];
        out[i] = s;
    }
    std::copy(out.begin(), out.end(), u.begin());
}

std::vector<double> diffusion_step(std::span<const double> values, double dx, double d, double dt,
                                   DiffusionScheme scheme) {
    std::vector<double> out(values.begin(), values.end());
    Diffuser(values.size(), dx, d, dt, scheme).apply(out);
    return out;
}

void project_onto(std::span<double> values, Bounds bounds, double tol, std::string_view what) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        double& v = values[i];
        if (!std::isfinite(v)) throw NumericalError(fmt::format("{}: non-finite value at node {}", what, i));
        if (v < bounds.lo - tol || v > bounds.hi + tol)
            throw NumericalError(fmt::format("{}: value {:.12g} at node {} leaves [{:.12g}, {:.12g}]", what, v, i,
                                             bounds.lo, bounds.hi));
        v = std::clamp(v, bounds.lo, bounds.hi);
    }
}

TimeTauMap::TimeTauMap(const Grid1D& grid, Frame frame, const NormalizedParams& params, const SolverConfig& solver)
    : frame_(frame),
      params_(params),
      solver_(solver),
      vbar_(frame_offset(frame, params)),
      steps_(steps_per_season(solver, params.tau)),
      n_(grid.size()),
      diff_first_(grid.size(), grid.dx(), params.d_u, 0.5 * solver.dt, solver.scheme),
      diff_second_(grid.size(), grid.dx(), params.d_v, 0.5 * solver.dt, solver.scheme) {}

void TimeTauMap::react(SystemState& s) const {
    const double h = solver_.dt;
    for (std::size_t i = 0; i < n_; ++i) {
        const Pair y{s.first[i], s.second[i]};
        const Pair k1 = reaction_rhs(frame_, y, params_, vbar_);
        const Pair k2 =
            reaction_rhs(frame_, {y.first + 0.5 * h * k1.first, y.second + 0.5 * h * k1.second}, params_, vbar_);
        const Pair k3 =
            reaction_rhs(frame_, {y.first + 0.5 * h * k2.first, y.second + 0.5 * h * k2.second}, params_, vbar_);
        const Pair k4 = reaction_rhs(frame_, {y.first + h * k3.first, y.second + h * k3.second}, params_, vbar_);
        s.first[i] = y.first + h / 6.0 * (k1.first + 2.0 * k2.first + 2.0 * k3.first + k4.first);
        s.second[i] = y.second + h / 6.0 * (k1.second + 2.0 * k2.second + 2.0 * k3.second + k4.second);
    }
}

void TimeTauMap::project(SystemState& s) const {
    const auto [b1, b2] = flow_bounds(frame_, vbar_);
    project_onto(s.first, b1, solver_.projection_tolerance, "first component");
    project_onto(s.second, b2, solver_.projection_tolerance, "second component");
}

void TimeTauMap::apply(SystemState& s) const {
    if (s.frame != frame_)
        throw ConfigError(fmt::format("time-tau map built for frame {} applied to a {} state", to_string(frame_),
                                      to_string(s.frame)));
    if (s.first.size() != n_ || s.second.size() != n_)
        throw ConfigError("time-tau map applied to a state on a different grid");
    if (std::abs(s.t) > kPeriodTolerance * std::max(1.0, params_.tau))
        throw ConfigError(fmt::format("time-tau map expects a season-start state (t = {:.12g})", s.t));
    project(s);
    for (std::size_t k = 0; k < steps_; ++k) {
        diff_first_.apply(s.first);
        diff_second_.apply(s.second);
        react(s);
        diff_first_.apply(s.first);
        diff_second_.apply(s.second);
        project(s);
    }
    s.t = params_.tau;
}

SystemState time_tau_map(SystemState state, const NormalizedParams& params, const SolverConfig& solver) {
    TimeTauMap(state.grid, state.frame, params, solver).apply(state);
    return state;
}

SystemState change_frame(SystemState state, Frame target, const NormalizedParams& params) {
    if (state.frame == target) return state;
    const double vbar =
        (state.frame == Frame::shifted || target == Frame::shifted) ? frame_offset(Frame::shifted, params) : 0.0;
    for (std::size_t i = 0; i < state.first.size(); ++i) {
        const Pair v = convert({state.first[i], state.second[i]}, state.frame, target, vbar);
        state.first[i] = v.first;
        state.second[i] = v.second;
    }
    state.frame = target;
    return state;
}

}  // namespace irds
