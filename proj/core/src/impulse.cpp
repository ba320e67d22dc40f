#include "irds/impulse.hpp"

#include <cmath>

#include <fmt/format.h>

#include "irds/errors.hpp"

namespace irds {

namespace {

constexpr double kPhaseTolerance = 1e-12;

bool at_season_end(const SystemState& s, double tau) {
    return std::abs(s.t - tau) <= kPhaseTolerance * std::max(1.0, tau);
}

bool at_season_start(const SystemState& s, double tau) { return std::abs(s.t) <= kPhaseTolerance * std::max(1.0, tau); }

}  // namespace

ImpulseKind parse_impulse_kind(std::string_view name) {
    if (name == "fire") return ImpulseKind::fire;
    if (name == "none") return ImpulseKind::none;
    throw ConfigError(fmt::format("unknown impulse kind '{}' (expected fire or none)", name));
}

std::string_view to_string(ImpulseKind kind) { return kind == ImpulseKind::fire ? "fire" : "none"; }

ImpulseSpec ImpulseSpec::for_frame(Frame frame, const NormalizedParams& params, ImpulseKind kind) {
    params.validate();
    ImpulseSpec s;
    s.frame_ = frame;
    s.kind_ = kind;
    s.params_ = params;
    s.vbar_ = frame_offset(frame, params);
    return s;
}

double ImpulseSpec::intensity(double second) const {
    switch (frame_) {
        case Frame::raw:
        case Frame::increasing: return params_.fire_intensity(second);
        case Frame::cooperative: return params_.fire_intensity(1.0 - second);
        case Frame::shifted: return params_.fire_intensity(1.0 - vbar_ - second);
    }
    return 0.0;
}

double ImpulseSpec::mortality(double first) const {
    return params_.fire_mortality(frame_ == Frame::increasing ? 1.0 - first : first);
}

Pair ImpulseSpec::apply(Pair value) const {
    if (kind_ == ImpulseKind::none) return value;
    const auto [a, b] = value;
    const double eta = params_.eta;
    const double burn = intensity(b) * mortality(a);
    switch (frame_) {
        case Frame::raw: return {(1.0 - burn) * a, (1.0 - eta) * b};
        case Frame::cooperative: return {(1.0 - burn) * a, (1.0 - eta) * b + eta};
        case Frame::shifted: return {(1.0 - burn) * a, (1.0 - eta) * b + eta * (1.0 - vbar_)};
        case Frame::increasing: return {a + burn * (1.0 - a), (1.0 - eta) * b};
    }
    return value;
}

SystemState impulse_map(SystemState state, const ImpulseSpec& spec) {
    if (state.frame != spec.frame())
        throw ConfigError(
            fmt::format("impulse for frame {} applied to a {} state", to_string(spec.frame()), to_string(state.frame)));
    for (std::size_t i = 0; i < state.first.size(); ++i) {
        const Pair v = spec.apply({state.first[i], state.second[i]});
        state.first[i] = v.first;
        state.second[i] = v.second;
    }
    ++state.generation;
    state.t = 0.0;
    return state;
}

Recursion::Recursion(const Grid1D& grid, const NormalizedParams& params, const SolverConfig& solver,
                     const ImpulseSpec& spec)
    : flow_(grid, spec.frame(), params, solver), spec_(spec) {}

void Recursion::step(SystemState& state) const {
    const double tau = flow_.params().tau;
    if (at_season_start(state, tau)) {
        flow_.apply(state);
        state = impulse_map(std::move(state), spec_);
    } else if (at_season_end(state, tau)) {
        state = impulse_map(std::move(state), spec_);
        flow_.apply(state);
    } else {
        throw ConfigError(fmt::format("recursion step needs t = 0 or t = tau (got t = {:.12g})", state.t));
    }
}

SystemState recursion_step(SystemState state, const NormalizedParams& params, const SolverConfig& solver,
                           const ImpulseSpec& spec) {
    Recursion(state.grid, params, solver, spec).step(state);
    return state;
}

SystemState run_generations(SystemState initial, long n_gens, const NormalizedParams& params,
                            const SolverConfig& solver, const ImpulseSpec& spec,
                            const std::vector<GenerationObserver>& observers) {
    if (n_gens < 1) throw ConfigError(fmt::format("generation count must be at least 1 (got {})", n_gens));
    const Recursion rec(initial.grid, params, solver, spec);
    for (long g = 0; g < n_gens; ++g) {
        rec.step(initial);
        for (const auto& obs : observers) obs(initial);
    }
    return initial;
}

}  // namespace irds
