#pragma once

#include <functional>
#include <string_view>
#include <vector>

#include "irds/dynamics.hpp"
#include "irds/frames.hpp"
#include "irds/grid.hpp"
#include "irds/savanna.hpp"

namespace irds {

enum class ImpulseKind {
    fire,  ///< Grass loss and grass-driven tree mortality.
    none,  ///< Identity; reduces the tree equation to Fisher-KPP.
};

ImpulseKind parse_impulse_kind(std::string_view name);
std::string_view to_string(ImpulseKind kind);

/// Pointwise impulse for one frame, with the fire intensity and mortality
/// composed with that frame's change of variables.
class ImpulseSpec {
public:
    static ImpulseSpec for_frame(Frame frame, const NormalizedParams& params, ImpulseKind kind = ImpulseKind::fire);

    Frame frame() const { return frame_; }
    ImpulseKind kind() const { return kind_; }
    double vbar() const { return vbar_; }

    /// Fire intensity as a function of the frame's second component.
    double intensity(double second) const;
    /// Tree mortality as a function of the frame's first component.
    double mortality(double first) const;
    /// The two pointwise update rules.
    Pair apply(Pair value) const;

private:
    Frame frame_ = Frame::cooperative;
    ImpulseKind kind_ = ImpulseKind::fire;
    NormalizedParams params_;
    double vbar_ = 0.0;
};

/// Applies H to a state at t = tau; returns the next generation at t = 0.
SystemState impulse_map(SystemState state, const ImpulseSpec& spec);

/// One generation of the recursion, bound to a grid and frame.
///
/// The step is phase-aware: a season-start state (t = 0) is advanced by the
/// time-tau map then H, landing at t = 0 of the next generation; an
/// end-of-season state (t = tau) gets H then the time-tau map, landing at
/// t = tau of the next generation. Constant states e_0, e_u, e_v are fixed
/// points of the end-of-season form.
class Recursion {
public:
    Recursion(const Grid1D& grid, const NormalizedParams& params, const SolverConfig& solver, const ImpulseSpec& spec);

    void step(SystemState& state) const;

    const TimeTauMap& flow() const { return flow_; }
    const ImpulseSpec& impulse() const { return spec_; }

private:
    TimeTauMap flow_;
    ImpulseSpec spec_;
};

SystemState recursion_step(SystemState state, const NormalizedParams& params, const SolverConfig& solver,
                           const ImpulseSpec& spec);

using GenerationObserver = std::function<void(const SystemState&)>;

/// Applies n_gens recursion steps, calling every observer after each generation.
SystemState run_generations(SystemState initial, long n_gens, const NormalizedParams& params,
                            const SolverConfig& solver, const ImpulseSpec& spec,
                            const std::vector<GenerationObserver>& observers = {});

}  // namespace irds
