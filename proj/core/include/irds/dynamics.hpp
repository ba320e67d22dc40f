#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "irds/frames.hpp"
#include "irds/grid.hpp"
#include "irds/savanna.hpp"

namespace irds {

enum class DiffusionScheme {
    crank_nicolson_neumann,         ///< Reflecting ends; substeps keep d*dt/dx^2 <= 1.
    gaussian_convolution_periodic,  ///< Circular convolution with the sampled heat kernel.
};

DiffusionScheme parse_diffusion_scheme(std::string_view name);
std::string_view to_string(DiffusionScheme scheme);

struct SolverConfig {
    double dt = 0.0;  ///< Reaction substep; must divide tau.
    DiffusionScheme scheme = DiffusionScheme::crank_nicolson_neumann;
    double projection_tolerance = 1e-9;
};

/// Number of macro steps per season; throws ConfigError unless dt divides tau within 1e-12.
std::size_t steps_per_season(const SolverConfig& solver, double tau);

/// Largest dt <= requested that divides tau exactly.
double fit_dt_to_period(double requested, double tau);

/// Reaction rates of the inter-impulse system in the given frame.
Pair reaction_rhs(Frame frame, Pair value, const NormalizedParams& params, double vbar);

/// Linear diffusion operator for one component over a fixed step.
class Diffuser {
public:
    Diffuser(std::size_t n, double dx, double d, double dt, DiffusionScheme scheme);

    void apply(std::span<double> values) const;

private:
    DiffusionScheme scheme_;
    std::size_t n_;
    bool identity_ = false;
    // Crank-Nicolson
    std::size_t substeps_ = 1;
    double r_ = 0.0;
    std::vector<double> c_prime_, inv_denom_;
    // Gaussian
    std::vector<std::size_t> residues_;  // out[i] += kernel_[j] * in[i - residues_[j] mod n]
    std::vector<double> kernel_;
    mutable std::vector<double> scratch_;
};

/// One diffusion step of `values` with coefficient d.
std::vector<double> diffusion_step(std::span<const double> values, double dx, double d, double dt,
                                   DiffusionScheme scheme);

/// Strang-split solution operator over one season [0, tau].
class TimeTauMap {
public:
    TimeTauMap(const Grid1D& grid, Frame frame, const NormalizedParams& params, const SolverConfig& solver);

    /// Advances a t = 0 state to t = tau in place.
    void apply(SystemState& state) const;

    Frame frame() const { return frame_; }
    double vbar() const { return vbar_; }
    const NormalizedParams& params() const { return params_; }
    const SolverConfig& solver() const { return solver_; }

private:
    void react(SystemState& state) const;
    void project(SystemState& state) const;

    Frame frame_;
    NormalizedParams params_;
    SolverConfig solver_;
    double vbar_ = 0.0;
    std::size_t steps_ = 0;
    std::size_t n_ = 0;
    Diffuser diff_first_, diff_second_;
};

SystemState time_tau_map(SystemState state, const NormalizedParams& params, const SolverConfig& solver);

/// Pointwise affine change of coordinates.
SystemState change_frame(SystemState state, Frame target, const NormalizedParams& params);

/// Throws NumericalError if any value leaves `bounds` by more than tol; clamps smaller excursions.
void project_onto(std::span<double> values, Bounds bounds, double tol, std::string_view what);

}  // namespace irds
