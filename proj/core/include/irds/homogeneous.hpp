#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "irds/frames.hpp"
#include "irds/savanna.hpp"

namespace irds {

/// u0 / (u0 + (1 - u0) e^{-t}).
double logistic_exact(double u0, double t);

/// I_u(t) = 1 + u0 (e^t - 1) = exp of the integral of the logistic solution over [0, t].
double log_mass_Iu(double u0, double t);

/// Integral over [0, t] of e^{lambda s} I_u(s)^{-lambda gamma}, by adaptive Gauss-Kronrod.
double v_integral(double u0, double t, double lambda, double gamma);

/// Cooperative-frame v(t) for the flow started at (u0, v0).
double v_exact(double v0, double u0, double t, double lambda, double gamma);

/// Exact inter-impulse flow of a homogeneous state in any frame.
Pair flow_exact(Frame frame, Pair value, double t, const NormalizedParams& params);

/// End-of-season to end-of-season map: impulse followed by the exact flow over one season.
/// Cooperative and shifted frames use their own closed forms; raw and increasing go through the cooperative one.
Pair season_map(Frame frame, Pair value, const NormalizedParams& params);

struct Equilibrium {
    std::string label;  // "e0", "e_u", "e_v"
    Pair value;
};

/// e0 and e_u always; e_v only when R0 > 1. Values are end-of-season states.
std::vector<Equilibrium> fixed_points(const NormalizedParams& params, Frame frame = Frame::cooperative);

struct Jacobian {
    std::array<std::array<double, 2>, 2> J{};
    std::array<double, 2> eigenvalues{};
    /// True when J21 came from finite differences rather than a closed form.
    bool j21_numeric = false;
};

/// Jacobian of the shifted-frame season map at "e0", "e_u" or "e_v".
Jacobian jacobian_at(std::string_view label, const NormalizedParams& params);

/// Central-difference Jacobian of season_map.
Jacobian jacobian_fd(Frame frame, Pair point, const NormalizedParams& params, double h = 1e-6);

/// Thresholds and stability in normalized units; equilibria given as raw-frame (U, V) pairs.
ThresholdReport classify(const NormalizedParams& params);

}  // namespace irds
