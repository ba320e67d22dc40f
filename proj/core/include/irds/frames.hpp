#pragma once

#include <string_view>
#include <utility>

#include "irds/savanna.hpp"

namespace irds {

/// Coordinate frame of a two-component state, all in normalized units.
///
/// - raw:         (U, V) trees and grass.
/// - cooperative: (u, v) = (U, 1 - V).
/// - shifted:     (u, q) = (U, 1 - V - vbar); requires R0 > 1.
/// - increasing:  (u, v) = (1 - U, V).
enum class Frame { raw, cooperative, shifted, increasing };

Frame parse_frame(std::string_view name);
std::string_view to_string(Frame frame);

using Pair = std::pair<double, double>;

/// vbar for frames that need it; throws ConfigError for the shifted frame when R0 <= 1.
double frame_offset(Frame frame, const NormalizedParams& params);

Pair to_cooperative(Frame from, Pair value, double vbar);
Pair from_cooperative(Frame to, Pair value, double vbar);
Pair convert(Pair value, Frame from, Frame to, double vbar);

/// Closed box of one component.
struct Bounds {
    double lo = 0.0, hi = 1.0;
};

/// Box that the inter-impulse flow leaves invariant: the image of [0,1]^2.
std::pair<Bounds, Bounds> flow_bounds(Frame frame, double vbar);

/// Box holding end-of-season states in [e_v, e_u] order; narrower than
/// flow_bounds only in the shifted frame, where q is in [0, 1 - vbar].
std::pair<Bounds, Bounds> generation_bounds(Frame frame, double vbar);

}  // namespace irds
