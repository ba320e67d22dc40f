#include "irds/frames.hpp"

#include <fmt/format.h>

#include "irds/errors.hpp"

namespace irds {

Frame parse_frame(std::string_view name) {
    if (name == "raw") return Frame::raw;
    if (name == "cooperative") return Frame::cooperative;
    if (name == "shifted") return Frame::shifted;
    if (name == "increasing") return Frame::increasing;
    throw ConfigError(fmt::format("unknown frame '{}' (expected raw, cooperative, shifted or increasing)", name));
}

std::string_view to_string(Frame frame) {
    switch (frame) {
        case Frame::raw: return "raw";
        case Frame::cooperative: return "cooperative";
        case Frame::shifted: return "shifted";
        case Frame::increasing: return "increasing";
    }
    return "raw";
}

double frame_offset(Frame frame, const NormalizedParams& params) {
    if (frame != Frame::shifted) return params.R0() > 1.0 ? params.vbar() : 0.0;
    if (!(params.R0() > 1.0))
        throw ConfigError(fmt::format("shifted frame requires R0 > 1 (R0 = {:.12g})", params.R0()));
    return params.vbar();
}

Pair to_cooperative(Frame from, Pair value, double vbar) {
    const auto [a, b] = value;
    switch (from) {
        case Frame::raw: return {a, 1.0 - b};
        case Frame::cooperative: return {a, b};
        case Frame::shifted: return {a, b + vbar};
        case Frame::increasing: return {1.0 - a, 1.0 - b};
    }
    return value;
}

Pair from_cooperative(Frame to, Pair value, double vbar) {
    const auto [u, v] = value;
    switch (to) {
        case Frame::raw: return {u, 1.0 - v};
        case Frame::cooperative: return {u, v};
        case Frame::shifted: return {u, v - vbar};
        case Frame::increasing: return {1.0 - u, 1.0 - v};
    }
    return value;
}

Pair convert(Pair value, Frame from, Frame to, double vbar) {
    if (from == to) return value;
    return from_cooperative(to, to_cooperative(from, value, vbar), vbar);
}

std::pair<Bounds, Bounds> flow_bounds(Frame frame, double vbar) {
    if (frame == Frame::shifted) return {{0.0, 1.0}, {-vbar, 1.0 - vbar}};
    return {{0.0, 1.0}, {0.0, 1.0}};
}

std::pair<Bounds, Bounds> generation_bounds(Frame frame, double vbar) {
    if (frame == Frame::shifted) return {{0.0, 1.0}, {0.0, 1.0 - vbar}};
    return flow_bounds(frame, vbar);
}

}  // namespace irds
