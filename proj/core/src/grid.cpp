#include "irds/grid.hpp"

#include <cmath>

#include <fmt/format.h>

#include "irds/errors.hpp"

namespace irds {

Grid1D::Grid1D(double x_min, double x_max, std::size_t n_cells) : x_min_(x_min), x_max_(x_max), n_(n_cells) {
    if (!std::isfinite(x_min) || !std::isfinite(x_max) || !(x_min < x_max))
        throw ConfigError(fmt::format("grid requires x_min < x_max (got {} and {})", x_min, x_max));
    if (n_cells < 3) throw ConfigError(fmt::format("grid requires at least 3 cells (got {})", n_cells));
    dx_ = (x_max - x_min) / static_cast<double>(n_cells - 1);
}

std::vector<double> Grid1D::nodes() const {
    std::vector<double> xs(n_);
    for (std::size_t i = 0; i < n_; ++i) xs[i] = x(i);
    return xs;
}

SystemState SystemState::constant(Frame frame, const Grid1D& grid, Pair value, double t) {
    SystemState s;
    s.frame = frame;
    s.grid = grid;
    s.first.assign(grid.size(), value.first);
    s.second.assign(grid.size(), value.second);
    s.t = t;
    return s;
}

std::span<double> SystemState::component(int index) {
    if (index == 0) return first;
    if (index == 1) return second;
    throw ConfigError(fmt::format("component index must be 0 or 1 (got {})", index));
}

std::span<const double> SystemState::component(int index) const {
    if (index == 0) return first;
    if (index == 1) return second;
    throw ConfigError(fmt::format("component index must be 0 or 1 (got {})", index));
}

}  // namespace irds
