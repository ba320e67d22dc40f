#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "irds/frames.hpp"

namespace irds {

/// Uniform node grid on [x_min, x_max] with n_cells nodes, endpoints included.
class Grid1D {
public:
    Grid1D() = default;
    /// Throws ConfigError unless x_min < x_max and n_cells >= 3.
    Grid1D(double x_min, double x_max, std::size_t n_cells);

    double x_min() const { return x_min_; }
    double x_max() const { return x_max_; }
    std::size_t size() const { return n_; }
    double dx() const { return dx_; }
    double x(std::size_t i) const { return x_min_ + static_cast<double>(i) * dx_; }
    std::vector<double> nodes() const;

private:
    double x_min_ = 0.0, x_max_ = 1.0;
    std::size_t n_ = 0;
    double dx_ = 0.0;
};

/// Two-component field on a grid, tagged with its frame and its position in
/// the generation cycle (t in [0, tau] within generation `generation`).
struct SystemState {
    Frame frame = Frame::cooperative;
    Grid1D grid;
    std::vector<double> first, second;
    long generation = 0;
    double t = 0.0;

    static SystemState constant(Frame frame, const Grid1D& grid, Pair value, double t = 0.0);

    std::span<double> component(int index);
    std::span<const double> component(int index) const;
};

}  // namespace irds
