#pragma once

#include <array>
#include <string>

#include "irds/config.hpp"
#include "irds/savanna.hpp"

namespace irds::test {

inline SavannaParams table(int which) {
    return load_savanna_params(std::string(IRDS_CONFIG_DIR) + (which == 1 ? "/table1.cfg" : "/table2.cfg"));
}

inline NormalizedParams normalized(int which) { return normalize(table(which)); }

/// Classical RK4 with a fixed step, independent of the library's integrator.
template <std::size_t N, class F>
std::array<double, N> rk4(F f, std::array<double, N> y, double t, int steps) {
    const double h = t / steps;
    auto axpy = [](const std::array<double, N>& a, double s, const std::array<double, N>& b) {
        std::array<double, N> r{};
        for (std::size_t i = 0; i < N; ++i) r[i] = a[i] + s * b[i];
        return r;
    };
    for (int i = 0; i < steps; ++i) {
        const auto k1 = f(y);
        const auto k2 = f(axpy(y, 0.5 * h, k1));
        const auto k3 = f(axpy(y, 0.5 * h, k2));
        const auto k4 = f(axpy(y, h, k3));
        for (std::size_t j = 0; j < N; ++j) y[j] += h / 6.0 * (k1[j] + 2 * k2[j] + 2 * k3[j] + k4[j]);
    }
    return y;
}

/// Cooperative-frame vector field written out directly.
inline std::array<double, 2> cooperative_field(const std::array<double, 2>& y, double lambda, double gamma) {
    const double u = y[0], v = y[1];
    return {u * (1 - u), -lambda * v * (1 - v) + lambda * gamma * u * (1 - v)};
}

}  // namespace irds::test
