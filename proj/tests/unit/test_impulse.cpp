#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "irds/errors.hpp"
#include "irds/homogeneous.hpp"
#include "irds/impulse.hpp"
#include "support.hpp"

using namespace irds;

namespace {

constexpr Frame kFrames[] = {Frame::raw, Frame::cooperative, Frame::shifted, Frame::increasing};

SolverConfig solver_for(const NormalizedParams& p, int per_season = 200) {
    return SolverConfig{p.tau / per_season, DiffusionScheme::crank_nicolson_neumann};
}

}  // namespace

TEST_CASE("impulse kind names") {
    CHECK(parse_impulse_kind("fire") == ImpulseKind::fire);
    CHECK(parse_impulse_kind("none") == ImpulseKind::none);
    CHECK_THROWS_AS(parse_impulse_kind("flood"), ConfigError);
}

TEST_CASE("raw frame without grass leaves trees unchanged") {
    const auto p = test::normalized(1);
    const auto spec = ImpulseSpec::for_frame(Frame::raw, p);
    for (double U : {0.0, 0.3, 1.0}) CHECK(spec.apply({U, 0.0}) == Pair{U, 0.0});
    const auto h = spec.apply({0.4, 0.8});
    CHECK(h.second == doctest::Approx((1 - p.eta) * 0.8).epsilon(1e-15));
    CHECK(h.first == doctest::Approx((1 - p.fire_intensity(0.8) * p.fire_mortality(0.4)) * 0.4).epsilon(1e-15));
}

TEST_CASE("shifted frame impulse examples") {
    for (int which : {1, 2}) {
        const auto p = test::normalized(which);
        const double vbar = p.vbar();
        const auto spec = ImpulseSpec::for_frame(Frame::shifted, p);
        const auto h0 = spec.apply({0, 0});
        CHECK(h0.first == 0.0);
        CHECK(h0.second == doctest::Approx(p.eta * (1 - vbar)).epsilon(1e-15));
        // The season flow returns the burnt bare-grass state to e_v.
        const auto back = flow_exact(Frame::shifted, h0, p.tau, p);
        CHECK(std::abs(back.first) < 1e-12);
        CHECK(std::abs(back.second) < 1e-10);

        const auto hu = spec.apply({1, 1 - vbar});
        CHECK(hu.first == 1.0);
        CHECK(hu.second == doctest::Approx(1 - vbar).epsilon(1e-15));
        CHECK(spec.intensity(1 - vbar) == 0.0);
    }
}

TEST_CASE("impulses agree across frames") {
    const auto p = test::normalized(2);
    const double vbar = p.vbar();
    std::mt19937_64 rng(44);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const auto raw = ImpulseSpec::for_frame(Frame::raw, p);
    for (int k = 0; k < 200; ++k) {
        const Pair x{unif(rng), unif(rng)};
        const Pair expected = raw.apply(x);
        for (Frame f : kFrames) {
            const Pair got =
                convert(ImpulseSpec::for_frame(f, p).apply(convert(x, Frame::raw, f, vbar)), f, Frame::raw, vbar);
            CHECK(std::abs(got.first - expected.first) < 1e-14);
            CHECK(std::abs(got.second - expected.second) < 1e-14);
        }
    }
}

TEST_CASE("disabled impulse is the identity") {
    const auto p = test::normalized(1);
    for (Frame f : kFrames) {
        const auto spec = ImpulseSpec::for_frame(f, p, ImpulseKind::none);
        CHECK(spec.apply({0.3, 0.6}) == Pair{0.3, 0.6});
    }
}

TEST_CASE("impulse map bookkeeping") {
    const auto p = test::normalized(1);
    const Grid1D grid(0.0, 1.0, 4);
    auto s = SystemState::constant(Frame::cooperative, grid, {0.5, 0.5}, p.tau);
    s.generation = 7;
    const auto out = impulse_map(s, ImpulseSpec::for_frame(Frame::cooperative, p));
    CHECK(out.generation == 8);
    CHECK(out.t == 0.0);
    CHECK_THROWS_AS(impulse_map(s, ImpulseSpec::for_frame(Frame::raw, p)), ConfigError);
}

TEST_CASE("H preserves order exactly in every frame") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int which : {1, 2}) {
        const auto p = test::normalized(which);
        for (Frame f : kFrames) {
            const auto spec = ImpulseSpec::for_frame(f, p);
            const auto [b1, b2] = generation_bounds(f, p.vbar());
            // The raw frame is ordered competitively: trees up, grass down.
            const bool competitive = f == Frame::raw;
            for (int k = 0; k < 2000; ++k) {
                double a = unif(rng), b = unif(rng), c = unif(rng), d = unif(rng);
                if (a > b) std::swap(a, b);
                if (c > d) std::swap(c, d);
                if (competitive) std::swap(c, d);
                const Pair lo{b1.lo + a * (b1.hi - b1.lo), b2.lo + c * (b2.hi - b2.lo)};
                const Pair hi{b1.lo + b * (b1.hi - b1.lo), b2.lo + d * (b2.hi - b2.lo)};
                const Pair hlo = spec.apply(lo), hhi = spec.apply(hi);
                CHECK(hlo.first <= hhi.first);
                if (competitive)
                    CHECK(hlo.second >= hhi.second);
                else
                    CHECK(hlo.second <= hhi.second);
            }
        }
    }
}

TEST_CASE("cooperative grass impulse lands in [eta, 1]") {
    const auto p = test::normalized(1);
    const auto spec = ImpulseSpec::for_frame(Frame::cooperative, p);
    for (int i = 0; i <= 1000; ++i) {
        const double v = i / 1000.0;
        const double h2 = spec.apply({0.5, v}).second;
        CHECK(h2 >= p.eta);
        CHECK(h2 <= 1.0);
    }
}

TEST_CASE("constant equilibria are fixed by the recursion") {
    for (int which : {1, 2}) {
        const auto p = test::normalized(which);
        const Grid1D grid(0.0, 10.0, 51);
        const Recursion rec(grid, p, solver_for(p), ImpulseSpec::for_frame(Frame::shifted, p));
        for (const auto& e : fixed_points(p, Frame::shifted)) {
            auto s = SystemState::constant(Frame::shifted, grid, e.value, p.tau);
            for (int n = 0; n < 5; ++n) rec.step(s);
            CHECK(s.generation == 5);
            CHECK(s.t == p.tau);
            for (std::size_t i = 0; i < grid.size(); ++i) {
                CHECK(std::abs(s.first[i] - e.value.first) <= 1e-7);
                CHECK(std::abs(s.second[i] - e.value.second) <= 1e-7);
            }
        }
    }
}

TEST_CASE("zero end-of-season state in the shifted frame is fixed") {
    const auto p = test::normalized(1);
    const Grid1D grid(0.0, 10.0, 51);
    auto s = SystemState::constant(Frame::shifted, grid, {0, 0}, p.tau);
    s = run_generations(s, 10, p, solver_for(p), ImpulseSpec::for_frame(Frame::shifted, p));
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(s.first[i] == 0.0);
        CHECK(std::abs(s.second[i]) <= 1e-7);
    }
}

TEST_CASE("recursion on constant fields matches the homogeneous season map") {
    std::mt19937_64 rng(73);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int which : {1, 2}) {
        const auto p = test::normalized(which);
        const Grid1D grid(0.0, 1.0, 3);
        for (Frame f : kFrames) {
            const auto [b1, b2] = generation_bounds(f, p.vbar());
            for (int k = 0; k < 10; ++k) {
                const Pair x{b1.lo + unif(rng) * (b1.hi - b1.lo), b2.lo + unif(rng) * (b2.hi - b2.lo)};
                const auto s = recursion_step(SystemState::constant(f, grid, x, p.tau), p, solver_for(p),
                                              ImpulseSpec::for_frame(f, p));
                const Pair expected = season_map(f, x, p);
                CHECK(std::abs(s.first[1] - expected.first) <= 1e-6);
                CHECK(std::abs(s.second[1] - expected.second) <= 1e-6);
            }
        }
    }
}

TEST_CASE("season-start states are advanced by the flow then the impulse") {
    const auto p = test::normalized(1);
    const Grid1D grid(0.0, 1.0, 3);
    const auto spec = ImpulseSpec::for_frame(Frame::cooperative, p);
    const Pair x{0.4, 0.3};
    const auto s = recursion_step(SystemState::constant(Frame::cooperative, grid, x, 0.0), p, solver_for(p), spec);
    const Pair expected = spec.apply(flow_exact(Frame::cooperative, x, p.tau, p));
    CHECK(s.t == 0.0);
    CHECK(s.generation == 1);
    CHECK(std::abs(s.first[0] - expected.first) <= 1e-6);
    CHECK(std::abs(s.second[0] - expected.second) <= 1e-6);
}

TEST_CASE("Q preserves order on random pairs between e_v and e_u") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int which : {1, 2}) {
        auto p = test::normalized(which);
        p.d_u = 0.01;
        p.d_v = 0.02;
        const double vbar = p.vbar();
        const Grid1D grid(0.0, 20.0, 200);
        const Recursion rec(grid, p, solver_for(p, 100), ImpulseSpec::for_frame(Frame::shifted, p));
        double worst = 0.0;
        for (int k = 0; k < 10; ++k) {
            auto lo = SystemState::constant(Frame::shifted, grid, {0, 0}, p.tau);
            auto hi = lo;
            for (std::size_t i = 0; i < grid.size(); ++i) {
                double a = unif(rng), b = unif(rng), c = unif(rng), d = unif(rng);
                if (a > b) std::swap(a, b);
                if (c > d) std::swap(c, d);
                lo.first[i] = a;
                hi.first[i] = b;
                lo.second[i] = c * (1 - vbar);
                hi.second[i] = d * (1 - vbar);
            }
            rec.step(lo);
            rec.step(hi);
            for (std::size_t i = 0; i < grid.size(); ++i)
                worst = std::max({worst, lo.first[i] - hi.first[i], lo.second[i] - hi.second[i]});
        }
        CHECK(worst <= 1e-9);
    }
}

TEST_CASE("run_generations calls observers once per generation") {
    const auto p = test::normalized(1);
    const Grid1D grid(0.0, 5.0, 11);
    std::vector<long> seen;
    const auto out = run_generations(SystemState::constant(Frame::raw, grid, {0, 0}, p.tau), 6, p, solver_for(p),
                                     ImpulseSpec::for_frame(Frame::raw, p),
                                     {[&](const SystemState& s) { seen.push_back(s.generation); }});
    CHECK(seen == std::vector<long>{1, 2, 3, 4, 5, 6});
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(out.first[i] == 0.0);
        CHECK(out.second[i] == 0.0);
    }
    CHECK_THROWS_AS(run_generations(out, 0, p, solver_for(p), ImpulseSpec::for_frame(Frame::raw, p)), ConfigError);
}
