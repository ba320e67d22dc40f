#include <doctest.h>

#include <array>
#include <cmath>
#include <random>

#include <boost/numeric/odeint.hpp>

#include "irds/homogeneous.hpp"
#include "support.hpp"

using namespace irds;

namespace {

using State = std::array<double, 2>;

/// Cooperative-frame flow by fixed-step classical RK4 from Boost.Odeint.
State odeint_flow(double u0, double v0, double t, double lambda, double gamma, double h = 1e-3) {
    State y{u0, v0};
    if (t == 0.0) return y;
    const int steps = static_cast<int>(std::ceil(t / h));
    boost::numeric::odeint::runge_kutta4<State> stepper;
    boost::numeric::odeint::integrate_n_steps(
        stepper, [&](const State& x, State& dxdt, double) { dxdt = test::cooperative_field(x, lambda, gamma); }, y, 0.0,
        t / steps, steps);
    return y;
}

/// Composite Simpson rule.
template <class F>
double simpson(F f, double a, double b, int n) {
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return s * h / 3.0;
}

}  // namespace

TEST_CASE("logistic_exact examples") {
    for (double t : {0.0, 0.7, 5.0}) {
        CHECK(logistic_exact(0.0, t) == 0.0);
        CHECK(logistic_exact(1.0, t) == 1.0);
    }
    CHECK(logistic_exact(0.5, std::log(2.0)) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    for (double u0 : {0.01, 0.3, 0.9}) {
        const auto y = odeint_flow(u0, 0.0, 3.0, 1.0, 0.0);
        CHECK(std::abs(logistic_exact(u0, 3.0) - y[0]) <= 1e-10);
    }
}

TEST_CASE("log_mass_Iu examples") {
    CHECK(log_mass_Iu(0.0, 2.5) == 1.0);
    CHECK(log_mass_Iu(1.0, 2.5) == doctest::Approx(std::exp(2.5)).epsilon(1e-15));
    for (double u0 : {0.05, 0.4, 0.8})
        for (double t : {0.5, 2.0, 4.0}) {
            const double q = simpson([&](double s) { return logistic_exact(u0, s); }, 0.0, t, 2000);
            CHECK(std::abs(q - std::log(log_mass_Iu(u0, t))) <= 1e-10);
        }
}

TEST_CASE("v_integral matches closed forms for integer lambda gamma") {
    for (double u0 : {0.1, 0.5, 0.9})
        for (double t : {0.3, 1.5, 3.0}) {
            const double I = log_mass_Iu(u0, t);
            // lambda gamma = 0
            CHECK(v_integral(u0, t, 0.7, 0.0) == doctest::Approx((std::exp(0.7 * t) - 1.0) / 0.7).epsilon(1e-12));
            // lambda = gamma = 1
            CHECK(v_integral(u0, t, 1.0, 1.0) == doctest::Approx(std::log(I) / u0).epsilon(1e-12));
            // lambda = 2, gamma = 1
            const double c = 1.0 - u0;
            CHECK(v_integral(u0, t, 2.0, 1.0) == doctest::Approx((std::log(I) + c / I - c) / (u0 * u0)).epsilon(1e-12));
        }
}

TEST_CASE("v_exact examples") {
    for (double u0 : {0.0, 0.4, 1.0}) CHECK(v_exact(1.0, u0, 2.0, 0.8, 2.0) == 1.0);
    for (double v0 : {0.0, 0.3, 0.9}) {
        const double lam = 0.8, t = 1.7;
        const double e = std::exp(lam * t);
        const double expected = 1.0 - (1.0 - v0) * e / (1.0 + (1.0 - v0) * (e - 1.0));
        CHECK(v_exact(v0, 0.0, t, lam, 2.0) == doctest::Approx(expected).epsilon(1e-13));
        CHECK(std::abs(v_exact(v0, 0.0, t, lam, 2.0) - odeint_flow(0.0, v0, t, lam, 2.0)[1]) <= 1e-8);
    }
    CHECK(v_exact(0.3, 0.6, 1.5, 0.8, 2.0) == doctest::Approx(0.770430712620735968).epsilon(1e-12));
    const auto y = odeint_flow(0.6, 0.3, 1.5, 0.8, 2.0);
    CHECK(std::abs(v_exact(0.3, 0.6, 1.5, 0.8, 2.0) - y[1]) <= 1e-8);
    CHECK(y[0] == doctest::Approx(0.87050882).epsilon(1e-7));
}

TEST_CASE("closed forms agree with two independent integrators over a random sweep") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
        const double u0 = unif(rng), v0 = unif(rng), t = 3.0 * unif(rng);
        const double lam = 0.1 + 2.9 * unif(rng), gam = 3.0 * unif(rng);
        const auto a = odeint_flow(u0, v0, t, lam, gam);
        const auto b =
            test::rk4<2>([&](const std::array<double, 2>& y) { return test::cooperative_field(y, lam, gam); },
                         std::array<double, 2>{u0, v0}, t, 4000);
        const double u = logistic_exact(u0, t), v = v_exact(v0, u0, t, lam, gam);
        worst = std::max({worst, std::abs(u - a[0]), std::abs(v - a[1]), std::abs(u - b[0]), std::abs(v - b[1])});
    }
    MESSAGE("max closed-form error ", worst);
    CHECK(worst <= 1e-8);
}

TEST_CASE("season map fixed points") {
    for (int which : {1, 2}) {
        const auto p = test::normalized(which);
        const Pair e0 = season_map(Frame::cooperative, {0, 1}, p);
        CHECK(e0.first == 0.0);
        CHECK(e0.second == doctest::Approx(1.0).epsilon(1e-14));
        const Pair ev = season_map(Frame::cooperative, {0, p.vbar()}, p);
        CHECK(ev.first == 0.0);
        CHECK(ev.second == doctest::Approx(p.vbar()).epsilon(1e-12));
        const Pair sv = season_map(Frame::shifted, {0, 0}, p);
        CHECK(std::abs(sv.second) <= 1e-13);
    }
}

TEST_CASE("season map agrees across frames") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const auto p = test::normalized(2);
    const double vbar = p.vbar();
    for (int k = 0; k < 50; ++k) {
        const Pair c{unif(rng), vbar + (1 - vbar) * unif(rng)};
        const Pair ref = season_map(Frame::cooperative, c, p);
        for (Frame f : {Frame::raw, Frame::shifted, Frame::increasing}) {
            const Pair got =
                convert(season_map(f, convert(c, Frame::cooperative, f, vbar), p), f, Frame::cooperative, vbar);
            CHECK(std::abs(got.first - ref.first) <= 1e-12);
            CHECK(std::abs(got.second - ref.second) <= 1e-12);
        }
    }
}

TEST_CASE("fixed_points existence") {
    auto p = test::normalized(1);
    CHECK(fixed_points(p).size() == 3);
    p.eta = 0.99;
    CHECK(p.R0() < 1.0);
    CHECK(fixed_points(p).size() == 2);
    p.eta = 0.0;
    CHECK(p.vbar() == 0.0);
    const auto pts = fixed_points(p);
    REQUIRE(pts.size() == 3);
    CHECK(pts[2].label == "e_v");
    CHECK(pts[2].value == Pair{0.0, 0.0});
}

TEST_CASE("grassland level after unscaling") {
    const auto raw = test::table(1);
    const auto p = normalize(raw);
    CHECK((1.0 - p.vbar()) * scales(raw).K_G_prime == doctest::Approx(3.3888).epsilon(2e-5));
}

TEST_CASE("Jacobian eigenvalues at the three equilibria") {
    for (int which : {1, 2}) {
        const auto p = test::normalized(which);
        const auto j0 = jacobian_at("e0", p);
        CHECK(j0.eigenvalues[0] == doctest::Approx(std::exp(p.tau)).epsilon(1e-13));
        CHECK(j0.eigenvalues[1] == doctest::Approx(p.R0()).epsilon(1e-13));
        const auto ju = jacobian_at("e_u", p);
        CHECK(ju.eigenvalues[0] == doctest::Approx(std::exp(-p.tau)).epsilon(1e-13));
        CHECK(ju.eigenvalues[1] == doctest::Approx(p.R1()).epsilon(1e-13));
        const auto jv = jacobian_at("e_v", p);
        CHECK(jv.eigenvalues[0] == doctest::Approx(p.R2()).epsilon(1e-13));
        CHECK(jv.eigenvalues[1] == doctest::Approx(1.0 / p.R0()).epsilon(1e-13));
        CHECK(jv.j21_numeric);
        for (auto* j : {&j0, &ju, &jv}) CHECK(j->J[0][1] == 0.0);
    }
}

TEST_CASE("finite-difference Jacobian matches the analytic entries") {
    for (int which : {1, 2}) {
        const auto p = test::normalized(which);
        for (const auto& e : fixed_points(p, Frame::shifted)) {
            const auto a = jacobian_at(e.label, p);
            const auto fd = jacobian_fd(Frame::shifted, e.value, p);
            for (int r = 0; r < 2; ++r)
                for (int c = 0; c < 2; ++c) {
                    INFO(e.label, " J", r + 1, c + 1);
                    CHECK(std::abs(a.J[r][c] - fd.J[r][c]) <= 1e-6 * std::max(1.0, std::abs(a.J[r][c])));
                }
        }
    }
}

TEST_CASE("classify reproduces the stability verdicts") {
    const auto r1 = classify(test::normalized(1));
    CHECK(r1.at("E_T").verdict == Verdict::las);
    CHECK(r1.at("E_G").verdict == Verdict::unstable);
    CHECK(r1.at("E0").verdict == Verdict::unstable);
    const auto r2 = classify(test::normalized(2));
    CHECK(r2.at("E_T").verdict == Verdict::unstable);
    CHECK(r2.at("E_G").verdict == Verdict::las);
    auto n = test::normalized(1);
    n.eta = 0.99;
    CHECK(classify(n).at("E_G").verdict == Verdict::absent);
}

TEST_CASE("iterated season map converges to the forest state for the first table") {
    std::mt19937_64 rng(10);
    std::uniform_real_distribution<double> unif(0.05, 0.95);
    const auto p = test::normalized(1);
    const double vbar = p.vbar();
    for (int k = 0; k < 20; ++k) {
        Pair x{unif(rng), (1 - vbar) * unif(rng)};
        for (int n = 0; n < 200; ++n) x = season_map(Frame::shifted, x, p);
        CHECK(std::abs(x.first - 1.0) <= 1e-4);
        CHECK(std::abs(x.second - (1.0 - vbar)) <= 1e-4);
    }
}

TEST_CASE("iterated season map converges to the grassland state at rate R2 for the second table") {
    // R2 = 0.9932 makes the tree component decay by only 0.7% per generation,
    // so 200 generations shrink it by R2^200 ~ 0.26; 1e-4 needs about 1400.
    std::mt19937_64 rng(10);
    std::uniform_real_distribution<double> unif(0.05, 0.95);
    const auto p = test::normalized(2);
    const double vbar = p.vbar();
    for (int k = 0; k < 20; ++k) {
        Pair x{unif(rng), (1 - vbar) * unif(rng)};
        for (int n = 0; n < 1000; ++n) x = season_map(Frame::shifted, x, p);
        const double u1000 = x.first;
        for (int n = 0; n < 200; ++n) x = season_map(Frame::shifted, x, p);
        CHECK(x.first / u1000 == doctest::Approx(std::pow(p.R2(), 200)).epsilon(0.02));
        for (int n = 0; n < 1800; ++n) x = season_map(Frame::shifted, x, p);
        CHECK(std::abs(x.first) <= 1e-4);
        CHECK(std::abs(x.second) <= 1e-4);
    }
}
