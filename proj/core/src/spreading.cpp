#include "irds/spreading.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

#include <fmt/format.h>
#include <boost/math/distributions/students_t.hpp>

#include "irds/errors.hpp"

namespace irds {

namespace {

constexpr double kGuardCells = 10.0;
constexpr long kMinRegressionPoints = 10;

double component_of(Pair p, int c) { return c == 0 ? p.first : p.second; }

double edge_length(const NormalizedParams& params, const InvasionSetup& setup) {
    if (!(setup.diffusion > 0.0))
        throw ConfigError(fmt::format("{} invasion needs a positive diffusion coefficient", to_string(setup.invader)));
    return std::sqrt(setup.diffusion * params.tau / std::log(setup.growth));
}

NormalizedParams with_invader_diffusion(NormalizedParams p, Invader invader, double d) {
    if (invader == Invader::grass)
        p.d_v = d;
    else
        p.d_u = d;
    return p;
}

}  // namespace

Invader parse_invader(std::string_view name) {
    if (name == "tree") return Invader::tree;
    if (name == "grass") return Invader::grass;
    if (name == "kpp") return Invader::kpp;
    throw ConfigError(fmt::format("unknown invader '{}' (expected tree, grass or kpp)", name));
}

std::string_view to_string(Invader invader) {
    switch (invader) {
        case Invader::tree: return "tree";
        case Invader::grass: return "grass";
        case Invader::kpp: return "kpp";
    }
    return "tree";
}

double InvasionSetup::level(double theta) const {
    if (!(theta > 0.0 && theta < 1.0))
        throw ConfigError(fmt::format("front level theta must be in (0, 1) (got {})", theta));
    return zero_component() + theta * (beta_component() - zero_component());
}

double InvasionSetup::linear_speed(double tau) const { return 2.0 * std::sqrt(diffusion * tau * std::log(growth)); }

InvasionSetup invasion_setup(const NormalizedParams& params, Invader invader) {
    params.validate();
    InvasionSetup s;
    s.invader = invader;
    switch (invader) {
        case Invader::tree: {
            if (!(params.R0() > 1.0)) throw ConfigError("tree invasion of grassland requires R0 > 1");
            if (!(params.R2() > 1.0))
                throw ConfigError(fmt::format("tree invasion requires R2 > 1 (R2 = {:.12g})", params.R2()));
            const double vbar = params.vbar();
            s.frame = Frame::shifted;
            s.zero = {0.0, 0.0};
            s.beta = {1.0, 1.0 - vbar};
            s.sigma = {0.9, 1.0};
            s.component = 0;
            s.growth = params.R2();
            s.diffusion = params.d_u;
            break;
        }
        case Invader::grass: {
            if (!(params.R0() > 1.0)) throw ConfigError("grass invasion requires R0 > 1");
            if (!(params.R1() > 1.0))
                throw ConfigError(fmt::format("grass invasion of forest requires R1 > 1 (R1 = {:.12g})", params.R1()));
            const double vbar = params.vbar();
            s.frame = Frame::increasing;
            s.zero = {0.0, 0.0};
            s.beta = {1.0, 1.0 - vbar};
            s.sigma = {1.0, 0.9};
            s.component = 1;
            s.growth = params.R1();
            s.diffusion = params.d_v;
            break;
        }
        case Invader::kpp: {
            s.frame = Frame::raw;
            s.impulse = ImpulseKind::none;
            s.zero = {0.0, 0.0};
            s.beta = {1.0, 0.0};
            s.sigma = {0.9, 1.0};
            s.component = 0;
            s.growth = std::exp(params.tau);
            s.diffusion = params.d_u;
            break;
        }
    }
    return s;
}

Invader infer_invader(const NormalizedParams& params) {
    if (params.R0() > 1.0) {
        const double r1 = params.R1(), r2 = params.R2();
        if (r2 > 1.0 && r1 < 1.0) return Invader::tree;
        if (r1 > 1.0 && r2 < 1.0) return Invader::grass;
    }
    throw ConfigError(fmt::format("thresholds R0={:.6g} R1={:.6g} do not define a monostable invasion; pass --invader",
                                  params.R0(), params.R1()));
}

Resolution default_resolution(const NormalizedParams& params, const InvasionSetup& setup) {
    const double ell = edge_length(params, setup);
    return Resolution{ell / 5.0, params.tau / 200.0};
}

WaveProfile WaveProfile::step(const Grid1D& grid, const InvasionSetup& setup, Pair sigma, double x0) {
    WaveProfile p;
    p.frame = setup.frame;
    p.grid = grid;
    p.zero = setup.zero;
    p.beta = setup.beta;
    p.x0 = x0;
    const Pair left{setup.zero.first + sigma.first * (setup.beta.first - setup.zero.first),
                    setup.zero.second + sigma.second * (setup.beta.second - setup.zero.second)};
    p.first.resize(grid.size());
    p.second.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const bool behind = grid.x(i) < x0;
        p.first[i] = behind ? left.first : setup.zero.first;
        p.second[i] = behind ? left.second : setup.zero.second;
    }
    p.validate();
    return p;
}

void WaveProfile::validate() const {
    const std::vector<double>* comps[] = {&first, &second};
    const Pair lims[] = {{zero.first, beta.first}, {zero.second, beta.second}};
    bool nonzero_left = false;
    for (int c = 0; c < 2; ++c) {
        const auto& v = *comps[c];
        const auto [z, b] = lims[c];
        if (v.size() != grid.size()) throw ConfigError("profile size does not match its grid");
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (v[i] < std::min(z, b) || v[i] > std::max(z, b))
                throw ConfigError(fmt::format("profile component {} leaves [zero, beta] at x = {}", c + 1, grid.x(i)));
            if (i + 1 < v.size() && v[i + 1] > v[i])
                throw ConfigError(fmt::format("profile component {} increases at x = {}", c + 1, grid.x(i)));
            if (grid.x(i) >= x0 && v[i] != z)
                throw ConfigError(fmt::format("profile component {} is nonzero at x = {} >= x0", c + 1, grid.x(i)));
        }
        if (!v.empty() && v.front() != z) nonzero_left = true;
    }
    if (!nonzero_left) throw ConfigError("profile is identically zero");
}

SystemState WaveProfile::state(double tau) const {
    SystemState s;
    s.frame = frame;
    s.grid = grid;
    s.first = first;
    s.second = second;
    s.generation = 0;
    s.t = tau;
    return s;
}

std::optional<double> track_front(const SystemState& state, int component, double level) {
    const auto v = state.component(component);
    const Grid1D& g = state.grid;
    for (std::size_t i = v.size() - 1; i-- > 0;) {
        if (v[i] >= level && v[i + 1] < level) {
            const double frac = (v[i] - level) / (v[i] - v[i + 1]);
            return g.x(i) + frac * g.dx();
        }
    }
    return std::nullopt;
}

void FrontTrace::observe(const SystemState& state) {
    const auto pos = track_front(state, component_, level_);
    const double guard = kGuardCells * state.grid.dx();
    const bool valid = pos.has_value() && *pos - state.grid.x_min() >= guard && state.grid.x_max() - *pos >= guard;
    samples_.push_back({state.generation, pos.value_or(std::nan("")), valid});
}

GenerationObserver FrontTrace::observer() {
    return [this](const SystemState& s) { observe(s); };
}

void FrontTrace::record(long generation, double position, bool valid) {
    samples_.push_back({generation, position, valid});
}

SpeedEstimate estimate_speed(const FrontTrace& trace, double burn_in) {
    if (!(burn_in >= 0.0 && burn_in < 1.0))
        throw ConfigError(fmt::format("burn-in must be in [0, 1) (got {})", burn_in));
    const auto& s = trace.samples();
    const auto skip = static_cast<std::size_t>(std::floor(burn_in * static_cast<double>(s.size())));
    if (s.size() < skip + kMinRegressionPoints)
        throw ConfigError(fmt::format("speed estimate needs at least {} points after burn-in (have {})",
                                      kMinRegressionPoints, s.size() - std::min(skip, s.size())));
    std::vector<double> xs, ys;
    for (std::size_t i = skip; i < s.size(); ++i) {
        if (!s[i].valid)
            throw NumericalError(fmt::format("front at generation {} is missing or within {} cells of a boundary",
                                             s[i].generation, kGuardCells));
        xs.push_back(static_cast<double>(s[i].generation));
        ys.push_back(s[i].position);
    }
    const double n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    SpeedEstimate e;
    e.n_points = xs.size();
    e.speed = sxy / sxx;
    e.intercept = my - e.speed * mx;
    double sse = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (e.intercept + e.speed * xs[i]);
        sse += r * r;
        e.max_residual = std::max(e.max_residual, std::abs(r));
    }
    e.stderr_ = std::sqrt(sse / (n - 2.0) / sxx);
    return e;
}

Grid1D spreading_grid(const NormalizedParams& params, const InvasionSetup& setup, const Resolution& res,
                      const SpreadingOptions& options, double* x0) {
    const double ell = edge_length(params, setup);
    const double travel = setup.linear_speed(params.tau) * static_cast<double>(options.generations);
    const double left = options.left_margin * ell;
    const double right = travel + options.right_margin * ell;
    const auto cells = static_cast<std::size_t>(std::ceil((left + right) / res.dx)) + 1;
    if (x0) *x0 = 0.0;
    const double x_min = -left;
    return Grid1D(x_min, x_min + static_cast<double>(cells - 1) * res.dx, cells);
}

SpreadingRun run_spreading(const NormalizedParams& params, const InvasionSetup& setup, const SpreadingOptions& options,
                           const std::vector<GenerationObserver>& extra) {
    Resolution res = default_resolution(params, setup);
    if (options.dx) res.dx = *options.dx;
    if (options.dt) res.dt = fit_dt_to_period(*options.dt, params.tau);
    SpreadingRun run;
    run.setup = setup;
    run.resolution = res;
    run.grid = spreading_grid(params, setup, res, options, &run.x0);
    const WaveProfile profile = WaveProfile::step(run.grid, setup, options.sigma.value_or(setup.sigma), run.x0);
    run.trace = FrontTrace(setup.component, setup.level(options.theta));
    std::vector<GenerationObserver> observers{run.trace.observer()};
    observers.insert(observers.end(), extra.begin(), extra.end());
    const SolverConfig solver{res.dt, options.scheme, 1e-9};
    const ImpulseSpec spec = ImpulseSpec::for_frame(setup.frame, params, setup.impulse);
    run.final_state = run_generations(profile.state(params.tau), options.generations, params, solver, spec, observers);
    return run;
}

std::vector<SweepPoint> sweep_speed_vs_diffusion(const NormalizedParams& base, Invader invader,
                                                 std::span<const double> ds, const SweepOptions& options) {
    if (ds.empty()) throw ConfigError("diffusion sweep needs at least one value");
    for (double d : ds)
        if (!(d > 0.0)) throw ConfigError(fmt::format("sweep diffusion values must be positive (got {})", d));
    std::vector<SweepPoint> out(ds.size());
    std::vector<std::exception_ptr> errors(ds.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < ds.size(); i = next++) {
            try {
                const NormalizedParams p = with_invader_diffusion(base, invader, ds[i]);
                const InvasionSetup setup = invasion_setup(p, invader);
                const SpreadingRun run = run_spreading(p, setup, options.spreading);
                const SpeedEstimate est = estimate_speed(run.trace, options.spreading.burn_in);
                out[i] = SweepPoint{ds[i],
                                    est.per_time(p.tau),
                                    est.stderr_per_time(p.tau),
                                    options.spreading.generations,
                                    run.resolution.dx,
                                    run.resolution.dt};
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const unsigned jobs = std::max(1u, std::min<unsigned>(options.jobs, static_cast<unsigned>(ds.size())));
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

std::vector<double> log_spaced(double lo, double hi, std::size_t count) {
    if (!(lo > 0.0 && hi >= lo) || count == 0) throw ConfigError("log spacing needs 0 < lo <= hi and count >= 1");
    std::vector<double> out(count);
    if (count == 1) {
        out[0] = lo;
        return out;
    }
    const double a = std::log(lo), b = std::log(hi);
    for (std::size_t i = 0; i < count; ++i)
        out[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
    out.front() = lo;
    out.back() = hi;
    return out;
}

PowerLawFit fit_power_law(std::span<const std::pair<double, double>> pairs) {
    if (pairs.size() < 3)
        throw ConfigError(fmt::format("power-law fit needs at least 3 points (got {})", pairs.size()));
    std::vector<double> xs, ys;
    for (const auto& [d, c] : pairs) {
        if (!(d > 0.0) || !(c > 0.0))
            throw ConfigError(fmt::format("power-law fit needs positive data (got d = {}, c = {})", d, c));
        xs.push_back(std::log(d));
        ys.push_back(std::log(c));
    }
    const double n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    if (!(sxx > 0.0)) throw ConfigError("power-law fit needs at least two distinct d values");
    const double slope = sxy / sxx;
    const double icept = my - slope * mx;
    double sse = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (icept + slope * xs[i]);
        sse += r * r;
    }
    PowerLawFit fit;
    fit.n = xs.size();
    fit.a2 = slope;
    fit.a1 = std::exp(icept);
    fit.r2 = syy > 0.0 ? 1.0 - sse / syy : 1.0;
    const double s2 = sse / (n - 2.0);
    const double se_slope = std::sqrt(s2 / sxx);
    const double se_icept = std::sqrt(s2 * (1.0 / n + mx * mx / sxx));
    const boost::math::students_t dist(n - 2.0);
    const double t = boost::math::quantile(boost::math::complement(dist, 0.025));
    fit.a2_ci = {slope - t * se_slope, slope + t * se_slope};
    fit.a1_ci = {std::exp(icept - t * se_icept), std::exp(icept + t * se_icept)};
    return fit;
}

std::string_view to_string(Branch branch) {
    switch (branch) {
        case Branch::beta: return "beta";
        case Branch::not_beta: return "not_beta";
        case Branch::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

namespace {

struct MovingFrame {
    Grid1D grid;
    Resolution res;
    double ell = 0.0;
    std::size_t probe = 0;
    WaveProfile phi;
};

MovingFrame moving_frame(const NormalizedParams& params, const InvasionSetup& setup, const CStarOptions& o) {
    MovingFrame m;
    m.res = default_resolution(params, setup);
    if (o.dx) m.res.dx = *o.dx;
    if (o.dt) m.res.dt = fit_dt_to_period(*o.dt, params.tau);
    m.ell = edge_length(params, setup);
    const double left = o.left_margin * m.ell;
    const double right = (o.probe_distance + o.right_margin) * m.ell;
    const auto cells = static_cast<std::size_t>(std::ceil((left + right) / m.res.dx)) + 1;
    m.grid = Grid1D(-left, -left + static_cast<double>(cells - 1) * m.res.dx, cells);
    m.probe = static_cast<std::size_t>(std::llround((left + o.probe_distance * m.ell) / m.res.dx));
    m.phi = WaveProfile::step(m.grid, setup, o.sigma.value_or(setup.sigma), 0.0);
    return m;
}

/// out(s) = in(s + c) by linear interpolation, with `zero` flowing in past the right end.
void shift_left(std::span<const double> in, std::span<double> out, double c_cells, double zero) {
    const auto n = static_cast<std::ptrdiff_t>(in.size());
    const auto whole = static_cast<std::ptrdiff_t>(std::floor(c_cells));
    const double frac = c_cells - static_cast<double>(whole);
    auto at = [&](std::ptrdiff_t j) {
        return j < n ? in[static_cast<std::size_t>(std::max<std::ptrdiff_t>(j, 0))] : zero;
    };
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const std::ptrdiff_t j = i + whole;
        out[static_cast<std::size_t>(i)] = (1.0 - frac) * at(j) + frac * at(j + 1);
    }
}

bool near_beta(const SystemState& a, std::size_t node, const InvasionSetup& setup) {
    const double scale = std::max(std::abs(setup.beta.first), std::abs(setup.beta.second));
    return std::abs(a.first[node] - setup.beta.first) <= 0.1 * scale &&
           std::abs(a.second[node] - setup.beta.second) <= 0.1 * scale;
}

void check_cstar_range(const NormalizedParams& params, const InvasionSetup& setup, const CStarOptions& o, double& lo,
                       double& hi, double& tol) {
    const double lin = setup.linear_speed(params.tau);
    lo = o.c_lo.value_or(0.0);
    hi = o.c_hi.value_or(1.5 * lin);
    tol = o.tolerance > 0.0 ? o.tolerance : 0.01 * lin;
    if (!(lo >= 0.0 && hi > lo))
        throw ConfigError(fmt::format("c range must satisfy 0 <= lo < hi (got {}, {})", lo, hi));
}

template <class Classify>
CStarResult bisect(double lo, double hi, double tol, Classify classify) {
    CStarResult r;
    const BranchProbe plo = classify(lo), phi = classify(hi);
    r.probes = {plo, phi};
    if (plo.branch != Branch::beta || phi.branch != Branch::not_beta)
        throw InconclusiveError(fmt::format("c range [{:.6g}, {:.6g}] does not bracket the speed (branches {} and {})",
                                            lo, hi, to_string(plo.branch), to_string(phi.branch)));
    r.lo = lo;
    r.hi = hi;
    r.resolved = true;
    while (r.hi - r.lo > tol) {
        const double mid = 0.5 * (r.lo + r.hi);
        const BranchProbe p = classify(mid);
        r.probes.push_back(p);
        if (p.branch == Branch::beta) {
            r.lo = mid;
        } else if (p.branch == Branch::not_beta) {
            r.hi = mid;
        } else {
            // The undecided zone surrounds the speed; try to shrink the bracket from both sides.
            const BranchProbe left = classify(0.5 * (r.lo + mid));
            const BranchProbe right = classify(0.5 * (mid + r.hi));
            r.probes.push_back(left);
            r.probes.push_back(right);
            if (left.branch == Branch::beta) r.lo = left.c;
            if (right.branch == Branch::not_beta) r.hi = right.c;
            r.resolved = false;
            break;
        }
    }
    return r;
}

}  // namespace

BranchProbe classify_cstar_branch(const NormalizedParams& params, const InvasionSetup& setup, double c,
                                  const CStarOptions& o) {
    const MovingFrame m = moving_frame(params, setup, o);
    const SolverConfig solver{m.res.dt, DiffusionScheme::crank_nicolson_neumann, 1e-9};
    const Recursion rec(m.grid, params, solver, ImpulseSpec::for_frame(setup.frame, params, setup.impulse));
    const double c_cells = c / m.grid.dx();

    BranchProbe probe{c, Branch::inconclusive, 0, 0.0};
    SystemState a = m.phi.state(params.tau);
    SystemState q = a;
    for (long n = 1; n <= o.max_iterations; ++n) {
        q = a;
        rec.step(q);
        double change = 0.0;
        for (int comp = 0; comp < 2; ++comp) {
            const auto phi = comp == 0 ? std::span<const double>(m.phi.first) : std::span<const double>(m.phi.second);
            auto an = a.component(comp);
            std::vector<double> shifted(an.size());
            shift_left(q.component(comp), shifted, c_cells, component_of(setup.zero, comp));
            for (std::size_t i = 0; i < an.size(); ++i) {
                const double next = std::max(phi[i], shifted[i]);
                probe.monotonicity_violation = std::max(probe.monotonicity_violation, an[i] - next);
                change = std::max(change, std::abs(next - an[i]));
                an[i] = next;
            }
            for (std::size_t i = 0; i + 1 < an.size(); ++i)
                probe.monotonicity_violation = std::max(probe.monotonicity_violation, an[i + 1] - an[i]);
        }
        a.t = params.tau;
        probe.iterations = n;
        if (near_beta(a, m.probe, setup)) {
            probe.branch = Branch::beta;
            return probe;
        }
        if (change < o.stall_tolerance) {
            probe.branch = Branch::not_beta;
            return probe;
        }
    }
    return probe;
}

CStarResult estimate_cstar(const NormalizedParams& params, const InvasionSetup& setup, const CStarOptions& o) {
    double lo = 0.0, hi = 0.0, tol = 0.0;
    check_cstar_range(params, setup, o, lo, hi, tol);
    return bisect(lo, hi, tol, [&](double c) { return classify_cstar_branch(params, setup, c, o); });
}

CStarResult estimate_cstar_fastest(const NormalizedParams& params, const InvasionSetup& setup, const CStarOptions& o) {
    double lo = 0.0, hi = 0.0, tol = 0.0;
    check_cstar_range(params, setup, o, lo, hi, tol);
    const MovingFrame m = moving_frame(params, setup, o);
    const SolverConfig solver{m.res.dt, DiffusionScheme::crank_nicolson_neumann, 1e-9};
    const Recursion rec(m.grid, params, solver, ImpulseSpec::for_frame(setup.frame, params, setup.impulse));
    const double level = setup.level(0.5);
    const double ahead = o.probe_distance * m.ell;
    const double behind = -0.5 * o.left_margin * m.ell;

    auto classify = [&](double c) {
        BranchProbe probe{c, Branch::inconclusive, 0, 0.0};
        SystemState b = m.phi.state(params.tau);
        const double c_cells = c / m.grid.dx();
        std::vector<double> shifted(b.first.size());
        for (long n = 1; n <= o.max_iterations; ++n) {
            rec.step(b);
            for (int comp = 0; comp < 2; ++comp) {
                auto bn = b.component(comp);
                shift_left(bn, shifted, c_cells, component_of(setup.zero, comp));
                std::copy(shifted.begin(), shifted.end(), bn.begin());
            }
            probe.iterations = n;
            const auto pos = track_front(b, setup.component, level);
            if (!pos || *pos <= behind) {
                probe.branch = Branch::not_beta;
                return probe;
            }
            if (*pos >= ahead) {
                probe.branch = Branch::beta;
                return probe;
            }
        }
        return probe;
    };
    return bisect(lo, hi, tol, classify);
}

}  // namespace irds
