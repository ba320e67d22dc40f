// irds: thresholds, simulations, speed sweeps, power-law fits and c* estimates
// for the impulsive savanna reaction-diffusion model.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <CLI11.hpp>

#include "irds/config.hpp"
#include "irds/errors.hpp"
#include "irds/homogeneous.hpp"
#include "irds/io.hpp"
#include "irds/spreading.hpp"

namespace fs = std::filesystem;
using namespace irds;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitInconclusive = 4;

/// Output directory staged next to its final location and renamed into place on commit.
class StagedOutput {
public:
    StagedOutput(fs::path target, bool force) : target_(std::move(target)) {
        if (target_.empty()) throw ConfigError("--out is required");
        if (fs::exists(target_)) {
            if (!fs::is_directory(target_))
                throw ConfigError(fmt::format("output path '{}' exists and is not a directory", target_.string()));
            if (!fs::is_empty(target_) && !force)
                throw ConfigError(
                    fmt::format("output directory '{}' is not empty; pass --force to replace it", target_.string()));
        }
        const fs::path abs = fs::absolute(target_).lexically_normal();
        const fs::path parent = abs.parent_path();
        fs::create_directories(parent);
        staging_ = parent / fmt::format(".{}.partial", abs.filename().string());
        fs::remove_all(staging_);
        fs::create_directory(staging_);
    }
    StagedOutput(const StagedOutput&) = delete;
    StagedOutput& operator=(const StagedOutput&) = delete;
    ~StagedOutput() {
        if (!committed_) {
            std::error_code ec;
            fs::remove_all(staging_, ec);
        }
    }

    fs::path file(std::string_view name) const { return staging_ / name; }

    void commit() {
        if (fs::exists(target_)) fs::remove_all(target_);
        fs::rename(staging_, target_);
        committed_ = true;
    }

private:
    fs::path target_, staging_;
    bool committed_ = false;
};

struct Common {
    std::string config;
    std::string out;
    bool force = false;
};

void add_common(CLI::App* cmd, Common& c, bool config_required = true) {
    auto* opt = cmd->add_option("--config", c.config, "Parameter file (key = value)");
    if (config_required) opt->required();
    cmd->add_option("--out", c.out, "Output directory")->required();
    cmd->add_flag("--force", c.force, "Replace a non-empty output directory");
}

std::string params_block(const SavannaParams& raw, const NormalizedParams& p) {
    std::string s = "parameters:\n" + format_savanna_params(raw, "  ");
    s += "normalized:\n";
    s += fmt::format("  lambda = {}\n  gamma = {}\n  tau = {}\n  eta = {}\n  alpha = {}\n  p = {}\n", num(p.lambda),
                     num(p.gamma), num(p.tau), num(p.eta), num(p.alpha), num(p.p));
    s += fmt::format("  a_min = {}\n  a_max = {}\n  d_u = {}\n  d_v = {}\n", num(p.a_min), num(p.a_max), num(p.d_u),
                     num(p.d_v));
    return s;
}

std::string header(std::string_view command, std::string_view body) {
    return comment_block(fmt::format("irds {}\n{}", command, body));
}

// ---------------------------------------------------------------- thresholds

int cmd_thresholds(const Common& c) {
    const SavannaParams raw = load_savanna_params(c.config);
    const NormalizedParams p = normalize(raw);
    StagedOutput out(c.out, c.force);
    const ThresholdReport raw_rep = thresholds_raw(raw);
    const ThresholdReport norm_rep = classify(p);
    const std::string head = header("thresholds", params_block(raw, p));
    write_file(out.file("thresholds.txt"), head + "[raw]\n" + format_threshold_report(raw_rep) + "[normalized]\n" +
                                               format_threshold_report(norm_rep));
    write_file(out.file("thresholds.csv"), head + format_threshold_csv(raw_rep));
    write_file(out.file("thresholds_normalized.csv"), head + format_threshold_csv(norm_rep));
    out.commit();
    std::cout << format_threshold_report(raw_rep);
    return 0;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
    Common common;
    long generations = 60;
    std::string frame = "raw";
    std::string init = "front";
    std::string invader = "auto";
    std::optional<double> dx, dt;
    long every = 1;
    bool trace = false;
};

Invader resolve_invader(const std::string& name, const NormalizedParams& p) {
    return name == "auto" ? infer_invader(p) : parse_invader(name);
}

int cmd_simulate(const SimulateArgs& a) {
    if (a.every < 1) throw ConfigError("--every must be at least 1");
    const SavannaParams raw = load_savanna_params(a.common.config);
    const NormalizedParams p = normalize(raw);
    const Frame frame = parse_frame(a.frame);
    const Invader invader = resolve_invader(a.invader, p);
    const InvasionSetup setup = invasion_setup(p, invader);

    SpreadingOptions opts;
    opts.generations = a.generations;
    opts.dx = a.dx;
    opts.dt = a.dt;
    Resolution res = default_resolution(p, setup);
    if (a.dx) res.dx = *a.dx;
    if (a.dt) res.dt = fit_dt_to_period(*a.dt, p.tau);
    double x0 = 0.0;
    const Grid1D grid = spreading_grid(p, setup, res, opts, &x0);

    SystemState init;
    if (a.init == "front") {
        init = change_frame(WaveProfile::step(grid, setup, setup.sigma, x0).state(p.tau), frame, p);
    } else if (a.init == "zero") {
        init = SystemState::constant(frame, grid, {0.0, 0.0}, p.tau);
    } else {
        throw ConfigError(fmt::format("unknown --init '{}' (expected front or zero)", a.init));
    }

    const std::string body = fmt::format(
        "{}simulation:\n  generations = {}\n  frame = {}\n  init = {}\n  invader = {}\n  dx = {}\n  dt = {}\n"
        "  x_min = {}\n  x_max = {}\n  n_cells = {}\n  units = {}\n",
        params_block(raw, p), a.generations, to_string(frame), a.init, to_string(invader), num(res.dx), num(res.dt),
        num(grid.x_min()), num(grid.x_max()), grid.size(),
        frame == Frame::raw ? "x in physical distance, t in years, values in t/ha" : "normalized");
    const std::string head = header("simulate", body);

    StagedOutput out(a.common.out, a.common.force);
    OutputUnits units;
    if (frame == Frame::raw) units.scales = scales(raw);

    SnapshotWriter snaps(out.file("snapshots.csv"), head, units);
    std::optional<TraceWriter> trace_writer;
    if (a.trace) trace_writer.emplace(out.file("trace.csv"), head, units);
    FrontTrace fronts(setup.component, setup.level(0.5));

    auto observe = [&](const SystemState& s) {
        if (s.generation % a.every == 0 || s.generation == a.generations) snaps.write(s);
        if (trace_writer) trace_writer->write(s);
        fronts.observe(change_frame(s, setup.frame, p));
    };
    observe(init);
    const SolverConfig solver{res.dt, DiffusionScheme::crank_nicolson_neumann, 1e-9};
    const ImpulseSpec spec = ImpulseSpec::for_frame(frame, p, setup.impulse);
    const SystemState final_state = run_generations(init, a.generations, p, solver, spec, {observe});

    // Interior distance to the invading equilibrium over the left half of the domain.
    const SystemState fin = change_frame(final_state, setup.frame, p);
    const std::size_t half = fin.grid.size() / 2;
    const Pair target = convert(setup.beta, setup.frame, Frame::raw, frame_offset(setup.frame, p));
    const Scales sc = scales(raw);
    double dist = 0.0;
    for (std::size_t i = 0; i <= half; ++i) {
        const Pair v = convert({fin.first[i], fin.second[i]}, setup.frame, Frame::raw, frame_offset(setup.frame, p));
        dist = std::max(
            {dist, std::abs(v.first - target.first) * sc.K_T_prime, std::abs(v.second - target.second) * sc.K_G_prime});
    }
    std::string summary = fmt::format("target.trees = {}\ntarget.grass = {}\nleft_half_sup_distance = {}\n",
                                      num(target.first * sc.K_T_prime), num(target.second * sc.K_G_prime), num(dist));
    try {
        const SpeedEstimate est = estimate_speed(fronts, 0.4);
        summary += fmt::format("front_speed_per_generation = {}\nfront_speed_per_time = {}\nfront_speed_stderr = {}\n",
                               num(est.speed), num(est.per_time(p.tau)), num(est.stderr_));
    } catch (const Error& e) {
        summary += fmt::format("front_speed = unavailable ({})\n", e.what());
    }
    write_file(out.file("fronts.csv"), head + format_front_trace(fronts, OutputUnits{}));
    write_file(out.file("summary.txt"), head + summary);
    out.commit();
    std::cout << summary;
    return 0;
}

// ---------------------------------------------------------------- speed-sweep

struct SweepArgs {
    Common common;
    std::string manifest;
    unsigned jobs = 1;
    std::optional<double> dx, dt;
};

struct SweepManifest {
    fs::path config;
    Invader invader = Invader::tree;
    double d_min = 0.0, d_max = 0.0;
    std::size_t count = 0;
    long generations = 0;
    double burn_in = 0.4;
    double theta = 0.5;
    std::string text;
};

SweepManifest load_manifest(const fs::path& path) {
    const KeyValueFile kv = KeyValueFile::load(path);
    static const std::vector<std::string> known{"config", "invader",     "d_min",   "d_max",
                                                "count",  "generations", "burn_in", "theta"};
    for (const auto& [k, v] : kv.entries())
        if (std::find(known.begin(), known.end(), k) == known.end())
            throw ConfigError(fmt::format("{}: unknown manifest key '{}'", path.string(), k));
    SweepManifest m;
    if (kv.contains("config")) m.config = path.parent_path() / kv.raw("config");
    m.invader = parse_invader(kv.raw("invader"));
    m.d_min = kv.number("d_min");
    m.d_max = kv.number("d_max");
    const double count = kv.number("count"), gens = kv.number("generations");
    if (!(count >= 1.0) || count != std::floor(count)) throw ConfigError("manifest count must be a positive integer");
    if (!(gens >= 1.0) || gens != std::floor(gens))
        throw ConfigError("manifest generations must be a positive integer");
    m.count = static_cast<std::size_t>(count);
    m.generations = static_cast<long>(gens);
    if (kv.contains("burn_in")) m.burn_in = kv.number("burn_in");
    if (kv.contains("theta")) m.theta = kv.number("theta");
    for (const auto& [k, v] : kv.entries())
        if (k != "config") m.text += fmt::format("  {} = {}\n", k, v);
    return m;
}

int cmd_speed_sweep(const SweepArgs& a) {
    if (a.manifest.empty()) throw ConfigError("--sweep manifest is required");
    const SweepManifest m = load_manifest(a.manifest);
    const fs::path config = !a.common.config.empty() ? fs::path(a.common.config) : m.config;
    if (config.empty()) throw ConfigError("no parameter file: pass --config or set 'config' in the manifest");
    const SavannaParams raw = load_savanna_params(config);
    const NormalizedParams p = normalize(raw);
    const std::vector<double> ds = log_spaced(m.d_min, m.d_max, m.count);

    SweepOptions opts;
    opts.jobs = std::max(1u, a.jobs);
    opts.spreading.generations = m.generations;
    opts.spreading.burn_in = m.burn_in;
    opts.spreading.theta = m.theta;
    opts.spreading.dx = a.dx;
    opts.spreading.dt = a.dt;

    StagedOutput out(a.common.out, a.common.force);
    const std::vector<SweepPoint> points = sweep_speed_vs_diffusion(p, m.invader, ds, opts);
    const std::string body =
        fmt::format("{}sweep:\n{}  speed units = per unit normalized time\n  resolution = {}\n", params_block(raw, p),
                    m.text, a.dx || a.dt ? "overridden" : "default per d (dx = l/5, dt = tau/200)");
    const std::string head = header("speed-sweep", body);
    write_file(out.file("sweep.csv"), head + format_sweep_csv(points));
    std::string fit_text;
    if (points.size() >= 3) {
        std::vector<std::pair<double, double>> pairs;
        for (const auto& pt : points) pairs.emplace_back(pt.d, pt.speed);
        fit_text = format_fit(fit_power_law(pairs));
        write_file(out.file("fit.txt"), head + fit_text);
    } else {
        std::cerr << fmt::format("fit refused: {} sweep point(s), at least 3 needed\n", points.size());
    }
    out.commit();
    std::cout << format_sweep_csv(points) << fit_text;
    return 0;
}

// ---------------------------------------------------------------- fit

int cmd_fit(const std::string& input, const std::string& out_dir, bool force) {
    const auto pairs = read_sweep_csv(input);
    const PowerLawFit fit = fit_power_law(pairs);
    StagedOutput out(out_dir, force);
    std::string body = "input points:\n";
    for (const auto& [d, c] : pairs) body += fmt::format("  {} {}\n", num(d), num(c));
    write_file(out.file("fit.txt"), header("fit", body) + format_fit(fit));
    out.commit();
    std::cout << format_fit(fit);
    return 0;
}

// ---------------------------------------------------------------- cstar

struct CStarArgs {
    Common common;
    std::string invader = "auto";
    std::optional<double> c_lo, c_hi, dx, dt;
    double tolerance = 0.0;
    long max_iterations = 1500;
    long generations = 60;
};

int cmd_cstar(const CStarArgs& a) {
    const SavannaParams raw = load_savanna_params(a.common.config);
    const NormalizedParams p = normalize(raw);
    const Invader invader = resolve_invader(a.invader, p);
    const InvasionSetup setup = invasion_setup(p, invader);
    CStarOptions o;
    o.c_lo = a.c_lo;
    o.c_hi = a.c_hi;
    o.tolerance = a.tolerance;
    o.max_iterations = a.max_iterations;
    o.dx = a.dx;
    o.dt = a.dt;

    StagedOutput out(a.common.out, a.common.force);
    const CStarResult slow = estimate_cstar(p, setup, o);
    const CStarResult fast = estimate_cstar_fastest(p, setup, o);
    SpreadingOptions so;
    so.generations = a.generations;
    so.dx = a.dx;
    so.dt = a.dt;
    const SpeedEstimate front = estimate_speed(run_spreading(p, setup, so).trace, so.burn_in);

    const std::string body =
        fmt::format("{}cstar:\n  invader = {}\n  max_iterations = {}\n  speed units = per generation\n",
                    params_block(raw, p), to_string(invader), a.max_iterations);
    std::string text = format_cstar(slow, fast);
    text += fmt::format("front_speed_per_generation = {}\nfront_speed_stderr = {}\nlinear_speed_per_generation = {}\n",
                        num(front.speed), num(front.stderr_), num(setup.linear_speed(p.tau)));
    write_file(out.file("cstar.txt"), header("cstar", body) + text);
    out.commit();
    std::cout << text;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Impulsive reaction-diffusion savanna model: thresholds, simulation and spreading speeds"};
    app.require_subcommand(1);

    Common th;
    auto* thresholds = app.add_subcommand("thresholds", "Thresholds, equilibria and stability verdicts");
    add_common(thresholds, th);

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "Run the recursion from front-like or zero initial data");
    add_common(simulate, sim.common);
    simulate->add_option("--generations", sim.generations, "Number of generations")->check(CLI::PositiveNumber);
    simulate->add_option("--frame", sim.frame, "raw, cooperative, shifted or increasing")
        ->check(CLI::IsMember({"raw", "cooperative", "shifted", "increasing"}));
    simulate->add_option("--init", sim.init, "front or zero")->check(CLI::IsMember({"front", "zero"}));
    simulate->add_option("--invader", sim.invader, "auto, tree, grass or kpp")
        ->check(CLI::IsMember({"auto", "tree", "grass", "kpp"}));
    simulate->add_option("--dx", sim.dx, "Grid spacing (normalized)")->check(CLI::PositiveNumber);
    simulate->add_option("--dt", sim.dt, "Reaction substep (rounded down to divide tau)")->check(CLI::PositiveNumber);
    simulate->add_option("--every", sim.every, "Snapshot every N generations")->check(CLI::PositiveNumber);
    simulate->add_flag("--trace", sim.trace, "Also write the per-generation trace.csv");

    SweepArgs sw;
    auto* sweep = app.add_subcommand("speed-sweep", "Front speed against diffusion coefficient");
    add_common(sweep, sw.common, false);
    sweep->add_option("--sweep", sw.manifest, "Sweep manifest")->required();
    sweep->add_option("--jobs", sw.jobs, "Concurrent sweep points")->check(CLI::PositiveNumber);
    sweep->add_option("--dx", sw.dx, "Grid spacing for every point")->check(CLI::PositiveNumber);
    sweep->add_option("--dt", sw.dt, "Reaction substep for every point")->check(CLI::PositiveNumber);

    std::string fit_input, fit_out;
    bool fit_force = false;
    auto* fit = app.add_subcommand("fit", "Power-law fit of a sweep CSV");
    fit->add_option("--input", fit_input, "sweep.csv produced by speed-sweep")->required();
    fit->add_option("--out", fit_out, "Output directory")->required();
    fit->add_flag("--force", fit_force, "Replace a non-empty output directory");

    CStarArgs cs;
    auto* cstar = app.add_subcommand("cstar", "Slowest and fastest spreading speeds by bisection");
    add_common(cstar, cs.common);
    cstar->add_option("--invader", cs.invader, "auto, tree, grass or kpp")
        ->check(CLI::IsMember({"auto", "tree", "grass", "kpp"}));
    cstar->add_option("--c-lo", cs.c_lo, "Lower end of the speed bracket (per generation)");
    cstar->add_option("--c-hi", cs.c_hi, "Upper end of the speed bracket (per generation)");
    cstar->add_option("--tol", cs.tolerance, "Bracket width at which bisection stops");
    cstar->add_option("--max-iterations", cs.max_iterations, "Iterations per probe")->check(CLI::PositiveNumber);
    cstar->add_option("--generations", cs.generations, "Generations for the front-tracking comparison")
        ->check(CLI::PositiveNumber);
    cstar->add_option("--dx", cs.dx, "Grid spacing")->check(CLI::PositiveNumber);
    cstar->add_option("--dt", cs.dt, "Reaction substep")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (*thresholds) return cmd_thresholds(th);
        if (*simulate) return cmd_simulate(sim);
        if (*sweep) return cmd_speed_sweep(sw);
        if (*fit) return cmd_fit(fit_input, fit_out, fit_force);
        if (*cstar) return cmd_cstar(cs);
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const InconclusiveError& e) {
        std::cerr << "inconclusive: " << e.what() << '\n';
        return kExitInconclusive;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
