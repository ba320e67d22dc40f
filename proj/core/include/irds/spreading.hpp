#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "irds/dynamics.hpp"
#include "irds/frames.hpp"
#include "irds/grid.hpp"
#include "irds/impulse.hpp"
#include "irds/savanna.hpp"

namespace irds {

/// Which state invades the domain from the left.
enum class Invader {
    tree,   ///< Forest into grassland; shifted frame, e_v ahead, e_u behind.
    grass,  ///< Grassland into forest; increasing frame, E_T ahead, E_G behind.
    kpp,    ///< Trees alone with impulses disabled.
};

Invader parse_invader(std::string_view name);
std::string_view to_string(Invader invader);

struct InvasionSetup {
    Invader invader = Invader::tree;
    Frame frame = Frame::shifted;
    ImpulseKind impulse = ImpulseKind::fire;
    int component = 0;       ///< Tracked component.
    Pair zero{0.0, 0.0};     ///< State ahead of the front.
    Pair beta{1.0, 1.0};     ///< State behind the front.
    Pair sigma{0.9, 0.9};    ///< Default fill fraction of beta - zero behind the initial step.
    double growth = 1.0;     ///< Per-generation linear growth factor of the invading mode.
    double diffusion = 0.0;  ///< Diffusion coefficient of the tracked component.

    double beta_component() const { return component == 0 ? beta.first : beta.second; }
    double zero_component() const { return component == 0 ? zero.first : zero.second; }
    /// Absolute level at fraction theta between zero and beta.
    double level(double theta) const;
    /// Linear spreading speed per generation, 2 sqrt(d tau ln growth).
    double linear_speed(double tau) const;
};

/// Throws ConfigError when the thresholds do not allow this invasion.
InvasionSetup invasion_setup(const NormalizedParams& params, Invader invader);

/// Picks tree when R2 > 1 > R1 and grass when R1 > 1 > R2.
Invader infer_invader(const NormalizedParams& params);

struct Resolution {
    double dx = 0.0;
    double dt = 0.0;
};

/// dx = l / 5 and dt = tau / 200, where l = sqrt(d tau / ln growth) is the
/// e-folding length of the leading edge; a front of width 4 l spans 20 cells.
Resolution default_resolution(const NormalizedParams& params, const InvasionSetup& setup);

/// Non-increasing step profile: zero for x >= x0, zero + sigma (beta - zero) for x < x0.
struct WaveProfile {
    Frame frame = Frame::shifted;
    Grid1D grid;
    std::vector<double> first, second;
    Pair zero{0.0, 0.0}, beta{1.0, 1.0};
    double x0 = 0.0;

    static WaveProfile step(const Grid1D& grid, const InvasionSetup& setup, Pair sigma, double x0);
    /// Throws ConfigError unless the profile is non-increasing, equals zero on x >= x0
    /// and lies between zero and beta with a nonzero left state.
    void validate() const;
    /// End-of-season state at generation 0.
    SystemState state(double tau) const;
};

/// Rightmost x where the component falls through `level`, by linear interpolation.
std::optional<double> track_front(const SystemState& state, int component, double level);

struct FrontSample {
    long generation = 0;
    double position = 0.0;
    bool valid = false;
};

/// Front positions per generation; invalid when the level is not crossed or
/// is crossed within 10 dx of either boundary.
class FrontTrace {
public:
    FrontTrace(int component, double level) : component_(component), level_(level) {}

    void observe(const SystemState& state);
    GenerationObserver observer();
    void record(long generation, double position, bool valid = true);

    int component() const { return component_; }
    double level() const { return level_; }
    const std::vector<FrontSample>& samples() const { return samples_; }

private:
    int component_;
    double level_;
    std::vector<FrontSample> samples_;
};

struct SpeedEstimate {
    double speed = 0.0;  ///< Per generation.
    double stderr_ = 0.0;
    double intercept = 0.0;
    double max_residual = 0.0;
    std::size_t n_points = 0;

    double per_time(double period) const { return speed / period; }
    double stderr_per_time(double period) const { return stderr_ / period; }
};

/// Least-squares slope of position against generation after discarding the
/// leading `burn_in` fraction. Needs at least 10 points after burn-in.
SpeedEstimate estimate_speed(const FrontTrace& trace, double burn_in = 0.4);

struct SpreadingOptions {
    long generations = 60;
    double burn_in = 0.4;
    double theta = 0.5;
    std::optional<Pair> sigma;  ///< Defaults to the setup's sigma.
    std::optional<double> dx, dt;
    /// Domain behind and ahead of the front travel, in leading-edge e-folding lengths.
    double left_margin = 20.0;
    double right_margin = 20.0;
    DiffusionScheme scheme = DiffusionScheme::crank_nicolson_neumann;
};

struct SpreadingRun {
    InvasionSetup setup;
    Resolution resolution;
    Grid1D grid;
    double x0 = 0.0;
    SystemState final_state;
    FrontTrace trace{0, 0.0};
};

/// Domain sized so the front stays clear of the right boundary for the whole run.
Grid1D spreading_grid(const NormalizedParams& params, const InvasionSetup& setup, const Resolution& res,
                      const SpreadingOptions& options, double* x0 = nullptr);

SpreadingRun run_spreading(const NormalizedParams& params, const InvasionSetup& setup, const SpreadingOptions& options,
                           const std::vector<GenerationObserver>& extra = {});

struct SweepPoint {
    double d = 0.0;
    double speed = 0.0;  ///< Per unit normalized time.
    double stderr_ = 0.0;
    long n_generations = 0;
    double dx = 0.0;
    double dt = 0.0;
};

struct SweepOptions {
    SpreadingOptions spreading;
    unsigned jobs = 1;
};

/// One spreading run per diffusion value of the invading component; rows in input order.
std::vector<SweepPoint> sweep_speed_vs_diffusion(const NormalizedParams& base, Invader invader,
                                                 std::span<const double> ds, const SweepOptions& options);

/// `count` log-spaced values from lo to hi inclusive.
std::vector<double> log_spaced(double lo, double hi, std::size_t count);

struct PowerLawFit {
    double a1 = 0.0, a2 = 0.0, r2 = 0.0;
    std::pair<double, double> a1_ci{}, a2_ci{};
    std::size_t n = 0;
};

/// c = a1 d^a2 by least squares on (log d, log c) with 95% t-intervals.
PowerLawFit fit_power_law(std::span<const std::pair<double, double>> pairs);

enum class Branch { beta, not_beta, inconclusive };
std::string_view to_string(Branch branch);

struct CStarOptions {
    std::optional<double> c_lo, c_hi;  ///< Defaults 0 and 1.5 times the linear speed.
    double tolerance = 0.0;            ///< Bisection width; default 1% of the linear speed.
    long max_iterations = 1500;
    double stall_tolerance = 1e-10;
    std::optional<Pair> sigma;
    std::optional<double> dx, dt;
    double left_margin = 20.0;     ///< Moving-frame domain behind the step, in e-folding lengths.
    double probe_distance = 20.0;  ///< Probe position ahead of the step.
    double right_margin = 20.0;    ///< Domain beyond the probe.
};

struct BranchProbe {
    double c = 0.0;
    Branch branch = Branch::inconclusive;
    long iterations = 0;
    double monotonicity_violation = 0.0;  ///< Largest breach of order in n or in s.
};

struct CStarResult {
    double lo = 0.0, hi = 0.0;  ///< Bracket, per generation.
    bool resolved = false;      ///< False when an inconclusive probe stopped the bisection.
    std::vector<BranchProbe> probes;

    double estimate() const { return 0.5 * (lo + hi); }
};

/// Classifies a(c; +inf) for one moving-frame speed c (per generation).
BranchProbe classify_cstar_branch(const NormalizedParams& params, const InvasionSetup& setup, double c,
                                  const CStarOptions& options);

/// Slowest speed: bisection on the branch of a(c; +inf).
CStarResult estimate_cstar(const NormalizedParams& params, const InvasionSetup& setup, const CStarOptions& options);

/// Fastest speed: bisection on whether b_n(s + n c) vanishes.
CStarResult estimate_cstar_fastest(const NormalizedParams& params, const InvasionSetup& setup,
                                   const CStarOptions& options);

}  // namespace irds
