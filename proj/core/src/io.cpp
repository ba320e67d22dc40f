#include "irds/io.hpp"

#include <cmath>
#include <sstream>

#include <fmt/format.h>

#include "irds/errors.hpp"

namespace irds {

std::string comment_block(std::string_view text) {
    std::string out;
    std::size_t start = 0;
    while (start < text.size()) {
        const auto nl = text.find('\n', start);
        const auto line = text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
        out += line.empty() ? "#\n" : fmt::format("# {}\n", line);
        if (nl == std::string_view::npos) break;
        start = nl + 1;
    }
    return out;
}

std::string num(double v) { return fmt::format("{:.12g}", v); }

double OutputUnits::x(double x_norm) const { return scales ? x_norm / scales->space() : x_norm; }

double OutputUnits::t(double t_norm) const { return scales ? t_norm / scales->rate : t_norm; }

Pair OutputUnits::values(Frame frame, Pair v) const {
    if (frame != Frame::raw || !scales) return v;
    return {v.first * scales->K_T_prime, v.second * scales->K_G_prime};
}

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(fmt::format("cannot open '{}' for writing", path.string()));
    return out;
}

}  // namespace

SnapshotWriter::SnapshotWriter(const std::filesystem::path& path, std::string_view header, OutputUnits units)
    : out_(open_output(path)), units_(std::move(units)) {
    out_ << header << "generation,t,x,component1,component2,frame\n";
}

void SnapshotWriter::write(const SystemState& s) {
    const auto frame = to_string(s.frame);
    const std::string gen = std::to_string(s.generation), t = num(units_.t(s.t));
    std::string buf;
    for (std::size_t i = 0; i < s.first.size(); ++i) {
        const Pair v = units_.values(s.frame, {s.first[i], s.second[i]});
        buf +=
            fmt::format("{},{},{},{},{},{}\n", gen, t, num(units_.x(s.grid.x(i))), num(v.first), num(v.second), frame);
    }
    out_ << buf;
    out_.flush();
    if (!out_) throw Error("snapshot write failed");
}

TraceWriter::TraceWriter(const std::filesystem::path& path, std::string_view header, OutputUnits units)
    : out_(open_output(path)), units_(std::move(units)) {
    out_ << header << "generation,x,component1,component2\n";
}

void TraceWriter::write(const SystemState& s) {
    std::string buf;
    const std::string gen = std::to_string(s.generation);
    for (std::size_t i = 0; i < s.first.size(); ++i) {
        const Pair v = units_.values(s.frame, {s.first[i], s.second[i]});
        buf += fmt::format("{},{},{},{}\n", gen, num(units_.x(s.grid.x(i))), num(v.first), num(v.second));
    }
    out_ << buf;
    out_.flush();
    if (!out_) throw Error("trace write failed");
}

std::string format_threshold_report(const ThresholdReport& r) {
    std::string out;
    out += fmt::format("units = {}\n", r.raw_units ? "raw" : "normalized");
    out += fmt::format("R0 = {}\nR1 = {}\nR2 = {}\n", num(r.R0), num(r.R1), num(r.R2));
    out += fmt::format("vbar = {}\nGbar = {}\n", num(r.vbar), num(r.Gbar));
    for (const auto& e : r.equilibria) {
        out += fmt::format("{}.exists = {}\n", e.label, e.exists ? "true" : "false");
        out += fmt::format("{}.trees = {}\n{}.grass = {}\n", e.label, num(e.trees), e.label, num(e.grass));
        out += fmt::format("{}.eigenvalues = {} {}\n", e.label, num(e.eigenvalues[0]), num(e.eigenvalues[1]));
        out += fmt::format("{}.verdict = {}\n", e.label, to_string(e.verdict));
    }
    return out;
}

std::string format_threshold_csv(const ThresholdReport& r) {
    std::string out = "quantity,value1,value2,exists,eigenvalue1,eigenvalue2,verdict\n";
    out += fmt::format("R0,{},,,,,\nR1,{},,,,,\nR2,{},,,,,\n", num(r.R0), num(r.R1), num(r.R2));
    out += fmt::format("vbar,{},,,,,\nGbar,{},,,,,\n", num(r.vbar), num(r.Gbar));
    for (const auto& e : r.equilibria)
        out += fmt::format("{},{},{},{},{},{},{}\n", e.label, num(e.trees), num(e.grass), e.exists ? 1 : 0,
                           num(e.eigenvalues[0]), num(e.eigenvalues[1]), to_string(e.verdict));
    return out;
}

std::string format_sweep_csv(std::span<const SweepPoint> points) {
    std::string out = "d,speed,stderr,n_generations,dx,dt\n";
    for (const auto& p : points)
        out += fmt::format("{},{},{},{},{},{}\n", num(p.d), num(p.speed), num(p.stderr_), p.n_generations, num(p.dx),
                           num(p.dt));
    return out;
}

std::vector<std::pair<double, double>> read_sweep_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(fmt::format("cannot open sweep file '{}'", path.string()));
    std::vector<std::pair<double, double>> out;
    std::string line;
    bool header = false;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        if (!header) {
            if (line.rfind("d,speed", 0) != 0)
                throw ConfigError(
                    fmt::format("{}:{}: expected header starting with 'd,speed'", path.string(), line_no));
            header = true;
            continue;
        }
        std::istringstream fields(line);
        std::string d, c;
        if (!std::getline(fields, d, ',') || !std::getline(fields, c, ','))
            throw ConfigError(fmt::format("{}:{}: expected at least two columns", path.string(), line_no));
        try {
            out.emplace_back(std::stod(d), std::stod(c));
        } catch (const std::exception&) {
            throw ConfigError(fmt::format("{}:{}: non-numeric value", path.string(), line_no));
        }
    }
    if (!header) throw ConfigError(fmt::format("{}: no header row", path.string()));
    return out;
}

std::string format_fit(const PowerLawFit& f) {
    return fmt::format("model = a1 * d^a2\nn = {}\na1 = {}\na2 = {}\nr2 = {}\na1_ci95 = {} {}\na2_ci95 = {} {}\n", f.n,
                       num(f.a1), num(f.a2), num(f.r2), num(f.a1_ci.first), num(f.a1_ci.second), num(f.a2_ci.first),
                       num(f.a2_ci.second));
}

std::string format_front_trace(const FrontTrace& trace, const OutputUnits& units) {
    std::string out = "generation,position,valid\n";
    for (const auto& s : trace.samples())
        out += fmt::format("{},{},{}\n", s.generation, std::isfinite(s.position) ? num(units.x(s.position)) : "nan",
                           s.valid ? 1 : 0);
    return out;
}

std::string format_cstar(const CStarResult& slowest, const CStarResult& fastest) {
    std::string out;
    auto block = [&](std::string_view name, const CStarResult& r) {
        out += fmt::format("{}.lo = {}\n{}.hi = {}\n{}.estimate = {}\n{}.resolved = {}\n", name, num(r.lo), name,
                           num(r.hi), name, num(r.estimate()), name, r.resolved ? "true" : "false");
        for (const auto& p : r.probes)
            out += fmt::format("{}.probe = c {} branch {} iterations {} monotonicity {}\n", name, num(p.c),
                               to_string(p.branch), p.iterations, num(p.monotonicity_violation));
    };
    block("cstar", slowest);
    block("cstar_fastest", fastest);
    return out;
}

void write_file(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(fmt::format("cannot open '{}' for writing", path.string()));
    out << content;
    if (!out) throw Error(fmt::format("write to '{}' failed", path.string()));
}

}  // namespace irds
