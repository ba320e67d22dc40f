#include "irds/config.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "irds/errors.hpp"

namespace irds {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_number(std::string_view text, std::string_view key, std::string_view origin) {
    double value = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end)
        throw ConfigError(fmt::format("{}: key '{}' has non-numeric value '{}'", origin, key, text));
    return value;
}

struct Field {
    const char* key;
    double SavannaParams::*member;
};

constexpr Field kFields[] = {
    {"c_G", &SavannaParams::c_G},
    {"c_T", &SavannaParams::c_T},
    {"b_G", &SavannaParams::b_G},
    {"b_T", &SavannaParams::b_T},
    {"a_G", &SavannaParams::a_G},
    {"a_T", &SavannaParams::a_T},
    {"d_G_shape", &SavannaParams::d_G_shape},
    {"d_T_shape", &SavannaParams::d_T_shape},
    {"gamma_G", &SavannaParams::gamma_G},
    {"gamma_T", &SavannaParams::gamma_T},
    {"delta_G", &SavannaParams::delta_G},
    {"delta_T", &SavannaParams::delta_T},
    {"eta", &SavannaParams::eta},
    {"lambda_fT_min", &SavannaParams::lambda_fT_min},
    {"lambda_fT_max", &SavannaParams::lambda_fT_max},
    {"p_T", &SavannaParams::p_T},
    {"alpha_G", &SavannaParams::alpha_G},
    {"eta_TG", &SavannaParams::eta_TG},
    {"W", &SavannaParams::W},
    {"tau_tilde", &SavannaParams::tau_tilde},
    {"d_T_diff", &SavannaParams::diff_T},
    {"d_G_diff", &SavannaParams::diff_G},
};

}  // namespace

KeyValueFile KeyValueFile::parse(std::string_view text, std::string_view origin) {
    KeyValueFile out;
    out.origin_ = std::string(origin);
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError(fmt::format("{}:{}: expected 'key = value'", origin, line_no));
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) throw ConfigError(fmt::format("{}:{}: empty key or value", origin, line_no));
        if (!out.entries_.emplace(std::string(key), std::string(value)).second)
            throw ConfigError(fmt::format("{}:{}: duplicate key '{}'", origin, line_no, key));
    }
    return out;
}

KeyValueFile KeyValueFile::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(fmt::format("cannot open config file '{}'", path.string()));
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), path.string());
}

bool KeyValueFile::contains(std::string_view key) const { return entries_.find(key) != entries_.end(); }

const std::string& KeyValueFile::raw(std::string_view key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) throw ConfigError(fmt::format("{}: missing required key '{}'", origin_, key));
    return it->second;
}

double KeyValueFile::number(std::string_view key) const { return parse_number(raw(key), key, origin_); }

const std::vector<std::string>& savanna_config_keys() {
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> k;
        for (const auto& f : kFields) k.emplace_back(f.key);
        return k;
    }();
    return keys;
}

SavannaParams savanna_params_from(const KeyValueFile& file) {
    const std::set<std::string, std::less<>> known(savanna_config_keys().begin(), savanna_config_keys().end());
    for (const auto& [key, value] : file.entries())
        if (!known.contains(key)) throw ConfigError(fmt::format("{}: unknown key '{}'", file.origin(), key));
    SavannaParams p;
    for (const auto& f : kFields) p.*f.member = file.number(f.key);
    p.validate();
    return p;
}

SavannaParams load_savanna_params(const std::filesystem::path& path) {
    return savanna_params_from(KeyValueFile::load(path));
}

std::string format_savanna_params(const SavannaParams& params, std::string_view prefix) {
    std::string out;
    for (const auto& f : kFields) out += fmt::format("{}{} = {:.17g}\n", prefix, f.key, params.*f.member);
    return out;
}

}  // namespace irds
