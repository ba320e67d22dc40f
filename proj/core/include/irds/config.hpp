#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "irds/savanna.hpp"

namespace irds {

/// Flat `key = value` file with `#` comments. Duplicate keys are rejected.
class KeyValueFile {
public:
    static KeyValueFile parse(std::string_view text, std::string_view origin = "<string>");
    static KeyValueFile load(const std::filesystem::path& path);

    bool contains(std::string_view key) const;
    const std::string& raw(std::string_view key) const;
    double number(std::string_view key) const;
    const std::map<std::string, std::string, std::less<>>& entries() const { return entries_; }
    const std::string& origin() const { return origin_; }

private:
    std::string origin_;
    std::map<std::string, std::string, std::less<>> entries_;
};

/// Config keys in canonical order (also the serialization order).
const std::vector<std::string>& savanna_config_keys();

/// Every key is required; unknown keys are rejected.
SavannaParams savanna_params_from(const KeyValueFile& file);
SavannaParams load_savanna_params(const std::filesystem::path& path);

/// `key = value` lines in canonical key order, each prefixed with `prefix`.
std::string format_savanna_params(const SavannaParams& params, std::string_view prefix = "");

}  // namespace irds
