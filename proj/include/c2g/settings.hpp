#pragma once

#include "c2g/decolor.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace c2g {

/// Defaults shared by the command-line tools. Flags override these.
struct RunSettings {
  DecolorConfig decolor;
  double epsilon = 0.0;  // success-rate tie tolerance
  int jobs = 1;
};

using KeyValues = std::map<std::string, std::string>;

/// Parses `key = value` lines; blank lines and lines starting with '#' are
/// ignored. Throws std::invalid_argument on a malformed or repeated key.
KeyValues parse_key_values(std::string_view text);

/// Throws IoError when the file cannot be read.
KeyValues read_key_values(const std::filesystem::path& path);

/// Recognized keys: window_size, window_sigma, c1, c2, c3, beta, gamma, kind,
/// c_grid (comma list), fixed_c, rank, rank_tol, quantize, epsilon, jobs.
/// Throws std::invalid_argument on unknown keys or bad values.
void apply_key_values(const KeyValues& kv, RunSettings& settings);

double parse_double(std::string_view text, std::string_view what);
int parse_int(std::string_view text, std::string_view what);
std::vector<double> parse_double_list(std::string_view text, std::string_view what);

}  // namespace c2g
