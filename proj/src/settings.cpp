#include "c2g/settings.hpp"

#include "c2g/image.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace c2g {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool parse_bool(std::string_view text, std::string_view what) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw std::invalid_argument(std::string(what) + ": expected true or false, got '" + std::string(text) + "'");
}

}  // namespace

double parse_double(std::string_view text, std::string_view what) {
  const std::string s(trim(text));
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (s.empty() || used != s.size()) {
    throw std::invalid_argument(std::string(what) + ": not a number: '" + s + "'");
  }
  return v;
}

int parse_int(std::string_view text, std::string_view what) {
  const auto s = trim(text);
  int v = 0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || end != s.data() + s.size()) {
    throw std::invalid_argument(std::string(what) + ": not an integer: '" + std::string(s) + "'");
  }
  return v;
}

std::vector<double> parse_double_list(std::string_view text, std::string_view what) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto item = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    out.push_back(parse_double(item, what));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

KeyValues parse_key_values(std::string_view text) {
  KeyValues kv;
  std::istringstream in{std::string(text)};
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) {
      throw std::invalid_argument("config line " + std::to_string(number) + ": expected key=value");
    }
    const std::string key(trim(body.substr(0, eq)));
    const std::string value(trim(body.substr(eq + 1)));
    if (key.empty()) throw std::invalid_argument("config line " + std::to_string(number) + ": empty key");
    if (!kv.emplace(key, value).second) {
      throw std::invalid_argument("config line " + std::to_string(number) + ": repeated key '" + key + "'");
    }
  }
  return kv;
}

KeyValues read_key_values(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_key_values(buf.str());
}

void apply_key_values(const KeyValues& kv, RunSettings& settings) {
  auto& d = settings.decolor;
  auto& m = d.metric;
  std::optional<double> rank_tol;
  for (const auto& [key, value] : kv) {
    if (key == "window_size") m.window_size = parse_int(value, key);
    else if (key == "window_sigma") m.window_sigma = parse_double(value, key);
    else if (key == "c1") m.c1 = parse_double(value, key);
    else if (key == "c2") m.c2 = parse_double(value, key);
    else if (key == "c3") m.c3 = parse_double(value, key);
    else if (key == "beta") m.beta = parse_double(value, key);
    else if (key == "gamma") m.gamma = parse_double(value, key);
    else if (key == "kind") m.set_kind(parse_image_kind(value));
    else if (key == "c_grid") d.c_grid = parse_double_list(value, key);
    else if (key == "fixed_c") d.fixed_c = parse_double(value, key);
    else if (key == "rank") d.rank_policy = RankPolicy::parse(value);
    else if (key == "rank_tol") rank_tol = parse_double(value, key);
    else if (key == "quantize") d.quantize = parse_bool(value, key);
    else if (key == "epsilon") settings.epsilon = parse_double(value, key);
    else if (key == "jobs") settings.jobs = parse_int(value, key);
    else throw std::invalid_argument("config: unknown key '" + key + "'");
  }
  if (rank_tol) {
    if (d.rank_policy.mode() != RankPolicy::Mode::full_numerical_rank) {
      throw std::invalid_argument("config: rank_tol only applies to rank = full");
    }
    d.rank_policy = RankPolicy::full(*rank_tol);
  }
  if (!(settings.epsilon >= 0.0)) throw std::invalid_argument("config: epsilon must be >= 0");
  if (settings.jobs < 1) throw std::invalid_argument("config: jobs must be >= 1");
  d.validate();
}

}  // namespace c2g
