#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <string_view>

#include "bianchi/error.hpp"
#include "bianchi/quadfield.hpp"
#include "cli.hpp"

namespace bianchi::cli {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

[[noreturn]] void bad_value(const std::string& key, std::string_view value, const std::string& why) {
  fail(ErrorCode::usage, "config key '" + key + "' = '" + std::string(value) + "': " + why);
}

template <class T>
T parse_scalar(const std::string& key, std::string_view text) {
  text = trim(text);
  T v{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) bad_value(key, text, "not a number");
  return v;
}

std::vector<double> parse_list(const std::string& key, std::string_view text, char sep = ',') {
  std::vector<double> out;
  if (trim(text).empty()) return out;
  for (;;) {
    const auto pos = text.find(sep);
    out.push_back(parse_scalar<double>(key, text.substr(0, pos)));
    if (pos == std::string_view::npos) return out;
    text.remove_prefix(pos + 1);
  }
}

template <std::size_t N>
void parse_fixed(const std::string& key, std::string_view text, double (&dst)[N]) {
  const auto values = parse_list(key, text);
  if (values.size() != N) bad_value(key, text, "expected " + std::to_string(N) + " comma-separated numbers");
  for (std::size_t i = 0; i < N; ++i) dst[i] = values[i];
}

bool parse_bool(const std::string& key, std::string_view text) {
  text = trim(text);
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  bad_value(key, text, "expected true or false");
}

std::vector<HyperbolicPoint> parse_points(const std::string& key, std::string_view text) {
  std::vector<HyperbolicPoint> out;
  for (;;) {
    const auto pos = text.find('|');
    const auto xyz = parse_list(key, text.substr(0, pos));
    if (xyz.size() != 3) bad_value(key, text, "points are x,y,r triples separated by '|'");
    out.push_back({xyz[0], xyz[1], xyz[2]});
    if (pos == std::string_view::npos) return out;
    text.remove_prefix(pos + 1);
  }
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"field.D", [](RunConfig& c, const std::string& k, const std::string& v) { c.field_D = parse_scalar<int>(k, v); }},
      {"field.precision_target",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.precision_target = parse_scalar<double>(k, v); }},
      {"eisenstein.t", [](RunConfig& c, const std::string& k, const std::string& v) { c.t = parse_scalar<double>(k, v); }},
      {"eisenstein.points",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.points = parse_points(k, v); }},
      {"eisenstein.tail_tolerance",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.tail_tolerance = parse_scalar<double>(k, v); }},
      {"supnorm.t_grid",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.supnorm_t_grid = parse_list(k, v); }},
      {"supnorm.n", [](RunConfig& c, const std::string& k, const std::string& v) { c.supnorm_n = parse_scalar<int>(k, v); }},
      {"supnorm.box", [](RunConfig& c, const std::string& k, const std::string& v) { parse_fixed(k, v, c.box); }},
      {"supnorm.resolve",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.resolve = parse_bool(k, v); }},
      {"supnorm.polish_starts",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.polish_starts = parse_scalar<int>(k, v); }},
      {"supnorm.max_exponent",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.supnorm_max_exponent = parse_scalar<double>(k, v); }},
      {"supnorm.max_shift",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.supnorm_max_shift = parse_scalar<double>(k, v); }},
      {"policy.kind",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         try {
           c.policy.kind = lpolicy_kind_from_string(std::string(trim(v)));
         } catch (const Error&) {
           bad_value(k, v, "expected GLH, convexity or subconvex");
         }
       }},
      {"policy.delta",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.policy.exponent_delta = parse_scalar<double>(k, v); }},
      {"policy.eps", [](RunConfig& c, const std::string& k, const std::string& v) { c.eps = parse_scalar<double>(k, v); }},
      {"policy.density_exponent",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.density_exponent = parse_scalar<double>(k, v); }},
      {"aggregate.t_f_grid",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.t_f_grid = parse_list(k, v); }},
      {"aggregate.t_k", [](RunConfig& c, const std::string& k, const std::string& v) { c.t_k = parse_scalar<double>(k, v); }},
      {"aggregate.slope_band",
       [](RunConfig& c, const std::string& k, const std::string& v) { parse_fixed(k, v, c.slope_band); }},
      {"subconvexity.band",
       [](RunConfig& c, const std::string& k, const std::string& v) { parse_fixed(k, v, c.subconvexity_band); }},
      {"verify.automorphy_samples",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.automorphy_samples = parse_scalar<int>(k, v); }},
      {"verify.automorphy_t_max",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.automorphy_t_max = parse_scalar<double>(k, v); }},
      {"verify.seed",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.seed = parse_scalar<unsigned long long>(k, v); }},
      {"verify.scattering_t_grid",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.scattering_t_grid = parse_list(k, v); }},
      {"ingest.input", [](RunConfig& c, const std::string&, const std::string& v) { c.input = std::string(trim(v)); }},
  };
  return table;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<double> default_supnorm_t_grid() {
  std::vector<double> grid;
  for (int i = 0; i < 12; ++i) grid.push_back(20.0 * std::pow(10.0, i / 11.0));
  grid.back() = 200.0;
  return grid;
}

std::vector<double> default_scattering_t_grid() {
  std::vector<double> grid;
  for (int i = 1; i <= 200; ++i) grid.push_back(0.5 * i);
  return grid;
}

RunConfig parse_config(std::istream& in) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    fail(ErrorCode::usage, std::string("config: ") + e.what());
  }
  RunConfig config;
  for (const auto& [section, body] : tree) {
    if (body.empty()) fail(ErrorCode::usage, "config: key '" + section + "' must sit inside a [section]");
    for (const auto& [key, value] : body) {
      const std::string full = section + "." + key;
      const auto it = setters().find(full);
      if (it == setters().end()) fail(ErrorCode::usage, "config: unknown key '" + full + "'");
      it->second(config, full, value.data());
    }
  }
  return config;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::usage, "cannot open config file '" + path + "'");
  return parse_config(in);
}

void validate(const RunConfig& c) {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) fail(ErrorCode::usage, "config: " + what);
  };
  try {
    Field::make(c.field_D);
  } catch (const Error& e) {
    fail(ErrorCode::usage, std::string("config: ") + e.what());
  }
  require(c.precision_target > 0.0 && c.precision_target <= 1e-6, "field.precision_target must lie in (0, 1e-6]");
  require(c.tail_tolerance > 0.0 && c.tail_tolerance < 1e-3, "eisenstein.tail_tolerance must lie in (0, 1e-3)");
  require(std::isfinite(c.t), "eisenstein.t must be finite");
  require(!c.points.empty(), "eisenstein.points must not be empty");
  require(c.supnorm_n >= 2 && c.supnorm_n <= 64, "supnorm.n must lie in [2, 64]");
  require(c.box[0] < c.box[1] && c.box[2] < c.box[3] && c.box[4] < c.box[5] && c.box[4] > 0.0,
          "supnorm.box must be x_lo,x_hi,y_lo,y_hi,r_lo,r_hi with increasing pairs and r_lo > 0");
  require(c.polish_starts >= 1, "supnorm.polish_starts must be >= 1");
  for (std::size_t i = 0; i < c.supnorm_t_grid.size(); ++i) {
    require(c.supnorm_t_grid[i] > 0.0 && c.supnorm_t_grid[i] <= 200.0 &&
                (i == 0 || c.supnorm_t_grid[i] > c.supnorm_t_grid[i - 1]),
            "supnorm.t_grid must increase within (0, 200]");
  }
  try {
    c.policy.validate();
  } catch (const Error& e) {
    fail(ErrorCode::usage, std::string("config: ") + e.what());
  }
  require(c.eps > 0.0 && c.eps < 1.0, "policy.eps must lie in (0, 1)");
  require(std::isfinite(c.density_exponent), "policy.density_exponent must be finite");
  for (double tf : c.t_f_grid) require(tf > 0.0 && std::isfinite(tf), "aggregate.t_f_grid entries must be > 0");
  require(c.t_k >= 0.0, "aggregate.t_k must be >= 0");
  require(c.slope_band[0] < c.slope_band[1], "aggregate.slope_band must be increasing");
  require(c.subconvexity_band[0] < c.subconvexity_band[1], "subconvexity.band must be increasing");
  require(c.automorphy_samples >= 1, "verify.automorphy_samples must be >= 1");
  require(c.automorphy_t_max > 0.0 && c.automorphy_t_max <= 200.0, "verify.automorphy_t_max must lie in (0, 200]");
  for (double t : c.scattering_t_grid) require(std::isfinite(t) && std::abs(t) <= 1e3, "scattering t must satisfy |t| <= 1000");
  require(c.threads >= 1 && c.threads <= 256, "--threads must lie in [1, 256]");
}

}  // namespace bianchi::cli
