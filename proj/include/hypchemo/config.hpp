#ifndef HYPCHEMO_CONFIG_HPP
#define HYPCHEMO_CONFIG_HPP

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "hypchemo/mesh.hpp"
#include "hypchemo/model.hpp"

/** @file hypchemo/config.hpp
    @brief Experiment description, its line-oriented text format and the built-in presets.

    Format: one `section.key = value` per line; `#` starts a comment; blank lines are ignored.
    Reals accept the form `base^exponent`, e.g. `model.s = 5^9`. Lists are comma separated.
*/

namespace hypchemo
{

enum class Scheme
{
  wb1d,
  ks1d,
  lf2d,
  kinetic1d
};

inline std::string to_string(Scheme scheme)
{
  switch (scheme)
  {
    case Scheme::wb1d: return "wb1d";
    case Scheme::ks1d: return "ks1d";
    case Scheme::lf2d: return "lf2d";
    case Scheme::kinetic1d: return "kinetic1d";
  }
  return "?";
}

inline std::optional<Scheme> scheme_from_string(std::string_view name)
{
  if (name == "wb1d") return Scheme::wb1d;
  if (name == "ks1d") return Scheme::ks1d;
  if (name == "lf2d") return Scheme::lf2d;
  if (name == "kinetic1d") return Scheme::kinetic1d;
  return std::nullopt;
}

struct RunConfig
{
  Scheme scheme = Scheme::wb1d;

  // grid; L/Nx in 1D, Lx/Ly/Nx/Ny in 2D
  double L = 1.0;
  double Lx = 1.0, Ly = 1.0;
  int Nx = 2, Ny = 2;

  // model
  double s = 1.0, D_n = 1.0, D_N1 = 1.0, alpha1 = 0.0;
  double mu0 = 1.0, eps_k = 1e-3;

  // initial data
  double n0 = 1.0, x0 = 0.0, y0 = 0.0, sigma = 1.0;

  // time
  double t_end = 1.0;
  double cfl = 0.9;
  std::optional<double> dt_override;
  std::vector<double> output_times;

  FluxRule flux_rule = FluxRule::copy;
  std::string output_dir = "output";

  bool is_2d() const { return scheme == Scheme::lf2d; }

  ModelParams model() const { return derive_coefficients(s, D_n, D_N1, alpha1, mu0, eps_k, is_2d() ? 2 : 1); }
  Grid1D grid1d() const { return Grid1D(L, Nx); }
  Grid2D grid2d() const { return Grid2D(Lx, Ly, Nx, Ny); }

  bool operator==(const RunConfig &) const = default;
};

/** @brief Error in a configuration document; carries the offending line when there is one. */
class ConfigError : public ValidationError
{
public:
  using ValidationError::ValidationError;
};

namespace detail
{
  inline std::string trim(std::string_view text)
  {
    const auto begin = text.find_first_not_of(" \t\r");
    if (begin == std::string_view::npos)
      return {};
    const auto end = text.find_last_not_of(" \t\r");
    return std::string(text.substr(begin, end - begin + 1));
  }

  inline std::optional<double> parse_plain_real(std::string_view text)
  {
    double value = 0.0;
    const auto * first = text.data();
    const auto * last = text.data() + text.size();
    if (!text.empty() && *first == '+')
      ++first;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || first == last)
      return std::nullopt;
    return value;
  }

  inline std::optional<double> parse_real(std::string_view text)
  {
    const auto caret = text.find('^');
    if (caret == std::string_view::npos)
      return parse_plain_real(text);
    const auto base = parse_plain_real(trim(text.substr(0, caret)));
    const auto exponent = parse_plain_real(trim(text.substr(caret + 1)));
    if (!base || !exponent)
      return std::nullopt;
    return std::pow(*base, *exponent);
  }

  inline std::optional<int> parse_int(std::string_view text)
  {
    int value = 0;
    const auto * first = text.data();
    const auto * last = text.data() + text.size();
    if (!text.empty() && *first == '+')
      ++first;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || first == last)
      return std::nullopt;
    return value;
  }

  inline std::string format_real(double value)
  {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.17g", value);
    return buffer;
  }
}

/** @brief Parses and validates a configuration document. */
inline RunConfig parse_config(std::string_view text)
{
  struct Entry
  {
    std::string value;
    int line;
  };
  static const std::set<std::string> known = {
      "run.scheme",   "grid.L",      "grid.Lx",       "grid.Ly",      "grid.Nx",    "grid.Ny",
      "model.s",      "model.D_n",   "model.D_N1",    "model.alpha1", "model.mu0",  "model.eps_k",
      "ic.n0",        "ic.x0",       "ic.y0",         "ic.sigma",     "time.t_end", "time.cfl",
      "time.dt",      "time.output_times", "boundary.flux_rule", "output.dir"};

  std::map<std::string, Entry> entries;
  std::istringstream stream{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(stream, raw))
  {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    const std::string content = detail::trim(line);
    if (content.empty())
      continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'section.key = value'");
    const std::string key = detail::trim(std::string_view(content).substr(0, eq));
    const std::string value = detail::trim(std::string_view(content).substr(eq + 1));
    if (!known.contains(key))
      throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    if (entries.contains(key))
      throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    if (value.empty())
      throw ConfigError("line " + std::to_string(line_no) + ": empty value for '" + key + "'");
    entries.emplace(key, Entry{value, line_no});
  }

  auto require = [&](const std::string & key) -> const Entry & {
    const auto it = entries.find(key);
    if (it == entries.end())
      throw ConfigError("missing key: " + key);
    return it->second;
  };
  auto bad_value = [](const Entry & e, const std::string & key, const std::string & why) {
    return ConfigError("line " + std::to_string(e.line) + ": " + key + " " + why + " (got '" + e.value + "')");
  };
  auto real = [&](const std::string & key) {
    const Entry & e = require(key);
    const auto v = detail::parse_real(e.value);
    if (!v || !std::isfinite(*v))
      throw bad_value(e, key, "is not a real number");
    return *v;
  };
  auto positive = [&](const std::string & key) {
    const double v = real(key);
    if (!(v > 0.0))
      throw bad_value(require(key), key, "must be positive");
    return v;
  };
  auto count = [&](const std::string & key) {
    const Entry & e = require(key);
    const auto v = detail::parse_int(e.value);
    if (!v)
      throw bad_value(e, key, "is not an integer");
    if (*v < 2)
      throw bad_value(e, key, "must be at least 2");
    return *v;
  };
  auto has = [&](const std::string & key) { return entries.contains(key); };

  RunConfig cfg;
  {
    const Entry & e = require("run.scheme");
    const auto scheme = scheme_from_string(e.value);
    if (!scheme)
      throw bad_value(e, "run.scheme", "must be one of wb1d, ks1d, lf2d, kinetic1d");
    cfg.scheme = *scheme;
  }

  const bool two_d = cfg.is_2d();
  for (const char * key : two_d ? std::vector<const char *>{"grid.L"}
                                : std::vector<const char *>{"grid.Lx", "grid.Ly", "grid.Ny", "ic.y0"})
    if (has(key))
      throw ConfigError("line " + std::to_string(entries.at(key).line) + ": " + key + " is not valid for scheme " +
                        to_string(cfg.scheme));

  if (two_d)
  {
    cfg.Lx = positive("grid.Lx");
    cfg.Ly = positive("grid.Ly");
    cfg.Ny = count("grid.Ny");
    cfg.y0 = real("ic.y0");
  }
  else
  {
    cfg.L = positive("grid.L");
  }
  cfg.Nx = count("grid.Nx");

  cfg.s = positive("model.s");
  cfg.D_n = positive("model.D_n");
  cfg.D_N1 = positive("model.D_N1");
  cfg.alpha1 = real("model.alpha1");
  if (has("model.mu0"))
    cfg.mu0 = positive("model.mu0");
  if (has("model.eps_k"))
    cfg.eps_k = positive("model.eps_k");

  cfg.n0 = real("ic.n0");
  cfg.x0 = real("ic.x0");
  cfg.sigma = positive("ic.sigma");

  cfg.t_end = positive("time.t_end");
  if (has("time.cfl"))
  {
    cfg.cfl = positive("time.cfl");
    if (cfg.cfl > 1.0)
      throw bad_value(require("time.cfl"), "time.cfl", "must not exceed 1");
  }
  if (has("time.dt"))
    cfg.dt_override = positive("time.dt");
  if (has("time.output_times"))
  {
    const Entry & e = require("time.output_times");
    std::istringstream items(e.value);
    std::string item;
    while (std::getline(items, item, ','))
    {
      const auto v = detail::parse_real(detail::trim(item));
      if (!v)
        throw bad_value(e, "time.output_times", "has an entry that is not a real number");
      cfg.output_times.push_back(*v);
    }
    if (!std::is_sorted(cfg.output_times.begin(), cfg.output_times.end()) ||
        std::adjacent_find(cfg.output_times.begin(), cfg.output_times.end()) != cfg.output_times.end())
      throw bad_value(e, "time.output_times", "must be strictly increasing");
    if (cfg.output_times.front() < 0.0 || cfg.output_times.back() > cfg.t_end)
      throw bad_value(e, "time.output_times", "must lie within [0, t_end]");
  }
  else
  {
    cfg.output_times = {cfg.t_end};
  }

  cfg.flux_rule = two_d ? FluxRule::reflect : FluxRule::copy;
  if (has("boundary.flux_rule"))
  {
    const Entry & e = require("boundary.flux_rule");
    if (e.value != "copy" && e.value != "reflect")
      throw bad_value(e, "boundary.flux_rule", "must be copy or reflect");
    cfg.flux_rule = flux_rule_from_string(e.value);
  }
  if (has("output.dir"))
    cfg.output_dir = require("output.dir").value;
  return cfg;
}

/** @brief Inverse of parse_config: every resolved field, reals with 17 significant digits. */
inline std::string render_config(const RunConfig & cfg)
{
  using detail::format_real;
  std::ostringstream out;
  out << "run.scheme = " << to_string(cfg.scheme) << "\n";
  if (cfg.is_2d())
  {
    out << "grid.Lx = " << format_real(cfg.Lx) << "\n";
    out << "grid.Ly = " << format_real(cfg.Ly) << "\n";
    out << "grid.Nx = " << cfg.Nx << "\n";
    out << "grid.Ny = " << cfg.Ny << "\n";
  }
  else
  {
    out << "grid.L = " << format_real(cfg.L) << "\n";
    out << "grid.Nx = " << cfg.Nx << "\n";
  }
  out << "model.s = " << format_real(cfg.s) << "\n";
  out << "model.D_n = " << format_real(cfg.D_n) << "\n";
  out << "model.D_N1 = " << format_real(cfg.D_N1) << "\n";
  out << "model.alpha1 = " << format_real(cfg.alpha1) << "\n";
  out << "model.mu0 = " << format_real(cfg.mu0) << "\n";
  out << "model.eps_k = " << format_real(cfg.eps_k) << "\n";
  out << "ic.n0 = " << format_real(cfg.n0) << "\n";
  out << "ic.x0 = " << format_real(cfg.x0) << "\n";
  if (cfg.is_2d())
    out << "ic.y0 = " << format_real(cfg.y0) << "\n";
  out << "ic.sigma = " << format_real(cfg.sigma) << "\n";
  out << "time.t_end = " << format_real(cfg.t_end) << "\n";
  out << "time.cfl = " << format_real(cfg.cfl) << "\n";
  if (cfg.dt_override)
    out << "time.dt = " << format_real(*cfg.dt_override) << "\n";
  out << "time.output_times = ";
  for (std::size_t i = 0; i < cfg.output_times.size(); ++i)
    out << (i ? ", " : "") << format_real(cfg.output_times[i]);
  out << "\n";
  out << "boundary.flux_rule = " << to_string(cfg.flux_rule) << "\n";
  out << "output.dir = " << cfg.output_dir << "\n";
  return out.str();
}

struct Preset
{
  std::string name;
  std::string description;
  std::string text;
};

/** @brief Built-in experiments. Mesh sizes are not part of the reference setups; 200 intervals in 1D, 100x100 in 2D. */
inline const std::vector<Preset> & presets()
{
  static const std::vector<Preset> list = {
      {"fig1", "WB scheme, s = 5^9, two-bump density on [-2, 2], snapshots at t = 0.01, 0.02, 0.06, 0.08",
       "# Time dynamics of the cell density, well-balanced scheme\n"
       "run.scheme = wb1d\n"
       "grid.L = 2\n"
       "grid.Nx = 200\n"
       "model.s = 5^9\n"
       "model.D_n = 1\n"
       "model.D_N1 = 0.001\n"
       "model.alpha1 = 0.33\n"
       "ic.n0 = 5\n"
       "ic.x0 = 0.5\n"
       "ic.sigma = 0.3\n"
       "time.t_end = 0.08\n"
       "time.output_times = 0.01, 0.02, 0.06, 0.08\n"
       "output.dir = fig1\n"},
      {"fig2", "WB vs KS comparison base (use with `study --k 0,1,2,5,7,9`), snapshots at t = 0.03, 0.04, 0.05, 0.07",
       "# Base configuration of the WB -> KS convergence study\n"
       "run.scheme = wb1d\n"
       "grid.L = 2\n"
       "grid.Nx = 200\n"
       "model.s = 1\n"
       "model.D_n = 1\n"
       "model.D_N1 = 0.001\n"
       "model.alpha1 = 0.33\n"
       "ic.n0 = 5\n"
       "ic.x0 = 0.5\n"
       "ic.sigma = 0.3\n"
       "time.t_end = 0.07\n"
       "time.output_times = 0.03, 0.04, 0.05, 0.07\n"
       "output.dir = fig2\n"},
      {"fig3", "2D Lax-Friedrichs scheme, s = 100 on [-0.4, 0.4]^2, snapshots at t = 0.001, 0.002, 0.004",
       "# Two-dimensional Lax-Friedrichs splitting\n"
       "run.scheme = lf2d\n"
       "grid.Lx = 0.4\n"
       "grid.Ly = 0.4\n"
       "grid.Nx = 100\n"
       "grid.Ny = 100\n"
       "model.s = 100\n"
       "model.D_n = 1\n"
       "model.D_N1 = 0.001\n"
       "model.alpha1 = 0.33\n"
       "ic.n0 = 0.25\n"
       "ic.x0 = 0.09\n"
       "ic.y0 = 0.09\n"
       "ic.sigma = 0.03\n"
       "time.t_end = 0.004\n"
       "time.cfl = 0.9\n"
       "time.output_times = 0.001, 0.002, 0.004\n"
       "boundary.flux_rule = reflect\n"
       "output.dir = fig3\n"},
      {"ks", "Keller-Segel reference scheme with the fig1 data",
       "run.scheme = ks1d\n"
       "grid.L = 2\n"
       "grid.Nx = 200\n"
       "model.s = 1\n"
       "model.D_n = 1\n"
       "model.D_N1 = 0.001\n"
       "model.alpha1 = 0.33\n"
       "ic.n0 = 5\n"
       "ic.x0 = 0.5\n"
       "ic.sigma = 0.3\n"
       "time.t_end = 0.08\n"
       "time.output_times = 0.01, 0.02, 0.06, 0.08\n"
       "output.dir = ks\n"},
      {"kinetic", "Two-velocity kinetic solver, s = 10, eps_k = 1e-3, two-bump data on [-2, 2]",
       "run.scheme = kinetic1d\n"
       "grid.L = 2\n"
       "grid.Nx = 200\n"
       "model.s = 10\n"
       "model.D_n = 1\n"
       "model.D_N1 = 0.001\n"
       "model.alpha1 = 0.33\n"
       "model.mu0 = 1\n"
       "model.eps_k = 1e-3\n"
       "ic.n0 = 5\n"
       "ic.x0 = 0.5\n"
       "ic.sigma = 0.3\n"
       "time.t_end = 0.05\n"
       "time.output_times = 0.05\n"
       "output.dir = kinetic\n"},
  };
  return list;
}

inline const Preset * find_preset(std::string_view name)
{
  for (const Preset & p : presets())
    if (p.name == name)
      return &p;
  return nullptr;
}

} // namespace hypchemo

#endif // HYPCHEMO_CONFIG_HPP
