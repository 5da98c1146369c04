#ifndef HYPCHEMO_RUN_HPP
#define HYPCHEMO_RUN_HPP

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hypchemo/config.hpp"
#include "hypchemo/kinetic1d.hpp"
#include "hypchemo/ks1d.hpp"
#include "hypchemo/lf2d.hpp"
#include "hypchemo/mesh.hpp"
#include "hypchemo/wb1d.hpp"

/** @file hypchemo/run.hpp
    @brief Experiment driver: time loop, CSV snapshots, JSON manifest and the WB -> KS convergence study.
*/

namespace hypchemo
{

/** @brief One snapshot: fixed column order, one row per node. */
struct SnapshotTable
{
  double time = 0.0;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::pair<std::string, std::string>> metadata;  ///< written as '# key: value' lines
};

inline const std::vector<std::string> & snapshot_columns_1d()
{
  static const std::vector<std::string> cols = {"x", "n", "q", "N1", "Q1"};
  return cols;
}

inline const std::vector<std::string> & snapshot_columns_2d()
{
  static const std::vector<std::string> cols = {"x", "y", "n", "q1", "q2", "N1", "Q1x", "Q1y"};
  return cols;
}

inline SnapshotTable make_snapshot(const Grid1D & grid, const MacroState1D & state, double time)
{
  SnapshotTable table{time, snapshot_columns_1d(), {}, {}};
  table.rows.reserve(grid.nodes());
  for (int i = 0; i <= grid.Nx; ++i)
    table.rows.push_back({grid.x(i), state.n[i], state.q[i], state.N1[i], state.Q1[i]});
  return table;
}

inline SnapshotTable make_snapshot(const Grid2D & grid, const MacroState2D & state, double time)
{
  SnapshotTable table{time, snapshot_columns_2d(), {}, {}};
  table.rows.reserve(grid.nodes());
  for (int i = 0; i <= grid.Nx; ++i)
    for (int j = 0; j <= grid.Ny; ++j)
      table.rows.push_back({grid.x(i), grid.y(j), state.n(i, j), state.q1(i, j), state.q2(i, j), state.N1(i, j),
                            state.Q1x(i, j), state.Q1y(i, j)});
  return table;
}

inline void write_snapshot_csv(const std::filesystem::path & path, const SnapshotTable & table)
{
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw Error("cannot open snapshot file for writing: " + path.string());
  out << "# hypchemo snapshot\n";
  out << "# time: " << detail::format_real(table.time) << "\n";
  for (const auto & [key, value] : table.metadata)
    out << "# " << key << ": " << value << "\n";
  for (std::size_t c = 0; c < table.columns.size(); ++c)
    out << (c ? "," : "") << table.columns[c];
  out << "\n";
  char buffer[32];
  for (const auto & row : table.rows)
  {
    for (std::size_t c = 0; c < row.size(); ++c)
    {
      std::snprintf(buffer, sizeof buffer, "%.17g", row[c]);
      if (c)
        out << ',';
      out << buffer;
    }
    out << "\n";
  }
  if (!out)
    throw Error("failed writing snapshot file: " + path.string());
}

/** @brief Reads a snapshot written by write_snapshot_csv. */
inline SnapshotTable read_snapshot_csv(const std::filesystem::path & path)
{
  std::ifstream in(path);
  if (!in)
    throw Error("cannot open snapshot file: " + path.string());
  SnapshotTable table;
  std::string line;
  bool have_header = false;
  bool have_time = false;
  while (std::getline(in, line))
  {
    if (line.empty())
      continue;
    if (line[0] == '#')
    {
      const auto colon = line.find(':');
      if (colon == std::string::npos)
        continue;
      const std::string key = detail::trim(std::string_view(line).substr(1, colon - 1));
      const std::string value = detail::trim(std::string_view(line).substr(colon + 1));
      if (key == "time")
      {
        const auto t = detail::parse_real(value);
        if (!t)
          throw Error("bad time in snapshot " + path.string());
        table.time = *t;
        have_time = true;
      }
      else
        table.metadata.emplace_back(key, value);
      continue;
    }
    std::istringstream cells(line);
    std::string cell;
    if (!have_header)
    {
      while (std::getline(cells, cell, ','))
        table.columns.push_back(detail::trim(cell));
      have_header = true;
      continue;
    }
    std::vector<double> row;
    while (std::getline(cells, cell, ','))
    {
      const auto v = detail::parse_real(detail::trim(cell));
      if (!v)
        throw Error("bad value '" + cell + "' in snapshot " + path.string());
      row.push_back(*v);
    }
    if (row.size() != table.columns.size())
      throw Error("row width does not match header in snapshot " + path.string());
    table.rows.push_back(std::move(row));
  }
  if (!have_header || !have_time)
    throw Error("snapshot " + path.string() + " lacks a header or a time line");
  return table;
}

struct SnapshotRecord
{
  double time = 0.0;
  std::string file;
  double mass_n = 0.0;
};

struct RunSummary
{
  double dt = 0.0;
  long steps = 0;
  double wall_seconds = 0.0;
  std::vector<SnapshotRecord> snapshots;
  double final_time = 0.0;
  double final_mass_n = 0.0;
  std::optional<MacroState1D> final_1d;
  std::optional<MacroState2D> final_2d;
  nlohmann::json manifest;
};

/** @brief Step size used by a run: time.dt when given, otherwise the scheme's default rule. */
inline double resolve_dt(const RunConfig & cfg)
{
  if (cfg.dt_override)
    return *cfg.dt_override;
  const ModelParams params = cfg.model();
  switch (cfg.scheme)
  {
    case Scheme::wb1d: return default_dt_1d(params, cfg.grid1d());
    case Scheme::ks1d: return default_dt_ks(params, cfg.grid1d());
    case Scheme::lf2d: return cfl_dt(params, cfg.grid2d(), cfg.cfl);
    case Scheme::kinetic1d: return default_dt_kinetic(params, cfg.grid1d(), cfg.cfl);
  }
  throw ValidationError("unknown scheme");
}

namespace detail
{
  /// Advances through the output times then to t_end; the last step before each target is shortened to land on it.
  template <class Step, class Output>
  inline std::pair<long, double> march(const RunConfig & cfg, double dt, Step && step, Output && output)
  {
    long steps = 0;
    double t = 0.0;
    std::vector<double> targets = cfg.output_times;
    targets.push_back(cfg.t_end);
    std::size_t next_output = 0;
    for (std::size_t k = 0; k < targets.size(); ++k)
    {
      const double target = targets[k];
      const bool is_output = k < cfg.output_times.size();
      const double tol = 1e-12 * std::max(1.0, std::abs(target));
      while (target - t > tol)
      {
        const double h = std::min(dt, target - t);
        try
        {
          step(h);
        }
        catch (const Error & e)
        {
          std::ostringstream msg;
          msg << e.what() << " [step " << steps + 1 << ", t = " << format_real(t) << "]";
          throw SolverError(msg.str());
        }
        ++steps;
        t += h;
      }
      t = std::max(t, target);
      if (is_output)
        output(next_output++, target);
    }
    return {steps, t};
  }

  inline nlohmann::json config_json(const RunConfig & cfg, const ModelParams & params)
  {
    nlohmann::json j;
    j["scheme"] = to_string(cfg.scheme);
    j["model"] = {{"s", params.s},         {"eps", params.eps},       {"d", params.d},
                  {"D_n", params.D_n},     {"D_N1", params.D_N1},     {"alpha1", params.alpha1},
                  {"mu1", params.mu1},     {"mu2", params.mu2},       {"sigma1", params.sigma1},
                  {"tau1", params.tau1},   {"mu0", params.mu0},       {"eps_k", params.eps_k}};
    if (cfg.is_2d())
    {
      const Grid2D g = cfg.grid2d();
      j["grid"] = {{"Lx", g.Lx}, {"Ly", g.Ly}, {"Nx", g.Nx}, {"Ny", g.Ny}, {"dx", g.dx}, {"dy", g.dy}};
      j["ic"] = {{"n0", cfg.n0}, {"x0", cfg.x0}, {"y0", cfg.y0}, {"sigma", cfg.sigma}};
    }
    else
    {
      const Grid1D g = cfg.grid1d();
      j["grid"] = {{"L", g.L}, {"Nx", g.Nx}, {"dx", g.dx}};
      j["ic"] = {{"n0", cfg.n0}, {"x0", cfg.x0}, {"sigma", cfg.sigma}};
    }
    j["time"] = {{"t_end", cfg.t_end}, {"cfl", cfg.cfl}, {"output_times", cfg.output_times}};
    if (cfg.dt_override)
      j["time"]["dt_override"] = *cfg.dt_override;
    j["boundary"] = {{"flux_rule", to_string(cfg.flux_rule)}};
    return j;
  }

  inline std::vector<std::pair<std::string, std::string>> snapshot_metadata(const RunConfig & cfg,
                                                                             const ModelParams & params, double dt)
  {
    return {{"scheme", to_string(cfg.scheme)},
            {"s", format_real(params.s)},
            {"eps", format_real(params.eps)},
            {"D_n", format_real(params.D_n)},
            {"D_N1", format_real(params.D_N1)},
            {"alpha1", format_real(params.alpha1)},
            {"dt", format_real(dt)},
            {"flux_rule", to_string(cfg.flux_rule)}};
  }
}

/** @brief Runs one experiment, writing snapshot_NNN.csv files and manifest.json into cfg.output_dir. */
inline RunSummary run_simulation(const RunConfig & cfg)
{
  namespace fs = std::filesystem;
  const auto wall_start = std::chrono::steady_clock::now();
  const ModelParams params = cfg.model();
  const double dt = resolve_dt(cfg);
  if (!(dt > 0.0))
    throw ValidationError("time step must be positive");

  const fs::path dir = cfg.output_dir;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec)
    throw Error("cannot create output directory " + dir.string() + ": " + ec.message());

  RunSummary summary;
  summary.dt = dt;
  const auto metadata = detail::snapshot_metadata(cfg, params, dt);

  auto record = [&](std::size_t index, double time, SnapshotTable table, double mass) {
    char name[32];
    std::snprintf(name, sizeof name, "snapshot_%03zu.csv", index);
    table.metadata = metadata;
    write_snapshot_csv(dir / name, table);
    summary.snapshots.push_back({time, name, mass});
  };

  if (cfg.is_2d())
  {
    const Grid2D grid = cfg.grid2d();
    MacroState2D state = gaussian_ic_2d(grid, cfg.n0, cfg.x0, cfg.y0, cfg.sigma);
    const double cell = grid.dx * grid.dy;
    auto [steps, t] = detail::march(
        cfg, dt, [&](double h) { state = lf2d_step(state, params, grid, h, cfg.flux_rule); },
        [&](std::size_t k, double time) {
          record(k, time, make_snapshot(grid, state, time), total_mass(state.n.values(), cell));
        });
    summary.steps = steps;
    summary.final_time = t;
    summary.final_mass_n = total_mass(state.n.values(), cell);
    summary.final_2d = std::move(state);
  }
  else
  {
    const Grid1D grid = cfg.grid1d();
    MacroState1D state = gaussian_ic_1d(grid, cfg.n0, cfg.x0, cfg.sigma);
    KineticState1D kstate;
    KSState1D ks;
    if (cfg.scheme == Scheme::kinetic1d)
      kstate = from_moments(state, params.s);
    if (cfg.scheme == Scheme::ks1d)
      ks = {state.n, state.N1};

    auto current = [&]() -> MacroState1D {
      switch (cfg.scheme)
      {
        case Scheme::kinetic1d: return moments(kstate, params.s);
        case Scheme::ks1d:
        {
          MacroState1D m(grid.nodes());
          m.n = ks.n;
          m.N1 = ks.S;
          return m;
        }
        default: return state;
      }
    };
    auto step = [&](double h) {
      switch (cfg.scheme)
      {
        case Scheme::wb1d: state = wb_step(state, params, grid, h, cfg.flux_rule); break;
        case Scheme::ks1d: ks = ks_step(ks, params, grid, h, cfg.flux_rule); break;
        case Scheme::kinetic1d: kstate = kinetic_step(kstate, params, grid, h, cfg.flux_rule); break;
        case Scheme::lf2d: break;
      }
    };
    auto [steps, t] = detail::march(cfg, dt, step, [&](std::size_t k, double time) {
      const MacroState1D m = current();
      record(k, time, make_snapshot(grid, m, time), total_mass(m.n, grid.dx));
    });
    summary.steps = steps;
    summary.final_time = t;
    summary.final_1d = current();
    summary.final_mass_n = total_mass(summary.final_1d->n, grid.dx);
  }

  summary.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();

  nlohmann::json manifest = detail::config_json(cfg, params);
  manifest["dt"] = dt;
  manifest["steps"] = summary.steps;
  manifest["final_time"] = summary.final_time;
  manifest["final_mass_n"] = summary.final_mass_n;
  manifest["wall_time_seconds"] = summary.wall_seconds;
  manifest["snapshots"] = nlohmann::json::array();
  for (const SnapshotRecord & r : summary.snapshots)
    manifest["snapshots"].push_back({{"time", r.time}, {"file", r.file}, {"mass_n", r.mass_n}});
  {
    std::ofstream out(dir / "manifest.json");
    if (!out)
      throw Error("cannot write manifest in " + dir.string());
    out << manifest.dump(2) << "\n";
  }
  summary.manifest = std::move(manifest);
  return summary;
}

struct StudyRow
{
  int k = 0;
  double eps = 0.0;
  double E_L1 = 0.0;
  double E_Linf = 0.0;
};

/** @brief Relative L1 and max-norm distances |a - b| / |b| on a uniform grid. */
inline std::pair<double, double> relative_errors(const std::vector<double> & a, const std::vector<double> & b)
{
  double diff_l1 = 0.0, ref_l1 = 0.0, diff_inf = 0.0, ref_inf = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
  {
    const double d = std::abs(a[i] - b[i]);
    diff_l1 += d;
    ref_l1 += std::abs(b[i]);
    diff_inf = std::max(diff_inf, d);
    ref_inf = std::max(ref_inf, std::abs(b[i]));
  }
  return {diff_l1 / ref_l1, diff_inf / ref_inf};
}

/** @brief Runs ks1d once and wb1d for every s = 5^k on the same grid, dt and data; writes study.csv.
 *
 *  Member runs go to <output_dir>/ks1d and <output_dir>/wb1d_k<k> and execute concurrently.
 */
inline std::vector<StudyRow> convergence_study(const RunConfig & base, const std::vector<int> & k_list)
{
  namespace fs = std::filesystem;
  if (base.scheme != Scheme::wb1d)
    throw ValidationError("convergence_study needs a wb1d base configuration");
  if (k_list.empty())
    throw ValidationError("convergence_study: empty k list");

  const fs::path dir = base.output_dir;
  const double dt = resolve_dt(base);

  RunConfig ks_cfg = base;
  ks_cfg.scheme = Scheme::ks1d;
  ks_cfg.dt_override = dt;
  ks_cfg.output_dir = (dir / "ks1d").string();

  std::vector<RunConfig> wb_cfgs;
  for (int k : k_list)
  {
    RunConfig c = base;
    c.s = std::pow(5.0, k);
    c.dt_override = dt;
    c.output_dir = (dir / ("wb1d_k" + std::to_string(k))).string();
    wb_cfgs.push_back(std::move(c));
  }

  auto ks_future = std::async(std::launch::async, [&] { return run_simulation(ks_cfg); });
  std::vector<std::future<RunSummary>> wb_futures;
  for (const RunConfig & c : wb_cfgs)
    wb_futures.push_back(std::async(std::launch::async, [&c] { return run_simulation(c); }));

  const RunSummary ks = ks_future.get();
  std::vector<StudyRow> rows;
  for (std::size_t m = 0; m < k_list.size(); ++m)
  {
    const RunSummary wb = wb_futures[m].get();
    const auto [l1, linf] = relative_errors(wb.final_1d->n, ks.final_1d->n);
    rows.push_back({k_list[m], 1.0 / wb_cfgs[m].s, l1, linf});
  }

  fs::create_directories(dir);
  std::ofstream out(dir / "study.csv", std::ios::binary);
  if (!out)
    throw Error("cannot write " + (dir / "study.csv").string());
  out << "# hypchemo convergence study: wb1d vs ks1d at t_end\n";
  out << "# t_end: " << detail::format_real(base.t_end) << "\n";
  out << "# dt: " << detail::format_real(dt) << "\n";
  out << "# norms: relative discrete L1 and max norms of n_WB - n_KS\n";
  out << "k,eps,E_L1,E_Linf\n";
  for (const StudyRow & r : rows)
    out << r.k << ',' << detail::format_real(r.eps) << ',' << detail::format_real(r.E_L1) << ','
        << detail::format_real(r.E_Linf) << "\n";

  nlohmann::json manifest = detail::config_json(base, base.model());
  manifest["dt"] = dt;
  manifest["k_list"] = k_list;
  manifest["note"] = "E_L1 and E_Linf are relative discrete norms of n_WB - n_KS at t_end; they are "
                     "property-based substitutes, no reference error values exist for this comparison";
  manifest["rows"] = nlohmann::json::array();
  for (const StudyRow & r : rows)
    manifest["rows"].push_back({{"k", r.k}, {"eps", r.eps}, {"E_L1", r.E_L1}, {"E_Linf", r.E_Linf}});
  std::ofstream(dir / "study_manifest.json") << manifest.dump(2) << "\n";
  return rows;
}

} // namespace hypchemo

#endif // HYPCHEMO_RUN_HPP
