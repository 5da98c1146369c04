// Command-line front end: run an experiment, run the WB -> KS study, list presets.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "hypchemo/hypchemo.hpp"

namespace
{

std::string load_config_text(const std::string & source)
{
  // "preset:<name>" selects a built-in configuration.
  if (source.rfind("preset:", 0) == 0)
  {
    const hypchemo::Preset * p = hypchemo::find_preset(source.substr(7));
    if (!p)
      throw hypchemo::ValidationError("unknown preset '" + source.substr(7) + "'");
    return p->text;
  }
  std::ifstream in(source);
  if (!in)
    throw hypchemo::Error("cannot read config file " + source);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::vector<int> parse_k_list(const std::string & text)
{
  std::vector<int> ks;
  std::istringstream items(text);
  std::string item;
  while (std::getline(items, item, ','))
  {
    const auto k = hypchemo::detail::parse_int(hypchemo::detail::trim(item));
    if (!k)
      throw hypchemo::ValidationError("--k: '" + item + "' is not an integer");
    ks.push_back(*k);
  }
  return ks;
}

} // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"Solvers for the hyperbolic chemotaxis system (WB, KS, LF 2D, kinetic)"};
  app.require_subcommand(1);

  std::string out_dir;
  app.add_option("--out", out_dir, "Output directory (overrides output.dir)");

  std::string run_config;
  CLI::App * run = app.add_subcommand("run", "Run one experiment");
  run->add_option("config", run_config, "Config file, or preset:<name>")->required();
  run->fallthrough();

  std::string study_config;
  std::string k_text = "0,1,2,5,7,9";
  CLI::App * study = app.add_subcommand("study", "WB vs KS convergence study over s = 5^k");
  study->add_option("config", study_config, "wb1d base config file, or preset:<name>")->required();
  study->add_option("--k", k_text, "Comma separated exponents k")->capture_default_str();
  study->fallthrough();

  std::string show;
  CLI::App * list = app.add_subcommand("presets", "List the built-in experiment configurations");
  list->add_option("--show", show, "Print the configuration text of one preset");

  CLI11_PARSE(app, argc, argv);

  try
  {
    if (*list)
    {
      if (!show.empty())
      {
        const hypchemo::Preset * p = hypchemo::find_preset(show);
        if (!p)
          throw hypchemo::ValidationError("unknown preset '" + show + "'");
        std::cout << p->text;
        return EXIT_SUCCESS;
      }
      for (const hypchemo::Preset & p : hypchemo::presets())
        std::cout << p.name << "\t" << p.description << "\n";
      return EXIT_SUCCESS;
    }

    if (*run)
    {
      hypchemo::RunConfig cfg = hypchemo::parse_config(load_config_text(run_config));
      if (!out_dir.empty())
        cfg.output_dir = out_dir;
      const hypchemo::RunSummary summary = hypchemo::run_simulation(cfg);
      std::cout << "scheme " << hypchemo::to_string(cfg.scheme) << ": " << summary.steps << " steps, dt = " << summary.dt
                << ", " << summary.snapshots.size() << " snapshots in " << cfg.output_dir << "\n";
      for (const auto & r : summary.snapshots)
        std::cout << "  t = " << r.time << "  mass(n) = " << hypchemo::detail::format_real(r.mass_n) << "  " << r.file
                  << "\n";
      return EXIT_SUCCESS;
    }

    if (*study)
    {
      hypchemo::RunConfig cfg = hypchemo::parse_config(load_config_text(study_config));
      if (!out_dir.empty())
        cfg.output_dir = out_dir;
      const auto rows = hypchemo::convergence_study(cfg, parse_k_list(k_text));
      std::cout << "k,eps,E_L1,E_Linf\n";
      for (const auto & r : rows)
        std::cout << r.k << "," << r.eps << "," << r.E_L1 << "," << r.E_Linf << "\n";
      std::cout << "table written to " << cfg.output_dir << "/study.csv\n";
      return EXIT_SUCCESS;
    }
  }
  catch (const std::exception & e)
  {
    std::cerr << "error: " << e.what() << "\n";
    return EXIT_FAILURE;
  }
  return EXIT_FAILURE;
}
