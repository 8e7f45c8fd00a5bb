#include <cstdio>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "commands.hpp"
#include "config.hpp"
#include "photonfluid/error.hpp"

namespace fs = std::filesystem;
using namespace photonfluid;

namespace {

enum Exit { kOk = 0, kUsage = 2, kNumeric = 3, kIo = 4 };

struct Common {
  std::string config_file;
  std::vector<std::string> overrides;
  std::string out;
  bool plot = false;
  bool print_config = false;
};

void add_common(CLI::App* sub, Common& c, const std::string& default_out) {
  c.out = default_out;
  sub->add_option("-c,--config", c.config_file, "INI configuration file ([section] key = value)");
  sub->add_option("-s,--set", c.overrides, "override, e.g. -s run.z_end=20 (repeatable)");
  sub->add_option("-o,--out", c.out, "output directory")->capture_default_str();
  sub->add_flag("--plot", c.plot, "also write PPM images");
  sub->add_flag("--print-config", c.print_config, "print the resolved configuration and exit");
}

cli::Config resolve(const Common& c) {
  cli::Config config;
  if (!c.config_file.empty()) config.merge_file(c.config_file);
  if (c.plot) config.set("output.plots", "true");
  for (const auto& o : c.overrides) config.apply_override(o);
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"photonfluid: two-stream instability laboratory for paraxial fluids of light"};
  app.require_subcommand(1);
  app.set_version_flag("--version", PHOTONFLUID_VERSION);

  Common dispersion, map, simulate, analyze, vapor;
  std::string run_dir;
  auto* d = app.add_subcommand("dispersion", "two-fluid dispersion curves for a list of Mach numbers");
  add_common(d, dispersion, "dispersion_out");
  auto* m = app.add_subcommand("stability-map", "growth-rate raster over (beta, q xi)");
  add_common(m, map, "stability_map_out");
  auto* s = app.add_subcommand("simulate", "split-step propagation of two counter-streaming fluids");
  add_common(s, simulate, "run");
  auto* a = app.add_subcommand("analyze", "growth rates, vortex census and far fields of a stored run");
  add_common(a, analyze, "");
  a->add_option("run_dir", run_dir, "directory written by simulate")->required();
  auto* v = app.add_subcommand("vapor", "Kerr coefficients and feasibility for a two-level vapor");
  add_common(v, vapor, "vapor_out");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  const struct {
    CLI::App* sub;
    Common* common;
    std::vector<std::string> sections;
    std::function<void(const cli::Config&, const fs::path&)> run;
  } commands[] = {
      {d, &dispersion, {"dispersion", "output"}, cli::cmd_dispersion},
      {m, &map, {"stability_map", "output"}, cli::cmd_stability_map},
      {s, &simulate, {"grid", "run", "output"}, cli::cmd_simulate},
      {a, &analyze, {"analyze", "output"},
       [&](const cli::Config& c, const fs::path& out) {
         cli::cmd_analyze(c, run_dir, out.empty() ? fs::path(run_dir) / "analysis" : out);
       }},
      {v, &vapor, {"atom", "vapor", "output"}, cli::cmd_vapor},
  };

  try {
    for (const auto& cmd : commands) {
      if (!cmd.sub->parsed()) continue;
      const cli::Config config = resolve(*cmd.common);
      if (cmd.common->print_config) {
        fmt::print("{}", config.to_ini(cmd.sections));
        return kOk;
      }
      cmd.run(config, cmd.common->out);
    }
  } catch (const InvalidArgument& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kUsage;
  } catch (const NumericError& e) {
    fmt::print(stderr, "numeric failure: {}\n", e.what());
    return kNumeric;
  } catch (const IoError& e) {
    fmt::print(stderr, "I/O error: {}\n", e.what());
    return kIo;
  } catch (const fs::filesystem_error& e) {
    fmt::print(stderr, "I/O error: {}\n", e.what());
    return kIo;
  }
  return kOk;
}
