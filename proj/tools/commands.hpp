#pragma once

#include <filesystem>

#include "config.hpp"

namespace photonfluid::cli {

void cmd_dispersion(const Config& config, const std::filesystem::path& out);
void cmd_stability_map(const Config& config, const std::filesystem::path& out);
/// Throws NumericError after writing partial outputs and a failure manifest.
void cmd_simulate(const Config& config, const std::filesystem::path& out);
void cmd_analyze(const Config& config, const std::filesystem::path& run_dir, const std::filesystem::path& out);
void cmd_vapor(const Config& config, const std::filesystem::path& out);

}  // namespace photonfluid::cli
