#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <json.hpp>

#include "config.hpp"

namespace photonfluid::cli {

namespace fs = std::filesystem;

std::string utc_timestamp();

/// CSV with a "# config_digest: ..." comment line followed by the header.
class CsvWriter {
 public:
  CsvWriter(const fs::path& path, const std::string& digest, const std::vector<std::string>& columns);

  template <typename... Args>
  void row(fmt::format_string<Args...> f, Args&&... args) {
    out_ << fmt::format(f, std::forward<Args>(args)...) << '\n';
  }
  void close();

 private:
  fs::path path_;
  std::ofstream out_;
};

/// Output directory with exactly one manifest.json.
class RunDirectory {
 public:
  RunDirectory(fs::path dir, std::string command, const Config& config, std::vector<std::string> sections);

  const fs::path& dir() const { return dir_; }
  const std::string& digest() const { return digest_; }
  fs::path file(const std::string& name);  // records the output path
  nlohmann::json& summary() { return summary_; }
  void set_seed(std::uint64_t seed) { seed_ = seed; }
  void mark_failure(double z, const std::string& what);
  void write_manifest();

 private:
  fs::path dir_;
  std::string command_;
  std::string digest_;
  nlohmann::json config_;
  std::optional<std::uint64_t> seed_;
  std::vector<std::string> outputs_;
  std::string started_;
  std::optional<double> failure_z_;
  std::string failure_;
  nlohmann::json summary_ = nlohmann::json::object();
};

nlohmann::json read_manifest(const fs::path& dir);

}  // namespace photonfluid::cli
